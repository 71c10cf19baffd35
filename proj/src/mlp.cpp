#include "vitalcast/mlp.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "vitalcast/adam.hpp"
#include "vitalcast/errors.hpp"
#include "vitalcast/lstm.hpp"  // hash_params

namespace vitalcast {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> flatten(const Matrix& window) {
    return window.storage();
}

}  // namespace

std::vector<std::size_t> MlpShape::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.push_back(input);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(output);
    return sizes;
}

std::size_t MlpShape::param_count() const {
    const auto sizes = layer_sizes();
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) count += sizes[l + 1] * (sizes[l] + 1);
    return count;
}

MlpParams MlpParams::zeros(MlpShape shape) {
    require(shape.input >= 1 && shape.output >= 1, "MlpParams: input/output must be >= 1");
    for (std::size_t width : shape.hidden)
        require(width >= 1, "MlpParams: hidden widths must be >= 1");
    MlpParams p;
    p.shape = std::move(shape);
    p.flat.assign(p.shape.param_count(), 0.0);
    return p;
}

MlpParams MlpParams::init(MlpShape shape, Rng& rng) {
    MlpParams p = zeros(std::move(shape));
    for (auto& w : p.flat) w = (rng.uniform() * 2.0 - 1.0) * 0.08;
    return p;
}

MlpCache mlp_forward(const MlpParams& params, const std::vector<double>& x) {
    const auto sizes = params.shape.layer_sizes();
    require(params.flat.size() == params.shape.param_count(), "mlp_forward: params/shape mismatch");
    require(x.size() == sizes.front(),
            "mlp_forward: input has " + std::to_string(x.size()) + " values, expected " +
                std::to_string(sizes.front()));

    MlpCache cache;
    cache.shape = params.shape;
    cache.param_hash = hash_params(params.flat);
    cache.activations.push_back(x);

    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const std::size_t in = sizes[l];
        const std::size_t out = sizes[l + 1];
        const bool is_output = l + 2 == sizes.size();
        const auto& prev = cache.activations.back();
        std::vector<double> next(out);
        for (std::size_t u = 0; u < out; ++u) {
            double acc = params.flat[offset + out * in + u];  // bias after the weight block
            const double* row = params.flat.data() + offset + u * in;
            for (std::size_t j = 0; j < in; ++j) acc += row[j] * prev[j];
            next[u] = is_output ? acc : sigmoid(acc);
        }
        cache.activations.push_back(std::move(next));
        offset += out * (in + 1);
    }
    cache.output = cache.activations.back();
    return cache;
}

std::vector<double> mlp_backward(const MlpParams& params, const MlpCache& cache,
                                 const std::vector<double>& output_grad) {
    require(cache.shape == params.shape, "mlp_backward: cache shape mismatch");
    require(cache.param_hash == hash_params(params.flat),
            "mlp_backward: cache is stale (params changed since forward)");
    const auto sizes = params.shape.layer_sizes();
    require(output_grad.size() == sizes.back(), "mlp_backward: output_grad dimension mismatch");

    std::vector<double> grad(params.flat.size(), 0.0);
    std::vector<std::size_t> offsets(sizes.size() - 1);
    {
        std::size_t offset = 0;
        for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
            offsets[l] = offset;
            offset += sizes[l + 1] * (sizes[l] + 1);
        }
    }

    std::vector<double> delta = output_grad;  // output layer is linear
    for (std::size_t l = sizes.size() - 1; l-- > 0;) {
        const std::size_t in = sizes[l];
        const std::size_t out = sizes[l + 1];
        const std::size_t offset = offsets[l];
        const auto& prev = cache.activations[l];
        for (std::size_t u = 0; u < out; ++u) {
            grad[offset + out * in + u] += delta[u];
            double* grow = grad.data() + offset + u * in;
            for (std::size_t j = 0; j < in; ++j) grow[j] += delta[u] * prev[j];
        }
        if (l == 0) break;
        std::vector<double> prev_delta(in, 0.0);
        for (std::size_t u = 0; u < out; ++u) {
            const double* row = params.flat.data() + offset + u * in;
            for (std::size_t j = 0; j < in; ++j) prev_delta[j] += row[j] * delta[u];
        }
        for (std::size_t j = 0; j < in; ++j) {
            const double a = cache.activations[l][j];
            prev_delta[j] *= a * (1.0 - a);  // sigmoid derivative of the hidden layer
        }
        delta = std::move(prev_delta);
    }
    return grad;
}

std::vector<double> MlpModel::predict(const Matrix& window) const {
    return mlp_forward(params_, flatten(window)).output;
}

MlpFitResult mlp_fit(const SupervisedSet& data, MlpShape shape, const TrainConfig& config,
                     Rng& rng) {
    config.validate();
    require(data.windows != nullptr && data.size() >= 1, "mlp_fit: empty dataset");
    require(data.targets.rows() == data.size() && data.targets.cols() == shape.output,
            "mlp_fit: targets shape mismatch");
    const std::size_t n = data.size();
    for (const auto& w : *data.windows) {
        require(w.size() == shape.input, "mlp_fit: flattened window size mismatch");
    }

    MlpParams params = MlpParams::init(std::move(shape), rng);
    const MlpShape& sh = params.shape;
    AdamState opt(params.flat.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    MlpFitResult result;
    result.epoch_loss.reserve(config.epochs);
    std::vector<double> grad(params.flat.size());
    const double d_out = static_cast<double>(sh.output);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t begin = 0; begin < n; begin += config.batch_size) {
            const std::size_t end = std::min(begin + config.batch_size, n);
            const double batch_n = static_cast<double>(end - begin);
            std::fill(grad.begin(), grad.end(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t idx = begin; idx < end; ++idx) {
                const std::size_t sample = order[idx];
                const auto cache = mlp_forward(params, flatten((*data.windows)[sample]));
                std::vector<double> dy(sh.output);
                double sample_loss = 0.0;
                for (std::size_t d = 0; d < sh.output; ++d) {
                    const double err = cache.output[d] - data.targets(sample, d);
                    sample_loss += err * err / d_out;
                    dy[d] = 2.0 * err / (d_out * batch_n);
                }
                batch_loss += sample_loss / batch_n;
                const auto sample_grad = mlp_backward(params, cache, dy);
                for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += sample_grad[j];
            }
            if (!std::isfinite(batch_loss)) {
                throw Error("mlp_fit: non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch starting at sample " + std::to_string(begin));
            }
            adam_step(params.flat, grad, opt, config.learning_rate);
            epoch_loss += batch_loss * batch_n;
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
    }
    result.model = MlpModel(std::move(params));
    return result;
}

}  // namespace vitalcast
