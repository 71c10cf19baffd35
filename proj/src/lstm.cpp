#include "vitalcast/lstm.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "vitalcast/adam.hpp"
#include "vitalcast/errors.hpp"

namespace vitalcast {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Offsets into the flat parameter vector (gate order i, f, g, o).
struct Layout {
    std::size_t k, h, d;
    std::size_t w_base = 0, u_base, b_base, wy_base, by_base;

    explicit Layout(const LstmShape& s) : k(s.input), h(s.hidden), d(s.output) {
        u_base = 4 * h * k;
        b_base = u_base + 4 * h * h;
        wy_base = b_base + 4 * h;
        by_base = wy_base + d * h;
    }
    std::size_t w(std::size_t gate, std::size_t unit, std::size_t in) const {
        return w_base + gate * h * k + unit * k + in;
    }
    std::size_t u(std::size_t gate, std::size_t unit, std::size_t from) const {
        return u_base + gate * h * h + unit * h + from;
    }
    std::size_t b(std::size_t gate, std::size_t unit) const { return b_base + gate * h + unit; }
    std::size_t wy(std::size_t out, std::size_t unit) const { return wy_base + out * h + unit; }
    std::size_t by(std::size_t out) const { return by_base + out; }
};

}  // namespace

std::uint64_t hash_params(const std::vector<double>& flat) {
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (double value : flat) {
        const auto bits = std::bit_cast<std::uint64_t>(value);
        for (int shift = 0; shift < 64; shift += 8) {
            hash ^= (bits >> shift) & 0xFF;
            hash *= 0x100000001B3ULL;
        }
    }
    return hash;
}

LstmParams LstmParams::zeros(LstmShape shape) {
    require(shape.input >= 1 && shape.hidden >= 1 && shape.output >= 1,
            "LstmParams: all shape fields must be >= 1");
    LstmParams p;
    p.shape = shape;
    p.flat.assign(shape.param_count(), 0.0);
    return p;
}

LstmParams LstmParams::init(LstmShape shape, Rng& rng) {
    LstmParams p = zeros(shape);
    for (auto& w : p.flat) w = (rng.uniform() * 2.0 - 1.0) * 0.08;
    return p;
}

LstmCache lstm_forward(const LstmParams& params, const Matrix& window) {
    const LstmShape& s = params.shape;
    require(params.flat.size() == s.param_count(), "lstm_forward: params/shape mismatch");
    require(window.cols() == s.input,
            "lstm_forward: window has " + std::to_string(window.cols()) +
                " features, params expect " + std::to_string(s.input));
    require(window.rows() >= 1, "lstm_forward: empty window");

    const Layout lay(s);
    const auto& p = params.flat;
    const std::size_t steps = window.rows();

    LstmCache cache;
    cache.shape = s;
    cache.param_hash = hash_params(p);
    cache.steps = steps;
    cache.window = window;
    auto prep = [&](std::vector<std::vector<double>>& v) {
        v.assign(steps, std::vector<double>(s.hidden, 0.0));
    };
    prep(cache.i), prep(cache.f), prep(cache.g), prep(cache.o);
    prep(cache.c), prep(cache.tanh_c), prep(cache.h);

    std::vector<double> h_prev(s.hidden, 0.0), c_prev(s.hidden, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t u = 0; u < s.hidden; ++u) {
            double pre[4];
            for (std::size_t gate = 0; gate < 4; ++gate) {
                double acc = p[lay.b(gate, u)];
                for (std::size_t in = 0; in < s.input; ++in)
                    acc += p[lay.w(gate, u, in)] * window(t, in);
                for (std::size_t from = 0; from < s.hidden; ++from)
                    acc += p[lay.u(gate, u, from)] * h_prev[from];
                pre[gate] = acc;
            }
            const double iv = sigmoid(pre[0]);
            const double fv = sigmoid(pre[1]);
            const double gv = std::tanh(pre[2]);
            const double ov = sigmoid(pre[3]);
            const double cv = fv * c_prev[u] + iv * gv;
            const double tcv = std::tanh(cv);
            cache.i[t][u] = iv;
            cache.f[t][u] = fv;
            cache.g[t][u] = gv;
            cache.o[t][u] = ov;
            cache.c[t][u] = cv;
            cache.tanh_c[t][u] = tcv;
            cache.h[t][u] = ov * tcv;
        }
        h_prev = cache.h[t];
        c_prev = cache.c[t];
    }

    cache.output.assign(s.output, 0.0);
    for (std::size_t d = 0; d < s.output; ++d) {
        double acc = p[lay.by(d)];
        for (std::size_t u = 0; u < s.hidden; ++u) acc += p[lay.wy(d, u)] * h_prev[u];
        cache.output[d] = acc;
    }
    return cache;
}

std::vector<double> lstm_backward(const LstmParams& params, const LstmCache& cache,
                                  const std::vector<double>& output_grad) {
    const LstmShape& s = params.shape;
    require(cache.shape == s, "lstm_backward: cache shape mismatch");
    require(cache.param_hash == hash_params(params.flat),
            "lstm_backward: cache is stale (params changed since forward)");
    require(output_grad.size() == s.output, "lstm_backward: output_grad dimension mismatch");

    const Layout lay(s);
    const auto& p = params.flat;
    const std::size_t steps = cache.steps;
    std::vector<double> grad(p.size(), 0.0);

    // Readout layer.
    std::vector<double> dh(s.hidden, 0.0);
    const auto& h_last = cache.h[steps - 1];
    for (std::size_t d = 0; d < s.output; ++d) {
        grad[lay.by(d)] += output_grad[d];
        for (std::size_t u = 0; u < s.hidden; ++u) {
            grad[lay.wy(d, u)] += output_grad[d] * h_last[u];
            dh[u] += p[lay.wy(d, u)] * output_grad[d];
        }
    }

    std::vector<double> dc(s.hidden, 0.0);
    std::vector<double> dpre[4];
    for (auto& v : dpre) v.assign(s.hidden, 0.0);

    for (std::size_t t = steps; t-- > 0;) {
        const auto& iv = cache.i[t];
        const auto& fv = cache.f[t];
        const auto& gv = cache.g[t];
        const auto& ov = cache.o[t];
        const auto& tcv = cache.tanh_c[t];
        for (std::size_t u = 0; u < s.hidden; ++u) {
            const double c_prev = t > 0 ? cache.c[t - 1][u] : 0.0;
            const double do_ = dh[u] * tcv[u];
            dc[u] += dh[u] * ov[u] * (1.0 - tcv[u] * tcv[u]);
            const double di = dc[u] * gv[u];
            const double dg = dc[u] * iv[u];
            const double df = dc[u] * c_prev;
            dpre[0][u] = di * iv[u] * (1.0 - iv[u]);
            dpre[1][u] = df * fv[u] * (1.0 - fv[u]);
            dpre[2][u] = dg * (1.0 - gv[u] * gv[u]);
            dpre[3][u] = do_ * ov[u] * (1.0 - ov[u]);
            dc[u] *= fv[u];  // becomes dc_{t-1}
        }
        // Accumulate parameter gradients and propagate to h_{t-1}.
        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::size_t gate = 0; gate < 4; ++gate) {
            for (std::size_t u = 0; u < s.hidden; ++u) {
                const double dp = dpre[gate][u];
                if (dp == 0.0) continue;
                grad[lay.b(gate, u)] += dp;
                for (std::size_t in = 0; in < s.input; ++in)
                    grad[lay.w(gate, u, in)] += dp * cache.window(t, in);
                if (t > 0) {
                    const auto& h_prev = cache.h[t - 1];
                    for (std::size_t from = 0; from < s.hidden; ++from) {
                        grad[lay.u(gate, u, from)] += dp * h_prev[from];
                        dh[from] += p[lay.u(gate, u, from)] * dp;
                    }
                } else {
                    // h_{-1} = 0: no U gradient contribution, no dh to push.
                }
            }
        }
        if (t == 0) break;
        // dh now holds ∂loss/∂h_{t-1}; dc already holds ∂loss/∂c_{t-1}.
    }
    return grad;
}

std::vector<double> LstmModel::predict(const Matrix& window) const {
    return lstm_forward(params_, window).output;
}

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("train config: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train config: batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("train config: learning_rate must be > 0");
}

LstmFitResult lstm_fit(const SupervisedSet& data, LstmShape shape, const TrainConfig& config,
                       Rng& rng) {
    config.validate();
    require(data.windows != nullptr && data.size() >= 1, "lstm_fit: empty dataset");
    require(data.targets.rows() == data.size() && data.targets.cols() == shape.output,
            "lstm_fit: targets shape mismatch");
    const std::size_t n = data.size();
    for (const auto& w : *data.windows) {
        require(w.cols() == shape.input, "lstm_fit: window feature count mismatch");
    }

    LstmParams params = LstmParams::init(shape, rng);
    AdamState opt(params.flat.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    LstmFitResult result;
    result.epoch_loss.reserve(config.epochs);
    std::vector<double> grad(params.flat.size());
    const double d_out = static_cast<double>(shape.output);

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
                const auto cache = lstm_forward(params, (*data.windows)[sample]);
                std::vector<double> dy(shape.output);
                double sample_loss = 0.0;
                for (std::size_t d = 0; d < shape.output; ++d) {
                    const double err = cache.output[d] - data.targets(sample, d);
                    sample_loss += err * err / d_out;
                    dy[d] = 2.0 * err / (d_out * batch_n);
                }
                batch_loss += sample_loss / batch_n;
                const auto sample_grad = lstm_backward(params, cache, dy);
                for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += sample_grad[j];
            }
            if (!std::isfinite(batch_loss)) {
                throw Error("lstm_fit: non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch starting at sample " + std::to_string(begin));
            }
            adam_step(params.flat, grad, opt, config.learning_rate);
            epoch_loss += batch_loss * batch_n;
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(n));
    }
    result.model = LstmModel(std::move(params));
    return result;
}

}  // namespace vitalcast
