#ifndef VITALCAST_MLP_HPP
#define VITALCAST_MLP_HPP

#include <vector>

#include "vitalcast/predictor.hpp"
#include "vitalcast/rng.hpp"

namespace vitalcast {

/// Feed-forward network over flattened windows: sigmoid hidden layers
/// (default sizes [10, 5, 3]), linear output.
struct MlpShape {
    std::size_t input = 0;
    std::vector<std::size_t> hidden = {10, 5, 3};
    std::size_t output = 1;

    std::size_t param_count() const;
    std::vector<std::size_t> layer_sizes() const;  // input, hidden..., output
    bool operator==(const MlpShape&) const = default;
};

/// Layer-by-layer [W_0 b_0 | W_1 b_1 | ...] with W_l of shape out_l×in_l.
struct MlpParams {
    MlpShape shape;
    std::vector<double> flat;

    static MlpParams zeros(MlpShape shape);
    static MlpParams init(MlpShape shape, Rng& rng);  // uniform [-0.08, 0.08]
};

/// Post-activation values per layer (activations[0] is the input).
struct MlpCache {
    MlpShape shape;
    std::uint64_t param_hash = 0;
    std::vector<std::vector<double>> activations;
    std::vector<double> output;
};

MlpCache mlp_forward(const MlpParams& params, const std::vector<double>& x);
std::vector<double> mlp_backward(const MlpParams& params, const MlpCache& cache,
                                 const std::vector<double>& output_grad);

class MlpModel : public Predictor {
public:
    MlpModel() = default;
    explicit MlpModel(MlpParams params) : params_(std::move(params)) {}

    /// Flattens the window row-major, then runs the network.
    std::vector<double> predict(const Matrix& window) const override;
    std::size_t output_dim() const override { return params_.shape.output; }

    const MlpParams& params() const { return params_; }

private:
    MlpParams params_;
};

struct MlpFitResult {
    MlpModel model;
    std::vector<double> epoch_loss;
};

/// Same training protocol as lstm_fit (mini-batch MSE + Adam, epoch-wise
/// shuffling from rng).
MlpFitResult mlp_fit(const SupervisedSet& data, MlpShape shape, const TrainConfig& config,
                     Rng& rng);

}  // namespace vitalcast

#endif
