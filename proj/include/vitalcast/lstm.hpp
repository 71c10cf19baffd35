#ifndef VITALCAST_LSTM_HPP
#define VITALCAST_LSTM_HPP

#include <cstdint>
#include <vector>

#include "vitalcast/predictor.hpp"
#include "vitalcast/rng.hpp"

namespace vitalcast {

/// Layout of a single-layer LSTM with linear readout.
struct LstmShape {
    std::size_t input = 0;   // K
    std::size_t hidden = 0;  // h
    std::size_t output = 0;  // 1 (predictive) or 5 (generative)

    std::size_t param_count() const {
        return 4 * hidden * (input + hidden + 1) + output * hidden + output;
    }
    bool operator==(const LstmShape&) const = default;
};

/// All weights in one flat vector (gate order i, f, g, o):
///   [W_i W_f W_g W_o | U_i U_f U_g U_o | b_i b_f b_g b_o | W_y | b_y]
/// with W_* of shape hidden×input, U_* hidden×hidden, b_* hidden,
/// W_y output×hidden, b_y output. Flat storage keeps the optimizer and the
/// gradient checker trivial.
struct LstmParams {
    LstmShape shape;
    std::vector<double> flat;

    static LstmParams zeros(LstmShape shape);
    /// Uniform init in [-0.08, 0.08].
    static LstmParams init(LstmShape shape, Rng& rng);
};

/// Per-step activations retained for backpropagation through time, plus a
/// hash of the parameter bytes so a stale cache is detected.
struct LstmCache {
    LstmShape shape;
    std::uint64_t param_hash = 0;
    std::size_t steps = 0;
    Matrix window;                 // copy of the input
    std::vector<std::vector<double>> i, f, g, o, c, tanh_c, h;
    std::vector<double> output;
};

/// Canonical LSTM recurrence over the M window rows from zero initial
/// hidden/cell state (σ gates, tanh candidate and cell output), then a
/// linear readout of the final hidden state.
LstmCache lstm_forward(const LstmParams& params, const Matrix& window);

/// Exact gradients of the forward computation with respect to every
/// parameter, given ∂loss/∂output. Throws ContractViolation if the cache
/// does not match the parameters it was computed with.
std::vector<double> lstm_backward(const LstmParams& params, const LstmCache& cache,
                                  const std::vector<double>& output_grad);

class LstmModel : public Predictor {
public:
    LstmModel() = default;
    explicit LstmModel(LstmParams params) : params_(std::move(params)) {}

    std::vector<double> predict(const Matrix& window) const override;
    std::size_t output_dim() const override { return params_.shape.output; }

    const LstmParams& params() const { return params_; }

private:
    LstmParams params_;
};

struct LstmFitResult {
    LstmModel model;
    std::vector<double> epoch_loss;  // mean training MSE per epoch
};

/// Mini-batch MSE training with Adam. Batches are re-shuffled every epoch
/// from rng; per-sample loss is the mean squared error over output
/// dimensions and gradients are averaged over the batch. Deterministic per
/// (data, config, rng state). Throws Error with an epoch/batch diagnostic if
/// the loss turns non-finite.
LstmFitResult lstm_fit(const SupervisedSet& data, LstmShape shape, const TrainConfig& config,
                       Rng& rng);

/// FNV-1a over a parameter vector's bytes; used for cache staleness checks.
std::uint64_t hash_params(const std::vector<double>& flat);

}  // namespace vitalcast

#endif
