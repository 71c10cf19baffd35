#ifndef VITALCAST_PREDICTOR_HPP
#define VITALCAST_PREDICTOR_HPP

#include <cstddef>
#include <vector>

#include "vitalcast/matrix.hpp"

namespace vitalcast {

/// Common contract for trained forecasting models: predict maps one M×K
/// window to an output vector (length 1 for predictive models, 5 for the
/// generative model). predict is a pure const function of (params, window).
class Predictor {
public:
    virtual ~Predictor() = default;
    virtual std::vector<double> predict(const Matrix& window) const = 0;
    virtual std::size_t output_dim() const = 0;
};

/// Mini-batch training hyperparameters shared by the gradient-trained models.
struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 20;
    double learning_rate = 0.001;

    void validate() const;
};

/// A supervised view: windows[i] pairs with the i-th row of targets
/// (targets has one column per model output).
struct SupervisedSet {
    const std::vector<Matrix>* windows = nullptr;
    Matrix targets;  // S × output_dim

    std::size_t size() const { return windows ? windows->size() : 0; }
};

}  // namespace vitalcast

#endif
