#ifndef VITALCAST_GPR_HPP
#define VITALCAST_GPR_HPP

#include <memory>

#include "vitalcast/kernels.hpp"
#include "vitalcast/predictor.hpp"

namespace vitalcast {

/// Gaussian-process regression posterior mean over flattened windows:
/// mean(x*) = ȳ + k(x*,·)ᵀ (K + λI)⁻¹ (y − ȳ). Targets are centered on the
/// training mean so the zero-mean prior applies to residuals.
class GprModel : public Predictor {
public:
    GprModel() = default;
    GprModel(std::shared_ptr<const KernelFactorization> fact, std::vector<double> alpha,
             double y_mean)
        : fact_(std::move(fact)), alpha_(std::move(alpha)), y_mean_(y_mean) {}

    std::vector<double> predict(const Matrix& window) const override;
    std::size_t output_dim() const override { return 1; }

    const KernelFactorization& factorization() const { return *fact_; }
    const std::vector<double>& alpha() const { return alpha_; }
    double y_mean() const { return y_mean_; }

private:
    std::shared_ptr<const KernelFactorization> fact_;
    std::vector<double> alpha_;
    double y_mean_ = 0.0;
};

/// Fits on flattened windows (train_x rows) and scalar targets.
GprModel gpr_fit(Matrix train_x, const std::vector<double>& targets, KernelHyper hyper);

/// Fit reusing an existing factorization (multi-horizon sharing: the Gram
/// factor depends only on inputs and hyperparameters, not on targets).
GprModel gpr_fit_shared(std::shared_ptr<const KernelFactorization> fact,
                        const std::vector<double>& targets);

}  // namespace vitalcast

#endif
