#ifndef VITALCAST_KRR_HPP
#define VITALCAST_KRR_HPP

#include <memory>

#include "vitalcast/kernels.hpp"
#include "vitalcast/predictor.hpp"

namespace vitalcast {

/// Kernel ridge regression with the RBF kernel, closed-form solve
/// α = (K + λI)⁻¹ (y − ȳ), predict(x*) = ȳ + k(x*,·)ᵀα. Serves as the
/// support-vector-regression stand-in in the benchmark suite (same kernel
/// family and role; no margin/QP machinery).
class KrrModel : public Predictor {
public:
    KrrModel() = default;
    KrrModel(std::shared_ptr<const KernelFactorization> fact, std::vector<double> alpha,
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

KrrModel krr_fit(Matrix train_x, const std::vector<double>& targets, KernelHyper hyper);
KrrModel krr_fit_shared(std::shared_ptr<const KernelFactorization> fact,
                        const std::vector<double>& targets);

}  // namespace vitalcast

#endif
