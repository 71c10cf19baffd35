#include "vitalcast/krr.hpp"

#include "vitalcast/errors.hpp"

namespace vitalcast {

std::vector<double> KrrModel::predict(const Matrix& window) const {
    require(fact_ != nullptr, "KrrModel: not fitted");
    const auto k_star =
        rbf_cross(fact_->train_x, window.storage(), fact_->hyper.sigma, fact_->hyper.length);
    return {y_mean_ + dot(k_star, alpha_)};
}

KrrModel krr_fit_shared(std::shared_ptr<const KernelFactorization> fact,
                        const std::vector<double>& targets) {
    require(fact != nullptr, "krr_fit: null factorization");
    require(targets.size() == fact->train_size(), "krr_fit: target length mismatch");
    double mean = 0.0;
    for (double y : targets) mean += y;
    mean /= static_cast<double>(targets.size());
    std::vector<double> centered(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) centered[i] = targets[i] - mean;
    auto alpha = solve_alpha(*fact, centered);
    return KrrModel(std::move(fact), std::move(alpha), mean);
}

KrrModel krr_fit(Matrix train_x, const std::vector<double>& targets, KernelHyper hyper) {
    return krr_fit_shared(factorize_rbf(std::move(train_x), hyper), targets);
}

}  // namespace vitalcast
