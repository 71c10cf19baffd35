#ifndef VITALCAST_KERNELS_HPP
#define VITALCAST_KERNELS_HPP

#include <memory>
#include <vector>

#include "vitalcast/matrix.hpp"

namespace vitalcast {

/// RBF kernel hyperparameters: k(x,x') = σ²·exp(−‖x−x'‖² / 2ℓ²), plus noise
/// λ on the Gram diagonal. Note σ is largely redundant with λ for
/// posterior-mean prediction (scaling σ² rescales λ⁻¹), so grids typically
/// fix σ=1 and sweep (ℓ, λ).
struct KernelHyper {
    double sigma = 1.0;
    double length = 1.0;
    double lambda = 1e-4;
};

/// Gram matrix over the rows of x.
Matrix rbf_gram(const Matrix& x, double sigma, double length);

/// k(query, train_row_i) for every training row.
std::vector<double> rbf_cross(const Matrix& train_x, const std::vector<double>& query,
                              double sigma, double length);

/// Cholesky factor of (Gram + λI), shared between models and horizons. If
/// the factorization fails, λ is escalated ×10 up to 3 retries before
/// giving up with an Error.
struct KernelFactorization {
    Matrix train_x;
    KernelHyper hyper;     // hyper.lambda is the requested λ
    double lambda_used = 0.0;
    int retries = 0;
    Matrix chol;

    std::size_t train_size() const { return train_x.rows(); }
};

std::shared_ptr<const KernelFactorization> factorize_rbf(Matrix train_x, KernelHyper hyper);

/// α = (K + λI)⁻¹ y via the stored factor.
std::vector<double> solve_alpha(const KernelFactorization& fact, const std::vector<double>& y);

}  // namespace vitalcast

#endif
