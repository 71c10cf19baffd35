#include "vitalcast/kernels.hpp"

#include <cmath>
#include <string>

#include "vitalcast/errors.hpp"

namespace vitalcast {

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double diff = a[j] - b[j];
        acc += diff * diff;
    }
    return acc;
}

}  // namespace

Matrix rbf_gram(const Matrix& x, double sigma, double length) {
    require(sigma > 0.0 && length > 0.0, "rbf_gram: sigma and length must be positive");
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    const double s2 = sigma * sigma;
    const double inv = 1.0 / (2.0 * length * length);
    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = s2;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = s2 * std::exp(-sq_dist(x.data() + i * d, x.data() + j * d, d) * inv);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

std::vector<double> rbf_cross(const Matrix& train_x, const std::vector<double>& query,
                              double sigma, double length) {
    require(query.size() == train_x.cols(), "rbf_cross: query dimension mismatch");
    const std::size_t n = train_x.rows();
    const std::size_t d = train_x.cols();
    const double s2 = sigma * sigma;
    const double inv = 1.0 / (2.0 * length * length);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = s2 * std::exp(-sq_dist(train_x.data() + i * d, query.data(), d) * inv);
    }
    return out;
}

std::shared_ptr<const KernelFactorization> factorize_rbf(Matrix train_x, KernelHyper hyper) {
    require(train_x.rows() >= 1, "factorize_rbf: empty training set");
    require(hyper.lambda > 0.0, "factorize_rbf: lambda must be positive");
    auto fact = std::make_shared<KernelFactorization>();
    fact->train_x = std::move(train_x);
    fact->hyper = hyper;

    Matrix gram = rbf_gram(fact->train_x, hyper.sigma, hyper.length);
    double lambda = hyper.lambda;
    for (int attempt = 0;; ++attempt) {
        Matrix regularized = gram;
        for (std::size_t i = 0; i < regularized.rows(); ++i) regularized(i, i) += lambda;
        try {
            fact->chol = cholesky(regularized);
            fact->lambda_used = lambda;
            fact->retries = attempt;
            return fact;
        } catch (const Error&) {
            if (attempt >= 3) {
                throw Error("kernel factorization failed after escalating lambda to " +
                            std::to_string(lambda));
            }
            lambda *= 10.0;
        }
    }
}

std::vector<double> solve_alpha(const KernelFactorization& fact, const std::vector<double>& y) {
    require(y.size() == fact.train_size(), "solve_alpha: target length mismatch");
    return cholesky_solve(fact.chol, y);
}

}  // namespace vitalcast
