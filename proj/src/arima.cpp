#include "vitalcast/arima.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vitalcast/errors.hpp"

namespace vitalcast {

namespace {

/// Solves the small symmetric system A·x = b with a stabilizing ridge.
std::vector<double> ridge_solve(Matrix a, const std::vector<double>& b) {
    double trace = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) trace += a(i, i);
    const double ridge = 1e-10 * (1.0 + trace / static_cast<double>(a.rows()));
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += ridge;
    return cholesky_solve(cholesky(a), b);
}

/// OLS of y on regressor rows (n×p), via normal equations.
std::vector<double> ols(const Matrix& x, const std::vector<double>& y) {
    const std::size_t p = x.cols();
    Matrix xtx(p, p, 0.0);
    std::vector<double> xty(p, 0.0);
    for (std::size_t t = 0; t < x.rows(); ++t) {
        for (std::size_t i = 0; i < p; ++i) {
            xty[i] += x(t, i) * y[t];
            for (std::size_t j = i; j < p; ++j) xtx(i, j) += x(t, i) * x(t, j);
        }
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < i; ++j) xtx(i, j) = xtx(j, i);
    return ridge_solve(std::move(xtx), xty);
}

/// Max root modulus of z² − φ1·z − φ2.
double ar2_root_radius(double phi1, double phi2) {
    const double disc = phi1 * phi1 + 4.0 * phi2;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        return std::max(std::abs((phi1 + sq) / 2.0), std::abs((phi1 - sq) / 2.0));
    }
    return std::sqrt(-phi2);  // complex pair: |z|² = product of roots = −φ2
}

/// Scales (φ1, φ2) so the AR roots land at modulus ≤ 0.99; clamps θ1.
/// Returns true if anything changed.
bool enforce_regions(double& phi1, double& phi2, double& theta1) {
    bool changed = false;
    const double r = ar2_root_radius(phi1, phi2);
    if (r >= 1.0) {
        const double s = 0.99 / r;
        phi1 *= s;
        phi2 *= s * s;
        changed = true;
    }
    if (std::abs(theta1) > 0.99) {
        theta1 = std::clamp(theta1, -0.99, 0.99);
        changed = true;
    }
    return changed;
}

/// Conditional innovations e_t for t ≥ 2 (e_0 = e_1 = 0 by convention).
void css_residuals(const std::vector<double>& centered, double phi1, double phi2, double theta1,
                   std::vector<double>& e) {
    const std::size_t n = centered.size();
    e.assign(n, 0.0);
    for (std::size_t t = 2; t < n; ++t) {
        e[t] = centered[t] - phi1 * centered[t - 1] - phi2 * centered[t - 2] -
               theta1 * e[t - 1];
    }
}

double sse(const std::vector<double>& e) {
    double acc = 0.0;
    for (std::size_t t = 2; t < e.size(); ++t) acc += e[t] * e[t];
    return acc;
}

}  // namespace

ArimaCoeffs arima_fit(const std::vector<double>& series) {
    const std::size_t n = series.size();
    require(n >= 20, "arima_fit: need at least 20 values, got " + std::to_string(n));

    ArimaCoeffs coeffs;
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    coeffs.mu = mean;

    std::vector<double> x(n);
    double var = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        x[t] = series[t] - mean;
        var += x[t] * x[t];
    }
    var /= static_cast<double>(n);
    if (var < 1e-12) return coeffs;  // constant series: forecast is the mean

    // Hannan–Rissanen stage 1: long-AR fit to estimate innovations.
    const std::size_t p0 = std::max<std::size_t>(
        4, static_cast<std::size_t>(std::lround(std::cbrt(static_cast<double>(n)))));
    Matrix reg1(n - p0, p0);
    std::vector<double> y1(n - p0);
    for (std::size_t t = p0; t < n; ++t) {
        y1[t - p0] = x[t];
        for (std::size_t j = 0; j < p0; ++j) reg1(t - p0, j) = x[t - 1 - j];
    }
    const auto long_ar = ols(reg1, y1);
    std::vector<double> e_hat(n, 0.0);
    for (std::size_t t = p0; t < n; ++t) {
        double fit = 0.0;
        for (std::size_t j = 0; j < p0; ++j) fit += long_ar[j] * x[t - 1 - j];
        e_hat[t] = x[t] - fit;
    }

    // Stage 2: regress x_t on lags and the lagged innovation estimate.
    {
        const std::size_t start = p0 + 1;
        Matrix reg2(n - start, 3);
        std::vector<double> y2(n - start);
        for (std::size_t t = start; t < n; ++t) {
            y2[t - start] = x[t];
            reg2(t - start, 0) = x[t - 1];
            reg2(t - start, 1) = x[t - 2];
            reg2(t - start, 2) = e_hat[t - 1];
        }
        const auto init = ols(reg2, y2);
        coeffs.phi1 = init[0];
        coeffs.phi2 = init[1];
        coeffs.theta1 = init[2];
        enforce_regions(coeffs.phi1, coeffs.phi2, coeffs.theta1);
    }

    // Conditional-sum-of-squares refinement: Gauss–Newton with Levenberg
    // damping. Innovation derivatives follow the same recursion as the
    // innovations themselves:
    //   ∂e_t/∂φ1 = −x_{t−1} − θ1·∂e_{t−1}/∂φ1   (likewise for φ2 with x_{t−2},
    //   and for θ1 with e_{t−1} in place of the lagged value).
    std::vector<double> e;
    css_residuals(x, coeffs.phi1, coeffs.phi2, coeffs.theta1, e);
    double best_sse = sse(e);
    double damping = 1e-3;
    std::vector<double> de1(n), de2(n), de3(n), e_try;
    for (int iter = 0; iter < 50; ++iter) {
        de1.assign(n, 0.0), de2.assign(n, 0.0), de3.assign(n, 0.0);
        for (std::size_t t = 2; t < n; ++t) {
            de1[t] = -x[t - 1] - coeffs.theta1 * de1[t - 1];
            de2[t] = -x[t - 2] - coeffs.theta1 * de2[t - 1];
            de3[t] = -e[t - 1] - coeffs.theta1 * de3[t - 1];
        }
        Matrix jtj(3, 3, 0.0);
        std::vector<double> jte(3, 0.0);
        for (std::size_t t = 2; t < n; ++t) {
            const double j[3] = {de1[t], de2[t], de3[t]};
            for (std::size_t a = 0; a < 3; ++a) {
                jte[a] += j[a] * e[t];
                for (std::size_t b = a; b < 3; ++b) jtj(a, b) += j[a] * j[b];
            }
        }
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < a; ++b) jtj(a, b) = jtj(b, a);

        bool accepted = false;
        for (int attempt = 0; attempt < 8 && !accepted; ++attempt) {
            Matrix damped = jtj;
            for (std::size_t a = 0; a < 3; ++a) damped(a, a) += damping * (1.0 + jtj(a, a));
            std::vector<double> step;
            try {
                step = cholesky_solve(cholesky(damped), jte);
            } catch (const Error&) {
                damping *= 10.0;
                continue;
            }
            const double p1 = coeffs.phi1 - step[0];
            const double p2 = coeffs.phi2 - step[1];
            double t1 = coeffs.theta1 - step[2];
            double q1 = p1, q2 = p2;
            enforce_regions(q1, q2, t1);
            css_residuals(x, q1, q2, t1, e_try);
            const double trial = sse(e_try);
            if (std::isfinite(trial) && trial < best_sse) {
                coeffs.phi1 = q1;
                coeffs.phi2 = q2;
                coeffs.theta1 = t1;
                e.swap(e_try);
                const double improvement = (best_sse - trial) / (best_sse + 1e-300);
                best_sse = trial;
                damping = std::max(damping / 10.0, 1e-12);
                accepted = true;
                if (improvement < 1e-12) iter = 50;  // converged
            } else {
                damping *= 10.0;
            }
        }
        if (!accepted) break;
    }

    coeffs.projected = enforce_regions(coeffs.phi1, coeffs.phi2, coeffs.theta1);
    return coeffs;
}

std::vector<double> arima_forecast_path(const ArimaCoeffs& coeffs,
                                        const std::vector<double>& series, int h_max) {
    require(h_max >= 1, "arima_forecast: horizon must be >= 1");
    const std::size_t n = series.size();
    require(n >= 3, "arima_forecast: need at least 3 values");

    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = series[t] - coeffs.mu;
    std::vector<double> e;
    css_residuals(x, coeffs.phi1, coeffs.phi2, coeffs.theta1, e);

    std::vector<double> path(static_cast<std::size_t>(h_max));
    double prev1 = x[n - 1], prev2 = x[n - 2];
    for (int j = 1; j <= h_max; ++j) {
        const double innovation = j == 1 ? coeffs.theta1 * e[n - 1] : 0.0;
        const double next = coeffs.phi1 * prev1 + coeffs.phi2 * prev2 + innovation;
        path[static_cast<std::size_t>(j - 1)] = coeffs.mu + next;
        prev2 = prev1;
        prev1 = next;
    }
    return path;
}

double arima_forecast(const ArimaCoeffs& coeffs, const std::vector<double>& series, int h) {
    return arima_forecast_path(coeffs, series, h).back();
}

std::vector<double> ArimaPredictor::predict(const Matrix& window) const {
    require(target_vital_ < window.cols(), "ArimaPredictor: target vital outside window");
    std::vector<double> series(window.rows());
    for (std::size_t t = 0; t < window.rows(); ++t) series[t] = window(t, target_vital_);
    const auto coeffs = arima_fit(series);
    return {arima_forecast(coeffs, series, horizon_)};
}

}  // namespace vitalcast
