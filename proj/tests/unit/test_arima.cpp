#include <doctest.h>

#include <cmath>
#include <vector>

#include "vitalcast/arima.hpp"
#include "vitalcast/errors.hpp"
#include "vitalcast/patient.hpp"
#include "vitalcast/rng.hpp"

using vitalcast::ArimaCoeffs;
using vitalcast::Rng;

namespace {

// ARMA(2,1) sample path around mu with N(0,1) innovations from our own
// generator; the first `burn` steps are discarded.
std::vector<double> simulate(double mu, double phi1, double phi2, double theta1, std::size_t n,
                             std::size_t burn, Rng& rng) {
    std::vector<double> out;
    out.reserve(n);
    double x1 = 0.0, x2 = 0.0, e1 = 0.0;
    for (std::size_t t = 0; t < n + burn; ++t) {
        double e = rng.normal();
        double x = phi1 * x1 + phi2 * x2 + theta1 * e1 + e;
        x2 = x1;
        x1 = x;
        e1 = e;
        if (t >= burn) out.push_back(mu + x);
    }
    return out;
}

}  // namespace

TEST_CASE("a constant series fits to zero dynamics around its value") {
    std::vector<double> series(30, 5.5);
    ArimaCoeffs c = vitalcast::arima_fit(series);
    CHECK(c.mu == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(c.phi1 == 0.0);
    CHECK(c.phi2 == 0.0);
    CHECK(c.theta1 == 0.0);
    for (int h = 1; h <= 4; ++h)
        CHECK(vitalcast::arima_forecast(c, series, h) == doctest::Approx(5.5).epsilon(1e-12));
}

TEST_CASE("forecasts from fixed coefficients match the hand recursion") {
    // Innovations are reconstructed with e_0 = e_1 = 0; the one-step-ahead
    // forecast carries theta1 * e_n, and further steps only propagate the AR
    // terms.
    ArimaCoeffs c;
    c.mu = 10.0;
    c.phi1 = 0.5;
    c.phi2 = -0.2;
    c.theta1 = 0.3;
    std::vector<double> series{
        12.040919121385183, 7.444334968685818,  10.418098846725778, 9.43223039387207,
        9.547350707889555,  9.784402836910234,  7.9800138708527495, 9.76806762235581,
        9.13478692372506,   13.322999516644883, 10.225786613227921, 9.647369205658405,
        9.71871258184865,   9.33195365389105,   8.944849448794878,  9.609199022765345,
        10.481945388506785, 9.761446393426633,  10.957758702959763, 9.80019787093342,
        10.024259565076665, 11.545820851212811};

    CHECK(vitalcast::arima_forecast(c, series, 1) ==
          doctest::Approx(11.156993294739078).epsilon(1e-12));
    CHECK(vitalcast::arima_forecast(c, series, 2) ==
          doctest::Approx(10.269332477126976).epsilon(1e-12));
    CHECK(vitalcast::arima_forecast(c, series, 3) ==
          doctest::Approx(9.903267579615672).epsilon(1e-12));

    auto path = vitalcast::arima_forecast_path(c, series, 3);
    REQUIRE(path.size() == 3);
    CHECK(path[0] == vitalcast::arima_forecast(c, series, 1));
    CHECK(path[1] == vitalcast::arima_forecast(c, series, 2));
    CHECK(path[2] == vitalcast::arima_forecast(c, series, 3));
}

TEST_CASE("fitting recovers known coefficients on a long simulated series") {
    Rng rng(3);
    auto series = simulate(10.0, 0.6, -0.3, 0.4, 2000, 200, rng);
    ArimaCoeffs c = vitalcast::arima_fit(series);
    CHECK(c.mu == doctest::Approx(10.0).epsilon(0.05));
    CHECK(c.phi1 == doctest::Approx(0.6).epsilon(0.15));
    CHECK(c.phi2 == doctest::Approx(-0.3).epsilon(0.15));
    CHECK(c.theta1 == doctest::Approx(0.4).epsilon(0.35));
}

TEST_CASE("fitting is deterministic") {
    Rng rng(8);
    auto series = simulate(0.0, 0.5, -0.1, 0.2, 300, 50, rng);
    ArimaCoeffs a = vitalcast::arima_fit(series);
    ArimaCoeffs b = vitalcast::arima_fit(series);
    CHECK(a.mu == b.mu);
    CHECK(a.phi1 == b.phi1);
    CHECK(a.phi2 == b.phi2);
    CHECK(a.theta1 == b.theta1);
}

TEST_CASE("long-range forecasts revert to the mean") {
    ArimaCoeffs c;
    c.mu = 42.0;
    c.phi1 = 0.7;
    c.phi2 = -0.2;
    c.theta1 = 0.3;
    std::vector<double> series(40, 42.0);
    series[39] = 50.0;  // a final shock
    auto path = vitalcast::arima_forecast_path(c, series, 60);
    CHECK(std::abs(path[0] - 42.0) > 1.0);  // the shock propagates at first
    CHECK(path[59] == doctest::Approx(42.0).epsilon(1e-3));
}

TEST_CASE("fitted models stay in the stationary/invertible region") {
    // A strongly trending series pushes the unconstrained AR fit towards a
    // unit root; the projection must keep the roots inside the boundary.
    std::vector<double> trending;
    for (int t = 0; t < 120; ++t) trending.push_back(0.5 * t);
    ArimaCoeffs c = vitalcast::arima_fit(trending);
    // Stationarity of phi(z) = 1 - phi1 z - phi2 z^2: companion-matrix
    // eigenvalues must be inside the unit circle.
    double disc = c.phi1 * c.phi1 + 4.0 * c.phi2;
    double radius;
    if (disc >= 0.0) {
        double r1 = std::abs((c.phi1 + std::sqrt(disc)) / 2.0);
        double r2 = std::abs((c.phi1 - std::sqrt(disc)) / 2.0);
        radius = std::max(r1, r2);
    } else {
        radius = std::sqrt(-c.phi2);
    }
    CHECK(radius < 1.0);
    CHECK(std::abs(c.theta1) <= 0.99);
}

TEST_CASE("short series are rejected, forecasting needs history") {
    std::vector<double> s(19, 1.0);
    CHECK_THROWS_AS(vitalcast::arima_fit(s), vitalcast::ContractViolation);
    std::vector<double> ok(20, 1.0);
    CHECK_NOTHROW(vitalcast::arima_fit(ok));

    ArimaCoeffs c;
    c.mu = 1.0;
    std::vector<double> tiny{1.0, 2.0};
    CHECK_THROWS_AS(vitalcast::arima_forecast(c, tiny, 1), vitalcast::ContractViolation);
    CHECK_THROWS_AS(vitalcast::arima_forecast_path(c, ok, 0), vitalcast::ContractViolation);
}

TEST_CASE("the predictor adapter forecasts a window's target column") {
    vitalcast::Matrix window(24, vitalcast::kNumVitals);
    Rng rng(17);
    for (std::size_t t = 0; t < window.rows(); ++t)
        for (std::size_t v = 0; v < window.cols(); ++v)
            window(t, v) = (v == 2) ? 95.0 + rng.normal() * 0.5 : rng.uniform();

    vitalcast::ArimaPredictor pred(2, 3);
    CHECK(pred.output_dim() == 1);
    CHECK(pred.target_vital() == 2);
    CHECK(pred.horizon() == 3);
    auto y = pred.predict(window);
    REQUIRE(y.size() == 1);

    std::vector<double> col;
    for (std::size_t t = 0; t < window.rows(); ++t) col.push_back(window(t, 2));
    ArimaCoeffs c = vitalcast::arima_fit(col);
    CHECK(y[0] == vitalcast::arima_forecast(c, col, 3));
}
