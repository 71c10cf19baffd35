#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include "vitalcast/errors.hpp"
#include "vitalcast/patient.hpp"
#include "vitalcast/rng.hpp"
#include "vitalcast/strategies.hpp"

using vitalcast::Forecast;
using vitalcast::Matrix;
using vitalcast::Predictor;
using vitalcast::Rng;

namespace {

// A fully deterministic toy world whose next vital row is an affine function
// of the current last row: v'_k = 0.9 v_k + 0.02 (k + 1). Because the true
// dynamics depend only on the last row, an exact h-step "model" is the map
// applied h times, which lets strategy outputs be compared against ground
// truth without any training.
std::vector<double> world_next(const std::vector<double>& row) {
    std::vector<double> out(vitalcast::kNumVitals);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = 0.9 * row[k] + 0.02 * static_cast<double>(k + 1);
    return out;
}

std::vector<double> last_vitals(const Matrix& window) {
    std::vector<double> row(vitalcast::kNumVitals);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = window(window.rows() - 1, k);
    return row;
}

// Oracle one-step generator: emits the world's true next vital row.
struct OracleGenerator : Predictor {
    std::vector<double> predict(const Matrix& window) const override {
        return world_next(last_vitals(window));
    }
    std::size_t output_dim() const override { return vitalcast::kNumVitals; }
};

// Oracle direct model for `steps` world transitions ahead of the window end.
struct OracleDirect : Predictor {
    int steps;
    std::size_t target;
    OracleDirect(int steps_, std::size_t target_) : steps(steps_), target(target_) {}
    std::vector<double> predict(const Matrix& window) const override {
        auto row = last_vitals(window);
        for (int j = 0; j < steps; ++j) row = world_next(row);
        return {row[target]};
    }
    std::size_t output_dim() const override { return 1; }
};

Matrix demo_window(std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    Matrix w(m, vitalcast::kNumFeatures);
    auto vals = rng.uniform_vec(w.size());
    for (std::size_t i = 0; i < vals.size(); ++i) w.storage()[i] = vals[i];
    // statics constant per window
    for (std::size_t r = 0; r < m; ++r) {
        w(r, 5) = 0.4;
        w(r, 6) = 1.0;
    }
    return w;
}

}  // namespace

TEST_CASE("shift_append drops the oldest row and appends the synthetic step") {
    Matrix w = demo_window(4, 3);
    std::vector<double> next{0.1, 0.2, 0.3, 0.4, 0.5};
    Matrix shifted = vitalcast::shift_append(w, next);

    CHECK(shifted.rows() == w.rows());
    CHECK(shifted.cols() == w.cols());
    // rows 0..m-2 equal old rows 1..m-1
    for (std::size_t r = 0; r + 1 < w.rows(); ++r)
        for (std::size_t c = 0; c < w.cols(); ++c) CHECK(shifted(r, c) == w(r + 1, c));
    // new last row: predicted vitals plus carried statics
    for (std::size_t k = 0; k < vitalcast::kNumVitals; ++k)
        CHECK(shifted(w.rows() - 1, k) == next[k]);
    CHECK(shifted(w.rows() - 1, 5) == 0.4);
    CHECK(shifted(w.rows() - 1, 6) == 1.0);

    CHECK_THROWS_AS(vitalcast::shift_append(w, {0.1, 0.2}), vitalcast::ContractViolation);
}

TEST_CASE("repeated surgery keeps exactly the newest m rows") {
    Matrix w = demo_window(3, 9);
    Matrix current = w;
    std::vector<std::vector<double>> appended;
    for (int j = 0; j < 3; ++j) {
        std::vector<double> next(vitalcast::kNumVitals, 0.1 * (j + 1));
        appended.push_back(next);
        current = vitalcast::shift_append(current, next);
    }
    // After m appends the window is entirely synthetic.
    for (int j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < vitalcast::kNumVitals; ++k)
            CHECK(current(static_cast<std::size_t>(j), k) == appended[j][k]);
}

TEST_CASE("direct forecasting consults one model per horizon") {
    Matrix w = demo_window(5, 4);
    OracleDirect h1(1, 2), h3(3, 2);
    std::map<int, const Predictor*> models{{1, &h1}, {3, &h3}};

    Forecast f = vitalcast::direct_forecast(models, {1, 3}, w);
    REQUIRE(f.horizons == std::vector<int>{1, 3});
    CHECK(f.value_at(1) == h1.predict(w)[0]);
    CHECK(f.value_at(3) == h3.predict(w)[0]);
    CHECK_FALSE(f.generated_at(1));
    CHECK_FALSE(f.generated_at(3));

    CHECK_THROWS_AS(vitalcast::direct_forecast(models, {2}, w), vitalcast::Error);
    CHECK_THROWS_AS(f.value_at(7), vitalcast::ContractViolation);
}

TEST_CASE("iterative forecasting rolls the one-step model forward") {
    Matrix w = demo_window(4, 5);
    OracleGenerator gen;
    Forecast f = vitalcast::iterative_forecast(gen, w, 4, 1);
    REQUIRE(f.horizons == std::vector<int>{1, 2, 3, 4});

    auto row = last_vitals(w);
    for (int h = 1; h <= 4; ++h) {
        row = world_next(row);
        CHECK(f.value_at(h) == doctest::Approx(row[1]).epsilon(1e-15));
    }

    OracleDirect scalar(1, 0);
    CHECK_THROWS_AS(vitalcast::iterative_forecast(scalar, w, 2, 0),
                    vitalcast::ContractViolation);
}

TEST_CASE("generative boosting equals the oracle composition") {
    // In the toy world the composition generator^g followed by the exact
    // (h-g)-step direct map reproduces the exact h-step direct map, so for
    // oracle models all three strategies agree to machine precision.
    const std::size_t target = 3;
    std::vector<int> horizons{1, 2, 3, 4, 5};

    for (int g : {1, 2, 3}) {
        OracleGenerator gen;
        std::map<int, const Predictor*> pred_models;
        std::vector<std::unique_ptr<OracleDirect>> owned;
        for (int h : horizons) {
            if (h > g) {
                owned.push_back(std::make_unique<OracleDirect>(h - g, target));
                pred_models[h] = owned.back().get();
            }
        }

        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Matrix w = demo_window(6, seed);
            Forecast boosted =
                vitalcast::generative_boost(gen, pred_models, w, g, horizons, target);
            Forecast truth = vitalcast::iterative_forecast(gen, w, 5, target);

            for (int h : horizons) {
                CHECK(std::abs(boosted.value_at(h) - truth.value_at(h)) <= 1e-12);
                CHECK(boosted.generated_at(h) == (h <= g));
            }
        }
    }
}

TEST_CASE("generative boosting validates its inputs") {
    Matrix w = demo_window(4, 1);
    OracleGenerator gen;
    OracleDirect d1(1, 0);
    std::map<int, const Predictor*> models{{2, &d1}};

    CHECK_THROWS_AS(vitalcast::generative_boost(gen, models, w, 0, {1, 2}, 0), vitalcast::Error);
    // horizon 3 > g=1 has no predictive model
    CHECK_THROWS_AS(vitalcast::generative_boost(gen, models, w, 1, {3}, 0), vitalcast::Error);
    // a scalar generator cannot drive window surgery
    CHECK_THROWS_AS(vitalcast::generative_boost(d1, models, w, 1, {2}, 0),
                    vitalcast::ContractViolation);
}
