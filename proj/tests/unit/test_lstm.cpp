#include <doctest.h>

#include <cmath>
#include <vector>

#include "vitalcast/errors.hpp"
#include "vitalcast/gradcheck.hpp"
#include "vitalcast/lstm.hpp"
#include "vitalcast/rng.hpp"

using vitalcast::LstmCache;
using vitalcast::LstmModel;
using vitalcast::LstmParams;
using vitalcast::LstmShape;
using vitalcast::Matrix;
using vitalcast::Rng;

namespace {

// Scalar LSTM (input 1, hidden 1, output 1) with fixed weights, in the flat
// layout [W_i W_f W_g W_o | U_i U_f U_g U_o | b_i b_f b_g b_o | W_y | b_y].
LstmParams hand_params() {
    LstmParams p = LstmParams::zeros({1, 1, 1});
    p.flat = {0.5, -0.3, 0.8, 0.2, 0.3, -0.2, 0.15, 0.25, 0.1, 0.2, -0.1, 0.05, 1.2, 0.3};
    return p;
}

double mse_loss(const LstmParams& params, const Matrix& window,
                const std::vector<double>& target) {
    auto cache = vitalcast::lstm_forward(params, window);
    double acc = 0.0;
    for (std::size_t d = 0; d < target.size(); ++d) {
        double diff = cache.output[d] - target[d];
        acc += diff * diff;
    }
    return acc / static_cast<double>(target.size());
}

}  // namespace

TEST_CASE("shape bookkeeping") {
    LstmShape s{7, 3, 5};
    CHECK(s.param_count() == 4 * 3 * (7 + 3 + 1) + 5 * 3 + 5);
    CHECK(LstmParams::zeros(s).flat.size() == s.param_count());

    Rng rng(0);
    LstmParams init = LstmParams::init(s, rng);
    CHECK(init.flat.size() == s.param_count());
    bool nonzero = false;
    for (double v : init.flat) {
        CHECK(std::abs(v) <= 0.08);
        nonzero |= v != 0.0;
    }
    CHECK(nonzero);
}

TEST_CASE("all-zero parameters give a zero output") {
    LstmParams p = LstmParams::zeros({3, 2, 1});
    Matrix window(4, 3, 0.7);
    auto cache = vitalcast::lstm_forward(p, window);
    CHECK(cache.output == std::vector<double>{0.0});
}

TEST_CASE("single-step forward matches the hand-computed recurrence") {
    LstmParams p = hand_params();
    Matrix window(1, 1);
    window(0, 0) = 0.7;
    auto cache = vitalcast::lstm_forward(p, window);
    REQUIRE(cache.output.size() == 1);
    CHECK(cache.output[0] == doctest::Approx(0.4686411110194283).epsilon(1e-14));
    CHECK(cache.c[0][0] == doctest::Approx(0.26262629338416).epsilon(1e-12));
    CHECK(cache.h[0][0] == doctest::Approx(0.1405342591828569).epsilon(1e-12));
}

TEST_CASE("two-step forward matches the hand-computed recurrence") {
    LstmParams p = hand_params();
    Matrix window(2, 1);
    window(0, 0) = 0.7;
    window(1, 0) = -0.4;
    auto cache = vitalcast::lstm_forward(p, window);
    CHECK(cache.h[1][0] == doctest::Approx(-0.01688191109202603).epsilon(1e-12));
    CHECK(cache.output[0] == doctest::Approx(0.27974170668956877).epsilon(1e-14));

    LstmModel model(p);
    auto y = model.predict(window);
    REQUIRE(y.size() == 1);
    CHECK(y[0] == cache.output[0]);
}

TEST_CASE("backward gradients agree with central differences") {
    Rng rng(12);
    LstmShape shape{3, 2, 2};
    LstmParams p = LstmParams::init(shape, rng);

    Matrix window(4, 3);
    auto vals = rng.uniform_vec(window.size());
    for (std::size_t i = 0; i < vals.size(); ++i) window.storage()[i] = vals[i] - 0.5;
    std::vector<double> target{0.3, -0.2};

    auto cache = vitalcast::lstm_forward(p, window);
    std::vector<double> dy(shape.output);
    for (std::size_t d = 0; d < shape.output; ++d)
        dy[d] = 2.0 * (cache.output[d] - target[d]) / static_cast<double>(shape.output);
    auto analytic = vitalcast::lstm_backward(p, cache, dy);
    REQUIRE(analytic.size() == shape.param_count());

    auto loss = [&](const std::vector<double>& flat) {
        LstmParams probe = p;
        probe.flat = flat;
        return mse_loss(probe, window, target);
    };
    auto report = vitalcast::grad_check(loss, analytic, p.flat, 1e-5, 1e-4);
    CHECK(report.all_ok);
    CHECK(report.max_rel_error < 1e-4);
}

TEST_CASE("a stale cache is rejected") {
    LstmParams p = hand_params();
    Matrix window(2, 1, 0.5);
    auto cache = vitalcast::lstm_forward(p, window);
    p.flat[0] += 1e-3;  // cache no longer matches these parameters
    CHECK_THROWS_AS(vitalcast::lstm_backward(p, cache, {1.0}), vitalcast::ContractViolation);
}

TEST_CASE("training reduces the loss and is deterministic") {
    Rng data_rng(77);
    std::vector<Matrix> windows;
    Matrix targets(30, 1);
    for (std::size_t s = 0; s < 30; ++s) {
        Matrix w(5, 3);
        auto vals = data_rng.uniform_vec(w.size());
        for (std::size_t i = 0; i < vals.size(); ++i) w.storage()[i] = vals[i];
        windows.push_back(w);
        // Learnable signal: the mean of the first feature column.
        double mean = 0.0;
        for (std::size_t r = 0; r < 5; ++r) mean += w(r, 0);
        targets(s, 0) = mean / 5.0;
    }
    vitalcast::SupervisedSet set{&windows, targets};

    vitalcast::TrainConfig cfg;
    cfg.epochs = 60;
    cfg.batch_size = 10;
    cfg.learning_rate = 0.01;

    Rng fit_rng(5);
    auto fit = vitalcast::lstm_fit(set, {3, 4, 1}, cfg, fit_rng);
    REQUIRE(fit.epoch_loss.size() == 60);
    CHECK(fit.epoch_loss.back() < 0.5 * fit.epoch_loss.front());

    Rng fit_rng2(5);
    auto fit2 = vitalcast::lstm_fit(set, {3, 4, 1}, cfg, fit_rng2);
    CHECK(fit.model.params().flat == fit2.model.params().flat);
    CHECK(fit.epoch_loss == fit2.epoch_loss);
}

TEST_CASE("fit validates its inputs") {
    std::vector<Matrix> windows;
    vitalcast::SupervisedSet empty{&windows, Matrix(0, 1)};
    vitalcast::TrainConfig cfg;
    Rng rng(0);
    CHECK_THROWS_AS(vitalcast::lstm_fit(empty, {3, 2, 1}, cfg, rng),
                    vitalcast::ContractViolation);

    Matrix w(2, 3, 0.1);
    windows.push_back(w);
    vitalcast::SupervisedSet bad_dim{&windows, Matrix(1, 2)};
    CHECK_THROWS_AS(vitalcast::lstm_fit(bad_dim, {3, 2, 1}, cfg, rng),
                    vitalcast::ContractViolation);

    vitalcast::TrainConfig bad_cfg;
    bad_cfg.epochs = 0;
    vitalcast::SupervisedSet ok{&windows, Matrix(1, 1)};
    CHECK_THROWS_AS(vitalcast::lstm_fit(ok, {3, 2, 1}, bad_cfg, rng), vitalcast::ConfigError);
}
