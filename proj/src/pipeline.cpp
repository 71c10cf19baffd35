#include "vitalcast/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "vitalcast/errors.hpp"
#include "vitalcast/metrics.hpp"
#include "vitalcast/strategies.hpp"
#include "vitalcast/windows.hpp"

namespace vitalcast {
namespace {

/// Re-throws pipeline-internal failures with the failing stage in the text.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("glstm pipeline [") + name + "]: " + e.what());
    } catch (const Error& e) {
        throw Error(std::string("glstm pipeline [") + name + "]: " + e.what());
    }
}

std::vector<int> ascending_unique(std::vector<int> horizons) {
    std::sort(horizons.begin(), horizons.end());
    horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
    return horizons;
}

WindowedDataset build_windows(const Cohort& cohort, const char* pool_name,
                              const PipelineSettings& settings, std::vector<int> horizons) {
    WindowedDataset ds =
        make_windows(cohort, settings.window_m, std::move(horizons), settings.target_vital);
    if (ds.size() == 0) {
        throw Error(std::string("no usable windows in the ") + pool_name +
                    " pool: every series is shorter than window + max horizon");
    }
    return ds;
}

/// Applies `depth` rounds of window surgery to every window.
std::vector<Matrix> extend_windows(const LstmModel& generator, const std::vector<Matrix>& windows,
                                   int depth) {
    std::vector<Matrix> out;
    out.reserve(windows.size());
    for (const Matrix& w : windows) {
        Matrix current = w;
        for (int step = 0; step < depth; ++step) {
            current = shift_append(current, generator.predict(current));
        }
        out.push_back(std::move(current));
    }
    return out;
}

Matrix scalar_targets(const WindowedDataset& ds, int horizon) {
    Matrix t(ds.size(), 1);
    for (std::size_t s = 0; s < ds.size(); ++s) t(s, 0) = ds.target(horizon, s);
    return t;
}

double validation_mse_vector(const LstmModel& model, const std::vector<Matrix>& windows,
                             const Matrix& future) {
    double total = 0.0;
    for (std::size_t s = 0; s < windows.size(); ++s) {
        std::vector<double> pred = model.predict(windows[s]);
        for (std::size_t v = 0; v < future.cols(); ++v) {
            double err = pred[v] - future(s, v);
            total += err * err;
        }
    }
    return total / (static_cast<double>(windows.size()) * static_cast<double>(future.cols()));
}

double validation_mse_scalar(const LstmModel& model, const std::vector<Matrix>& windows,
                             const WindowedDataset& ds, int horizon) {
    double total = 0.0;
    for (std::size_t s = 0; s < windows.size(); ++s) {
        double err = model.predict(windows[s])[0] - ds.target(horizon, s);
        total += err * err;
    }
    return total / static_cast<double>(windows.size());
}

struct Picked {
    LstmModel model;
    std::size_t hidden = 0;
};

/// Fits one candidate per hidden size and keeps the one with the smallest
/// validation MSE (ties favour the earlier grid entry).
template <typename FitFn, typename ScoreFn>
Picked pick_best(const std::vector<std::size_t>& hidden_grid, FitFn&& fit, ScoreFn&& score) {
    Picked best;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t ci = 0; ci < hidden_grid.size(); ++ci) {
        LstmModel candidate = fit(hidden_grid[ci], ci);
        double val = score(candidate);
        if (val < best_mse) {
            best_mse = val;
            best = Picked{std::move(candidate), hidden_grid[ci]};
        }
    }
    return best;
}

}  // namespace

PipelineResult run_glstm_pipeline(const PipelinePools& pools, const PipelineSettings& settings,
                                  const MinMaxScaler& scaler, const Rng& rng) {
    require(pools.predictor_pool != nullptr, "pipeline: predictor pool is null");
    require(pools.validation != nullptr, "pipeline: validation cohort is null");
    require(pools.test != nullptr, "pipeline: test cohort is null");
    require(settings.depth >= 0, "pipeline: negative generation depth");
    require(settings.depth == 0 || pools.generator_pool != nullptr,
            "pipeline: generator pool is null at depth >= 1");
    require(!settings.horizons.empty(), "pipeline: no horizons requested");

    const int depth = settings.depth;
    const std::vector<int> horizons = ascending_unique(settings.horizons);
    const bool clean_mode = settings.predictors_on_clean_windows && depth > 0;

    // Predictor-pool targets: reported horizons, plus the shifted offsets
    // h−depth when training on clean windows.
    std::vector<int> pred_horizons = horizons;
    if (clean_mode) {
        for (int h : horizons) {
            if (h > depth) pred_horizons.push_back(h - depth);
        }
    }
    // Validation needs one-step vector targets for generator selection.
    std::vector<int> val_horizons = horizons;
    if (depth > 0) val_horizons.push_back(1);

    WindowedDataset pred_w = stage("windowing", [&] {
        return build_windows(*pools.predictor_pool, "predictor", settings,
                             ascending_unique(pred_horizons));
    });
    WindowedDataset val_w = stage("windowing", [&] {
        return build_windows(*pools.validation, "validation", settings,
                             ascending_unique(val_horizons));
    });
    WindowedDataset test_w =
        stage("windowing", [&] { return build_windows(*pools.test, "test", settings, horizons); });

    const std::vector<std::size_t> hidden_grid = settings.lstm.candidates();
    const std::size_t k = pred_w.k;

    PipelineResult result;

    // --- Generator -------------------------------------------------------
    if (depth > 0) {
        WindowedDataset gen_w = stage("windowing", [&] {
            return build_windows(*pools.generator_pool, "generator", settings, {1});
        });
        const Matrix& gen_targets = gen_w.future_vitals[gen_w.horizon_index(1)];
        const Matrix& val_next = val_w.future_vitals[val_w.horizon_index(1)];

        TrainConfig train;
        train.epochs = settings.lstm.generator.epochs;
        train.batch_size = settings.lstm.batch_size;
        train.learning_rate = settings.lstm.generator.learning_rate;

        Picked gen = stage("generator-training", [&] {
            return pick_best(
                hidden_grid,
                [&](std::size_t hidden, std::size_t ci) {
                    Rng stream = rng.derive("generator", ci);
                    SupervisedSet data{&gen_w.windows, gen_targets};
                    return lstm_fit(data, LstmShape{k, hidden, kNumVitals}, train, stream).model;
                },
                [&](const LstmModel& m) {
                    return validation_mse_vector(m, val_w.windows, val_next);
                });
        });
        result.generator = std::move(gen.model);
        result.generator_hidden = gen.hidden;
    }

    // --- Window extension --------------------------------------------------
    std::vector<Matrix> pred_windows;
    std::vector<Matrix> val_windows;
    std::vector<Matrix> test_windows;
    if (depth > 0) {
        stage("window-extension", [&] {
            if (!clean_mode) pred_windows = extend_windows(result.generator, pred_w.windows, depth);
            val_windows = extend_windows(result.generator, val_w.windows, depth);
            test_windows = extend_windows(result.generator, test_w.windows, depth);
            return 0;
        });
    }
    const std::vector<Matrix>& train_windows =
        (depth > 0 && !clean_mode) ? pred_windows : pred_w.windows;
    const std::vector<Matrix>& eval_val_windows = depth > 0 ? val_windows : val_w.windows;
    const std::vector<Matrix>& eval_test_windows = depth > 0 ? test_windows : test_w.windows;

    // --- Per-horizon predictors -------------------------------------------
    TrainConfig train;
    train.epochs = settings.lstm.predictor.epochs;
    train.batch_size = settings.lstm.batch_size;
    train.learning_rate = settings.lstm.predictor.learning_rate;

    for (int h : horizons) {
        if (h <= depth) continue;
        int target_offset = clean_mode ? h - depth : h;
        Matrix targets = scalar_targets(pred_w, target_offset);
        Picked picked = stage("predictor-training", [&] {
            return pick_best(
                hidden_grid,
                [&](std::size_t hidden, std::size_t ci) {
                    Rng stream = rng.derive("predictor-h" + std::to_string(h), ci);
                    SupervisedSet data{&train_windows, targets};
                    return lstm_fit(data, LstmShape{k, hidden, 1}, train, stream).model;
                },
                [&](const LstmModel& m) {
                    return validation_mse_scalar(m, eval_val_windows, val_w, h);
                });
        });
        result.predictors.emplace(h, std::move(picked.model));
    }

    // --- Test evaluation ----------------------------------------------------
    stage("evaluation", [&] {
        for (int h : horizons) {
            HorizonScore score;
            score.horizon = h;
            if (h <= depth) {
                score.masked = true;
                result.scores.push_back(score);
                continue;
            }
            const LstmModel& model = result.predictors.at(h);
            std::vector<double> predictions;
            std::vector<double> actuals;
            predictions.reserve(test_w.size());
            actuals.reserve(test_w.size());
            for (std::size_t s = 0; s < test_w.size(); ++s) {
                double pred = model.predict(eval_test_windows[s])[0];
                predictions.push_back(scaler.invert_feature(settings.target_vital, pred));
                actuals.push_back(
                    scaler.invert_feature(settings.target_vital, test_w.target(h, s)));
            }
            score.mse = mse(predictions, actuals);
            score.mape = mape(predictions, actuals).value;
            result.scores.push_back(score);
        }
        return 0;
    });

    return result;
}

}  // namespace vitalcast
