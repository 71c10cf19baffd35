#include "vitalcast/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "vitalcast/arima.hpp"
#include "vitalcast/errors.hpp"
#include "vitalcast/impute.hpp"
#include "vitalcast/kernels.hpp"
#include "vitalcast/metrics.hpp"
#include "vitalcast/micluster.hpp"
#include "vitalcast/pipeline.hpp"
#include "vitalcast/rng.hpp"
#include "vitalcast/scaler.hpp"
#include "vitalcast/split.hpp"
#include "vitalcast/windows.hpp"

namespace vitalcast {
namespace {

/// Validation windows used for kernel hyperparameter selection are capped by
/// deterministic stride subsampling; ranking hyperparameters does not need
/// the full set and the cap keeps the grid search desk-sized.
constexpr std::size_t kSelectionValCap = 512;

std::vector<int> ascending_unique(std::vector<int> horizons) {
    std::sort(horizons.begin(), horizons.end());
    horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
    return horizons;
}

/// Deterministic stride subsample: all indices when total ≤ cap, else cap
/// evenly spaced indices (strictly increasing).
std::vector<std::size_t> stride_indices(std::size_t total, std::size_t cap) {
    std::vector<std::size_t> idx;
    if (total <= cap) {
        idx.resize(total);
        for (std::size_t i = 0; i < total; ++i) idx[i] = i;
        return idx;
    }
    idx.resize(cap);
    for (std::size_t i = 0; i < cap; ++i) idx[i] = i * total / cap;
    return idx;
}

Matrix flatten_windows(const std::vector<Matrix>& windows, const std::vector<std::size_t>& idx) {
    require(!idx.empty(), "suite: empty window subsample");
    std::size_t dim = windows[idx[0]].rows() * windows[idx[0]].cols();
    Matrix x(idx.size(), dim);
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const std::vector<double>& flat = windows[idx[r]].storage();
        for (std::size_t c = 0; c < dim; ++c) x(r, c) = flat[c];
    }
    return x;
}

struct MethodSpec {
    int depth = 0;  // 0 → no generator (lstm-direct / benchmarks)
    bool mi = false;
};

MethodSpec parse_method(const std::string& name) {
    MethodSpec spec;
    if (name.rfind("glstm-g", 0) == 0) {
        spec.depth = name[7] - '0';
        spec.mi = name.size() > 8 && name.compare(8, std::string::npos, "-mi") == 0;
    }
    return spec;
}

/// Per-method per-horizon outcome of one seed (ascending horizons).
using SeedCells = std::vector<std::vector<HorizonScore>>;

std::vector<HorizonScore> run_arima_method(const WindowedDataset& test_w,
                                           const MinMaxScaler& scaler, std::size_t target_vital,
                                           const std::vector<int>& horizons) {
    int h_max = horizons.back();
    std::vector<std::vector<double>> preds(horizons.size());
    std::vector<std::vector<double>> actuals(horizons.size());
    std::vector<double> series(test_w.m);
    for (std::size_t s = 0; s < test_w.size(); ++s) {
        const Matrix& w = test_w.windows[s];
        for (std::size_t t = 0; t < test_w.m; ++t) series[t] = w(t, target_vital);
        ArimaCoeffs coeffs = arima_fit(series);
        std::vector<double> path = arima_forecast_path(coeffs, series, h_max);
        for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
            double pred = path[static_cast<std::size_t>(horizons[hi]) - 1];
            preds[hi].push_back(scaler.invert_feature(target_vital, pred));
            actuals[hi].push_back(
                scaler.invert_feature(target_vital, test_w.target(horizons[hi], s)));
        }
    }
    std::vector<HorizonScore> scores;
    for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
        HorizonScore score;
        score.horizon = horizons[hi];
        score.mse = mse(preds[hi], actuals[hi]);
        score.mape = mape(preds[hi], actuals[hi]).value;
        scores.push_back(score);
    }
    return scores;
}

/// Kernel regression (KRR and GPR share everything except their grids):
/// Gram factorizations are shared across horizons, hyperparameters are
/// selected per horizon by validation MSE, and the kernel row per query
/// window is computed once per factorization.
std::vector<HorizonScore> run_kernel_method(const KernelConfig& kc,
                                            const WindowedDataset& bench_w,
                                            const WindowedDataset& val_w,
                                            const WindowedDataset& test_w,
                                            const MinMaxScaler& scaler, std::size_t target_vital,
                                            const std::vector<int>& horizons) {
    const std::vector<std::size_t> train_idx = stride_indices(bench_w.size(), kc.train_cap);
    Matrix train_x = flatten_windows(bench_w.windows, train_idx);

    std::vector<double> y_mean(horizons.size());
    std::vector<std::vector<double>> y_centered(horizons.size());
    for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
        std::vector<double>& y = y_centered[hi];
        y.resize(train_idx.size());
        double total = 0.0;
        for (std::size_t r = 0; r < train_idx.size(); ++r) {
            y[r] = bench_w.target(horizons[hi], train_idx[r]);
            total += y[r];
        }
        y_mean[hi] = total / static_cast<double>(y.size());
        for (double& v : y) v -= y_mean[hi];
    }

    struct GridPoint {
        std::shared_ptr<const KernelFactorization> fact;
        std::vector<std::vector<double>> alpha;  // per horizon
    };
    std::vector<GridPoint> grid;
    for (double length : kc.lengths) {
        for (double lambda : kc.lambdas) {
            GridPoint point;
            point.fact = factorize_rbf(train_x, KernelHyper{kc.sigma, length, lambda});
            point.alpha.resize(horizons.size());
            for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
                point.alpha[hi] = solve_alpha(*point.fact, y_centered[hi]);
            }
            grid.push_back(std::move(point));
        }
    }

    // Hyperparameter selection: squared validation error per grid point and
    // horizon, accumulated over one kernel row per (window, grid point).
    const std::vector<std::size_t> val_idx = stride_indices(val_w.size(), kSelectionValCap);
    std::vector<std::vector<double>> val_sq(grid.size(),
                                            std::vector<double>(horizons.size(), 0.0));
    for (std::size_t vi : val_idx) {
        const std::vector<double>& query = val_w.windows[vi].storage();
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            const KernelFactorization& fact = *grid[gi].fact;
            std::vector<double> row =
                rbf_cross(fact.train_x, query, fact.hyper.sigma, fact.hyper.length);
            for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
                double pred = y_mean[hi] + dot(grid[gi].alpha[hi], row);
                double err = pred - val_w.target(horizons[hi], vi);
                val_sq[gi][hi] += err * err;
            }
        }
    }
    std::vector<std::size_t> best_grid(horizons.size(), 0);
    for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
        for (std::size_t gi = 1; gi < grid.size(); ++gi) {
            if (val_sq[gi][hi] < val_sq[best_grid[hi]][hi]) best_grid[hi] = gi;
        }
    }

    // Test evaluation, horizons grouped by their selected factorization.
    std::map<std::size_t, std::vector<std::size_t>> by_grid;
    for (std::size_t hi = 0; hi < horizons.size(); ++hi) by_grid[best_grid[hi]].push_back(hi);

    std::vector<std::vector<double>> preds(horizons.size());
    std::vector<std::vector<double>> actuals(horizons.size());
    for (const auto& [gi, his] : by_grid) {
        const KernelFactorization& fact = *grid[gi].fact;
        for (std::size_t s = 0; s < test_w.size(); ++s) {
            const std::vector<double>& query = test_w.windows[s].storage();
            std::vector<double> row =
                rbf_cross(fact.train_x, query, fact.hyper.sigma, fact.hyper.length);
            for (std::size_t hi : his) {
                double pred = y_mean[hi] + dot(grid[gi].alpha[hi], row);
                preds[hi].push_back(scaler.invert_feature(target_vital, pred));
                actuals[hi].push_back(
                    scaler.invert_feature(target_vital, test_w.target(horizons[hi], s)));
            }
        }
    }

    std::vector<HorizonScore> scores;
    for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
        HorizonScore score;
        score.horizon = horizons[hi];
        score.mse = mse(preds[hi], actuals[hi]);
        score.mape = mape(preds[hi], actuals[hi]).value;
        scores.push_back(score);
    }
    return scores;
}

std::vector<HorizonScore> glstm_scores(const PipelinePools& pools,
                                       const ExperimentConfig& config,
                                       const std::vector<int>& horizons, int depth,
                                       const MinMaxScaler& scaler, const Rng& rng) {
    PipelineSettings settings;
    settings.target_vital = config.target_vital;
    settings.window_m = config.window_m;
    settings.horizons = horizons;
    settings.depth = depth;
    settings.lstm = config.lstm;
    settings.predictors_on_clean_windows = config.predictors_on_clean_windows;
    return run_glstm_pipeline(pools, settings, scaler, rng).scores;
}

SeedCells run_seed(const ExperimentConfig& config, const Cohort& imputed,
                   const std::vector<int>& horizons, std::uint64_t seed) {
    SplitPlan plan = config.split;
    plan.seed = config.resplit_per_seed ? seed : config.seeds.front();
    SplitResult split = split_patients(imputed, plan);

    Cohort train = subset(imputed, split.train);
    MinMaxScaler scaler =
        MinMaxScaler::fit(train, "train(seed=" + std::to_string(plan.seed) + ")");

    Cohort train_s = scaler.apply(train);
    Cohort p_s = scaler.apply(subset(imputed, split.p_pool));
    Cohort g_s = scaler.apply(subset(imputed, split.g_pool));
    Cohort val_s = scaler.apply(subset(imputed, split.validation));
    Cohort test_s = scaler.apply(subset(imputed, split.test));

    const Cohort& bench_pool = config.benchmarks_on_full_train ? train_s : p_s;

    Rng seed_rng(seed);

    // Windows for the non-pipeline methods (the pipeline builds its own).
    std::optional<WindowedDataset> bench_w;
    std::optional<WindowedDataset> val_w;
    std::optional<WindowedDataset> test_w;
    auto tabular = [&]() {
        if (!test_w) {
            bench_w = make_windows(bench_pool, config.window_m, horizons, config.target_vital);
            val_w = make_windows(val_s, config.window_m, horizons, config.target_vital);
            test_w = make_windows(test_s, config.window_m, horizons, config.target_vital);
            require(bench_w->size() > 0 && val_w->size() > 0 && test_w->size() > 0,
                    "suite: a split produced no windows (series shorter than window + horizon)");
        }
    };

    // Mutual-information selection, shared by every *-mi method this seed.
    std::optional<GroupAssignment> mi_pick;
    std::optional<Cohort> g_mi, p_mi;
    auto mi_pools = [&]() {
        if (!mi_pick) {
            MiScoreTable table =
                score_cohort(train_s, config.mi.k, seed_rng.derive("mi-scores"));
            Rng sample_rng = seed_rng.derive("mi-sample");
            mi_pick = group_and_sample(table, config.mi.groups, config.mi.g_fraction, sample_rng);
            g_mi = subset(train_s, mi_pick->g_ids);
            p_mi = subset(train_s, mi_pick->p_ids);
        }
    };

    SeedCells cells(config.methods.size());
    for (std::size_t m_idx = 0; m_idx < config.methods.size(); ++m_idx) {
        const std::string& name = config.methods[m_idx];
        try {
            Rng method_rng = seed_rng.derive(name);
            if (name == "arima") {
                tabular();
                cells[m_idx] =
                    run_arima_method(*test_w, scaler, config.target_vital, horizons);
            } else if (name == "krr" || name == "gpr") {
                tabular();
                const KernelConfig& kc = name == "krr" ? config.krr : config.gpr;
                cells[m_idx] = run_kernel_method(kc, *bench_w, *val_w, *test_w, scaler,
                                                  config.target_vital, horizons);
            } else if (name == "lstm-direct") {
                PipelinePools pools{nullptr, &bench_pool, &val_s, &test_s};
                cells[m_idx] = glstm_scores(pools, config, horizons, 0, scaler, method_rng);
            } else {
                MethodSpec spec = parse_method(name);
                require(spec.depth >= 1, "suite: unhandled method " + name);
                PipelinePools pools;
                if (spec.mi) {
                    mi_pools();
                    pools = PipelinePools{&*g_mi, &*p_mi, &val_s, &test_s};
                } else {
                    pools = PipelinePools{&g_s, &p_s, &val_s, &test_s};
                }
                cells[m_idx] =
                    glstm_scores(pools, config, horizons, spec.depth, scaler, method_rng);
            }
        } catch (const ConfigError& e) {
            throw ConfigError("suite: method '" + name + "' failed at seed " +
                              std::to_string(seed) + ": " + e.what());
        } catch (const Error& e) {
            throw Error("suite: method '" + name + "' failed at seed " + std::to_string(seed) +
                        ": " + e.what());
        }
    }
    return cells;
}

}  // namespace

std::size_t suite_thread_count() {
    const char* env = std::getenv("VITALCAST_THREADS");
    if (env != nullptr && *env != '\0') {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end == nullptr || *end != '\0' || n < 1) {
            throw ConfigError("VITALCAST_THREADS must be a positive integer, got '" +
                              std::string(env) + "'");
        }
        return static_cast<std::size_t>(n);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<std::size_t>(hc);
}

MetricsReport run_suite(const ExperimentConfig& config, const Cohort& cohort,
                        const std::function<void(const std::string&)>& log) {
    config.validate();
    const std::vector<int> horizons = ascending_unique(config.horizons);

    Cohort imputed = impute_locf(cohort);

    const std::size_t n_seeds = config.seeds.size();
    std::vector<SeedCells> outcomes(n_seeds);
    std::vector<std::exception_ptr> failures(n_seeds);
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;

    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_seeds) break;
            try {
                outcomes[i] = run_seed(config, imputed, horizons, config.seeds[i]);
                if (log) {
                    std::lock_guard<std::mutex> hold(log_mutex);
                    log("seed " + std::to_string(config.seeds[i]) + " done (" +
                        std::to_string(i + 1) + "/" + std::to_string(n_seeds) + ")");
                }
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    std::size_t n_threads = std::min(suite_thread_count(), n_seeds);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }
    for (std::size_t i = 0; i < n_seeds; ++i) {
        if (failures[i]) std::rethrow_exception(failures[i]);
    }

    MetricsReport report;
    report.target_vital = kVitalNames[config.target_vital];
    report.seeds = config.seeds;
    report.horizons = horizons;
    report.methods = config.methods;
    report.cells.assign(config.methods.size(),
                        std::vector<ReportCell>(horizons.size()));
    for (std::size_t i = 0; i < n_seeds; ++i) {
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            require(outcomes[i][m].size() == horizons.size(),
                    "suite: method produced a mismatched horizon list");
            for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
                const HorizonScore& score = outcomes[i][m][hi];
                ReportCell& cell = report.cells[m][hi];
                if (score.masked) {
                    require(i == 0 || cell.masked, "suite: inconsistent masking across seeds");
                    cell.masked = true;
                } else {
                    cell.mse_runs.push_back(score.mse);
                    cell.mape_runs.push_back(score.mape);
                }
            }
        }
    }
    report.finalize();
    return report;
}

}  // namespace vitalcast
