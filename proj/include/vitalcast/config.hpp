#ifndef VITALCAST_CONFIG_HPP
#define VITALCAST_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vitalcast/report.hpp"
#include "vitalcast/split.hpp"
#include "vitalcast/synthgen.hpp"

namespace vitalcast {

/// Epochs/learning-rate pair for one training role.
struct LstmRole {
    std::size_t epochs = 100;
    double learning_rate = 0.001;
};

struct LstmConfig {
    std::size_t hidden = 1;
    std::vector<std::size_t> hidden_grid;  // tuning candidates; empty → {hidden}
    std::size_t batch_size = 20;
    LstmRole generator{300, 0.0005};
    LstmRole predictor{100, 0.001};

    std::vector<std::size_t> candidates() const {
        return hidden_grid.empty() ? std::vector<std::size_t>{hidden} : hidden_grid;
    }
};

struct KernelConfig {
    double sigma = 1.0;
    std::vector<double> lengths = {2.0, 4.0, 8.0};
    std::vector<double> lambdas = {1e-4, 1e-2};
    /// Training rows are capped by deterministic stride subsampling to keep
    /// the Gram factorization desk-sized.
    std::size_t train_cap = 1000;
};

struct MiConfig {
    std::size_t k = 3;
    std::size_t groups = 10;  // L
    double g_fraction = 1.0 / 3.0;
};

struct OutputConfig {
    std::string directory = "reports";
    std::string basename = "experiment";
    std::vector<ReportFormat> formats = {ReportFormat::csv, ReportFormat::markdown,
                                         ReportFormat::json};
};

/// Full experiment description. Defaults mirror the reference protocol:
/// M=20, batches of 20, generator 300 epochs @ lr 0.0005, predictors
/// 100 epochs @ lr 0.001, splits 60/20/20 with 40/20 inside training,
/// KSG k=3, L=10 groups, 10 seeds, horizons 1..12.
struct ExperimentConfig {
    bool use_synthetic = true;
    std::string csv_path;
    CohortSpec synthetic;

    std::size_t target_vital = 0;  // column index into kVitalNames
    std::size_t window_m = 20;
    std::vector<int> horizons = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    SplitPlan split;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    bool resplit_per_seed = true;

    std::vector<std::string> methods = {"krr",      "gpr",      "arima",       "lstm-direct",
                                        "glstm-g1", "glstm-g2", "glstm-g3",    "glstm-g1-mi",
                                        "glstm-g2-mi", "glstm-g3-mi"};
    LstmConfig lstm;
    KernelConfig gpr;
    KernelConfig krr;
    MiConfig mi;
    /// When false (default) the kernel/LSTM benchmarks train on the same P
    /// pool as the boosted predictors, isolating the strategy comparison
    /// from training-set size.
    bool benchmarks_on_full_train = false;
    /// When true, boosted predictors train on clean windows at offset h−g
    /// instead of generatively augmented windows.
    bool predictors_on_clean_windows = false;

    OutputConfig output;

    static ExperimentConfig paper_defaults();
    /// Parses and validates a JSON document; unknown or ill-typed fields
    /// raise ConfigError naming the field.
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);

    void validate() const;
};

/// Name ↔ index helpers for the target vital.
std::size_t vital_index(const std::string& name);

}  // namespace vitalcast

#endif
