#ifndef VITALCAST_PIPELINE_HPP
#define VITALCAST_PIPELINE_HPP

#include <map>
#include <vector>

#include "vitalcast/config.hpp"
#include "vitalcast/lstm.hpp"
#include "vitalcast/patient.hpp"
#include "vitalcast/rng.hpp"
#include "vitalcast/scaler.hpp"

namespace vitalcast {

/// Scaled, imputed cohorts feeding one pipeline run. `generator_pool` may be
/// null for depth 0 (plain direct LSTM forecasting).
struct PipelinePools {
    const Cohort* generator_pool = nullptr;  // G
    const Cohort* predictor_pool = nullptr;  // P
    const Cohort* validation = nullptr;
    const Cohort* test = nullptr;
};

struct PipelineSettings {
    std::size_t target_vital = 0;
    std::size_t window_m = 20;
    std::vector<int> horizons;  // reported horizons
    int depth = 0;              // generation depth g; 0 disables boosting
    LstmConfig lstm;
    /// Train boosted predictors on clean windows at offset h−g instead of
    /// on generatively extended windows (inference is identical).
    bool predictors_on_clean_windows = false;
};

struct HorizonScore {
    int horizon = 0;
    bool masked = false;  // horizon lies inside the generated segment (h ≤ g)
    double mse = 0.0;     // original units
    double mape = 0.0;    // original units
};

struct PipelineResult {
    std::vector<HorizonScore> scores;  // ascending horizons
    LstmModel generator;               // depth ≥ 1 only
    std::size_t generator_hidden = 0;
    std::map<int, LstmModel> predictors;  // per horizon h > depth
};

/// Full generative-boosting run over pre-split pools:
///   1. train the 5-output generator on G windows (one-step targets), picking
///      the hidden size with the lowest validation MSE when a grid is given;
///   2. extend every P/validation/test window by `depth` generated rows via
///      window surgery (oldest row out, synthetic row in, statics carried);
///   3. train one scalar predictor per horizon h > depth on the extended P
///      windows against the *original* t+h targets (equivalently offset
///      h−depth from the extended window's end), tuned like the generator;
///   4. score horizons h > depth on the extended test windows in original
///      units; horizons h ≤ depth come back masked.
/// depth 0 skips 1–2 and trains/evaluates plain direct predictors.
/// Errors gain a stage label ("generator-training", "window-extension", …).
/// Deterministic per (pools, settings, rng seed).
PipelineResult run_glstm_pipeline(const PipelinePools& pools, const PipelineSettings& settings,
                                  const MinMaxScaler& scaler, const Rng& rng);

}  // namespace vitalcast

#endif
