#ifndef VITALCAST_STRATEGIES_HPP
#define VITALCAST_STRATEGIES_HPP

#include <map>
#include <vector>

#include "vitalcast/patient.hpp"
#include "vitalcast/predictor.hpp"

namespace vitalcast {

enum class StrategyKind { direct, iterative, generative_boosting };

struct StrategyPlan {
    StrategyKind kind = StrategyKind::direct;
    int depth = 0;  // generation depth g (generative boosting only)
    std::vector<int> horizons;
    std::size_t target_vital = 0;
};

/// One value per reported horizon. Values are in the same units as the input
/// window (the experiment pipeline inverts scaling before reporting). The
/// generated flag marks horizons whose value came from the generative model
/// itself rather than a predictive model.
struct Forecast {
    std::vector<int> horizons;
    std::vector<double> values;
    std::vector<bool> generated;

    double value_at(int h) const;
    bool generated_at(int h) const;
};

/// Drops the oldest row and appends one synthetic step: the new last row
/// takes `next_vitals` for the 5 vital columns and carries the static
/// columns (age, gender) forward unchanged. Output shape equals input shape.
Matrix shift_append(const Matrix& window, const std::vector<double>& next_vitals);

/// X̂_{t+h} = model_h(window), independently per horizon. Throws Error when
/// a requested horizon has no model.
Forecast direct_forecast(const std::map<int, const Predictor*>& models_by_horizon,
                         const std::vector<int>& horizons, const Matrix& window);

/// One-step model applied n times, feeding each predicted 5-vital row back
/// via shift_append; horizon j's value is the appended row's target vital.
/// The model must emit the full vital vector (output_dim == 5).
Forecast iterative_forecast(const Predictor& model, const Matrix& window, int n,
                            std::size_t target_vital);

/// Generative boosting: g generation steps by `generator` (window surgery
/// after each), then direct forecasting from the augmented window. Horizons
/// 1..g take the generator's own values for the target vital and are flagged
/// generated; horizons h > g require pred_models[h] trained on g-augmented
/// windows at offset h−g. g must be ≥ 1 (use direct_forecast for g = 0).
Forecast generative_boost(const Predictor& generator,
                          const std::map<int, const Predictor*>& pred_models,
                          const Matrix& window, int g, const std::vector<int>& horizons,
                          std::size_t target_vital);

}  // namespace vitalcast

#endif
