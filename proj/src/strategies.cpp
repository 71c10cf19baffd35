#include "vitalcast/strategies.hpp"

#include <algorithm>
#include <string>

#include "vitalcast/errors.hpp"

namespace vitalcast {

double Forecast::value_at(int h) const {
    for (std::size_t i = 0; i < horizons.size(); ++i)
        if (horizons[i] == h) return values[i];
    throw ContractViolation("Forecast: no value for horizon " + std::to_string(h));
}

bool Forecast::generated_at(int h) const {
    for (std::size_t i = 0; i < horizons.size(); ++i)
        if (horizons[i] == h) return generated[i];
    throw ContractViolation("Forecast: no value for horizon " + std::to_string(h));
}

Matrix shift_append(const Matrix& window, const std::vector<double>& next_vitals) {
    require(window.rows() >= 1 && window.cols() == kNumFeatures,
            "shift_append: window must be M x 7");
    require(next_vitals.size() == kNumVitals, "shift_append: need one value per vital");
    const std::size_t m = window.rows();
    Matrix out(m, kNumFeatures);
    for (std::size_t r = 0; r + 1 < m; ++r)
        for (std::size_t c = 0; c < kNumFeatures; ++c) out(r, c) = window(r + 1, c);
    for (std::size_t v = 0; v < kNumVitals; ++v) out(m - 1, v) = next_vitals[v];
    out(m - 1, kNumVitals) = window(m - 1, kNumVitals);          // age carried forward
    out(m - 1, kNumVitals + 1) = window(m - 1, kNumVitals + 1);  // gender carried forward
    return out;
}

Forecast direct_forecast(const std::map<int, const Predictor*>& models_by_horizon,
                         const std::vector<int>& horizons, const Matrix& window) {
    Forecast forecast;
    for (int h : horizons) {
        auto it = models_by_horizon.find(h);
        if (it == models_by_horizon.end() || it->second == nullptr) {
            throw Error("direct_forecast: no model for horizon " + std::to_string(h));
        }
        forecast.horizons.push_back(h);
        forecast.values.push_back(it->second->predict(window)[0]);
        forecast.generated.push_back(false);
    }
    return forecast;
}

Forecast iterative_forecast(const Predictor& model, const Matrix& window, int n,
                            std::size_t target_vital) {
    if (n < 1) throw Error("iterative_forecast: need at least one iteration");
    require(model.output_dim() == kNumVitals,
            "iterative_forecast: model must predict the full vital vector");
    require(target_vital < kNumVitals, "iterative_forecast: bad target vital");

    Forecast forecast;
    Matrix current = window;
    for (int j = 1; j <= n; ++j) {
        const auto next = model.predict(current);
        forecast.horizons.push_back(j);
        forecast.values.push_back(next[target_vital]);
        forecast.generated.push_back(false);
        current = shift_append(current, next);
    }
    return forecast;
}

Forecast generative_boost(const Predictor& generator,
                          const std::map<int, const Predictor*>& pred_models,
                          const Matrix& window, int g, const std::vector<int>& horizons,
                          std::size_t target_vital) {
    if (g < 1) {
        throw Error("generative_boost: depth 0 means no generation; call direct_forecast");
    }
    require(generator.output_dim() == kNumVitals,
            "generative_boost: generator must predict the full vital vector");
    require(target_vital < kNumVitals, "generative_boost: bad target vital");

    // g generation steps with window surgery after each.
    std::vector<std::vector<double>> generated_rows;
    generated_rows.reserve(static_cast<std::size_t>(g));
    Matrix augmented = window;
    for (int j = 0; j < g; ++j) {
        auto next = generator.predict(augmented);
        augmented = shift_append(augmented, next);
        generated_rows.push_back(std::move(next));
    }

    Forecast forecast;
    for (int h : horizons) {
        forecast.horizons.push_back(h);
        if (h <= g) {
            forecast.values.push_back(generated_rows[static_cast<std::size_t>(h - 1)][target_vital]);
            forecast.generated.push_back(true);
            continue;
        }
        auto it = pred_models.find(h);
        if (it == pred_models.end() || it->second == nullptr) {
            throw Error("generative_boost: no predictive model for horizon " + std::to_string(h));
        }
        forecast.values.push_back(it->second->predict(augmented)[0]);
        forecast.generated.push_back(false);
    }
    return forecast;
}

}  // namespace vitalcast
