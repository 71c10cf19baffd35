#include "vitalcast/metrics.hpp"

#include <cmath>

#include "vitalcast/errors.hpp"

namespace vitalcast {

double mse(const std::vector<double>& predictions, const std::vector<double>& actuals) {
    require(predictions.size() == actuals.size() && !predictions.empty(),
            "mse: need equal nonempty prediction/actual lengths");
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double err = predictions[i] - actuals[i];
        acc += err * err;
    }
    return acc / static_cast<double>(predictions.size());
}

MapeResult mape(const std::vector<double>& predictions, const std::vector<double>& actuals) {
    require(predictions.size() == actuals.size() && !predictions.empty(),
            "mape: need equal nonempty prediction/actual lengths");
    constexpr double kEps = 1e-6;
    MapeResult result;
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (std::abs(actuals[i]) < kEps) {
            result.excluded += 1;
            continue;
        }
        acc += std::abs(predictions[i] - actuals[i]) / std::abs(actuals[i]);
        used += 1;
    }
    if (used == 0) throw Error("mape: every actual value fell below the 1e-6 threshold");
    result.value = 100.0 * acc / static_cast<double>(used);
    return result;
}

}  // namespace vitalcast
