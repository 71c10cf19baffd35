#ifndef VITALCAST_METRICS_HPP
#define VITALCAST_METRICS_HPP

#include <cstddef>
#include <vector>

namespace vitalcast {

/// Mean squared error. Requires equal nonempty lengths.
double mse(const std::vector<double>& predictions, const std::vector<double>& actuals);

/// 100 × mean of |error| / |actual|. Pairs with |actual| < 1e-6 are excluded
/// from the mean and counted in `excluded` (exclusion keeps the reported
/// value unbiased instead of inflating denominators). Throws Error when
/// every pair is excluded.
struct MapeResult {
    double value = 0.0;
    std::size_t excluded = 0;
};
MapeResult mape(const std::vector<double>& predictions, const std::vector<double>& actuals);

}  // namespace vitalcast

#endif
