#include "vitalcast/scaler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vitalcast/errors.hpp"

namespace vitalcast {

MinMaxScaler MinMaxScaler::fit(const Cohort& subset, std::string fitted_on) {
    if (subset.records.empty()) throw Error("MinMaxScaler::fit: empty cohort subset");
    MinMaxScaler s;
    s.fitted_on_ = std::move(fitted_on);
    s.min_.fill(std::numeric_limits<double>::infinity());
    s.max_.fill(-std::numeric_limits<double>::infinity());

    auto take = [&s](std::size_t f, double x) {
        if (std::isnan(x)) return;
        s.min_[f] = std::min(s.min_[f], x);
        s.max_[f] = std::max(s.max_[f], x);
    };
    for (const auto& rec : subset.records) {
        for (std::size_t t = 0; t < rec.steps(); ++t)
            for (std::size_t v = 0; v < kNumVitals; ++v) take(v, rec.vitals(t, v));
        take(kNumVitals, rec.age);
        take(kNumVitals + 1, rec.gender);
    }
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        if (!std::isfinite(s.min_[f]) || !std::isfinite(s.max_[f])) {
            throw Error(std::string("MinMaxScaler::fit: no observed values for feature ") +
                        kFeatureNames[f]);
        }
        s.constant_[f] = s.min_[f] == s.max_[f];
    }
    return s;
}

double MinMaxScaler::apply_feature(std::size_t feature, double x) const {
    require(feature < kNumFeatures, "apply_feature: feature index out of range");
    if (std::isnan(x)) return x;
    if (constant_[feature]) return 0.5;
    const double y = (x - min_[feature]) / (max_[feature] - min_[feature]);
    return std::clamp(y, 0.0, 1.0);
}

double MinMaxScaler::invert_feature(std::size_t feature, double y) const {
    require(feature < kNumFeatures, "invert_feature: feature index out of range");
    if (std::isnan(y)) return y;
    if (constant_[feature]) return min_[feature];
    const double clamped = std::clamp(y, 0.0, 1.0);
    return min_[feature] + clamped * (max_[feature] - min_[feature]);
}

Cohort MinMaxScaler::apply(const Cohort& cohort) const {
    Cohort out = cohort;
    for (auto& rec : out.records) {
        for (std::size_t t = 0; t < rec.steps(); ++t)
            for (std::size_t v = 0; v < kNumVitals; ++v)
                rec.vitals(t, v) = apply_feature(v, rec.vitals(t, v));
        rec.age = apply_feature(kNumVitals, rec.age);
        rec.gender = apply_feature(kNumVitals + 1, rec.gender);
    }
    return out;
}

std::array<double, 2 * kNumFeatures> MinMaxScaler::to_flat() const {
    std::array<double, 2 * kNumFeatures> flat{};
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        flat[f] = min_[f];
        flat[kNumFeatures + f] = max_[f];
    }
    return flat;
}

MinMaxScaler MinMaxScaler::from_flat(const std::array<double, 2 * kNumFeatures>& flat,
                                     std::string fitted_on) {
    MinMaxScaler s;
    s.fitted_on_ = std::move(fitted_on);
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
        s.min_[f] = flat[f];
        s.max_[f] = flat[kNumFeatures + f];
        if (!(s.max_[f] >= s.min_[f])) {
            throw Error("MinMaxScaler::from_flat: max < min for feature " +
                        std::string(kFeatureNames[f]));
        }
        s.constant_[f] = s.min_[f] == s.max_[f];
    }
    return s;
}

}  // namespace vitalcast
