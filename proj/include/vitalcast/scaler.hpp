#ifndef VITALCAST_SCALER_HPP
#define VITALCAST_SCALER_HPP

#include <array>
#include <string>

#include "vitalcast/patient.hpp"

namespace vitalcast {

/// Per-feature min-max scaler over the 7 window features
/// (heart_rate, resp_rate, spo2, temp, sbp, age, gender).
///
/// apply maps each feature affinely onto [0,1] over the fitted range and
/// clamps out-of-range values to the edges, keeping downstream
/// sigmoid-activated models inside their trained input domain. invert undoes
/// the affine map (clamped values invert to the range edge). A constant
/// feature (max == min) maps to 0.5 and is flagged.
class MinMaxScaler {
public:
    MinMaxScaler() = default;

    /// Fits feature ranges over every observed (non-missing) cell of the
    /// subset. `fitted_on` records which split the ranges came from, so
    /// leakage is auditable. Throws Error on an empty subset.
    static MinMaxScaler fit(const Cohort& subset, std::string fitted_on);

    double apply_feature(std::size_t feature, double x) const;
    double invert_feature(std::size_t feature, double y) const;

    /// Scales vitals, age, and gender of every record (missing cells stay
    /// missing).
    Cohort apply(const Cohort& cohort) const;

    const std::string& fitted_on() const { return fitted_on_; }
    bool constant_feature(std::size_t feature) const { return constant_[feature]; }
    double feature_min(std::size_t feature) const { return min_[feature]; }
    double feature_max(std::size_t feature) const { return max_[feature]; }

    /// Flat serialization (min then max, 14 doubles) for checkpoints.
    std::array<double, 2 * kNumFeatures> to_flat() const;
    static MinMaxScaler from_flat(const std::array<double, 2 * kNumFeatures>& flat,
                                  std::string fitted_on);

private:
    std::array<double, kNumFeatures> min_{};
    std::array<double, kNumFeatures> max_{};
    std::array<bool, kNumFeatures> constant_{};
    std::string fitted_on_;
};

}  // namespace vitalcast

#endif
