#ifndef VITALCAST_PATIENT_HPP
#define VITALCAST_PATIENT_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vitalcast/matrix.hpp"

namespace vitalcast {

/// Dynamic vital signs, in column order of PatientRecord::vitals and of the
/// first five window features.
inline constexpr std::size_t kNumVitals = 5;
/// Static features (age, gender), broadcast per time step as features 5 and 6.
inline constexpr std::size_t kNumStatics = 2;
/// Features per window column: 5 vitals + age + gender.
inline constexpr std::size_t kNumFeatures = kNumVitals + kNumStatics;

inline constexpr std::array<const char*, kNumVitals> kVitalNames = {
    "heart_rate", "resp_rate", "spo2", "temp", "sbp"};
inline constexpr std::array<const char*, kNumFeatures> kFeatureNames = {
    "heart_rate", "resp_rate", "spo2", "temp", "sbp", "age", "gender"};

struct VitalRange {
    double lo;
    double hi;
};

/// Physiological clip ranges: HR bpm, RR breaths/min, SpO2 %, temp °C, SBP mmHg.
inline constexpr std::array<VitalRange, kNumVitals> kVitalRanges = {
    {{30.0, 200.0}, {5.0, 50.0}, {70.0, 100.0}, {34.0, 42.0}, {60.0, 250.0}}};

/// Grid cadence: one row every 5 minutes.
inline constexpr std::int64_t kGridSeconds = 300;

/// One patient's time series. `vitals` is a p × 5 matrix on the 5-minute
/// grid; missing cells are NaN until imputation. Static features are stored
/// once and broadcast at windowing time.
struct PatientRecord {
    std::string patient_id;
    double age = 0.0;
    double gender = 0.0;  // encoded 0/1
    std::int64_t start_epoch = 0;
    Matrix vitals;  // steps × kNumVitals
    /// Generator ground truth for clustering sanity checks; never serialized.
    std::optional<int> archetype;

    std::size_t steps() const { return vitals.rows(); }
    bool is_missing(std::size_t step, std::size_t vital) const {
        return std::isnan(vitals(step, vital));
    }
    std::size_t missing_count() const {
        std::size_t n = 0;
        for (double v : vitals.storage()) n += std::isnan(v) ? 1 : 0;
        return n;
    }
};

struct Cohort {
    std::vector<PatientRecord> records;

    std::size_t size() const { return records.size(); }
    const PatientRecord* find(const std::string& patient_id) const {
        for (const auto& r : records)
            if (r.patient_id == patient_id) return &r;
        return nullptr;
    }
};

}  // namespace vitalcast

#endif
