#include "vitalcast/impute.hpp"

#include <cmath>
#include <string>

#include "vitalcast/errors.hpp"

namespace vitalcast {

PatientRecord impute_locf(PatientRecord record) {
    const std::size_t steps = record.steps();
    for (std::size_t v = 0; v < kNumVitals; ++v) {
        std::size_t first_observed = steps;
        for (std::size_t t = 0; t < steps; ++t) {
            if (!std::isnan(record.vitals(t, v))) {
                first_observed = t;
                break;
            }
        }
        if (first_observed == steps) {
            throw Error("impute_locf: patient '" + record.patient_id + "' has no observations of " +
                        kVitalNames[v]);
        }
        double last = record.vitals(first_observed, v);
        for (std::size_t t = 0; t < steps; ++t) {
            if (std::isnan(record.vitals(t, v))) {
                record.vitals(t, v) = last;  // backfill before first_observed, LOCF after
            } else {
                last = record.vitals(t, v);
            }
        }
    }
    return record;
}

Cohort impute_locf(Cohort cohort) {
    for (auto& rec : cohort.records) rec = impute_locf(std::move(rec));
    return cohort;
}

}  // namespace vitalcast
