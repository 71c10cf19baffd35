#ifndef VITALCAST_IMPUTE_HPP
#define VITALCAST_IMPUTE_HPP

#include "vitalcast/patient.hpp"

namespace vitalcast {

/// Last-observation-carried-forward per vital column; leading missing cells
/// take the first observed value (backfill). Throws Error naming the patient
/// and vital if a column has zero observations.
PatientRecord impute_locf(PatientRecord record);

/// impute_locf applied to every record.
Cohort impute_locf(Cohort cohort);

}  // namespace vitalcast

#endif
