#ifndef VITALCAST_SYNTHGEN_HPP
#define VITALCAST_SYNTHGEN_HPP

#include <cstdint>

#include "vitalcast/patient.hpp"

namespace vitalcast {

/// Recipe for a reproducible synthetic vital-sign cohort.
struct CohortSpec {
    std::size_t n_patients = 40;
    std::size_t steps_per_patient = 288;  // 24h at 5-minute cadence
    std::size_t n_archetypes = 3;
    double missing_rate = 0.0;
    std::uint64_t seed = 0;

    /// Throws ConfigError unless n_patients ≥ n_archetypes ≥ 1,
    /// 0 ≤ missing_rate < 0.1, and steps_per_patient leaves room for the
    /// default window (20) plus the longest default horizon (12).
    void validate() const;
};

/// Deterministically generates a cohort. Each patient belongs to one of
/// n_archetypes archetypes (round-robin by index; recorded in
/// PatientRecord::archetype). Every vital is
///   archetype baseline + circadian sinusoid + archetype-shared AR(2) latent
///   + patient-specific AR(2) component + white observation noise,
/// clipped to the physiological ranges in patient.hpp. The shared latent
/// makes same-archetype patients mutually informative, giving mutual-
/// information clustering a recoverable structure; archetypes differ in
/// baseline, sinusoid phase, and latent coupling strength. Missing cells are
/// injected at missing_rate for steps t ≥ 1 (the first row stays complete).
Cohort generate_cohort(const CohortSpec& spec);

}  // namespace vitalcast

#endif
