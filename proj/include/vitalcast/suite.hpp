#ifndef VITALCAST_SUITE_HPP
#define VITALCAST_SUITE_HPP

#include <functional>
#include <string>

#include "vitalcast/config.hpp"
#include "vitalcast/patient.hpp"
#include "vitalcast/report.hpp"

namespace vitalcast {

/// Worker threads for the seed loop: VITALCAST_THREADS when set (must parse
/// as a positive integer), otherwise the hardware concurrency (min 1).
std::size_t suite_thread_count();

/// Runs every configured method over every configured seed and aggregates
/// the per-horizon metrics table (original units).
///
/// Per seed: LOCF-imputed cohort → patient split (the split reshuffles with
/// the seed unless resplit_per_seed is false) → min-max scaler fitted on that
/// seed's training patients → per-method evaluation. Methods draw from
/// Rng(seed).derive(method_name), so a method's numbers do not depend on
/// which other methods run. Mutual-information selection (the *-mi methods)
/// is computed once per seed and shared across depths.
///
/// Seeds run on suite_thread_count() workers and merge in seed order, so the
/// report is byte-identical regardless of thread count. Any method failure
/// aborts the suite with the method and seed named in the error.
MetricsReport run_suite(const ExperimentConfig& config, const Cohort& cohort,
                        const std::function<void(const std::string&)>& log = {});

}  // namespace vitalcast

#endif
