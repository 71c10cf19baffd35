#ifndef VITALCAST_SPLIT_HPP
#define VITALCAST_SPLIT_HPP

#include <cstdint>
#include <vector>

#include "vitalcast/patient.hpp"

namespace vitalcast {

/// Patient-level split fractions. Outer fractions partition the cohort into
/// train/validation/test; the inner fractions (expressed against the whole
/// cohort) partition the training set into the predictor pool P and the
/// generator pool G.
struct SplitPlan {
    double train = 0.6;
    double validation = 0.2;
    double test = 0.2;
    double inner_p = 0.4;
    double inner_g = 0.2;
    std::uint64_t seed = 0;

    /// Throws ConfigError unless outer fractions sum to 1, inner fractions
    /// sum to the train fraction, and all fractions are positive.
    void validate() const;
};

/// Patient ids per subset. Every patient lands in exactly one of
/// {train, validation, test}; every train patient in exactly one of {p, g}.
struct SplitResult {
    std::vector<std::string> train;
    std::vector<std::string> validation;
    std::vector<std::string> test;
    std::vector<std::string> p_pool;  // predictor-training patients (P)
    std::vector<std::string> g_pool;  // generator-training patients (G)
};

/// Apportions `total` seats to fractional quotas by largest remainder.
/// Ties on the remainder go to the later index.
std::vector<std::size_t> largest_remainder(const std::vector<double>& fractions,
                                           std::size_t total);

/// Shuffles patient ids with the plan seed and cuts contiguous blocks sized
/// by largest-remainder apportionment; P/G are carved from the train block
/// the same way. Requires ≥5 patients; throws Error if any subset rounds to
/// empty. Deterministic per (cohort order, seed).
SplitResult split_patients(const Cohort& cohort, const SplitPlan& plan);

/// The records whose ids appear in `ids`, in the cohort's order.
Cohort subset(const Cohort& cohort, const std::vector<std::string>& ids);

}  // namespace vitalcast

#endif
