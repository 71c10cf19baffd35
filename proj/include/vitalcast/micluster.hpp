#ifndef VITALCAST_MICLUSTER_HPP
#define VITALCAST_MICLUSTER_HPP

#include <string>
#include <vector>

#include "vitalcast/patient.hpp"
#include "vitalcast/rng.hpp"

namespace vitalcast {

/// Digamma ψ(x) for x > 0 (recurrence + asymptotic series).
double digamma(double x);

/// Kraskov k-nearest-neighbor mutual information, estimator 1:
///   I = ψ(k) + ψ(n) − ⟨ψ(n_x+1) + ψ(n_y+1)⟩
/// with max-norm neighborhoods in the joint space, strict-inequality
/// marginal counts, and brute-force O(n²) neighbor search. x and y hold one
/// sample per row. Before the search every coordinate receives a
/// deterministic tie-breaking jitter u·1e-10 with u drawn from
/// rng.derive("ksg-jitter"), so quantized inputs cannot produce zero
/// distances. Result in nats. Requires n > k ≥ 1 and finite samples.
double ksg_mi(const Matrix& x, const Matrix& y, std::size_t k, const Rng& rng);

/// Jitter-free variant; `degenerate` flags zero-variance columns or
/// zero-distance neighborhoods (estimates are then unreliable).
struct KsgResult {
    double mi = 0.0;
    bool degenerate = false;
};
KsgResult ksg_mi_nojitter(const Matrix& x, const Matrix& y, std::size_t k);

/// MI between two patients: both truncated to n = min(p_i, p_j) steps,
/// samples are the 5 time-varying vitals per step (statics excluded — they
/// are constant within a patient and would degenerate the estimator).
/// Exactly symmetric: the pair is canonicalized by patient id before
/// estimation, including the jitter stream. Throws Error naming both
/// patients if n ≤ k. Records must be imputed (finite) and scaled.
double patient_mi(const PatientRecord& a, const PatientRecord& b, std::size_t k, const Rng& rng);

struct MiScoreTable {
    std::vector<std::string> patient_ids;
    Matrix pairwise;               // symmetric, zero diagonal by convention
    std::vector<double> j_scores;  // row sums excluding the diagonal
};

/// All pairwise MIs (each pair computed once) and J(P_i) = Σ_{j≠i} I(P_i,P_j).
MiScoreTable score_cohort(const Cohort& cohort, std::size_t k, const Rng& rng);

struct GroupAssignment {
    /// Contiguous groups in descending-J order; earlier groups take the +1
    /// remainder so sizes differ by at most one.
    std::vector<std::vector<std::string>> groups;
    std::vector<std::string> g_ids;  // sampled G′
    std::vector<std::string> p_ids;  // remainder P′
};

/// Sorts patients by descending J (ties by patient id), cuts L near-equal
/// groups, and samples ≈ g_fraction of each group uniformly without
/// replacement into G′ (largest-remainder correction keeps |G′| equal to
/// round(g_fraction · n)). Throws Error if the cohort is smaller than L or
/// g_fraction is outside (0,1).
GroupAssignment group_and_sample(const MiScoreTable& table, std::size_t l, double g_fraction,
                                 Rng& rng);

}  // namespace vitalcast

#endif
