#ifndef VITALCAST_GRADCHECK_HPP
#define VITALCAST_GRADCHECK_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace vitalcast {

struct GradCheckEntry {
    std::size_t index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
    bool ok = true;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double max_rel_error = 0.0;
    std::size_t worst_index = 0;
    bool all_ok = true;
};

/// Central-difference check of an analytic gradient.
///
/// For each coordinate i the numeric estimate is
/// (f(x + h·eᵢ) − f(x − h·eᵢ)) / (2h), and the relative error is
/// |analytic − numeric| / max(|analytic|, |numeric|, 1e-4). The 1e-4 floor
/// keeps near-zero coordinates from amplifying truncation noise into
/// spurious failures. Entries with rel_error > tol are flagged.
///
/// loss_fn must be deterministic and pure; h > 0. Throws Error naming the
/// evaluation point if loss_fn returns a non-finite value.
GradCheckReport grad_check(const std::function<double(const std::vector<double>&)>& loss_fn,
                           const std::vector<double>& analytic_grad, std::vector<double> params,
                           double h, double tol);

}  // namespace vitalcast

#endif
