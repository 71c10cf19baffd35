#include "vitalcast/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vitalcast/errors.hpp"

namespace vitalcast {

namespace {

double checked_eval(const std::function<double(const std::vector<double>&)>& loss_fn,
                    const std::vector<double>& x, std::size_t index, double shift) {
    const double value = loss_fn(x);
    if (!std::isfinite(value)) {
        throw Error("grad_check: loss is non-finite at coordinate " + std::to_string(index) +
                    " shifted by " + std::to_string(shift));
    }
    return value;
}

}  // namespace

GradCheckReport grad_check(const std::function<double(const std::vector<double>&)>& loss_fn,
                           const std::vector<double>& analytic_grad, std::vector<double> params,
                           double h, double tol) {
    require(analytic_grad.size() == params.size(),
            "grad_check: analytic gradient and params dimensions differ");
    require(h > 0.0, "grad_check: h must be positive");

    constexpr double kDenomFloor = 1e-4;
    GradCheckReport report;
    report.entries.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double plus = checked_eval(loss_fn, params, i, +h);
        params[i] = saved - h;
        const double minus = checked_eval(loss_fn, params, i, -h);
        params[i] = saved;

        GradCheckEntry entry;
        entry.index = i;
        entry.analytic = analytic_grad[i];
        entry.numeric = (plus - minus) / (2.0 * h);
        const double denom =
            std::max({std::abs(entry.analytic), std::abs(entry.numeric), kDenomFloor});
        entry.rel_error = std::abs(entry.analytic - entry.numeric) / denom;
        entry.ok = entry.rel_error <= tol;
        if (entry.rel_error > report.max_rel_error) {
            report.max_rel_error = entry.rel_error;
            report.worst_index = i;
        }
        report.all_ok = report.all_ok && entry.ok;
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace vitalcast
