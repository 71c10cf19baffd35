#include "vitalcast/micluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "vitalcast/errors.hpp"
#include "vitalcast/split.hpp"  // largest_remainder

namespace vitalcast {

namespace {

/// Max-norm distance between rows a and b over the given column count.
double maxnorm(const double* a, const double* b, std::size_t cols) {
    double best = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
        best = std::max(best, std::abs(a[c] - b[c]));
    }
    return best;
}

struct KsgCore {
    double mi = 0.0;
    bool zero_eps = false;
};

KsgCore ksg_core(const Matrix& x, const Matrix& y, std::size_t k) {
    const std::size_t n = x.rows();
    require(n == y.rows(), "ksg_mi: x and y must have the same sample count");
    require(k >= 1 && n > k, "ksg_mi: need n > k >= 1");
    require(x.all_finite() && y.all_finite(), "ksg_mi: samples must be finite");

    const std::size_t dx = x.cols();
    const std::size_t dy = y.cols();

    KsgCore result;
    double count_term = 0.0;
    std::vector<double> dxs(n), dys(n), joint(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.data() + i * dx;
        const double* yi = y.data() + i * dy;
        for (std::size_t j = 0; j < n; ++j) {
            dxs[j] = maxnorm(xi, x.data() + j * dx, dx);
            dys[j] = maxnorm(yi, y.data() + j * dy, dy);
            joint[j] = std::max(dxs[j], dys[j]);
        }
        joint[i] = std::numeric_limits<double>::infinity();  // exclude self
        std::vector<double> order = joint;
        std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         order.end());
        const double eps = order[k - 1];
        if (eps == 0.0) result.zero_eps = true;

        std::size_t nx = 0, ny = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            nx += dxs[j] < eps ? 1 : 0;
            ny += dys[j] < eps ? 1 : 0;
        }
        count_term += digamma(static_cast<double>(nx + 1)) +
                      digamma(static_cast<double>(ny + 1));
    }
    result.mi = digamma(static_cast<double>(k)) + digamma(static_cast<double>(n)) -
                count_term / static_cast<double>(n);
    return result;
}

Matrix jittered(const Matrix& m, Rng& rng) {
    Matrix out = m;
    for (double& v : out.storage()) v += rng.uniform() * 1e-10;
    return out;
}

}  // namespace

double digamma(double x) {
    require(x > 0.0, "digamma: x must be positive");
    // Recurrence up to x >= 10, then the asymptotic expansion with Bernoulli
    // terms through x^-12; the first omitted term is below 1e-15 there.
    double value = 0.0;
    while (x < 10.0) {
        value -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    value += std::log(x) - 0.5 * inv -
             inv2 * (1.0 / 12.0 -
                     inv2 * (1.0 / 120.0 -
                             inv2 * (1.0 / 252.0 -
                                     inv2 * (1.0 / 240.0 -
                                             inv2 * (1.0 / 132.0 -
                                                     inv2 * (691.0 / 32760.0))))));
    return value;
}

double ksg_mi(const Matrix& x, const Matrix& y, std::size_t k, const Rng& rng) {
    Rng jitter_rng = rng.derive("ksg-jitter");
    const Matrix xj = jittered(x, jitter_rng);
    const Matrix yj = jittered(y, jitter_rng);
    return ksg_core(xj, yj, k).mi;
}

KsgResult ksg_mi_nojitter(const Matrix& x, const Matrix& y, std::size_t k) {
    bool constant_column = false;
    auto scan = [&](const Matrix& m) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            bool all_equal = true;
            for (std::size_t r = 1; r < m.rows() && all_equal; ++r) {
                all_equal = m(r, c) == m(0, c);
            }
            constant_column = constant_column || all_equal;
        }
    };
    scan(x);
    scan(y);
    const KsgCore core = ksg_core(x, y, k);
    return {core.mi, constant_column || core.zero_eps};
}

double patient_mi(const PatientRecord& a, const PatientRecord& b, std::size_t k, const Rng& rng) {
    // Canonical orientation (and jitter stream) by patient id: exact symmetry.
    const PatientRecord& first = a.patient_id <= b.patient_id ? a : b;
    const PatientRecord& second = a.patient_id <= b.patient_id ? b : a;
    const std::size_t n = std::min(first.steps(), second.steps());
    if (n <= k) {
        throw Error("patient_mi: overlap of patients '" + a.patient_id + "' and '" +
                    b.patient_id + "' is " + std::to_string(n) +
                    " steps, need more than k=" + std::to_string(k));
    }
    require(first.vitals.all_finite() && second.vitals.all_finite(),
            "patient_mi: records must be imputed before MI estimation");

    Matrix x(n, kNumVitals), y(n, kNumVitals);
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t v = 0; v < kNumVitals; ++v) {
            x(t, v) = first.vitals(t, v);
            y(t, v) = second.vitals(t, v);
        }
    }
    const Rng pair_rng =
        rng.derive("patient-mi:" + first.patient_id + "|" + second.patient_id);
    return ksg_mi(x, y, k, pair_rng);
}

MiScoreTable score_cohort(const Cohort& cohort, std::size_t k, const Rng& rng) {
    const std::size_t n = cohort.size();
    require(n >= 2, "score_cohort: need at least 2 patients");

    MiScoreTable table;
    table.patient_ids.reserve(n);
    for (const auto& rec : cohort.records) table.patient_ids.push_back(rec.patient_id);
    table.pairwise = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double mi = patient_mi(cohort.records[i], cohort.records[j], k, rng);
            table.pairwise(i, j) = mi;
            table.pairwise(j, i) = mi;
        }
    }
    table.j_scores.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += table.pairwise(i, j);
        table.j_scores[i] = sum;
    }
    return table;
}

GroupAssignment group_and_sample(const MiScoreTable& table, std::size_t l, double g_fraction,
                                 Rng& rng) {
    const std::size_t n = table.patient_ids.size();
    if (!(g_fraction > 0.0 && g_fraction < 1.0)) {
        throw Error("group_and_sample: g_fraction must lie strictly between 0 and 1");
    }
    if (l < 1 || n < l) {
        throw Error("group_and_sample: need at least L=" + std::to_string(l) + " patients, got " +
                    std::to_string(n));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (table.j_scores[i] != table.j_scores[j]) return table.j_scores[i] > table.j_scores[j];
        return table.patient_ids[i] < table.patient_ids[j];
    });

    GroupAssignment assignment;
    assignment.groups.resize(l);
    const std::size_t base = n / l;
    const std::size_t extra = n % l;  // earlier groups take the +1 remainder
    std::size_t cursor = 0;
    for (std::size_t g = 0; g < l; ++g) {
        const std::size_t size = base + (g < extra ? 1 : 0);
        for (std::size_t s = 0; s < size; ++s, ++cursor) {
            assignment.groups[g].push_back(table.patient_ids[order[cursor]]);
        }
    }

    // Seats per group: largest remainder against the global target count.
    const std::size_t target_total =
        static_cast<std::size_t>(std::lround(g_fraction * static_cast<double>(n)));
    std::vector<double> fractions(l);
    for (std::size_t g = 0; g < l; ++g) {
        fractions[g] = static_cast<double>(assignment.groups[g].size()) / static_cast<double>(n);
    }
    const auto seats = largest_remainder(fractions, target_total);

    for (std::size_t g = 0; g < l; ++g) {
        require(seats[g] <= assignment.groups[g].size(),
                "group_and_sample: sampling quota exceeds group size");
        std::vector<std::string> members = assignment.groups[g];
        rng.shuffle(members);
        for (std::size_t s = 0; s < members.size(); ++s) {
            (s < seats[g] ? assignment.g_ids : assignment.p_ids).push_back(members[s]);
        }
    }
    return assignment;
}

}  // namespace vitalcast
