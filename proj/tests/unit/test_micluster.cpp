#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "vitalcast/errors.hpp"
#include "vitalcast/micluster.hpp"
#include "vitalcast/patient.hpp"
#include "vitalcast/rng.hpp"

using vitalcast::Cohort;
using vitalcast::Matrix;
using vitalcast::MiScoreTable;
using vitalcast::PatientRecord;
using vitalcast::Rng;

namespace {

// Correlated standard-normal pairs: y = rho*x + sqrt(1-rho^2)*z. The true
// mutual information is -0.5*ln(1 - rho^2) nats.
void gaussian_pair(double rho, std::size_t n, Rng& rng, Matrix& x, Matrix& y) {
    x = Matrix(n, 1);
    y = Matrix(n, 1);
    const double noise = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 0; i < n; ++i) {
        double a = rng.normal();
        double b = rng.normal();
        x(i, 0) = a;
        y(i, 0) = rho * a + noise * b;
    }
}

PatientRecord scaled_patient(std::string id, std::size_t steps, std::uint64_t seed) {
    PatientRecord r;
    r.patient_id = std::move(id);
    r.age = 0.5;
    r.gender = 1.0;
    r.vitals = Matrix(steps, vitalcast::kNumVitals);
    Rng rng(seed);
    for (std::size_t t = 0; t < steps; ++t)
        for (std::size_t v = 0; v < vitalcast::kNumVitals; ++v)
            r.vitals(t, v) = rng.uniform();
    return r;
}

}  // namespace

TEST_CASE("digamma matches reference values") {
    CHECK(vitalcast::digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
    CHECK(vitalcast::digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-12));
    CHECK(vitalcast::digamma(6.0) == doctest::Approx(1.7061176684318005).epsilon(1e-12));
    CHECK(vitalcast::digamma(3.7) == doctest::Approx(1.1671535393615113).epsilon(1e-12));
    CHECK(vitalcast::digamma(0.1) == doctest::Approx(-10.423754940411076).epsilon(1e-12));
    // Recurrence psi(x+1) = psi(x) + 1/x.
    for (double x : {0.3, 1.7, 4.2}) {
        CHECK(vitalcast::digamma(x + 1.0) ==
              doctest::Approx(vitalcast::digamma(x) + 1.0 / x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(vitalcast::digamma(0.0), vitalcast::ContractViolation);
    CHECK_THROWS_AS(vitalcast::digamma(-2.0), vitalcast::ContractViolation);
}

TEST_CASE("independent samples give near-zero mutual information") {
    Rng data(1);
    Matrix x, y;
    gaussian_pair(0.0, 1200, data, x, y);
    double mi = vitalcast::ksg_mi(x, y, 3, Rng(0));
    CHECK(std::abs(mi) < 0.05);
}

TEST_CASE("strong dependence gives large positive mutual information") {
    Rng data(2);
    Matrix x, y;
    gaussian_pair(0.95, 1200, data, x, y);
    double truth = -0.5 * std::log(1.0 - 0.95 * 0.95);
    double mi = vitalcast::ksg_mi(x, y, 3, Rng(0));
    CHECK(mi > 0.8 * truth);
    CHECK(mi < 1.2 * truth);
}

TEST_CASE("the estimator is deterministic given the rng seed") {
    Rng data(3);
    Matrix x, y;
    gaussian_pair(0.5, 300, data, x, y);
    CHECK(vitalcast::ksg_mi(x, y, 3, Rng(7)) == vitalcast::ksg_mi(x, y, 3, Rng(7)));
    // A different jitter seed moves the estimate only marginally.
    CHECK(std::abs(vitalcast::ksg_mi(x, y, 3, Rng(7)) - vitalcast::ksg_mi(x, y, 3, Rng(8))) <
          0.05);
}

TEST_CASE("jitter makes quantized data usable; nojitter flags degeneracy") {
    // Heavily quantized samples with many exact ties.
    const std::size_t n = 150;
    Matrix x(n, 1), y(n, 1);
    Rng data(4);
    for (std::size_t i = 0; i < n; ++i) {
        x(i, 0) = std::floor(data.uniform() * 4.0);
        y(i, 0) = std::floor(data.uniform() * 4.0);
    }
    double mi = vitalcast::ksg_mi(x, y, 3, Rng(0));
    CHECK(std::isfinite(mi));

    auto raw = vitalcast::ksg_mi_nojitter(x, y, 3);
    CHECK(raw.degenerate);

    Matrix constant(n, 1, 1.0);
    auto flat = vitalcast::ksg_mi_nojitter(constant, y, 3);
    CHECK(flat.degenerate);

    Matrix xs, ys;
    Rng clean(5);
    gaussian_pair(0.5, 200, clean, xs, ys);
    auto healthy = vitalcast::ksg_mi_nojitter(xs, ys, 3);
    CHECK_FALSE(healthy.degenerate);
    CHECK(std::isfinite(healthy.mi));
}

TEST_CASE("input contracts are enforced") {
    Matrix x(5, 1, 0.1), y(5, 1, 0.2);
    CHECK_THROWS_AS(vitalcast::ksg_mi(x, y, 5, Rng(0)), vitalcast::ContractViolation);
    CHECK_THROWS_AS(vitalcast::ksg_mi(x, y, 0, Rng(0)), vitalcast::ContractViolation);
    Matrix mismatch(4, 1, 0.3);
    CHECK_THROWS_AS(vitalcast::ksg_mi(x, mismatch, 2, Rng(0)), vitalcast::ContractViolation);
}

TEST_CASE("patient MI is exactly symmetric and truncates to the shorter record") {
    PatientRecord a = scaled_patient("alpha", 60, 11);
    PatientRecord b = scaled_patient("beta", 45, 12);
    Rng rng(3);
    double ab = vitalcast::patient_mi(a, b, 3, rng);
    double ba = vitalcast::patient_mi(b, a, 3, rng);
    CHECK(ab == ba);  // bitwise, thanks to pair canonicalization
    CHECK(std::isfinite(ab));

    PatientRecord tiny = scaled_patient("gamma", 3, 13);
    bool threw = false;
    try {
        vitalcast::patient_mi(a, tiny, 3, rng);
    } catch (const vitalcast::Error& e) {
        threw = true;
        std::string what = e.what();
        CHECK(what.find("alpha") != std::string::npos);
        CHECK(what.find("gamma") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("score_cohort fills a symmetric table with J row sums") {
    Cohort c;
    c.records.push_back(scaled_patient("p1", 40, 21));
    c.records.push_back(scaled_patient("p2", 40, 22));
    c.records.push_back(scaled_patient("p3", 40, 23));
    c.records.push_back(scaled_patient("p4", 40, 24));

    MiScoreTable table = vitalcast::score_cohort(c, 3, Rng(9));
    REQUIRE(table.patient_ids.size() == 4);
    REQUIRE(table.pairwise.rows() == 4);
    REQUIRE(table.pairwise.cols() == 4);

    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(table.pairwise(i, i) == 0.0);
        double sum = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(table.pairwise(i, j) == table.pairwise(j, i));
            if (j != i) sum += table.pairwise(i, j);
        }
        CHECK(table.j_scores[i] == sum);
    }
}

TEST_CASE("grouping sorts by descending J and samples per group") {
    MiScoreTable table;
    table.patient_ids = {"a", "b", "c"};
    table.pairwise = Matrix(3, 3);
    table.j_scores = {0.6, 0.7, 0.3};

    Rng rng(1);
    auto assign = vitalcast::group_and_sample(table, 3, 1.0 / 3.0, rng);
    REQUIRE(assign.groups.size() == 3);
    CHECK(assign.groups[0] == std::vector<std::string>{"b"});  // highest J first
    CHECK(assign.groups[1] == std::vector<std::string>{"a"});
    CHECK(assign.groups[2] == std::vector<std::string>{"c"});
    CHECK(assign.g_ids.size() == 1);  // round(3 * 1/3)
    CHECK(assign.p_ids.size() == 2);
}

TEST_CASE("group sizes differ by at most one and G' matches the fraction") {
    const std::size_t n = 32;
    MiScoreTable table;
    table.pairwise = Matrix(n, n);
    Rng jrng(2);
    for (std::size_t i = 0; i < n; ++i) {
        table.patient_ids.push_back("p" + std::to_string(i));
        table.j_scores.push_back(jrng.uniform());
    }

    Rng rng(5);
    auto assign = vitalcast::group_and_sample(table, 10, 1.0 / 3.0, rng);
    REQUIRE(assign.groups.size() == 10);
    std::size_t mn = n, mx = 0, total = 0;
    for (const auto& g : assign.groups) {
        mn = std::min(mn, g.size());
        mx = std::max(mx, g.size());
        total += g.size();
    }
    CHECK(total == n);
    CHECK(mx - mn <= 1);
    CHECK(mx == 4);  // 32 = 2 groups of 4 + 8 groups of 3 ... earlier take +1
    CHECK(assign.g_ids.size() == 11);  // round(32/3) = 11

    // G' and P' partition the cohort.
    std::set<std::string> all(assign.g_ids.begin(), assign.g_ids.end());
    for (const auto& id : assign.p_ids) CHECK(all.insert(id).second);
    CHECK(all.size() == n);

    // Deterministic for a fixed rng seed.
    Rng rng2(5);
    auto again = vitalcast::group_and_sample(table, 10, 1.0 / 3.0, rng2);
    CHECK(again.g_ids == assign.g_ids);
}

TEST_CASE("30 patients in 10 groups at one third sample one per group") {
    const std::size_t n = 30;
    MiScoreTable table;
    table.pairwise = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        table.patient_ids.push_back("q" + std::to_string(i));
        table.j_scores.push_back(static_cast<double>(n - i));
    }
    Rng rng(3);
    auto assign = vitalcast::group_and_sample(table, 10, 1.0 / 3.0, rng);
    CHECK(assign.g_ids.size() == 10);
    for (const auto& g : assign.groups) CHECK(g.size() == 3);
}

TEST_CASE("grouping rejects impossible arguments") {
    MiScoreTable table;
    table.patient_ids = {"a", "b"};
    table.pairwise = Matrix(2, 2);
    table.j_scores = {0.1, 0.2};
    Rng rng(0);
    CHECK_THROWS_AS(vitalcast::group_and_sample(table, 5, 0.3, rng), vitalcast::Error);
    CHECK_THROWS_AS(vitalcast::group_and_sample(table, 2, 0.0, rng), vitalcast::Error);
    CHECK_THROWS_AS(vitalcast::group_and_sample(table, 2, 1.0, rng), vitalcast::Error);
}
