#include "vitalcast/split.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "vitalcast/errors.hpp"
#include "vitalcast/rng.hpp"

namespace vitalcast {

void SplitPlan::validate() const {
    auto positive = [](double f) { return f > 0.0 && f < 1.0; };
    if (!positive(train) || !positive(validation) || !positive(test) || !positive(inner_p) ||
        !positive(inner_g)) {
        throw ConfigError("split fractions must lie strictly between 0 and 1");
    }
    if (std::abs(train + validation + test - 1.0) > 1e-9) {
        throw ConfigError("train + validation + test fractions must sum to 1");
    }
    if (std::abs(inner_p + inner_g - train) > 1e-9) {
        throw ConfigError("inner P + G fractions must sum to the train fraction");
    }
}

std::vector<std::size_t> largest_remainder(const std::vector<double>& fractions,
                                           std::size_t total) {
    require(!fractions.empty(), "largest_remainder: no fractions");
    double sum = 0.0;
    for (double f : fractions) {
        require(f >= 0.0, "largest_remainder: negative fraction");
        sum += f;
    }
    require(std::abs(sum - 1.0) < 1e-9, "largest_remainder: fractions must sum to 1");

    std::vector<std::size_t> seats(fractions.size());
    std::vector<double> remainders(fractions.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double quota = fractions[i] * static_cast<double>(total);
        seats[i] = static_cast<std::size_t>(std::floor(quota));
        remainders[i] = quota - static_cast<double>(seats[i]);
        assigned += seats[i];
    }
    // Hand out leftover seats by descending remainder; ties favor the later
    // index. Sorting positions by (remainder, index) descending achieves both.
    std::vector<std::size_t> order(fractions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
        return a > b;
    });
    for (std::size_t i = 0; assigned < total; ++i) seats[order[i]] += 1, ++assigned;
    return seats;
}

SplitResult split_patients(const Cohort& cohort, const SplitPlan& plan) {
    plan.validate();
    const std::size_t n = cohort.size();
    if (n < 5) throw Error("split_patients: need at least 5 patients, got " + std::to_string(n));
    {
        std::unordered_set<std::string> seen;
        for (const auto& rec : cohort.records) {
            if (!seen.insert(rec.patient_id).second) {
                throw Error("split_patients: duplicate patient id '" + rec.patient_id + "'");
            }
        }
    }

    std::vector<std::string> ids;
    ids.reserve(n);
    for (const auto& rec : cohort.records) ids.push_back(rec.patient_id);
    Rng rng = Rng(plan.seed).derive("split-patients");
    rng.shuffle(ids);

    const auto outer = largest_remainder({plan.train, plan.validation, plan.test}, n);
    const std::size_t n_train = outer[0];
    SplitResult result;
    result.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    result.validation.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                             ids.begin() + static_cast<std::ptrdiff_t>(n_train + outer[1]));
    result.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + outer[1]), ids.end());

    const auto inner =
        largest_remainder({plan.inner_p / plan.train, plan.inner_g / plan.train}, n_train);
    result.p_pool.assign(result.train.begin(),
                         result.train.begin() + static_cast<std::ptrdiff_t>(inner[0]));
    result.g_pool.assign(result.train.begin() + static_cast<std::ptrdiff_t>(inner[0]),
                         result.train.end());

    if (result.train.empty() || result.validation.empty() || result.test.empty() ||
        result.p_pool.empty() || result.g_pool.empty()) {
        throw Error("split_patients: a subset came out empty; use a larger cohort");
    }
    return result;
}

Cohort subset(const Cohort& cohort, const std::vector<std::string>& ids) {
    std::unordered_set<std::string> wanted(ids.begin(), ids.end());
    Cohort out;
    for (const auto& rec : cohort.records) {
        if (wanted.count(rec.patient_id)) out.records.push_back(rec);
    }
    return out;
}

}  // namespace vitalcast
