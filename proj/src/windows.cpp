#include "vitalcast/windows.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "vitalcast/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary window export assumes a little-endian host");

namespace vitalcast {

namespace {

constexpr char kMagic[4] = {'V', 'C', 'W', 'D'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::ifstream& in, const std::string& path) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw Error("truncated window file '" + path + "'");
    return v;
}

}  // namespace

std::size_t WindowedDataset::horizon_index(int h) const {
    auto it = std::find(horizons.begin(), horizons.end(), h);
    require(it != horizons.end(), "horizon " + std::to_string(h) + " not present in dataset");
    return static_cast<std::size_t>(it - horizons.begin());
}

double WindowedDataset::target(int h, std::size_t s) const {
    return future_vitals[horizon_index(h)](s, target_vital);
}

WindowedDataset make_windows(const Cohort& cohort, std::size_t m, std::vector<int> horizons,
                             std::size_t target_vital) {
    require(m >= 1, "make_windows: M must be >= 1");
    require(!horizons.empty(), "make_windows: horizons must be nonempty");
    require(target_vital < kNumVitals, "make_windows: target vital index out of range");
    std::sort(horizons.begin(), horizons.end());
    horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
    require(horizons.front() >= 1, "make_windows: horizons must be >= 1");
    const std::size_t h_max = static_cast<std::size_t>(horizons.back());

    WindowedDataset ds;
    ds.m = m;
    ds.k = kNumFeatures;
    ds.target_vital = target_vital;
    ds.horizons = horizons;

    std::size_t total = 0;
    for (const auto& rec : cohort.records) {
        if (!rec.vitals.all_finite()) {
            throw Error("make_windows: patient '" + rec.patient_id +
                        "' has missing vitals; impute before windowing");
        }
        const std::size_t p = rec.steps();
        if (p >= m + h_max) total += p - m - h_max + 1;
    }
    ds.windows.reserve(total);
    ds.provenance.reserve(total);
    ds.future_vitals.assign(horizons.size(), Matrix(total, kNumVitals));

    std::size_t s = 0;
    for (const auto& rec : cohort.records) {
        const std::size_t p = rec.steps();
        if (p < m + h_max) continue;
        const std::size_t n_windows = p - m - h_max + 1;
        for (std::size_t start = 0; start < n_windows; ++start, ++s) {
            Matrix w(m, kNumFeatures);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t v = 0; v < kNumVitals; ++v) w(i, v) = rec.vitals(start + i, v);
                w(i, kNumVitals) = rec.age;
                w(i, kNumVitals + 1) = rec.gender;
            }
            ds.windows.push_back(std::move(w));
            ds.provenance.push_back({rec.patient_id, start});
            const std::size_t t_last = start + m - 1;
            for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
                const std::size_t t_future = t_last + static_cast<std::size_t>(horizons[hi]);
                for (std::size_t v = 0; v < kNumVitals; ++v)
                    ds.future_vitals[hi](s, v) = rec.vitals(t_future, v);
            }
        }
    }
    return ds;
}

void write_windows(const WindowedDataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out.write(kMagic, sizeof(kMagic));
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(dataset.size()));
    write_u32(out, static_cast<std::uint32_t>(dataset.m));
    write_u32(out, static_cast<std::uint32_t>(dataset.k));
    for (const auto& w : dataset.windows) {
        out.write(reinterpret_cast<const char*>(w.data()),
                  static_cast<std::streamsize>(w.size() * sizeof(double)));
    }
    if (!out) throw Error("failed while writing '" + path + "'");
}

WindowedDataset read_windows(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open window file '" + path + "'");
    char magic[4];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw Error("'" + path + "' is not a window tensor file (bad magic)");
    }
    const std::uint32_t version = read_u32(in, path);
    if (version != kVersion) {
        throw Error("unsupported window file version " + std::to_string(version));
    }
    const std::uint32_t s = read_u32(in, path);
    const std::uint32_t m = read_u32(in, path);
    const std::uint32_t k = read_u32(in, path);

    WindowedDataset ds;
    ds.m = m;
    ds.k = k;
    ds.windows.reserve(s);
    for (std::uint32_t i = 0; i < s; ++i) {
        Matrix w(m, k);
        in.read(reinterpret_cast<char*>(w.data()),
                static_cast<std::streamsize>(w.size() * sizeof(double)));
        if (!in) throw Error("truncated window file '" + path + "'");
        ds.windows.push_back(std::move(w));
    }
    return ds;
}

}  // namespace vitalcast
