#ifndef VITALCAST_WINDOWS_HPP
#define VITALCAST_WINDOWS_HPP

#include <string>
#include <vector>

#include "vitalcast/patient.hpp"

namespace vitalcast {

struct WindowProvenance {
    std::string patient_id;
    std::size_t start = 0;  // index of the window's first time step
};

/// Sliding windows over a cohort: S windows of shape M × K, where the K = 7
/// columns are the 5 vitals followed by age and gender broadcast per step.
/// For each requested horizon h, future_vitals[i] holds the full 5-vital row
/// at t+h (t = last step inside the window); the scalar regression target is
/// that row's target_vital column.
struct WindowedDataset {
    std::size_t m = 0;
    std::size_t k = kNumFeatures;
    std::size_t target_vital = 0;
    std::vector<int> horizons;        // ascending
    std::vector<Matrix> windows;      // S entries, each m × k
    std::vector<Matrix> future_vitals;  // per horizon: S × kNumVitals
    std::vector<WindowProvenance> provenance;

    std::size_t size() const { return windows.size(); }
    std::size_t horizon_index(int h) const;
    /// Scalar target of window s at horizon h.
    double target(int h, std::size_t s) const;
};

/// Builds stride-1 windows per patient. A patient with p steps contributes
/// max(0, p − M − h_max + 1) windows, so every window has targets for every
/// horizon; windows never span two patients. Requires imputed (finite)
/// vitals; throws Error naming the first offending patient otherwise.
WindowedDataset make_windows(const Cohort& cohort, std::size_t m, std::vector<int> horizons,
                             std::size_t target_vital);

/// Debug export of the raw window tensor: magic "VCWD", version, S, M, K as
/// little-endian 32-bit counts, then the S·M·K row-major 64-bit floats.
void write_windows(const WindowedDataset& dataset, const std::string& path);

/// Reads the tensor back (targets/provenance are not part of the layout).
WindowedDataset read_windows(const std::string& path);

}  // namespace vitalcast

#endif
