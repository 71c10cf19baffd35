#ifndef VITALCAST_CHECKPOINT_HPP
#define VITALCAST_CHECKPOINT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "vitalcast/kernels.hpp"
#include "vitalcast/lstm.hpp"
#include "vitalcast/mlp.hpp"
#include "vitalcast/scaler.hpp"

namespace vitalcast {

enum class ModelKind : std::uint32_t {
    lstm = 1,
    mlp = 2,
    arima = 3,  // config-only: coefficients are re-fit per window
    gpr = 4,
    krr = 5,
};

const char* model_kind_name(ModelKind kind);

/// Payload for kernel models (GPR/KRR): everything predict needs.
struct KernelCheckpoint {
    KernelHyper hyper;
    double lambda_used = 0.0;
    double y_mean = 0.0;
    Matrix train_x;
    std::vector<double> alpha;
};

/// A trained model plus the context needed to apply it to raw CSV data.
///
/// Byte layout (little-endian):
///   magic "VCKP" | u32 version=1 | u32 kind |
///   u32 target_vital | i32 horizon | u32 window_m | u32 has_scaler |
///   [14 × f64 scaler min/max if has_scaler] | kind-specific block:
///     lstm: u32 input, hidden, output; f64 params
///     mlp:  u32 input, n_hidden, hidden sizes..., output; f64 params
///     arima: (empty)
///     gpr/krr: u32 n, d; f64 sigma, length, lambda, lambda_used, y_mean;
///              f64 train_x (n×d row-major); f64 alpha (n)
struct Checkpoint {
    ModelKind kind = ModelKind::lstm;
    std::uint32_t target_vital = 0;
    std::int32_t horizon = 1;
    std::uint32_t window_m = 20;
    std::optional<MinMaxScaler> scaler;

    std::optional<LstmParams> lstm;
    std::optional<MlpParams> mlp;
    std::optional<KernelCheckpoint> kernel;
};

/// Round-trip identity; version-checked. Corrupt/truncated/mismatched files
/// raise Error naming the problem.
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace vitalcast

#endif
