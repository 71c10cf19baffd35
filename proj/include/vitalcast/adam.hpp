#ifndef VITALCAST_ADAM_HPP
#define VITALCAST_ADAM_HPP

#include <cstdint>
#include <vector>

namespace vitalcast {

/// State for the Adam optimizer (first/second moment estimates plus step
/// counter). Defaults β1=0.9, β2=0.999, ε=1e-8.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::uint64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    AdamState() = default;
    explicit AdamState(std::size_t dim) : m(dim, 0.0), v(dim, 0.0) {}
};

/// One Adam update with bias correction, in place:
///   m ← β1·m + (1−β1)·g,  v ← β2·v + (1−β2)·g²,  t ← t+1
///   p ← p − lr·m̂ / (√v̂ + ε)   with m̂ = m/(1−β1ᵗ), v̂ = v/(1−β2ᵗ)
/// Throws ContractViolation on dimension mismatch or lr ≤ 0, and Error
/// naming the offending index if any gradient entry is non-finite.
void adam_step(std::vector<double>& params, const std::vector<double>& grads, AdamState& state,
               double lr);

}  // namespace vitalcast

#endif
