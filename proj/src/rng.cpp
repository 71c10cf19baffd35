#include "vitalcast/rng.hpp"

#include <cmath>
#include <numbers>

#include "vitalcast/errors.hpp"

namespace vitalcast {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

/// FNV-1a over the label bytes; stable, endian-free label hashing.
std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
    auto& s = state_;
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<double> Rng::uniform_vec(std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = uniform();
    return out;
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    // log(1 - u1) is safe: u1 < 1 always, and 1 - u1 > 0.
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<double> Rng::normal_vec(std::size_t n) {
    std::vector<double> out(n);
    for (auto& v : out) v = normal();
    return out;
}

std::uint64_t Rng::below(std::uint64_t n) {
    require(n > 0, "Rng::below requires n > 0");
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(wide >> 64);
}

Rng Rng::derive(std::string_view label) const {
    std::uint64_t x = seed_ ^ fnv1a(label);
    // One extra splitmix64 round decorrelates nearby (seed, label) pairs.
    return Rng(splitmix64(x));
}

Rng Rng::derive(std::string_view label, std::uint64_t index) const {
    std::uint64_t x = seed_ ^ fnv1a(label);
    std::uint64_t mixed = splitmix64(x);
    std::uint64_t y = mixed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    return Rng(splitmix64(y));
}

}  // namespace vitalcast
