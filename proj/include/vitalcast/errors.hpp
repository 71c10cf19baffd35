#ifndef VITALCAST_ERRORS_HPP
#define VITALCAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vitalcast {

/// Runtime failure (bad data, failed solve, broken file). CLI maps these to exit 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration or usage. CLI maps these to exit 2.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Broken API precondition (shape mismatch, stale cache, bad argument).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractViolation(what);
}

}  // namespace vitalcast

#endif
