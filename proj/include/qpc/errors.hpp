#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpc {

/// Invalid parameters, malformed config or input files.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration would exceed the configured output-space budget.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// A hypothesis of the underlying result is not met (non-symmetric channel,
/// auxiliary distribution outside the symmetry-preserving set, ...).
struct HypothesisError : std::runtime_error {
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

/// Two independent computation routes disagreed; indicates a library bug.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

/// Default cap on enumerated output-space sizes.
inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

}  // namespace qpc
