#pragma once

#include <stdexcept>
#include <string>

namespace hyperfuzz {

// Absolute tolerance for all real comparisons (point equality, metric axioms,
// level lookups).
inline constexpr double kTolerance = 1e-9;

// Raised for malformed input: dimension/index mismatch, out-of-range levels,
// invariant violations at construction time.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an operation is not defined for the given space mode.
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

}  // namespace hyperfuzz
