#pragma once

#include <stdexcept>

namespace brand {

// Invalid configuration or arguments supplied by the caller.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (files, labels, dimensions).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical breakdown at runtime (failed factorization, divergence,
// degenerate responsibilities).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace brand
