#pragma once

#include <stdexcept>
#include <string>

namespace ccs {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input or violated precondition (CLI exit code 2).
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// No sample point within bandwidth of a query; Nadaraya-Watson weights undefined.
struct EmptyBandwidthError : Error {
  double query;
  explicit EmptyBandwidthError(double q, const std::string& msg)
      : Error(msg), query(q) {}
};

// A matrix required to be positive definite has an eigenvalue <= 0.
struct NonPDError : Error {
  explicit NonPDError(const std::string& msg) : Error(msg) {}
};

// Shape mismatch between operands.
struct DimensionError : Error {
  explicit DimensionError(const std::string& msg) : Error(msg) {}
};

}  // namespace ccs
