#pragma once

#include <stdexcept>
#include <string>

namespace stabent {

// Inputs violate a documented precondition (bad dimensions, indices, flags).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// The request is well-formed but exceeds the configured size limits.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical consistency check failed (degenerate spectra, non-PSD input).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace stabent
