#pragma once

#include <stdexcept>
#include <string>

namespace liesym {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (dictionary vs. representation, group vs. group, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A request the library cannot honour: unsupported group kind, bad descriptor, size cap.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition failed (singular Gram matrix, too few samples, divergence).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Interpolation constraints that no element of the dictionary satisfies.
class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed configuration or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace liesym
