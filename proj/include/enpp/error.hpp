#pragma once

#include <stdexcept>
#include <string>

namespace enpp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller handed in arguments that violate an operation's preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two fields that must share a grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Total negative and positive charge differ, so the periodic Poisson
/// problem for the potential has no solution.
class NonNeutral : public Error {
 public:
  using Error::Error;
};

/// Requested timestep exceeds the advective stability bound.
class CflViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Snapshot or CSV input that cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// The solution stopped being finite.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace enpp
