#pragma once

#include <stdexcept>
#include <string>

namespace fracpq {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad JSON, invalid exponents, malformed grid).
/// CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

/// A solver exhausted its iteration budget without reaching tolerance.
/// CLI exit code 3.
struct ConvergenceError : Error {
  using Error::Error;
};

/// A precondition or threshold gate refused the request (e.g. a critical
/// level that is nonpositive, a missing fibering root, an empty annulus).
/// CLI exit code 4.
struct PreconditionError : Error {
  using Error::Error;
};

/// Geometric precondition failed (empty annulus, ball with too few nodes).
struct GeometryError : PreconditionError {
  using PreconditionError::PreconditionError;
};

/// Caller passed incompatible objects (grid mismatch between a function and
/// a kernel table). Indicates a usage bug, not bad user input.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace fracpq
