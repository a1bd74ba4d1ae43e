#pragma once

#include <stdexcept>
#include <string>

namespace relkit {

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Precondition violations: bad sizes, invalid parameters, malformed input files.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Structurally valid input that is statistically degenerate
/// (zero variance, singular covariance, all-zero denominator).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Numerical failure inside an otherwise valid computation.
class ComputationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem or stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace relkit
