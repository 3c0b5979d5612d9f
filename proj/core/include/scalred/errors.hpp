#pragma once

#include <stdexcept>
#include <string>

namespace scalred {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched arities or vector lengths.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Domain violation of a primitive (log of a non-positive value, division
/// by zero, ...) or a non-finite derivative.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A point left the chart on which a scaling structure is defined, or the
/// scaling function is not strictly positive there.
class ChartError : public Error {
 public:
  using Error::Error;
};

/// A mass matrix or reduced block matrix is too ill-conditioned to invert.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Rate-form integration failed at a given time stamp.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Unknown scenario name.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario document; the message carries a JSON pointer.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace scalred
