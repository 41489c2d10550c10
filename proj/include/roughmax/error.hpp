#pragma once

#include <stdexcept>
#include <string>

namespace roughmax {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside a function's domain or a rejected configuration.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Index or scale outside the range a structure was built for.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A stated precondition of an estimate does not hold for the given parameters.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numeric failures. The CLI maps these to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericError {
 public:
  ConvergenceError(const std::string& what, double lo, double hi)
      : NumericError(what), lo_(lo), hi_(hi) {}
  double bracket_lo() const { return lo_; }
  double bracket_hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

// A floor is numerically undecidable at the requested tolerance.
class AmbiguityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace roughmax
