#pragma once

#include <stdexcept>
#include <string>

namespace fracsum {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, shape mismatches, violated preconditions. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// |denominator| of a Fourier-side multiplier fell below 1e-13.
class DenominatorNearZero : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularBlock : public NumericalError {
 public:
  SingularBlock(int block, const std::string& what)
      : NumericalError(what), block_(block) {}
  int block() const noexcept { return block_; }

 private:
  int block_;
};

// Adaptive expansion did not reach its tolerance within the allowed degree.
class NonConvergence : public NumericalError {
 public:
  NonConvergence(double tail, const std::string& what)
      : NumericalError(what), tail_(tail) {}
  double tail() const noexcept { return tail_; }

 private:
  double tail_;
};

// File system / format failures. CLI exit code 4.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracsum
