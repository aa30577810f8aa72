#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

// Bad input: sizes, parameters, queries, configs, instability. CLI exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The configured platoon does not satisfy the delay-stability condition.
class UnstablePlatoon : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Numerical failure: non-convergence, ill-conditioning, divergence. CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stable, but so close to the stability boundary that the covariance integral
// cannot be trusted.
class NearBoundary : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditioned : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class Divergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace cascade
