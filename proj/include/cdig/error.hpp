#pragma once

#include <stdexcept>
#include <string>

namespace cdig {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a pointwise function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Lambert W argument left the domain of the selected real branch.
class BranchDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// (c, d, r) outside the admissible region.
class InvalidRegion : public Error {
 public:
  using Error::Error;
};

/// Metric failed to factorize (not positive definite or singular).
class SingularMetric : public Error {
 public:
  using Error::Error;
};

/// Finite-difference stencil would leave the interior of the simplex.
class BoundaryError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range command-line configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A sweep cell or sampling run could not be completed.
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdig
