#pragma once

#include <stdexcept>
#include <string>

namespace skewdepth {

/// Argument outside the mathematical domain of an operation (bad parameters,
/// dimension mismatch, non positive-definite matrices).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result not representable in double precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Operation requires a property the law does not have, e.g. a finite mean.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Iterative solver failed to reach its tolerance within budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace skewdepth
