#pragma once

#include <stdexcept>
#include <string>

namespace kfree {

/// Raised when an argument lies outside the mathematical domain of an operation
/// (non-prime characteristic, pth_root of a polynomial outside F_q[x^p], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Division by the zero field element or the zero polynomial.
class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operands that belong to different fields.
class FieldMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A request that is well-formed but too large for exhaustive treatment.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kfree
