#pragma once

#include <stdexcept>
#include <string>

namespace gnsphere {

/// Input outside the admissible parameter range of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Function-level precondition failed (symmetry, orthogonality, positivity).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative solver stopped without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gnsphere
