#ifndef SPINPHOTON_ERRORS_HPP
#define SPINPHOTON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spinphoton {

/// Parameters or inputs that violate a documented precondition.
class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed-form result was requested outside the regime where it holds
/// (fast cavity, sweet spot, zero splitting, ...).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integrator or truncation failure. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StiffnessError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TruncationOverflow : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace spinphoton

#endif  // SPINPHOTON_ERRORS_HPP
