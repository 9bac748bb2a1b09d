#pragma once

#include <stdexcept>
#include <string>

namespace dosusy {

/// Argument outside the mathematical domain of an operation (rho <= 0, |x| > 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (N, l, kappa) does not label a state: p = N - 1 - l/kappa is not a nonnegative integer.
class StateValidityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested a unit-normalized state whose square integral diverges.
class NotNormalizableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// No sign change inside the bracket handed to a root finder.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stencil needs more points than the grid provides.
class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation at a zero of a family's V function, where W + 1/V is singular.
class SingularPointError : public std::runtime_error {
 public:
  SingularPointError(const std::string& what, double location)
      : std::runtime_error(what), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  double location_;
};

/// Outward integration blew up (w is not an eigenvalue, or the start was bad).
class OverflowError : public std::runtime_error {
 public:
  OverflowError(const std::string& what, double radius)
      : std::runtime_error(what), radius_(radius) {}
  double radius() const noexcept { return radius_; }

 private:
  double radius_;
};

/// Classical path hit the force centre or escaped the integration region.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dosusy
