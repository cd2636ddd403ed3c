#pragma once

#include <stdexcept>
#include <string>

namespace ret14 {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (x <= 0 for K_n, rho <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

// A state model could not be evaluated at the requested point.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, std::string coordinate, double value)
      : Error(what + " (" + coordinate + " = " + std::to_string(value) + ")"),
        coordinate_(std::move(coordinate)),
        value_(value) {}

  const std::string& coordinate() const noexcept { return coordinate_; }
  double value() const noexcept { return value_; }

 private:
  std::string coordinate_;
  double value_;
};

// A user state model violates the Gibbs cross-derivative condition.
class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

// p_rho = 0 (or another derivative that must be inverted vanishes).
class SingularDerivativeError : public Error {
 public:
  using Error::Error;
};

// e_T = 0 or e + p = 0 in the material-derivative elimination.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// A transport coefficient that appears in a denominator is zero.
class DivisionError : public Error {
 public:
  DivisionError(std::string coefficient)
      : Error("transport coefficient '" + coefficient + "' must be strictly positive"),
        coefficient_(std::move(coefficient)) {}

  const std::string& coefficient() const noexcept { return coefficient_; }

 private:
  std::string coefficient_;
};

// Four-velocity not normalized to c^2.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

// Non-equilibrium fields or field points violating their constraints.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A closure that needs an omega(gamma) (or b(gamma)) function did not get one.
class MissingModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace ret14
