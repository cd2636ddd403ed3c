#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ret14 {

// A smooth scalar function of gamma = m c^2 / (k_B T) with its first two
// derivatives. Used for omega(gamma) of polyatomic gases and for the
// b(gamma) profile of the polyatomic PR closure.
class GammaFunction {
 public:
  virtual ~GammaFunction() = default;

  virtual double value(double gamma) const = 0;
  virtual double d1(double gamma) const = 0;
  virtual double d2(double gamma) const = 0;
  // Any antiderivative; only differences are meaningful.
  virtual double antiderivative(double gamma) const = 0;
  virtual std::string name() const = 0;
};

using GammaFunctionPtr = std::shared_ptr<const GammaFunction>;

// omega = G - 1/gamma, the Juttner gas energy per rest energy.
class JuttnerOmega final : public GammaFunction {
 public:
  double value(double gamma) const override;
  double d1(double gamma) const override;
  double d2(double gamma) const override;
  double antiderivative(double gamma) const override;
  std::string name() const override { return "juttner"; }
};

// omega = 1 + D / (2 gamma): non-relativistic ideal gas with D degrees of
// freedom (D = 3 monatomic, D = 5 rigid diatomic).
class IdealDofOmega final : public GammaFunction {
 public:
  explicit IdealDofOmega(double dof);

  double value(double gamma) const override;
  double d1(double gamma) const override;
  double d2(double gamma) const override;
  double antiderivative(double gamma) const override;
  std::string name() const override;

 private:
  double dof_;
};

// beta = G / gamma, so that rho c^2 beta is the monatomic b coefficient.
class JuttnerBeta final : public GammaFunction {
 public:
  double value(double gamma) const override;
  double d1(double gamma) const override;
  double d2(double gamma) const override;
  double antiderivative(double gamma) const override;
  std::string name() const override { return "juttner_beta"; }
};

/// Natural cubic spline through tabulated (gamma, value) knots.
///
/// Knots must be strictly increasing and at least three. Evaluation outside
/// [front, back] throws EvaluationError carrying the offending gamma.
class CubicSpline final : public GammaFunction {
 public:
  CubicSpline(std::vector<double> knots, std::vector<double> values);
  static CubicSpline from_table(std::span<const std::pair<double, double>> table);

  double value(double gamma) const override;
  double d1(double gamma) const override;
  double d2(double gamma) const override;
  double antiderivative(double gamma) const override;
  std::string name() const override { return "spline"; }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  std::size_t locate(double gamma) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at knots
  std::vector<double> cumulative_;  // integral from x_[0] to x_[i]
};

}  // namespace ret14
