#include "ret14/gamma_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ret14/errors.hpp"
#include "ret14/special_functions.hpp"

namespace ret14 {
namespace {

struct RatioDerivs {
  double g;
  double g1;
  double g2;
};

RatioDerivs ratio_derivs(double gamma) {
  const BesselRatio r = bessel_ratio_derivatives(gamma);
  return {r.g, r.d1, r.d2};
}

}  // namespace

double JuttnerOmega::value(double gamma) const { return bessel_ratio_g(gamma) - 1.0 / gamma; }

double JuttnerOmega::d1(double gamma) const {
  return bessel_ratio_g_prime(gamma) + 1.0 / (gamma * gamma);
}

double JuttnerOmega::d2(double gamma) const {
  return ratio_derivs(gamma).g2 - 2.0 / (gamma * gamma * gamma);
}

// d/dgamma [ln gamma - ln K_2(gamma)] = G - 1/gamma.
double JuttnerOmega::antiderivative(double gamma) const {
  return std::log(gamma) - std::log(bessel_k_scaled(2, gamma)) + gamma;
}

IdealDofOmega::IdealDofOmega(double dof) : dof_(dof) {
  if (!(dof > 0.0)) throw DomainError("IdealDofOmega: degrees of freedom must be positive");
}

double IdealDofOmega::value(double gamma) const { return 1.0 + 0.5 * dof_ / gamma; }
double IdealDofOmega::d1(double gamma) const { return -0.5 * dof_ / (gamma * gamma); }
double IdealDofOmega::d2(double gamma) const { return dof_ / (gamma * gamma * gamma); }
double IdealDofOmega::antiderivative(double gamma) const {
  return gamma + 0.5 * dof_ * std::log(gamma);
}
std::string IdealDofOmega::name() const { return "ideal_dof(" + std::to_string(dof_) + ")"; }

double JuttnerBeta::value(double gamma) const { return bessel_ratio_g(gamma) / gamma; }

double JuttnerBeta::d1(double gamma) const {
  const auto r = ratio_derivs(gamma);
  return r.g1 / gamma - r.g / (gamma * gamma);
}

double JuttnerBeta::d2(double gamma) const {
  const auto r = ratio_derivs(gamma);
  const double g2 = gamma * gamma;
  return r.g2 / gamma - 2.0 * r.g1 / g2 + 2.0 * r.g / (g2 * gamma);
}

double JuttnerBeta::antiderivative(double) const {
  throw Error("JuttnerBeta: antiderivative has no closed form");
}

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values)
    : x_(std::move(knots)), y_(std::move(values)) {
  const std::size_t n = x_.size();
  if (n < 3 || y_.size() != n) {
    throw DomainError("CubicSpline: need at least three (gamma, value) pairs");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw DomainError("CubicSpline: knots must be strictly increasing");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw DomainError("CubicSpline: non-finite table entry");
    }
  }

  // Natural end conditions m_0 = m_{n-1} = 0; Thomas algorithm on the interior.
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    diag[i] = 2.0 * (hl + hr);
    upper[i] = hr;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    if (i > 1) {
      const double w = hl / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    if (i == 1) break;
  }

  cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    cumulative_[i + 1] =
        cumulative_[i] + 0.5 * h * (y_[i] + y_[i + 1]) - h * h * h * (m_[i] + m_[i + 1]) / 24.0;
  }
}

CubicSpline CubicSpline::from_table(std::span<const std::pair<double, double>> table) {
  std::vector<double> xs, ys;
  xs.reserve(table.size());
  ys.reserve(table.size());
  for (const auto& [x, y] : table) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return CubicSpline(std::move(xs), std::move(ys));
}

std::size_t CubicSpline::locate(double gamma) const {
  if (!(gamma >= x_.front() && gamma <= x_.back())) {
    throw EvaluationError("gamma outside tabulated spline range [" + std::to_string(x_.front()) +
                              ", " + std::to_string(x_.back()) + "]",
                          "gamma", gamma);
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), gamma);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, x_.size() - 2);
}

double CubicSpline::value(double gamma) const {
  const std::size_t i = locate(gamma);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - gamma) / h;
  const double b = 1.0 - a;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::d1(double gamma) const {
  const std::size_t i = locate(gamma);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - gamma) / h;
  const double b = 1.0 - a;
  return (y_[i + 1] - y_[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
         (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
}

double CubicSpline::d2(double gamma) const {
  const std::size_t i = locate(gamma);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - gamma) / h;
  return a * m_[i] + (1.0 - a) * m_[i + 1];
}

double CubicSpline::antiderivative(double gamma) const {
  const std::size_t i = locate(gamma);
  const double h = x_[i + 1] - x_[i];
  const double t = gamma - x_[i];
  const double a = 1.0 - t / h;
  const double b = t / h;
  const double linear = y_[i] * (t - 0.5 * t * t / h) + y_[i + 1] * 0.5 * t * t / h;
  const double cubic = h * h * h / 6.0 *
                       (-m_[i] * (0.25 * a * a * a * a - 0.5 * a * a + 0.25) +
                        m_[i + 1] * (0.25 * b * b * b * b - 0.5 * b * b));
  return cumulative_[i] + linear + cubic;
}

}  // namespace ret14
