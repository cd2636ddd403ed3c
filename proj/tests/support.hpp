// Shared oracles and fixtures for the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "ret14/closure.hpp"
#include "ret14/eckart_check.hpp"
#include "ret14/gamma_function.hpp"
#include "ret14/special_functions.hpp"
#include "ret14/state_models.hpp"

namespace ret14::testing {

inline double rel_err(double x, double ref) {
  const double d = std::abs(x - ref);
  return d == 0.0 ? 0.0 : d / std::abs(ref);
}

// e^x K_n(x) = int_0^inf exp(-x (cosh t - 1)) cosh(n t) dt by the trapezoid
// rule, which converges geometrically for this analytic, decaying integrand.
inline double k_scaled_quadrature(int n, double x) {
  const double h = std::min(0.02, 0.2 / std::sqrt(x));
  double sum = 0.5;  // t = 0 term
  for (int i = 1;; ++i) {
    const double t = i * h;
    const double f = std::exp(-x * (std::cosh(t) - 1.0) + n * t) * 0.5 * (1.0 + std::exp(-2.0 * n * t));
    sum += f;
    if (f < 1e-18 * sum && x * (std::cosh(t) - 1.0) > n * t + 40.0) break;
  }
  return h * sum;
}

inline double k_quadrature(int n, double x) { return std::exp(-x) * k_scaled_quadrature(n, x); }

// Five-point central difference.
inline double fd5(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

// Central difference with the cube-root-of-epsilon step.
inline double fd_cbrt(const std::function<double(double)>& f, double x) {
  const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(x));
  return (f(x + h) - f(x - h)) / (2 * h);
}

inline std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  }
  return out;
}

// omega(gamma) = G - 1/gamma + amplitude * s(gamma) * bump(gamma), a smooth
// perturbation of the Juttner gas confined to the spline's knot range by a C2 window.
class PerturbedJuttnerOmega final : public GammaFunction {
 public:
  PerturbedJuttnerOmega(std::shared_ptr<const CubicSpline> s, double amplitude)
      : s_(std::move(s)), amp_(amplitude) {}

  double value(double g) const override {
    if (!inside(g)) return base_.value(g);
    return base_.value(g) + amp_ * s_->value(g) * w(g, 0);
  }
  double d1(double g) const override {
    if (!inside(g)) return base_.d1(g);
    return base_.d1(g) + amp_ * (s_->d1(g) * w(g, 0) + s_->value(g) * w(g, 1));
  }
  double d2(double g) const override {
    if (!inside(g)) return base_.d2(g);
    return base_.d2(g) + amp_ * (s_->d2(g) * w(g, 0) + 2 * s_->d1(g) * w(g, 1) +
                                 s_->value(g) * w(g, 2));
  }
  double antiderivative(double g) const override {
    // Only used for entropy; the perturbation's share is integrated numerically.
    const double lo = s_->front();
    const double hi = std::min(g, s_->back());
    double extra = 0.0;
    if (hi > lo) {
      const int n = 400;
      const double h = (hi - lo) / n;
      for (int i = 0; i <= n; ++i) {
        const double x = lo + i * h;
        extra += (i == 0 || i == n ? 0.5 : 1.0) * s_->value(x) * w(x, 0);
      }
      extra *= h * amp_;
    }
    return base_.antiderivative(g) + extra;
  }
  std::string name() const override { return "perturbed_juttner"; }

 private:
  bool inside(double g) const { return g > s_->front() && g < s_->back(); }

  // Window sin^4 of the normalized log-position, C2 at both ends, and its
  // gamma-derivatives.
  double w(double g, int order) const {
    const double lo = std::log(s_->front());
    const double hi = std::log(s_->back());
    const double k = M_PI / (hi - lo);
    const double phi = k * (std::log(g) - lo);
    const double sn = std::sin(phi), cs = std::cos(phi);
    if (order == 0) return sn * sn * sn * sn;
    const double dphi = k / g;
    const double d2phi = -k / (g * g);
    const double w1 = 4 * sn * sn * sn * cs;                          // dw/dphi
    if (order == 1) return w1 * dphi;
    const double w2 = 12 * sn * sn * cs * cs - 4 * sn * sn * sn * sn;  // d2w/dphi2
    return w2 * dphi * dphi + w1 * d2phi;
  }

  JuttnerOmega base_;
  std::shared_ptr<const CubicSpline> s_;
  double amp_;
};

// Random smooth b(rho, T) = c^2 rho s1(gamma) (1 + 0.2 rho s2(gamma)) with
// cubic splines s1, s2 in log-gamma knots; analytic partials.
struct SplineB {
  std::shared_ptr<const CubicSpline> s1;
  std::shared_ptr<const CubicSpline> s2;

  static SplineB random(const CounterRng& rng, std::uint64_t base, double gmin, double gmax) {
    const int n = 8;
    std::vector<double> x = log_space(gmin, gmax, n);
    std::vector<double> y1(n), y2(n);
    for (int i = 0; i < n; ++i) {
      y1[i] = rng.uniform(base + i, 0.2, 2.0);
      y2[i] = rng.uniform(base + 100 + i, -1.0, 1.0);
    }
    return {std::make_shared<CubicSpline>(x, y1), std::make_shared<CubicSpline>(x, y2)};
  }

  void eval(const ThermalState& s, const PhysicalConstants& k, double& b, double& b_rho,
            double& b_T) const {
    const double g = k.gamma(s.T);
    const double c2 = k.c * k.c;
    const double f1 = s1->value(g), f2 = s2->value(g);
    const double inner = 1.0 + 0.2 * s.rho * f2;
    b = c2 * s.rho * f1 * inner;
    b_rho = c2 * f1 * inner + c2 * s.rho * f1 * 0.2 * f2;
    const double dg_dT = -g / s.T;
    b_T = c2 * s.rho * (s1->d1(g) * inner + f1 * 0.2 * s.rho * s2->d1(g)) * dg_dT;
  }
};

// van der Waals gas (m = k_B = 1 units scaled by the constants): its
// spinodal region has p_rho < 0.
inline StateModelPtr van_der_waals(double a, double b) {
  UserModelSpec spec;
  spec.name = "van_der_waals";
  spec.p = [a, b](double rho, double T, const PhysicalConstants& k) {
    return rho * k.k_B * T / (k.m * (1.0 - b * rho)) - a * rho * rho;
  };
  spec.eps = [a](double rho, double T, const PhysicalConstants& k) {
    return 1.5 * k.k_B * T / k.m - a * rho;
  };
  spec.p_rho = [a, b](double rho, double T, const PhysicalConstants& k) {
    const double d = 1.0 - b * rho;
    return k.k_B * T / (k.m * d * d) - 2.0 * a * rho;
  };
  spec.p_T = [b](double rho, double, const PhysicalConstants& k) {
    return rho * k.k_B / (k.m * (1.0 - b * rho));
  };
  spec.eps_rho = [a](double, double, const PhysicalConstants&) { return -a; };
  spec.eps_T = [](double, double, const PhysicalConstants& k) { return 1.5 * k.k_B / k.m; };
  spec.reference = {0.5, 3.0};
  return std::make_shared<UserModel>(spec);
}

// Classical ideal gas with all derivatives left to finite differences.
inline StateModelPtr ideal_gas_fd() {
  UserModelSpec spec;
  spec.name = "ideal_gas";
  spec.p = [](double rho, double T, const PhysicalConstants& k) { return rho * k.k_B * T / k.m; };
  spec.eps = [](double, double T, const PhysicalConstants& k) { return 1.5 * k.k_B * T / k.m; };
  return std::make_shared<UserModel>(spec);
}

}  // namespace ret14::testing
