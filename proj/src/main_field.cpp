#include "ret14/main_field.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "ret14/errors.hpp"

namespace ret14 {

MainFieldEq equilibrium_main_field(const ThermalState& state, const FourVector& U,
                                   const StateModel& model, const PhysicalConstants& k) {
  check_normalized(U, k.c);
  const StateEvaluation ev = evaluate(model, state, k);
  const EntropyEvaluation s = gibbs_entropy(model, state, k);

  MainFieldEq mf;
  mf.g_r = (ev.e + ev.p) / state.rho - state.T * s.S;
  mf.lambda = -mf.g_r / state.T;
  mf.lambda_vec = (1.0 / state.T) * U;
  mf.G0 = k.c * k.c / (state.T * state.T);
  return mf;
}

MainFieldDerivatives chain_rule_derivatives(const ScalarField& f, const StateEvaluation& ev,
                                            const ThermalState& s, const PhysicalConstants& k) {
  if (ev.p_rho == 0.0 || !std::isfinite(ev.p_rho)) {
    throw SingularDerivativeError("p_rho vanishes at rho = " + std::to_string(s.rho) +
                                  ", T = " + std::to_string(s.T));
  }
  const double x = ev.e + ev.p - s.T * ev.p_T;
  MainFieldDerivatives d;
  d.d_lambda = -f.d_rho * s.T * s.rho / ev.p_rho;
  d.d_G0 = -(s.T * s.T / (2.0 * k.c * k.c * ev.p_rho)) * (f.d_rho * x + f.d_T * ev.p_rho * s.T);
  return d;
}

MainFieldDerivatives chain_rule_derivatives(const ScalarField& f, const ThermalState& state,
                                            const StateModel& model, const PhysicalConstants& k) {
  return chain_rule_derivatives(f, evaluate(model, state, k), state, k);
}

ScalarField gamma1_field(double b, double b_rho, double b_T, const ThermalState& s) {
  return ScalarField{-2.0 * s.T * b, -2.0 * s.T * b_rho, -2.0 * b - 2.0 * s.T * b_T};
}

PotentialCoefficients potential_coefficients(double b, double b_rho, double b_T,
                                             const ThermalState& state, const StateModel& model,
                                             const PhysicalConstants& k) {
  const StateEvaluation ev = evaluate(model, state, k);
  const ScalarField g1 = gamma1_field(b, b_rho, b_T, state);
  const MainFieldDerivatives d = chain_rule_derivatives(g1, ev, state, k);
  return PotentialCoefficients{-ev.p, g1.value, d.d_G0, d.d_lambda};
}

double a_from_gamma1(double b, double b_rho, double b_T, const ThermalState& s,
                     const StateModel& model, const PhysicalConstants& k) {
  const StateEvaluation ev = evaluate(model, s, k);
  if (ev.p_rho == 0.0 || !std::isfinite(ev.p_rho)) {
    throw SingularDerivativeError("p_rho vanishes at rho = " + std::to_string(s.rho) +
                                  ", T = " + std::to_string(s.T));
  }
  const ScalarField g1 = gamma1_field(b, b_rho, b_T, s);
  const double x = ev.e + ev.p - s.T * ev.p_T;
  return 0.25 * (g1.value / s.T -
                 (g1.d_rho * x + g1.d_T * ev.p_rho * s.T) / (2.0 * s.T * ev.p_rho));
}

double a_from_potential(const PotentialCoefficients& pc, const ThermalState& s,
                        const PhysicalConstants& k) {
  return 0.25 * (pc.Gamma1 / s.T + pc.dGamma1_dG0 * k.c * k.c / (s.T * s.T * s.T));
}

double dgamma1_dG0_for(double a, double Gamma1, const ThermalState& s, const PhysicalConstants& k) {
  return (4.0 * a - Gamma1 / s.T) * s.T * s.T * s.T / (k.c * k.c);
}

namespace {

struct EulerMap {
  // drho = r_l dlambda + r_0 dlambda_0, dT = t_0 dlambda_0,
  // de = e_l dlambda + e_0 dlambda_0, dU^i = -T dlambda_i.
  double r_l, r_0, t_0, e_l, e_0, ep, T, c;
};

EulerMap euler_map(const ThermalState& s, const StateModel& model, const PhysicalConstants& k) {
  const StateEvaluation ev = evaluate(model, s, k);
  if (ev.p_rho == 0.0 || !std::isfinite(ev.p_rho)) {
    throw SingularDerivativeError("p_rho vanishes: main field does not determine rho");
  }
  const double c = k.c;
  const double x = ev.e + ev.p - s.T * ev.p_T;
  EulerMap m{};
  m.t_0 = -s.T * s.T / c;
  m.r_l = -s.rho * s.T / ev.p_rho;
  m.r_0 = x * m.t_0 / (ev.p_rho * s.T);
  m.e_l = ev.e_rho * m.r_l;
  m.e_0 = ev.e_rho * m.r_0 + ev.e_T * m.t_0;
  m.ep = ev.e + ev.p;
  m.T = s.T;
  m.c = c;
  return m;
}

}  // namespace

double euler_quadratic_form(const std::array<double, 5>& d, const ThermalState& state,
                            const StateModel& model, const PhysicalConstants& k) {
  const EulerMap m = euler_map(state, model, k);
  const double drho = m.r_l * d[0] + m.r_0 * d[1];
  const double de = m.e_l * d[0] + m.e_0 * d[1];
  double q = m.c * m.c * d[0] * drho + m.c * d[1] * de;
  for (std::size_t i = 2; i < 5; ++i) {
    const double dU = -m.T * d[i];
    q += m.c * d[i] * (m.ep * dU / m.c);
  }
  return q;
}

ConvexityReport euler_convexity(const ThermalState& state, const StateModel& model,
                                const PhysicalConstants& k, double threshold) {
  const EulerMap m = euler_map(state, model, k);
  std::array<std::array<double, 5>, 5> n{};
  n[0][0] = m.c * m.c * m.r_l;
  n[0][1] = m.c * m.c * m.r_0;
  n[1][0] = m.c * m.e_l;
  n[1][1] = m.c * m.e_0;
  for (std::size_t i = 2; i < 5; ++i) n[i][i] = -m.ep * m.T;

  ConvexityReport r;
  const double off = std::max(std::abs(n[0][1]), std::abs(n[1][0]));
  r.asymmetry = off > 0.0 ? std::abs(n[0][1] - n[1][0]) / off : 0.0;

  Eigen::Matrix<double, 5, 5> H;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      r.hessian[i][j] = 0.5 * (n[i][j] + n[j][i]);
      H(i, j) = r.hessian[i][j];
    }

  // Jacobi scaling is a congruence, so the inertia is unchanged.
  Eigen::Matrix<double, 5, 1> scale;
  for (int i = 0; i < 5; ++i) {
    const double d = std::abs(H(i, i));
    scale(i) = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
  }
  const Eigen::Matrix<double, 5, 5> Hs = scale.asDiagonal() * H * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> solver(Hs, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  double emax = 0.0;
  for (int i = 0; i < 5; ++i) emax = std::max(emax, std::abs(ev(i)));
  const double tol = threshold * std::max(1.0, emax);
  for (int i = 0; i < 5; ++i) {
    r.eigenvalues[i] = ev(i);
    if (ev(i) < -tol) {
      ++r.n_negative;
    } else if (ev(i) > tol) {
      ++r.n_positive;
    } else {
      ++r.n_zero;
    }
  }
  r.negative_definite = r.n_negative == 5;
  return r;
}

}  // namespace ret14
