#include "ret14/classical_limit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ret14/errors.hpp"

namespace ret14 {

const std::array<LimitMapping, 6> kLimitMappings{{
    {"d_a V^a = 0", "d_t F + d_k F_k = 0", ""},
    {"d_a T^{ai} = 0", "d_t F_i + d_k F_ki = 0", ""},
    {"2 d_a (c T^{a0} - c^2 V^a) = 0", "d_t G_ll + d_k G_llk = 0", ""},
    {"d_a B^{a<ij>3} = I^{<ij>3}", "d_t H_<ij> + d_k H_k<ij> = P_<ij>", "a2_C"},
    {"d_a (-4 B^{aij} g_ij - 6 c T^{a0} + 3 c^2 V^a) = -4 I^{rs} g_rs",
     "d_t H_ll + d_k H_kll = P_ll", "a_C a3_C"},
    {"2 d_a (c B^{a0i} - c^2 T^{ai}) = 2 c I^{0i}", "d_t I_lli + d_k I_llik = Q_lli",
     "b_C a1_C"},
}};

namespace {

// Value at h = 0 of the interpolating polynomial through (h_i, y_i).
double neville_at_zero(std::span<const double> h, std::span<const double> y) {
  std::vector<double> p(y.begin(), y.end());
  const std::size_t n = p.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
    }
  }
  return p[0];
}

}  // namespace

LimitEstimate extrapolate_limit(std::string name, std::span<const double> c_values,
                                std::span<const double> sequence, double tol,
                                double noise_floor) {
  LimitEstimate out;
  out.name = std::move(name);
  out.c_values.assign(c_values.begin(), c_values.end());
  out.sequence.assign(sequence.begin(), sequence.end());
  const std::size_t n = sequence.size();
  if (n < 3 || c_values.size() != n) {
    throw DomainError("extrapolation needs at least three (c, value) pairs");
  }

  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = 1.0 / (c_values[i] * c_values[i]);

  bool finite = true;
  for (double v : sequence) finite = finite && std::isfinite(v);
  if (!finite) {
    out.value = std::numeric_limits<double>::quiet_NaN();
    out.error = std::numeric_limits<double>::infinity();
    out.diagnostic = "non-finite value in the sequence";
    out.step_errors.assign(n, 0.0);
    return out;
  }

  out.step_errors.assign(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    out.step_errors[k] =
        std::abs(sequence[k] - sequence[k - 1]) * h[k] / (h[k - 1] - h[k]);
  }

  out.value = neville_at_zero(h, sequence);
  const double reduced = neville_at_zero(std::span(h).subspan(1), sequence.subspan(1));
  out.error = std::abs(out.value - reduced);

  double vmax = 0.0;
  for (double v : sequence) vmax = std::max(vmax, std::abs(v));
  const double noise =
      std::max(64.0 * std::numeric_limits<double>::epsilon() * vmax, noise_floor);

  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double d = std::abs(sequence[k + 1] - sequence[k]);
    if (d > noise) {
      lx.push_back(0.5 * (std::log(c_values[k]) + std::log(c_values[k + 1])));
      ly.push_back(std::log(d));
    }
  }
  const bool tail_stationary =
      std::abs(sequence[n - 1] - sequence[n - 2]) <= noise;
  if (lx.empty() || tail_stationary) {
    // Reaches its limit to round-off within the sequence.
    out.exact = true;
    out.value = sequence.back();
    out.error = std::abs(sequence[n - 1] - sequence[n - 2]);
    out.diagnostic = lx.empty() ? "sequence constant to round-off"
                                : "sequence stationary to round-off at the largest c";
  } else if (lx.size() >= 2) {
    // Observed order from the two tail differences; earlier ones can still be
    // pre-asymptotic when the smallest c is only moderately relativistic.
    const std::size_t m = lx.size();
    out.rate = -(ly[m - 1] - ly[m - 2]) / (lx[m - 1] - lx[m - 2]);
  } else {
    out.diagnostic = "only one difference above round-off; rate not fitted";
  }

  const double scale = std::max(std::abs(out.value), vmax);
  const bool rate_ok = out.exact || (out.rate && *out.rate >= 1.8);
  const bool tail_ok = out.exact || out.error <= tol * scale;
  out.converged = rate_ok && tail_ok;
  if (!out.converged && out.diagnostic.empty()) {
    if (!rate_ok) {
      out.diagnostic = out.rate ? "fitted rate " + std::to_string(*out.rate) + " below 1.8"
                                : "rate unavailable";
    } else {
      out.diagnostic = "extrapolation error " + std::to_string(out.error) + " above tolerance";
    }
  }
  return out;
}

std::vector<double> default_c_sequence(const ThermalState& state, const PhysicalConstants& base) {
  const double c0 = std::sqrt(10.0 * base.k_B * state.T / base.m);
  return {c0, 2.0 * c0, 4.0 * c0, 8.0 * c0, 16.0 * c0};
}

namespace {

void check_sequence(std::span<const double> cs) {
  if (cs.size() < 3) throw DomainError("c sequence needs at least three values");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!(cs[i] > 0.0) || !std::isfinite(cs[i])) throw DomainError("c sequence must be positive");
    if (i > 0 && !(cs[i] > cs[i - 1])) {
      throw DomainError("c sequence must be strictly increasing");
    }
  }
}

PhysicalConstants with_c(const PhysicalConstants& base, double c) {
  PhysicalConstants k = base;
  k.c = c;
  return k;
}

}  // namespace

ClassicalCoefficients classical_coefficients(const EquilibriumClosure& closure,
                                             const StateModel& model,
                                             const TransportCoefficients& transport,
                                             const ThermalState& state,
                                             const PhysicalConstants& base,
                                             std::span<const double> cs, double tol) {
  check_sequence(cs);
  state.validate();
  const std::size_t n = cs.size();
  std::vector<double> va(n), vb(n), v1(n), v2(n), v3(n);
  // Each rescaled sequence is c^2 times a difference of larger terms; its
  // round-off grows with those terms and sets the floor for rate fitting.
  double ma = 0.0, mb = 0.0, m1 = 0.0, m3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const PhysicalConstants k = with_c(base, cs[i]);
    const double c2 = cs[i] * cs[i];
    const StateEvaluation ev = evaluate(model, state, k);
    const ClosureValues v = closure.evaluate(state, k);
    const ProductionCoefficients prod = production_coefficients(v, ev, state, transport, k);
    va[i] = 4.0 * v.a - state.rho * c2 - 2.0 * state.rho * ev.eps;
    vb[i] = 2.0 * c2 * (v.b - ev.p);
    v1[i] = 2.0 * c2 * prod.a1;
    v2[i] = -prod.a2;
    v3[i] = c2 * prod.a3;
    ma = std::max({ma, 4.0 * std::abs(v.a), state.rho * c2, 2.0 * state.rho * std::abs(ev.eps)});
    mb = std::max({mb, 2.0 * c2 * std::abs(v.b), 2.0 * c2 * std::abs(ev.p)});
    m1 = std::max(m1, 2.0 * c2 * std::max(std::abs(v.b_rho * ev.p_T), std::abs(v.b_T * ev.p_rho)) /
                          (std::abs(ev.p_rho) * transport.chi));
    m3 = std::max(m3, 4.0 / transport.nu *
                          std::max({std::abs(v.a), std::abs(v.b), std::abs(v.a_rho * state.rho),
                                    std::abs(v.a_T * state.T * ev.p_T / ev.e_T)}));
  }
  const double eps64 = 64.0 * std::numeric_limits<double>::epsilon();

  ClassicalCoefficients out;
  out.state = state;
  out.a_C = extrapolate_limit("a_C", cs, va, tol, eps64 * ma);
  out.b_C = extrapolate_limit("b_C", cs, vb, tol, eps64 * mb);
  out.a1_C = extrapolate_limit("a1_C", cs, v1, tol, eps64 * m1);
  out.a2_C = extrapolate_limit("a2_C", cs, v2, tol);
  out.a3_C = extrapolate_limit("a3_C", cs, v3, tol, eps64 * m3);

  double rate = std::numeric_limits<double>::infinity();
  for (const LimitEstimate* e : {&out.a_C, &out.b_C}) {
    if (e->rate) {
      rate = std::min(rate, *e->rate);
    } else if (!e->exact) {
      rate = std::numeric_limits<double>::quiet_NaN();
    }
  }
  out.convergence_rate = rate;
  out.converged = true;
  for (const LimitEstimate* e : out.all()) out.converged = out.converged && e->converged;

  const double gamma_max = with_c(base, cs.back()).gamma(state.T);
  if (gamma_max < 100.0) {
    out.warnings.push_back("gamma at the largest c is " + std::to_string(gamma_max) +
                           " < 100; the sequence may not be in the asymptotic regime");
  }
  return out;
}

LimitEstimate classical_compatibility_residual(const ClassicalCoefficients& coeffs,
                                               const EquilibriumClosure& closure,
                                               const StateModel& model,
                                               const PhysicalConstants& base,
                                               std::span<const double> cs, double tol) {
  check_sequence(cs);
  const ThermalState& s = coeffs.state;
  const double classical_pressure = s.rho * base.k_B * s.T / base.m;
  std::vector<double> seq(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const PhysicalConstants k = with_c(base, cs[i]);
    seq[i] = 4.0 * compatibility_residual(closure, s, model, k) / classical_pressure;
  }
  // Residuals are differences of terms of size rho c^2; below this they are noise.
  const double floor = 256.0 * std::numeric_limits<double>::epsilon() * s.rho * cs.back() *
                       cs.back() / classical_pressure;
  LimitEstimate out = extrapolate_limit("compatibility", cs, seq, tol, floor);
  if (!coeffs.converged) {
    out.converged = false;
    out.diagnostic = "classical coefficients did not converge";
  }
  return out;
}

}  // namespace ret14
