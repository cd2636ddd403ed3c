#include "ret14/eckart_check.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ret14/errors.hpp"

namespace ret14 {

void FieldPoint::validate(double c, double tol) const {
  state.validate();
  check_normalized(U, c, tol);
  double gmax = 0.0;
  for (const auto& row : grad_U)
    for (double v : row) gmax = std::max(gmax, std::abs(v));
  const double ulen = std::max(std::abs(U[0]), c);
  for (std::size_t a = 0; a < 4; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < 4; ++b) s += kMetricDiag[b] * U[b] * grad_U[a][b];
    if (std::abs(s) > tol * ulen * gmax) {
      throw ValidationError("field point: U_b d_a U^b = " + std::to_string(s) + " for a = " +
                            std::to_string(a));
    }
  }
}

MaterialDerivatives eliminate_material_derivatives(const FieldPoint& pt, const StateModel& model,
                                                   const PhysicalConstants& k) {
  const StateEvaluation ev = evaluate(model, pt.state, k);
  if (ev.e_T == 0.0 || !std::isfinite(ev.e_T)) throw DegeneracyError("e_T = 0: T_dot undefined");
  const double ep = ev.e + ev.p;
  if (ep == 0.0 || !std::isfinite(ep)) throw DegeneracyError("e + p = 0: U_dot undefined");

  double theta = 0.0;
  for (std::size_t a = 0; a < 4; ++a) theta += pt.grad_U[a][a];

  MaterialDerivatives md;
  md.rho_dot = -pt.state.rho * theta;
  md.T_dot = -(pt.state.T * ev.p_T / ev.e_T) * theta;

  const SymTensor2 h = projector(pt.U, k.c);
  const double c2 = k.c * k.c;
  for (std::size_t b = 0; b < 4; ++b) {
    double s = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      s += h(m, b) * (ev.p_rho * pt.grad_rho[m] + ev.p_T * pt.grad_T[m]);
    }
    md.U_dot[b] = -(c2 / ep) * s;
  }
  return md;
}

namespace {

// Perpendicular projector Pi^m_a = delta^m_a - U^m U_a / c^2 applied as
// (Pi v)^m for contravariant v.
FourVector perp(const FourVector& v, const FourVector& U, double c) {
  const double s = dot(U, v) / (c * c);
  FourVector out = v;
  for (std::size_t i = 0; i < 4; ++i) out[i] -= s * U[i];
  return out;
}

// Pi M Pi^T for a contravariant symmetric tensor.
SymTensor2 perp(const SymTensor2& m, const FourVector& U, double c) {
  const FourVector Ul = lower(U);
  const double c2 = c * c;
  std::array<std::array<double, 4>, 4> pi{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) pi[i][j] = (i == j ? 1.0 : 0.0) - U[i] * Ul[j] / c2;
  SymTensor2 out;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) s += pi[i][a] * pi[j][b] * m(a, b);
      out(i, j) = s;
    }
  }
  return out;
}

}  // namespace

NoneqFields eckart_constitutive(const FieldPoint& pt, const TransportCoefficients& transport,
                                const StateModel& model, const PhysicalConstants& k) {
  transport.validate();
  const MaterialDerivatives md = eliminate_material_derivatives(pt, model, k);
  const double c = k.c;
  const double c2 = c * c;
  const SymTensor2 h = projector(pt.U, c);

  NoneqFields f;
  double theta = 0.0;
  for (std::size_t a = 0; a < 4; ++a) theta += pt.grad_U[a][a];
  f.pi = -transport.nu * theta;

  // X_a = d_a T - (T/c^2) Udot_a, covariant; q^b = -chi h^{ab} X_a.
  const FourVector udot_l = lower(md.U_dot);
  FourVector X;
  for (std::size_t a = 0; a < 4; ++a) X[a] = pt.grad_T[a] - (pt.state.T / c2) * udot_l[a];
  for (std::size_t b = 0; b < 4; ++b) {
    double s = 0.0;
    for (std::size_t a = 0; a < 4; ++a) s += h(a, b) * X[a];
    f.q[b] = -transport.chi * s;
  }

  // S_am = sym(d_a U_m), covariant.
  double S[4][4];
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t m = 0; m < 4; ++m)
      S[a][m] = 0.5 * (kMetricDiag[m] * pt.grad_U[a][m] + kMetricDiag[a] * pt.grad_U[m][a]);
  double hS = 0.0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t m = 0; m < 4; ++m) hS += h(a, m) * S[a][m];
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t d = b; d < 4; ++d) {
      double s = 0.0;
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t m = 0; m < 4; ++m) s += h(a, b) * h(m, d) * S[a][m];
      f.t(b, d) = 2.0 * transport.mu * (s - h(b, d) * hS / 3.0);
    }
  }
  return f;
}

SymTensor2 triple_divergence(const FieldPoint& pt, const ClosureValues& v,
                             const MaterialDerivatives& md, const PhysicalConstants& k) {
  const double c = k.c;
  const double c2 = c * c;
  const FourVector& U = pt.U;
  const FourVector Ul = lower(U);

  // Gradients with the time-like part replaced by the eliminated derivative:
  // d~_a f = d_a f + (U_a/c^2)(f_dot - U^n d_n f).
  double rho_conv = 0.0;
  double T_conv = 0.0;
  FourVector U_conv;
  for (std::size_t n = 0; n < 4; ++n) {
    rho_conv += U[n] * pt.grad_rho[n];
    T_conv += U[n] * pt.grad_T[n];
    for (std::size_t m = 0; m < 4; ++m) U_conv[m] += U[n] * pt.grad_U[n][m];
  }
  FourVector drho;
  FourVector dT;
  Matrix4 W{};
  for (std::size_t a = 0; a < 4; ++a) {
    drho[a] = pt.grad_rho[a] + Ul[a] / c2 * (md.rho_dot - rho_conv);
    dT[a] = pt.grad_T[a] + Ul[a] / c2 * (md.T_dot - T_conv);
    for (std::size_t m = 0; m < 4; ++m)
      W[a][m] = pt.grad_U[a][m] + Ul[a] / c2 * (md.U_dot[m] - U_conv[m]);
  }

  const Rank3 A_rho = triple_tensor(v.a_rho, v.b_rho, U, c);
  const Rank3 A_T = triple_tensor(v.a_T, v.b_T, U, c);

  double theta = 0.0;
  FourVector udot;
  for (std::size_t a = 0; a < 4; ++a) {
    theta += W[a][a];
    for (std::size_t m = 0; m < 4; ++m) udot[m] += U[a] * W[a][m];
  }
  const double f = (4.0 * v.a + 2.0 * v.b) / c2;

  SymTensor2 D;
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t g = b; g < 4; ++g) {
      double s = 0.0;
      for (std::size_t a = 0; a < 4; ++a) s += A_rho(a, b, g) * drho[a] + A_T(a, b, g) * dT[a];
      // dA/dU^m contracted with W_a^m for the expanded polynomial
      // (4a+2b)/c^2 UUU - a U^a g^bc - b (g^ac U^b + g^ab U^c).
      s += f * (theta * U[b] * U[g] + udot[b] * U[g] + U[b] * udot[g]);
      s -= v.a * theta * metric(b, g);
      s -= v.b * (kMetricDiag[g] * W[g][b] + kMetricDiag[b] * W[b][g]);
      D(b, g) = s;
    }
  }
  return D;
}

double ProjectionResiduals::max_relative() const {
  const double m = std::max({std::abs(trace), heat_norm, shear_norm});
  if (scale == 0.0) return m;
  return m / scale;
}

ProjectionResiduals projection_residuals(const FieldPoint& pt, const EquilibriumClosure& closure,
                                         const ProductionCoefficients& prod,
                                         const TransportCoefficients& transport,
                                         const StateModel& model, const PhysicalConstants& k,
                                         double compatibility_rel_tol) {
  k.validate();
  pt.validate(k.c);
  const double c = k.c;
  const double c2 = c * c;
  const StateEvaluation ev = evaluate(model, pt.state, k);
  const ClosureValues v = closure.evaluate(pt.state, k);
  const MaterialDerivatives md = eliminate_material_derivatives(pt, model, k);
  const NoneqFields fields = eckart_constitutive(pt, transport, model, k);

  const SymTensor2 R = triple_divergence(pt, v, md, k) - assemble_production(prod, fields, pt.U, c);

  ProjectionResiduals out;
  const FourVector& U = pt.U;
  out.trace = contract(R, U, U) / c2;

  const FourVector Y = (1.0 / c) * contract(R, U);
  out.heat = -1.0 * perp(Y, U, c);
  out.heat_norm = std::sqrt(std::max(0.0, -dot(out.heat, out.heat)));

  const SymTensor2 h = projector(U, c);
  const double hR = out.trace - trace(R);  // h_bc R^bc
  out.shear = perp(R, U, c) - (hR / 3.0) * h;
  out.shear_norm = std::sqrt(std::max(0.0, full_contract(out.shear, out.shear)));

  double g = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    g = std::max(g, std::abs(pt.grad_rho[a]) / pt.state.rho);
    g = std::max(g, std::abs(pt.grad_T[a]) / pt.state.T);
    for (std::size_t m = 0; m < 4; ++m) g = std::max(g, std::abs(pt.grad_U[a][m]) / c);
  }
  out.scale = pt.state.rho * c2 * c * g;

  out.compatibility_residual = compatibility_residual(v, ev, pt.state);
  const double tol = compatibility_tolerance(v, pt.state, k, compatibility_rel_tol);
  if (std::abs(out.compatibility_residual) > tol) {
    out.warning = "closure '" + closure.provenance() +
                  "' violates the compatibility condition at this point (residual " +
                  std::to_string(out.compatibility_residual) + ", tolerance " +
                  std::to_string(tol) + "); heat projection is not expected to vanish";
  }
  return out;
}

double eckart_entropy_production(const FieldPoint& pt, const NoneqFields& fields,
                                 const MaterialDerivatives& md, const PhysicalConstants& k) {
  return entropy_production(pt.state.T, fields, pt.grad_T, pt.grad_U, md.U_dot, k.c);
}

// --- random streams ---------------------------------------------------------

std::uint64_t CounterRng::bits(std::uint64_t i) const {
  // splitmix64 finalizer over (seed, stream, i)
  std::uint64_t z = seed_ + 0x9E3779B97F4A7C15ULL * (i + 1) + 0xD1B54A32D192ED03ULL * stream_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform(std::uint64_t i) const {
  return static_cast<double>(bits(i) >> 11) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t i) const {
  const double u1 = 1.0 - uniform(2 * i);  // (0, 1]
  const double u2 = uniform(2 * i + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

FieldPoint random_field_point(std::uint64_t seed, std::uint64_t index,
                              const RandomPointOptions& o, const PhysicalConstants& k) {
  const CounterRng rng(seed, index);
  std::uint64_t n = 0;
  const double c = k.c;

  FieldPoint pt;
  pt.state.rho = std::exp(rng.uniform(n++, std::log(o.rho_min), std::log(o.rho_max)));
  pt.state.T = std::exp(rng.uniform(n++, std::log(o.T_min), std::log(o.T_max)));

  std::array<double, 3> dir{};
  double len = 0.0;
  for (double& d : dir) {
    d = rng.normal(n++);
    len += d * d;
  }
  len = std::sqrt(len);
  const double speed = o.velocity_max * c * rng.uniform(n++);
  std::array<double, 3> v{};
  for (std::size_t i = 0; i < 3; ++i) v[i] = len > 0.0 ? speed * dir[i] / len : 0.0;
  pt.U = velocity_from_three(v, c);

  const double g = o.gradient;
  for (std::size_t a = 0; a < 4; ++a) {
    pt.grad_rho[a] = g * pt.state.rho * rng.uniform(n++, -1.0, 1.0);
    pt.grad_T[a] = g * pt.state.T * rng.uniform(n++, -1.0, 1.0);
  }
  const FourVector Ul = lower(pt.U);
  for (std::size_t a = 0; a < 4; ++a) {
    FourVector M;
    for (std::size_t b = 0; b < 4; ++b) M[b] = g * c * rng.uniform(n++, -1.0, 1.0);
    double um = 0.0;
    for (std::size_t b = 0; b < 4; ++b) um += Ul[b] * M[b];
    for (std::size_t b = 0; b < 4; ++b) pt.grad_U[a][b] = M[b] - pt.U[b] * um / (c * c);
  }
  return pt;
}

FieldPoint BumpFamily::at(double x0, double x1, const PhysicalConstants& k) const {
  const double c = k.c;
  const double w2 = width * width;
  const double bump = std::exp(-(x0 * x0 + x1 * x1) / (2.0 * w2));
  const double db[2] = {-x0 / w2 * bump, -x1 / w2 * bump};

  FieldPoint pt;
  pt.x0 = x0;
  pt.x1 = x1;
  pt.state.rho = rho0 * (1.0 + A * bump);
  pt.state.T = T0 * (1.0 + B * bump);
  for (std::size_t a = 0; a < 2; ++a) {
    pt.grad_rho[a] = rho0 * A * db[a];
    pt.grad_T[a] = T0 * B * db[a];
  }

  const double phi = kx * x1 + kt * x0 + phase;
  const double v = v0 * c * std::sin(phi);
  const double dv[2] = {v0 * c * std::cos(phi) * kt, v0 * c * std::cos(phi) * kx};
  const double lorentz = 1.0 / std::sqrt(1.0 - v * v / (c * c));
  const double l3 = lorentz * lorentz * lorentz;
  pt.U = FourVector{{lorentz * c, lorentz * v, 0.0, 0.0}};
  for (std::size_t a = 0; a < 2; ++a) {
    pt.grad_U[a][0] = c * l3 * v * dv[a] / (c * c);
    pt.grad_U[a][1] = l3 * dv[a];
  }
  return pt;
}

FieldPoint BumpFamily::sample(std::uint64_t seed, std::uint64_t index,
                              const PhysicalConstants& k) const {
  const CounterRng rng(seed, index);
  const double L = extent * width;
  return at(rng.uniform(0, -L, L), rng.uniform(1, -L, L), k);
}

}  // namespace ret14
