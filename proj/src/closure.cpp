#include "ret14/closure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ret14/errors.hpp"
#include "ret14/special_functions.hpp"

namespace ret14 {

void TransportCoefficients::validate() const {
  if (!(chi >= 0.0) || !(mu >= 0.0) || !(nu >= 0.0) || !std::isfinite(chi) ||
      !std::isfinite(mu) || !std::isfinite(nu)) {
    throw DomainError("transport coefficients chi, mu, nu must be finite and non-negative");
  }
}

ClosureValues MonatomicJuttnerClosure::evaluate(const ThermalState& s,
                                                const PhysicalConstants& k) const {
  const double c2 = k.c * k.c;
  const double gamma = k.gamma(s.T);
  const BesselRatio r = bessel_ratio_derivatives(gamma);
  const double g = r.g;
  const double g1 = r.d1;
  const double rc2 = s.rho * c2;

  ClosureValues v;
  v.b = rc2 * g / gamma;
  v.a = rc2 * (0.25 + g / gamma);
  v.a_rho = v.a / s.rho;
  v.b_rho = v.b / s.rho;
  // d(G/gamma)/dgamma * dgamma/dT with dgamma/dT = -gamma/T
  v.b_T = -rc2 * (g1 - g / gamma) / s.T;
  v.a_T = v.b_T;
  return v;
}

PolyatomicAcprClosure::PolyatomicAcprClosure(GammaFunctionPtr omega) : omega_(std::move(omega)) {
  if (!omega_) throw MissingModelError("polyatomic_acpr closure requires omega(gamma)");
}

ClosureValues PolyatomicAcprClosure::evaluate(const ThermalState& s,
                                              const PhysicalConstants& k) const {
  const double gamma = k.gamma(s.T);
  const double w = omega_->value(gamma);
  const double w1 = omega_->d1(gamma);
  const double w2 = omega_->d2(gamma);
  const double ig = 1.0 / gamma;
  const double rc2 = s.rho * k.c * k.c;

  const double A = ig * ig + w * ig + w * w - w1;
  const double dA = -2.0 * ig * ig * ig + w1 * ig - w * ig * ig + 2.0 * w * w1 - w2;
  const double B = w * ig + ig * ig;
  const double dB = w1 * ig - w * ig * ig - 2.0 * ig * ig * ig;
  const double dgamma_dT = -gamma / s.T;

  ClosureValues v;
  v.a = 0.25 * rc2 * A;
  v.b = rc2 * B;
  v.a_rho = v.a / s.rho;
  v.b_rho = v.b / s.rho;
  v.a_T = 0.25 * rc2 * dA * dgamma_dT;
  v.b_T = rc2 * dB * dgamma_dT;
  return v;
}

PolyatomicPrClosure::PolyatomicPrClosure(GammaFunctionPtr beta, GammaFunctionPtr omega)
    : beta_(std::move(beta)), omega_(std::move(omega)) {
  if (!omega_) throw MissingModelError("polyatomic_pr closure requires omega(gamma)");
  if (!beta_) throw MissingModelError("polyatomic_pr closure requires b profile beta(gamma)");
}

// With b = rho c^2 beta and e/p = gamma omega:
//   a = (1/4) rho c^2 [beta (gamma omega - 1) - gamma beta'].
ClosureValues PolyatomicPrClosure::evaluate(const ThermalState& s,
                                            const PhysicalConstants& k) const {
  const double gamma = k.gamma(s.T);
  const double be = beta_->value(gamma);
  const double be1 = beta_->d1(gamma);
  const double be2 = beta_->d2(gamma);
  const double w = omega_->value(gamma);
  const double w1 = omega_->d1(gamma);
  const double rc2 = s.rho * k.c * k.c;
  const double dgamma_dT = -gamma / s.T;

  const double A = be * (gamma * w - 1.0) - gamma * be1;
  const double dA = be1 * (gamma * w - 1.0) + be * (w + gamma * w1) - be1 - gamma * be2;

  ClosureValues v;
  v.b = rc2 * be;
  v.b_rho = v.b / s.rho;
  v.b_T = rc2 * be1 * dgamma_dT;
  v.a = 0.25 * rc2 * A;
  v.a_rho = v.a / s.rho;
  v.a_T = 0.25 * rc2 * dA * dgamma_dT;
  return v;
}

ClosureValues GerochLindblomClosure::evaluate(const ThermalState& s,
                                              const PhysicalConstants&) const {
  ClosureValues v;
  v.a = c1_;
  v.b = c2_ * s.T - 4.0 * c1_;
  v.b_T = c2_;
  return v;
}

UserClosure::UserClosure(UserClosureSpec spec) : spec_(std::move(spec)) {
  if (!spec_.a || !spec_.b) throw MissingModelError("user closure requires a(rho, T) and b(rho, T)");
}

ClosureValues UserClosure::evaluate(const ThermalState& s, const PhysicalConstants& k) const {
  const auto d_rho = [&](const StateFunction& f, const StateFunction& df) {
    if (df) return df(s.rho, s.T, k);
    return central_difference([&](double r) { return f(r, s.T, k); }, s.rho);
  };
  const auto d_T = [&](const StateFunction& f, const StateFunction& df) {
    if (df) return df(s.rho, s.T, k);
    return central_difference([&](double t) { return f(s.rho, t, k); }, s.T);
  };
  ClosureValues v;
  v.a = spec_.a(s.rho, s.T, k);
  v.b = spec_.b(s.rho, s.T, k);
  v.a_rho = d_rho(spec_.a, spec_.a_rho);
  v.a_T = d_T(spec_.a, spec_.a_T);
  v.b_rho = d_rho(spec_.b, spec_.b_rho);
  v.b_T = d_T(spec_.b, spec_.b_T);
  return v;
}

CompletedClosure::CompletedClosure(StateFunction b, StateModelPtr model, StateFunction b_rho,
                                   StateFunction b_T)
    : b_(std::move(b)), b_rho_(std::move(b_rho)), b_T_(std::move(b_T)), model_(std::move(model)) {
  if (!b_) throw MissingModelError("completed closure requires b(rho, T)");
  if (!model_) throw MissingModelError("completed closure requires a state model");
}

double CompletedClosure::a_at(double rho, double T, const PhysicalConstants& k) const {
  const double b = b_(rho, T, k);
  const double b_rho = b_rho_ ? b_rho_(rho, T, k)
                              : central_difference([&](double r) { return b_(r, T, k); }, rho);
  const double b_T =
      b_T_ ? b_T_(rho, T, k) : central_difference([&](double t) { return b_(rho, t, k); }, T);
  return a_from_b(b, b_rho, b_T, ThermalState{rho, T}, *model_, k);
}

ClosureValues CompletedClosure::evaluate(const ThermalState& s, const PhysicalConstants& k) const {
  ClosureValues v;
  v.b = b_(s.rho, s.T, k);
  v.b_rho = b_rho_ ? b_rho_(s.rho, s.T, k)
                   : central_difference([&](double r) { return b_(r, s.T, k); }, s.rho);
  v.b_T = b_T_ ? b_T_(s.rho, s.T, k)
               : central_difference([&](double t) { return b_(s.rho, t, k); }, s.T);
  v.a = a_from_b(v.b, v.b_rho, v.b_T, s, *model_, k);
  v.a_rho = central_difference([&](double r) { return a_at(r, s.T, k); }, s.rho);
  v.a_T = central_difference([&](double t) { return a_at(s.rho, t, k); }, s.T);
  return v;
}

PerturbedClosure::PerturbedClosure(ClosurePtr base, Perturbation perturbation)
    : base_(std::move(base)), perturbation_(perturbation) {
  if (!base_) throw MissingModelError("perturbed closure requires a base closure");
}

ClosureValues PerturbedClosure::evaluate(const ThermalState& s, const PhysicalConstants& k) const {
  ClosureValues v = base_->evaluate(s, k);
  const double kbm = k.k_B / k.m;
  const double sa = perturbation_.scale_a;
  const double sb = perturbation_.scale_b;
  const double shift = perturbation_.shift_a;
  v.a = sa * v.a + shift * s.rho * kbm * s.T;
  v.a_rho = sa * v.a_rho + shift * kbm * s.T;
  v.a_T = sa * v.a_T + shift * s.rho * kbm;
  v.b *= sb;
  v.b_rho *= sb;
  v.b_T *= sb;
  return v;
}

ClosurePtr builtin_closure(BuiltinClosureKind kind, const BuiltinClosureOptions& o) {
  switch (kind) {
    case BuiltinClosureKind::MonatomicJuttner:
      return std::make_shared<MonatomicJuttnerClosure>();
    case BuiltinClosureKind::PolyatomicAcpr:
      return std::make_shared<PolyatomicAcprClosure>(o.omega);
    case BuiltinClosureKind::PolyatomicPr:
      return std::make_shared<PolyatomicPrClosure>(o.beta, o.omega);
    case BuiltinClosureKind::GerochLindblom:
      return std::make_shared<GerochLindblomClosure>(o.c1, o.c2);
  }
  throw Error("unknown builtin closure kind");
}

namespace {

void require_p_rho(const StateEvaluation& ev, const ThermalState& s) {
  if (ev.p_rho == 0.0 || !std::isfinite(ev.p_rho)) {
    throw SingularDerivativeError("p_rho vanishes at rho = " + std::to_string(s.rho) +
                                  ", T = " + std::to_string(s.T));
  }
}

}  // namespace

double compatible_a(double b, double b_rho, double b_T, const StateEvaluation& ev,
                    const ThermalState& s) {
  require_p_rho(ev, s);
  const double x = ev.e + ev.p - s.T * ev.p_T;
  return 0.25 * (-b + x * b_rho / ev.p_rho + s.T * b_T);
}

double compatibility_residual(const ClosureValues& v, const StateEvaluation& ev,
                              const ThermalState& s) {
  return v.a - compatible_a(v.b, v.b_rho, v.b_T, ev, s);
}

double compatibility_residual(const EquilibriumClosure& closure, const ThermalState& s,
                              const StateModel& model, const PhysicalConstants& k) {
  const StateEvaluation ev = evaluate(model, s, k);
  return compatibility_residual(closure.evaluate(s, k), ev, s);
}

double compatibility_tolerance(const ClosureValues& v, const ThermalState& s,
                               const PhysicalConstants& k, double rel) {
  return rel * std::max({std::abs(v.a), std::abs(v.b), s.rho * k.c * k.c});
}

double a_from_b(double b, double b_rho, double b_T, const ThermalState& s, const StateModel& model,
                const PhysicalConstants& k) {
  return compatible_a(b, b_rho, b_T, evaluate(model, s, k), s);
}

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) throw DivisionError(name);
}

}  // namespace

ProductionCoefficients production_coefficients(const ClosureValues& v, const StateEvaluation& ev,
                                               const ThermalState& s,
                                               const TransportCoefficients& tr,
                                               const PhysicalConstants& k) {
  require_positive(tr.chi, "chi");
  require_positive(tr.mu, "mu");
  require_positive(tr.nu, "nu");
  require_p_rho(ev, s);
  if (ev.e_T == 0.0 || !std::isfinite(ev.e_T)) {
    throw SingularDerivativeError("e_T vanishes at rho = " + std::to_string(s.rho) +
                                  ", T = " + std::to_string(s.T));
  }
  ProductionCoefficients out;
  out.a1 = (v.b_rho * ev.p_T - v.b_T * ev.p_rho) / (ev.p_rho * tr.chi);
  out.a2 = -v.b / tr.mu;
  out.a3 = -4.0 / (k.c * k.c * tr.nu) *
           (v.a + 2.0 * v.b / 3.0 - v.a_rho * s.rho - (v.a_T / ev.e_T) * s.T * ev.p_T);
  return out;
}

ProductionCoefficients production_coefficients(const EquilibriumClosure& closure,
                                               const ThermalState& s, const StateModel& model,
                                               const TransportCoefficients& tr,
                                               const PhysicalConstants& k) {
  const StateEvaluation ev = evaluate(model, s, k);
  return production_coefficients(closure.evaluate(s, k), ev, s, tr, k);
}

// The heat-conduction coefficient carries gamma where the printed formula has
// a 1: gamma G' = -(gamma + 5G - gamma G^2) is what the general relation gives
// for b = rho c^2 G / gamma. Both coefficients are written through G' so the
// gamma + 5G - gamma G^2 cancellation happens inside the Bessel routine.
ProductionCoefficients monatomic_production_closed_form(const ThermalState& s,
                                                        const TransportCoefficients& tr,
                                                        const PhysicalConstants& k) {
  require_positive(tr.chi, "chi");
  require_positive(tr.mu, "mu");
  require_positive(tr.nu, "nu");
  const double gamma = k.gamma(s.T);
  const BesselRatio r = bessel_ratio_derivatives(gamma);
  const double g = r.g;
  const double g1 = r.d1;
  const double p = s.rho * k.c * k.c / gamma;

  ProductionCoefficients out;
  out.a1 = p / (tr.chi * s.T) * gamma * g1;
  out.a2 = -p * g / tr.mu;
  // 2G - 3(gamma + 6G - gamma G^2)/(gamma(gamma + 5G - gamma G^2) - 1)
  const double g2g1 = gamma * gamma * g1;
  const double num = -2.0 * g2g1 * g - 5.0 * g + 3.0 * gamma * g1;
  const double den = -g2g1 - 1.0;
  out.a3 = -4.0 * p / (3.0 * k.c * k.c * tr.nu) * (num / den);
  return out;
}

ProductionCoefficients linear_in_rho_production(const ClosureValues& v, const StateEvaluation& ev,
                                                const ThermalState& s,
                                                const TransportCoefficients& tr,
                                                const PhysicalConstants& k) {
  require_positive(tr.chi, "chi");
  require_positive(tr.mu, "mu");
  require_positive(tr.nu, "nu");
  ProductionCoefficients out;
  out.a1 = -(4.0 * v.a - v.b * ev.e / ev.p) / (tr.chi * s.T);
  out.a2 = -v.b / tr.mu;
  out.a3 = -4.0 / (k.c * k.c * tr.nu) * (2.0 * v.b / 3.0 - (v.a_T / ev.e_T) * ev.p);
  return out;
}

LmrSymbols lmr_symbols(const ProductionCoefficients& prod, const PhysicalConstants& k) {
  return LmrSymbols{-prod.a3 * k.c * k.c / 4.0, prod.a2, prod.a1};
}

HeatfluxResiduals heatflux_condition_residuals(const ClosureValues& v, double a1,
                                               const StateEvaluation& ev, const ThermalState& s,
                                               const TransportCoefficients& tr) {
  const double ep = ev.e + ev.p;
  const double x = ep - s.T * ev.p_T;
  const double four_ab = 4.0 * v.a + v.b;

  HeatfluxResiduals r;
  const double t1a = ep * v.b_rho;
  const double t1b = four_ab * ev.p_rho;
  const double t1c = tr.chi * a1 * s.T * ev.p_rho;
  r.r1 = t1a - t1b - t1c;
  r.scale1 = std::max({std::abs(t1a), std::abs(t1b), std::abs(t1c)});

  const double t2a = ep * v.b_T;
  const double t2b = four_ab * ev.p_T;
  const double t2c = tr.chi * a1 * x;
  r.r2 = t2a - t2b + t2c;
  r.scale2 = std::max({std::abs(t2a), std::abs(t2b), std::abs(t2c)});
  return r;
}

HeatfluxResiduals heatflux_condition_residuals(const EquilibriumClosure& closure,
                                               const ThermalState& s, const StateModel& model,
                                               const TransportCoefficients& tr,
                                               const PhysicalConstants& k) {
  const StateEvaluation ev = evaluate(model, s, k);
  const ClosureValues v = closure.evaluate(s, k);
  const ProductionCoefficients prod = production_coefficients(v, ev, s, tr, k);
  return heatflux_condition_residuals(v, prod.a1, ev, s, tr);
}

}  // namespace ret14
