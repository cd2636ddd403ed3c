#include "ret14/state_models.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "ret14/errors.hpp"

namespace ret14 {

void PhysicalConstants::validate() const {
  if (!(c > 0.0) || !(m > 0.0) || !(k_B > 0.0) || !std::isfinite(c) || !std::isfinite(m) ||
      !std::isfinite(k_B)) {
    throw DomainError("physical constants c, m, k_B must be finite and strictly positive");
  }
}

void ThermalState::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("thermal state: rho must be positive, got " + std::to_string(rho));
  }
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw DomainError("thermal state: T must be positive, got " + std::to_string(T));
  }
}

double central_difference(const std::function<double(double)>& f, double x) {
  const double rel = std::cbrt(std::numeric_limits<double>::epsilon());
  double h = rel * std::max(std::abs(x), 1.0e-300);
  if (x == 0.0) h = rel;
  volatile double xp = x + h;  // make the step exactly representable
  h = xp - x;
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

StateEvaluation evaluate(const StateModel& model, const ThermalState& state,
                         const PhysicalConstants& constants) {
  state.validate();
  constants.validate();
  return model.evaluate(state, constants);
}

EntropyEvaluation gibbs_entropy(const StateModel& model, const ThermalState& state,
                                const PhysicalConstants& constants) {
  state.validate();
  constants.validate();
  return model.entropy(state, constants);
}

double gibbs_residual(const StateEvaluation& ev, const ThermalState& state) {
  const double rho = state.rho;
  const double r = rho * ev.eps_rho - (ev.p - state.T * ev.p_T) / rho;
  const double scale =
      std::max({std::abs(rho * ev.eps_rho), std::abs(ev.p) / rho, std::abs(state.T * ev.p_T) / rho,
                std::numeric_limits<double>::min()});
  return r / scale;
}

PolyatomicModel::PolyatomicModel(GammaFunctionPtr omega, std::string name)
    : omega_(std::move(omega)), name_(std::move(name)) {
  if (!omega_) throw MissingModelError("polyatomic model requires an omega(gamma) function");
}

StateEvaluation PolyatomicModel::evaluate(const ThermalState& state,
                                          const PhysicalConstants& k) const {
  const double c2 = k.c * k.c;
  const double gamma = k.gamma(state.T);
  const double w = omega_->value(gamma);
  const double w1 = omega_->d1(gamma);

  StateEvaluation ev;
  ev.p = state.rho * c2 / gamma;
  ev.p_rho = c2 / gamma;
  ev.p_T = ev.p / state.T;
  ev.eps = c2 * (w - 1.0);
  ev.e = state.rho * c2 * w;
  ev.eps_rho = 0.0;
  // d gamma / dT = -gamma / T
  ev.eps_T = -c2 * gamma * w1 / state.T;
  ev.e_rho = c2 * w;
  ev.e_T = state.rho * ev.eps_T;
  ev.S = entropy(state, k).S;
  return ev;
}

// T dS = d eps - p/rho^2 d rho with eps = c^2 (omega - 1) gives
// S = (k_B/m) [gamma omega - int omega dgamma - ln rho].
EntropyEvaluation PolyatomicModel::entropy(const ThermalState& state,
                                           const PhysicalConstants& k) const {
  const double gamma = k.gamma(state.T);
  const double kbm = k.k_B / k.m;
  EntropyEvaluation out;
  out.S = kbm * (gamma * omega_->value(gamma) - omega_->antiderivative(gamma) -
                 std::log(state.rho));
  out.S_T = -k.c * k.c * gamma * omega_->d1(gamma) / (state.T * state.T);
  out.S_rho = -kbm / state.rho;
  return out;
}

JuttnerModel::JuttnerModel() : PolyatomicModel(std::make_shared<JuttnerOmega>(), "juttner") {}

UserModel::UserModel(UserModelSpec spec) : spec_(std::move(spec)) {
  if (!spec_.p || !spec_.eps) {
    throw MissingModelError("user model requires both p(rho, T) and eps(rho, T)");
  }
  spec_.reference.validate();
  if (!(spec_.integrability_tol > 0.0)) {
    throw DomainError("user model: integrability tolerance must be positive");
  }
}

StateEvaluation UserModel::evaluate(const ThermalState& state,
                                    const PhysicalConstants& k) const {
  const double rho = state.rho;
  const double T = state.T;
  const auto partial_rho = [&](const StateFunction& f, const StateFunction& df) {
    if (df) return df(rho, T, k);
    return central_difference([&](double r) { return f(r, T, k); }, rho);
  };
  const auto partial_T = [&](const StateFunction& f, const StateFunction& df) {
    if (df) return df(rho, T, k);
    return central_difference([&](double t) { return f(rho, t, k); }, T);
  };

  StateEvaluation ev;
  ev.p = spec_.p(rho, T, k);
  ev.eps = spec_.eps(rho, T, k);
  ev.p_rho = partial_rho(spec_.p, spec_.p_rho);
  ev.p_T = partial_T(spec_.p, spec_.p_T);
  ev.eps_rho = partial_rho(spec_.eps, spec_.eps_rho);
  ev.eps_T = partial_T(spec_.eps, spec_.eps_T);
  const double c2 = k.c * k.c;
  ev.e = rho * (c2 + ev.eps);
  ev.e_rho = c2 + ev.eps + rho * ev.eps_rho;
  ev.e_T = rho * ev.eps_T;

  for (double v : {ev.p, ev.eps, ev.p_rho, ev.p_T, ev.eps_rho, ev.eps_T}) {
    if (!std::isfinite(v)) {
      throw EvaluationError(spec_.name + ": non-finite equation of state at T = " +
                                std::to_string(T),
                            "rho", rho);
    }
  }
  return ev;
}

EntropyEvaluation UserModel::entropy(const ThermalState& state,
                                     const PhysicalConstants& k) const {
  const ThermalState& ref = spec_.reference;
  const ThermalState corner{ref.rho, state.T};
  for (const ThermalState& s : {state, corner, ref}) {
    const double r = gibbs_residual(evaluate(s, k), s);
    if (!(std::abs(r) <= spec_.integrability_tol)) {
      throw IntegrabilityError(spec_.name + ": Gibbs relation not integrable at rho = " +
                               std::to_string(s.rho) + ", T = " + std::to_string(s.T) +
                               " (relative residual " + std::to_string(r) + ")");
    }
  }

  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr unsigned kDepth = 12;
  constexpr double kTol = 1e-12;

  // Leg 1: rho = rho_ref, T_ref -> T. dS = eps_T / T dT = eps_T d(ln T).
  const double leg_T = Quad::integrate(
      [&](double u) {
        const double t = std::exp(u);
        return evaluate(ThermalState{ref.rho, t}, k).eps_T;
      },
      std::log(ref.T), std::log(state.T), kDepth, kTol);

  // Leg 2: T fixed, rho_ref -> rho. dS = (eps_rho - p/rho^2)/T drho.
  const double leg_rho = Quad::integrate(
      [&](double v) {
        const double r = std::exp(v);
        const auto ev = evaluate(ThermalState{r, state.T}, k);
        return (ev.eps_rho * r - ev.p / r) / state.T;
      },
      std::log(ref.rho), std::log(state.rho), kDepth, kTol);

  const auto ev = evaluate(state, k);
  EntropyEvaluation out;
  out.S = leg_T + leg_rho;
  out.S_T = ev.eps_T / state.T;
  out.S_rho = (ev.eps_rho - ev.p / (state.rho * state.rho)) / state.T;
  return out;
}

}  // namespace ret14
