#pragma once

#include <memory>
#include <string>

#include "ret14/covariant.hpp"
#include "ret14/gamma_function.hpp"
#include "ret14/state_models.hpp"

namespace ret14 {

// Heat conductivity chi, shear viscosity mu, bulk viscosity nu.
struct TransportCoefficients {
  double chi = 1.0;
  double mu = 1.0;
  double nu = 1.0;

  // All must be non-negative; finite.
  void validate() const;
};

// a, b of the equilibrium triple tensor and their first derivatives.
struct ClosureValues {
  double a = 0.0;
  double b = 0.0;
  double a_rho = 0.0;
  double a_T = 0.0;
  double b_rho = 0.0;
  double b_T = 0.0;
};

/// Equilibrium closure: the scalar pair a(rho, T), b(rho, T).
class EquilibriumClosure {
 public:
  virtual ~EquilibriumClosure() = default;

  virtual ClosureValues evaluate(const ThermalState& state,
                                 const PhysicalConstants& constants) const = 0;
  // "monatomic_juttner", "geroch_lindblom", ..., or "user".
  virtual std::string provenance() const = 0;
};

using ClosurePtr = std::shared_ptr<const EquilibriumClosure>;

// a = rho c^2 (1/4 + G/gamma), b = rho c^2 G / gamma.
class MonatomicJuttnerClosure final : public EquilibriumClosure {
 public:
  ClosureValues evaluate(const ThermalState& state, const PhysicalConstants& k) const override;
  std::string provenance() const override { return "monatomic_juttner"; }
};

// a = (1/4) c^2 rho (1/gamma^2 + omega/gamma + omega^2 - omega'),
// b = c^2 rho (gamma omega + 1) / gamma^2.
class PolyatomicAcprClosure final : public EquilibriumClosure {
 public:
  explicit PolyatomicAcprClosure(GammaFunctionPtr omega);
  ClosureValues evaluate(const ThermalState& state, const PhysicalConstants& k) const override;
  std::string provenance() const override { return "polyatomic_acpr"; }

 private:
  GammaFunctionPtr omega_;
};

// b = rho c^2 beta(gamma) linear in rho; a from the compatibility condition in
// its polyatomic form a = (1/4)(b (e/p - 1) + T b_T) with e/p = gamma omega.
class PolyatomicPrClosure final : public EquilibriumClosure {
 public:
  PolyatomicPrClosure(GammaFunctionPtr beta, GammaFunctionPtr omega);
  ClosureValues evaluate(const ThermalState& state, const PhysicalConstants& k) const override;
  std::string provenance() const override { return "polyatomic_pr"; }

 private:
  GammaFunctionPtr beta_;
  GammaFunctionPtr omega_;
};

// a = c1, b = c2 T - 4 c1. (c1, c2) = (0, 1) is a = 0, b = T.
class GerochLindblomClosure final : public EquilibriumClosure {
 public:
  explicit GerochLindblomClosure(double c1 = 0.0, double c2 = 1.0) : c1_(c1), c2_(c2) {}
  ClosureValues evaluate(const ThermalState& state, const PhysicalConstants& k) const override;
  std::string provenance() const override { return "geroch_lindblom"; }

  double c1() const { return c1_; }
  double c2() const { return c2_; }

 private:
  double c1_;
  double c2_;
};

struct UserClosureSpec {
  StateFunction a;
  StateFunction b;
  StateFunction a_rho;
  StateFunction a_T;
  StateFunction b_rho;
  StateFunction b_T;
};

// Caller-supplied a and b; missing derivatives use central differences.
class UserClosure final : public EquilibriumClosure {
 public:
  explicit UserClosure(UserClosureSpec spec);
  ClosureValues evaluate(const ThermalState& state, const PhysicalConstants& k) const override;
  std::string provenance() const override { return "user"; }

 private:
  UserClosureSpec spec_;
};

// Caller supplies b only; a is completed from the compatibility condition for
// the given state model, its derivatives by central differences.
class CompletedClosure final : public EquilibriumClosure {
 public:
  CompletedClosure(StateFunction b, StateModelPtr model, StateFunction b_rho = {},
                   StateFunction b_T = {});
  ClosureValues evaluate(const ThermalState& state, const PhysicalConstants& k) const override;
  std::string provenance() const override { return "user"; }

 private:
  double a_at(double rho, double T, const PhysicalConstants& k) const;

  StateFunction b_;
  StateFunction b_rho_;
  StateFunction b_T_;
  StateModelPtr model_;
};

struct Perturbation {
  double scale_a = 1.0;
  double scale_b = 1.0;
  // Additive shift of a in units of the classical pressure rho k_B T / m.
  double shift_a = 0.0;

  bool is_identity() const { return scale_a == 1.0 && scale_b == 1.0 && shift_a == 0.0; }
};

// a -> scale_a a + shift_a rho k_B T / m, b -> scale_b b.
class PerturbedClosure final : public EquilibriumClosure {
 public:
  PerturbedClosure(ClosurePtr base, Perturbation perturbation);
  ClosureValues evaluate(const ThermalState& state, const PhysicalConstants& k) const override;
  std::string provenance() const override { return base_->provenance() + "+perturbed"; }

 private:
  ClosurePtr base_;
  Perturbation perturbation_;
};

enum class BuiltinClosureKind { MonatomicJuttner, PolyatomicPr, PolyatomicAcpr, GerochLindblom };

struct BuiltinClosureOptions {
  GammaFunctionPtr omega;  // required for the polyatomic kinds
  GammaFunctionPtr beta;   // required for polyatomic_pr
  double c1 = 0.0;         // geroch_lindblom
  double c2 = 1.0;
};

// Throws MissingModelError for polyatomic kinds without omega (or beta).
ClosurePtr builtin_closure(BuiltinClosureKind kind, const BuiltinClosureOptions& options = {});

// --- compatibility ----------------------------------------------------------

/// (1/4){-b + (e + p - T p_T) b_rho / p_rho + T b_T}: the value of a for which
/// the first Maxwellian iterate reproduces the Eckart laws.
double compatible_a(double b, double b_rho, double b_T, const StateEvaluation& ev,
                    const ThermalState& state);

/// a - compatible_a(b, ...). Throws SingularDerivativeError when p_rho = 0.
double compatibility_residual(const ClosureValues& v, const StateEvaluation& ev,
                              const ThermalState& state);
double compatibility_residual(const EquilibriumClosure& closure, const ThermalState& state,
                              const StateModel& model, const PhysicalConstants& k);

// Default "compatible" tolerance rel * max(|a|, |b|, rho c^2).
double compatibility_tolerance(const ClosureValues& v, const ThermalState& state,
                               const PhysicalConstants& k, double rel = 1e-8);

double a_from_b(double b, double b_rho, double b_T, const ThermalState& state,
                const StateModel& model, const PhysicalConstants& k);

// --- production coefficients ------------------------------------------------

/// a1 = (b_rho p_T - b_T p_rho)/(p_rho chi), a2 = -b/mu,
/// a3 = -(4/(c^2 nu)) [a + 2b/3 - a_rho rho - (a_T/e_T) T p_T].
///
/// Throws DivisionError naming a zero transport coefficient and
/// SingularDerivativeError for p_rho = 0 or e_T = 0.
ProductionCoefficients production_coefficients(const ClosureValues& v, const StateEvaluation& ev,
                                               const ThermalState& state,
                                               const TransportCoefficients& transport,
                                               const PhysicalConstants& k);
ProductionCoefficients production_coefficients(const EquilibriumClosure& closure,
                                               const ThermalState& state, const StateModel& model,
                                               const TransportCoefficients& transport,
                                               const PhysicalConstants& k);

// Closed forms for the Juttner gas with the monatomic closure.
ProductionCoefficients monatomic_production_closed_form(const ThermalState& state,
                                                        const TransportCoefficients& transport,
                                                        const PhysicalConstants& k);

// Specialisation for closures and equations of state linear in rho with
// p = rho c^2 / gamma: a1 = -(4a - b e/p)/(chi T), a2 = -b/mu,
// a3 = -(4/(c^2 nu)) (2b/3 - (a_T/e_T) p).
ProductionCoefficients linear_in_rho_production(const ClosureValues& v, const StateEvaluation& ev,
                                                const ThermalState& state,
                                                const TransportCoefficients& transport,
                                                const PhysicalConstants& k);

// Symbols of the classical monatomic literature: B1^pi = -a3 c^2/4, B4 = a1, B3 = a2.
struct LmrSymbols {
  double B1_pi = 0.0;
  double B3 = 0.0;
  double B4 = 0.0;
};
LmrSymbols lmr_symbols(const ProductionCoefficients& prod, const PhysicalConstants& k);

// --- heat-flux conditions ---------------------------------------------------

struct HeatfluxResiduals {
  double r1 = 0.0;  // (e+p) b_rho - (4a+b) p_rho - chi a1 T p_rho
  double r2 = 0.0;  // (e+p) b_T - (4a+b) p_T + chi a1 (e + p - T p_T)
  double scale1 = 0.0;  // largest magnitude among the terms of r1
  double scale2 = 0.0;
};

HeatfluxResiduals heatflux_condition_residuals(const ClosureValues& v, double a1,
                                               const StateEvaluation& ev,
                                               const ThermalState& state,
                                               const TransportCoefficients& transport);
// a1 taken from production_coefficients.
HeatfluxResiduals heatflux_condition_residuals(const EquilibriumClosure& closure,
                                               const ThermalState& state, const StateModel& model,
                                               const TransportCoefficients& transport,
                                               const PhysicalConstants& k);

}  // namespace ret14
