#pragma once

#include <array>
#include <functional>

#include "ret14/closure.hpp"
#include "ret14/covariant.hpp"
#include "ret14/state_models.hpp"

namespace ret14 {

/// Equilibrium main field: lambda = -g_r/T, lambda^b = U^b/T, G0 = c^2/T^2,
/// g_r = (e + p)/rho - T S.
struct MainFieldEq {
  double lambda = 0.0;
  FourVector lambda_vec;  // contravariant
  double G0 = 0.0;
  double g_r = 0.0;
};

// Propagates IntegrabilityError from user models.
MainFieldEq equilibrium_main_field(const ThermalState& state, const FourVector& U,
                                   const StateModel& model, const PhysicalConstants& k);

// A scalar of (rho, T) with its first partials.
struct ScalarField {
  double value = 0.0;
  double d_rho = 0.0;
  double d_T = 0.0;
};

struct MainFieldDerivatives {
  double d_lambda = 0.0;  // at fixed G0
  double d_G0 = 0.0;      // at fixed lambda
};

/// (rho, T) partials to (lambda, G0) partials:
/// df/dlambda = -f_rho T rho / p_rho,
/// df/dG0 = -(T^2/(2 c^2 p_rho)) (f_rho (e + p - T p_T) + f_T p_rho T).
/// Throws SingularDerivativeError for p_rho = 0.
MainFieldDerivatives chain_rule_derivatives(const ScalarField& f, const ThermalState& state,
                                            const StateModel& model, const PhysicalConstants& k);
MainFieldDerivatives chain_rule_derivatives(const ScalarField& f, const StateEvaluation& ev,
                                            const ThermalState& state, const PhysicalConstants& k);

/// Gamma0 = -p, Gamma1 = -2 T b and the (lambda, G0) partials of Gamma1.
struct PotentialCoefficients {
  double Gamma0 = 0.0;
  double Gamma1 = 0.0;
  double dGamma1_dG0 = 0.0;
  double dGamma1_dlambda = 0.0;
};

// Gamma1 = -2 T b as a ScalarField.
ScalarField gamma1_field(double b, double b_rho, double b_T, const ThermalState& state);

PotentialCoefficients potential_coefficients(double b, double b_rho, double b_T,
                                             const ThermalState& state, const StateModel& model,
                                             const PhysicalConstants& k);

/// a = (1/4){Gamma1/T - (Gamma1_rho (e+p-T p_T) + Gamma1_T p_rho T)/(2 T p_rho)}
/// with Gamma1 = -2 T b.
double a_from_gamma1(double b, double b_rho, double b_T, const ThermalState& state,
                     const StateModel& model, const PhysicalConstants& k);

/// a = (1/4)(Gamma1/T + dGamma1/dG0 c^2/T^3), the same quantity through the
/// (lambda, G0) partial.
double a_from_potential(const PotentialCoefficients& pc, const ThermalState& state,
                        const PhysicalConstants& k);

// dGamma1/dG0 that makes a_from_potential return the given a.
double dgamma1_dG0_for(double a, double Gamma1, const ThermalState& state,
                       const PhysicalConstants& k);

// --- Euler-subsystem convexity ---------------------------------------------

struct ConvexityReport {
  bool negative_definite = false;
  int n_negative = 0;
  int n_zero = 0;
  int n_positive = 0;
  std::array<double, 5> eigenvalues{};  // of the Jacobi-scaled form, ascending
  // Q in the variables (dlambda, dlambda_0, dlambda_1, dlambda_2, dlambda_3)
  // at rest; covariant lambda_b.
  std::array<std::array<double, 5>, 5> hessian{};
  double asymmetry = 0.0;  // relative size of the antisymmetric part before symmetrising
};

/// The quadratic form U_a (dlambda dV^a + dlambda_b dT^ab) at rest, restricted
/// to the equilibrium variables. Negative definite iff p_rho > 0 and e_T > 0.
ConvexityReport euler_convexity(const ThermalState& state, const StateModel& model,
                                const PhysicalConstants& k, double threshold = 1e-12);

// Q evaluated directly for a perturbation of the main field.
double euler_quadratic_form(const std::array<double, 5>& delta, const ThermalState& state,
                            const StateModel& model, const PhysicalConstants& k);

}  // namespace ret14
