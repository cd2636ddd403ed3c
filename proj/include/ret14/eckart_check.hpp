#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ret14/closure.hpp"
#include "ret14/covariant.hpp"
#include "ret14/state_models.hpp"

namespace ret14 {

/// A spacetime point with the equilibrium fields and their first partials.
///
/// grad_rho and grad_T are covariant (d_a rho); grad_U[a][b] = d_a U^b.
struct FieldPoint {
  ThermalState state;
  FourVector U;
  FourVector grad_rho;
  FourVector grad_T;
  Matrix4 grad_U{};
  // Coordinates (x^0, x^1) the point was sampled at; reporting only.
  double x0 = 0.0;
  double x1 = 0.0;

  // Throws NormalizationError / ValidationError unless U.U = c^2 and
  // U_b d_a U^b = 0 for every a (to tol, relative).
  void validate(double c, double tol = 1e-10) const;
};

struct MaterialDerivatives {
  double rho_dot = 0.0;
  double T_dot = 0.0;
  FourVector U_dot;  // contravariant, orthogonal to U
};

/// Proper-time derivatives from the equilibrium conservation laws:
/// rho_dot = -rho theta, T_dot = -(T p_T / e_T) theta,
/// U_dot^b = -(c^2/(e+p)) h^{mb} (p_rho d_m rho + p_T d_m T).
/// Throws DegeneracyError when e_T = 0 or e + p = 0.
MaterialDerivatives eliminate_material_derivatives(const FieldPoint& pt, const StateModel& model,
                                                   const PhysicalConstants& k);

/// Eckart's constitutive laws evaluated with the eliminated acceleration:
/// pi = -nu theta, q_b = -chi h^a_b (d_a T - T Udot_a / c^2),
/// t_<bd>3 = 2 mu h^a_b h^m_d d_<a U_m>3. Returned contravariant.
NoneqFields eckart_constitutive(const FieldPoint& pt, const TransportCoefficients& transport,
                                const StateModel& model, const PhysicalConstants& k);

struct ProjectionResiduals {
  // U_b U_c R^bc / c^2, h_bd U_c R^bc / c and the 3-deviatoric projection of
  // R^bc = d_a A_E^{a<bc>} - I^<bc>. All carry the units of rho c^3 / length.
  double trace = 0.0;
  FourVector heat;     // contravariant
  SymTensor2 shear;    // contravariant
  double heat_norm = 0.0;   // sqrt(-heat.heat)
  double shear_norm = 0.0;  // sqrt(shear_ab shear^ab)
  double scale = 0.0;       // rho c^3 max(|d rho|/rho, |d T|/T, |d U|/c)
  double compatibility_residual = 0.0;
  std::optional<std::string> warning;  // set for closures violating compatibility

  double max_relative() const;
};

/// Projections of the first Maxwellian iterate of the triple-tensor balance.
/// Proper-time derivatives of rho, T and U are replaced by their eliminated
/// values before the divergence is formed.
ProjectionResiduals projection_residuals(const FieldPoint& pt, const EquilibriumClosure& closure,
                                         const ProductionCoefficients& prod,
                                         const TransportCoefficients& transport,
                                         const StateModel& model, const PhysicalConstants& k,
                                         double compatibility_rel_tol = 1e-8);

/// d_a A_E^{a<bc>} with eliminated proper-time derivatives (contravariant).
SymTensor2 triple_divergence(const FieldPoint& pt, const ClosureValues& v,
                             const MaterialDerivatives& md, const PhysicalConstants& k);

/// Entropy production of the Eckart fields at the point.
double eckart_entropy_production(const FieldPoint& pt, const NoneqFields& fields,
                                 const MaterialDerivatives& md, const PhysicalConstants& k);

// --- field families ---------------------------------------------------------

// Counter-based stream: value i depends only on (seed, i).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t i) const;
  // Uniform in [0, 1).
  double uniform(std::uint64_t i) const;
  double uniform(std::uint64_t i, double lo, double hi) const { return lo + (hi - lo) * uniform(i); }
  // Standard normal (Box-Muller on draws 2i, 2i+1).
  double normal(std::uint64_t i) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

struct RandomPointOptions {
  double rho_min = 0.1;
  double rho_max = 10.0;
  double T_min = 0.1;
  double T_max = 10.0;
  double velocity_max = 0.6;  // |v| / c
  // Relative gradient magnitudes: |d rho|/rho, |d T|/T, |d U|/c.
  double gradient = 1.0;
};

/// Generic point: random boost, random gradients, d_a U^b projected so that
/// U_b d_a U^b = 0.
FieldPoint random_field_point(std::uint64_t seed, std::uint64_t index,
                              const RandomPointOptions& options, const PhysicalConstants& k);

/// rho = rho0 (1 + A bump), T = T0 (1 + B bump), bump = exp(-(x0^2 + x1^2)/(2 w^2)),
/// U = Gamma (c, v, 0, 0) with v = v0 c sin(kx x1 + kt x0 + phase).
struct BumpFamily {
  double rho0 = 1.0;
  double T0 = 1.0;
  double A = 0.1;
  double B = 0.1;
  double width = 1.0;
  double v0 = 0.3;  // amplitude in units of c
  double kx = 1.0;
  double kt = 0.5;
  double phase = 0.0;
  double extent = 2.0;  // sampling box |x0|, |x1| <= extent * width

  FieldPoint at(double x0, double x1, const PhysicalConstants& k) const;
  FieldPoint sample(std::uint64_t seed, std::uint64_t index, const PhysicalConstants& k) const;
};

}  // namespace ret14
