#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ret14/closure.hpp"
#include "ret14/state_models.hpp"

namespace ret14 {

/// One rescaled coefficient followed along increasing c and extrapolated to
/// 1/c^2 -> 0.
struct LimitEstimate {
  std::string name;
  std::vector<double> c_values;
  std::vector<double> sequence;
  // First-order Richardson correction at each c (empty entry 0 for the first).
  std::vector<double> step_errors;
  double value = 0.0;
  double error = 0.0;           // |full extrapolant - extrapolant without the smallest c|
  std::optional<double> rate;   // observed exponent of |v_{k+1} - v_k| ~ c^-rate at the tail
  bool exact = false;           // sequence constant to round-off
  bool converged = false;
  std::string diagnostic;
};

/// Neville extrapolation in h = 1/c^2 to h = 0, with rate fitting.
/// converged requires rate >= 1.8 (or an exact sequence) and
/// error <= tol * max(|value|, max_k |sequence_k|). Differences below
/// noise_floor (or 64 eps max|sequence|) count as round-off.
LimitEstimate extrapolate_limit(std::string name, std::span<const double> c_values,
                                std::span<const double> sequence, double tol = 1e-6,
                                double noise_floor = 0.0);

/// Classical coefficients at a fixed (rho, T):
/// a_C = lim (4a - rho c^2 - 2 rho eps), b_C = lim 2c^2 (b - p),
/// a1_C = lim 2c^2 a1, a2_C = lim (-a2), a3_C = lim c^2 a3.
struct ClassicalCoefficients {
  ThermalState state;
  LimitEstimate a_C;
  LimitEstimate b_C;
  LimitEstimate a1_C;
  LimitEstimate a2_C;
  LimitEstimate a3_C;
  double convergence_rate = 0.0;  // smallest fitted rate among a_C, b_C
  bool converged = false;         // all five converged
  std::vector<std::string> warnings;

  std::array<const LimitEstimate*, 5> all() const { return {&a_C, &b_C, &a1_C, &a2_C, &a3_C}; }
};

// c0 sqrt-scaled so that gamma(c0) = 10, times {1, 2, 4, 8, 16}.
std::vector<double> default_c_sequence(const ThermalState& state, const PhysicalConstants& base);

/// The closure and the model are re-evaluated with base constants whose c is
/// replaced by each entry of c_sequence. Throws DomainError unless the sequence
/// is strictly increasing with at least three entries.
ClassicalCoefficients classical_coefficients(const EquilibriumClosure& closure,
                                             const StateModel& model,
                                             const TransportCoefficients& transport,
                                             const ThermalState& state,
                                             const PhysicalConstants& base,
                                             std::span<const double> c_sequence,
                                             double tol = 1e-6);

/// Extrapolated limit of 4 (a - a_compatible) divided by rho k_B T / m. When
/// coeffs did not converge the result is flagged non-converged as well.
LimitEstimate classical_compatibility_residual(const ClassicalCoefficients& coeffs,
                                               const EquilibriumClosure& closure,
                                               const StateModel& model,
                                               const PhysicalConstants& base,
                                               std::span<const double> c_sequence,
                                               double tol = 1e-6);

/// Which relativistic combination turns into which classical balance law, and
/// which classical coefficients it carries. Used to label report rows.
struct LimitMapping {
  const char* relativistic;
  const char* classical;
  const char* coefficients;
};
extern const std::array<LimitMapping, 6> kLimitMappings;

}  // namespace ret14
