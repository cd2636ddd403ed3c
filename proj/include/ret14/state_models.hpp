#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "ret14/gamma_function.hpp"

namespace ret14 {

// Natural units by default.
struct PhysicalConstants {
  double c = 1.0;
  double m = 1.0;
  double k_B = 1.0;

  void validate() const;
  // gamma = m c^2 / (k_B T)
  double gamma(double T) const { return m * c * c / (k_B * T); }
  double temperature(double gamma) const { return m * c * c / (k_B * gamma); }
};

struct ThermalState {
  double rho = 1.0;  // rest-frame mass density
  double T = 1.0;

  void validate() const;
};

struct StateEvaluation {
  double p = 0.0;
  double e = 0.0;    // rho (c^2 + eps)
  double eps = 0.0;  // internal energy per unit mass
  std::optional<double> S;  // entropy per unit mass; empty for user models

  double p_rho = 0.0;
  double p_T = 0.0;
  double e_rho = 0.0;
  double e_T = 0.0;
  double eps_rho = 0.0;
  double eps_T = 0.0;  // c_V

  bool mechanically_stable() const { return p_rho > 0.0; }
  bool thermally_stable() const { return e_T > 0.0; }
};

struct EntropyEvaluation {
  double S = 0.0;
  double S_rho = 0.0;
  double S_T = 0.0;
};

/// Thermal and caloric equations of state p(rho, T), e(rho, T).
///
/// Implementations are immutable; evaluation is safe from multiple threads.
class StateModel {
 public:
  virtual ~StateModel() = default;

  virtual StateEvaluation evaluate(const ThermalState& state,
                                   const PhysicalConstants& constants) const = 0;
  virtual EntropyEvaluation entropy(const ThermalState& state,
                                    const PhysicalConstants& constants) const = 0;
  virtual std::string name() const = 0;
};

using StateModelPtr = std::shared_ptr<const StateModel>;

// Validating entry points.
StateEvaluation evaluate(const StateModel& model, const ThermalState& state,
                         const PhysicalConstants& constants);
EntropyEvaluation gibbs_entropy(const StateModel& model, const ThermalState& state,
                                const PhysicalConstants& constants);

// Integrability of the Gibbs relation, e_rho - (e + p - T p_T)/rho, written in
// the cancellation-free form rho * [eps_rho - (p - T p_T)/rho^2] and divided by
// max(|rho eps_rho|, p/rho, |T p_T|/rho).
double gibbs_residual(const StateEvaluation& ev, const ThermalState& state);

/// Gas with e = rho c^2 omega(gamma), p = rho c^2 / gamma.
///
/// Covers the Juttner gas (omega = G - 1/gamma) and the polyatomic models
/// whose internal-mode content is summarised by omega.
class PolyatomicModel : public StateModel {
 public:
  explicit PolyatomicModel(GammaFunctionPtr omega, std::string name = "polyatomic");

  StateEvaluation evaluate(const ThermalState& state,
                           const PhysicalConstants& constants) const override;
  EntropyEvaluation entropy(const ThermalState& state,
                            const PhysicalConstants& constants) const override;
  std::string name() const override { return name_; }

  const GammaFunction& omega() const { return *omega_; }
  const GammaFunctionPtr& omega_ptr() const { return omega_; }

 private:
  GammaFunctionPtr omega_;
  std::string name_;
};

// Relativistic monatomic non-degenerate gas: e = rho c^2 (G - 1/gamma).
class JuttnerModel final : public PolyatomicModel {
 public:
  JuttnerModel();
};

using StateFunction = std::function<double(double rho, double T, const PhysicalConstants&)>;

struct UserModelSpec {
  std::string name = "user";
  StateFunction p;
  StateFunction eps;
  // Optional analytic derivatives; missing ones use central differences.
  StateFunction p_rho;
  StateFunction p_T;
  StateFunction eps_rho;
  StateFunction eps_T;
  // Entropy is path-integrated from here: first along T at rho_ref, then
  // along rho at the target T. S(reference) = 0.
  ThermalState reference{1.0, 1.0};
  double integrability_tol = 1e-6;
};

/// State model built from caller-supplied p(rho, T) and eps(rho, T).
class UserModel final : public StateModel {
 public:
  explicit UserModel(UserModelSpec spec);

  StateEvaluation evaluate(const ThermalState& state,
                           const PhysicalConstants& constants) const override;
  // Throws IntegrabilityError when the Gibbs relation fails along the path.
  EntropyEvaluation entropy(const ThermalState& state,
                            const PhysicalConstants& constants) const override;
  std::string name() const override { return spec_.name; }

 private:
  UserModelSpec spec_;
};

// Central difference with the cube-root-of-epsilon relative step.
double central_difference(const std::function<double(double)>& f, double x);

}  // namespace ret14
