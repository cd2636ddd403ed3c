#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ret14/closure.hpp"
#include "ret14/eckart_check.hpp"
#include "ret14/errors.hpp"
#include "ret14/state_models.hpp"

namespace ret14 {

/// Malformed or inconsistent configuration. pointer() is a JSON pointer to
/// the offending value ("" for the document root).
class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& what)
      : Error((pointer.empty() ? std::string("/") : pointer) + ": " + what),
        pointer_(std::move(pointer)) {}
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

struct GridAxis {
  double min = 1.0;
  double max = 1.0;
  int count = 1;
  bool log = true;

  std::vector<double> points() const;
};

struct GridSpec {
  GridAxis rho{0.1, 10.0, 20, true};
  GridAxis T{0.01, 10.0, 20, true};

  // Row-major (rho outer, T inner).
  std::vector<ThermalState> states() const;
};

struct FieldCheckSpec {
  int points = 100;
  std::uint64_t seed = 20240101;
  std::string family = "random";  // "random" or "bump"
  RandomPointOptions random;      // state bounds default to the grid bounds
  BumpFamily bump;
};

struct ClassicalSpec {
  ThermalState state{1.0, 1.0};
  std::optional<double> c0;  // default: gamma(c0) = 10
  std::vector<double> factors{1.0, 2.0, 4.0, 8.0, 16.0};

  std::vector<double> c_sequence(const PhysicalConstants& base) const;
};

struct Tolerances {
  double compatibility = 1e-8;  // relative to max(|a|, |b|, rho c^2)
  double production = 1e-9;     // relative, generic vs reference form
  double heatflux = 1e-9;       // relative to the largest term
  double projection = 1e-8;     // relative to rho c^3 max gradient
  double main_field = 1e-10;    // relative to max(|a|, rho c^2)
  double classical = 1e-6;      // limit residual relative to rho k_B T / m
  double convexity = 1e-12;     // eigenvalue threshold after Jacobi scaling
};

struct OutputSpec {
  std::optional<std::string> report;
  bool lmr_columns = true;
};

inline const std::vector<std::string> kSuiteNames{
    "compatibility", "production", "heatflux", "projection",
    "main_field",    "convexity",  "classical_limit"};

struct RunConfig {
  std::string canonical;  // normalized JSON text the hash is computed from
  std::uint64_t hash = 0;

  PhysicalConstants constants;
  std::string model_kind;
  StateModelPtr model;
  std::string closure_kind;
  ClosurePtr closure;
  // Set only for unperturbed built-ins; drives the reference production forms.
  std::optional<BuiltinClosureKind> builtin;
  BuiltinClosureOptions builtin_options;
  Perturbation perturbation;

  TransportCoefficients transport;
  GridSpec grid;
  FieldCheckSpec field_check;
  ClassicalSpec classical;
  Tolerances tolerances;
  OutputSpec output;
  std::vector<std::string> suites;  // default: all
};

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view data);

/// Parse and validate. Throws ConfigError with a JSON pointer for malformed
/// documents, unknown keys, bad values and model/closure mismatches.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace ret14
