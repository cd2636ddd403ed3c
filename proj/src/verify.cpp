#include "ret14/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include "ret14/classical_limit.hpp"
#include "ret14/eckart_check.hpp"
#include "ret14/main_field.hpp"

namespace ret14 {

using ojson = nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int default_thread_count() {
  if (const char* env = std::getenv("RET14_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(std::min(n, 256L));
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

struct Stats {
  double max = 0.0;
  double median = 0.0;
  std::size_t argmax = 0;
  std::size_t count = 0;
  std::size_t non_finite = 0;

  bool within(double tol) const { return non_finite == 0 && max <= tol; }
};

Stats statistics(const std::vector<double>& v) {
  Stats s;
  s.count = v.size();
  std::vector<double> finite;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      if (s.non_finite++ == 0) s.argmax = i;
      continue;
    }
    finite.push_back(v[i]);
    if (s.non_finite == 0 && v[i] > s.max) {
      s.max = v[i];
      s.argmax = i;
    }
  }
  if (!finite.empty()) {
    std::sort(finite.begin(), finite.end());
    const std::size_t m = finite.size() / 2;
    s.median = finite.size() % 2 ? finite[m] : 0.5 * (finite[m - 1] + finite[m]);
  }
  if (s.non_finite) s.max = std::numeric_limits<double>::infinity();
  return s;
}

ojson stats_json(const Stats& s, const char* scale) {
  ojson j;
  j["max"] = s.non_finite ? ojson("inf") : ojson(s.max);
  j["median"] = s.median;
  j["count"] = s.count;
  if (s.non_finite) j["non_finite"] = s.non_finite;
  j["scale"] = scale;
  return j;
}

ojson state_json(const ThermalState& s, const PhysicalConstants& k) {
  return ojson{{"rho", s.rho}, {"T", s.T}, {"gamma", k.gamma(s.T)}};
}

const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

std::string hex64(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Context {
  const RunConfig& cfg;
  int threads;
  std::vector<ThermalState> grid;

  const PhysicalConstants& k() const { return cfg.constants; }
  const StateModel& model() const { return *cfg.model; }
  const EquilibriumClosure& closure() const { return *cfg.closure; }
};

// --- compatibility -----------------------------------------------------------

ojson suite_compatibility(const Context& ctx) {
  const auto& k = ctx.k();
  std::vector<double> rel(ctx.grid.size());
  parallel_for(rel.size(), ctx.threads, [&](std::size_t i) {
    const ThermalState& s = ctx.grid[i];
    const ClosureValues v = ctx.closure().evaluate(s, k);
    const StateEvaluation ev = evaluate(ctx.model(), s, k);
    const double r = compatibility_residual(v, ev, s);
    const double scale = std::max({std::abs(v.a), std::abs(v.b), s.rho * k.c * k.c});
    rel[i] = std::abs(r) / scale;
  });
  const Stats st = statistics(rel);
  const double tol = ctx.cfg.tolerances.compatibility;
  ojson j;
  j["status"] = verdict(st.within(tol));
  j["tolerance"] = tol;
  j["statistics"] = stats_json(st, "max(|a|, |b|, rho c^2)");
  j["worst"] = state_json(ctx.grid[st.argmax], k);
  return j;
}

// --- production coefficients ---------------------------------------------------

enum class Reference { None, MonatomicClosedForm, LinearInRho, GerochLindblom };

Reference production_reference(const RunConfig& cfg) {
  if (!cfg.builtin) return Reference::None;
  if (*cfg.builtin == BuiltinClosureKind::GerochLindblom) return Reference::GerochLindblom;
  const bool linear = cfg.model_kind == "juttner" || cfg.model_kind == "polyatomic";
  if (*cfg.builtin == BuiltinClosureKind::MonatomicJuttner && cfg.model_kind == "juttner") {
    return Reference::MonatomicClosedForm;
  }
  return linear ? Reference::LinearInRho : Reference::None;
}

const char* reference_name(Reference r) {
  switch (r) {
    case Reference::MonatomicClosedForm:
      return "monatomic_closed_form";
    case Reference::LinearInRho:
      return "linear_in_rho";
    case Reference::GerochLindblom:
      return "geroch_lindblom_exact";
    case Reference::None:
      break;
  }
  return "none";
}

ProductionCoefficients reference_production(Reference r, const ClosureValues& v,
                                            const StateEvaluation& ev, const ThermalState& s,
                                            const TransportCoefficients& tr,
                                            const PhysicalConstants& k) {
  switch (r) {
    case Reference::MonatomicClosedForm:
      return monatomic_production_closed_form(s, tr, k);
    case Reference::LinearInRho:
      return linear_in_rho_production(v, ev, s, tr, k);
    case Reference::GerochLindblom: {
      // a constant, b linear in T with no rho dependence.
      ProductionCoefficients p;
      p.a1 = -v.b_T / tr.chi;
      p.a2 = -v.b / tr.mu;
      p.a3 = -4.0 / (k.c * k.c * tr.nu) * (v.a + 2.0 * v.b / 3.0);
      return p;
    }
    case Reference::None:
      break;
  }
  return {};
}

double rel_diff(double x, double ref) {
  const double d = std::abs(x - ref);
  if (d == 0.0) return 0.0;
  return d / std::max(std::abs(ref), std::numeric_limits<double>::min());
}

ojson suite_production(const Context& ctx) {
  const auto& k = ctx.k();
  const auto& tr = ctx.cfg.transport;
  tr.validate();
  const Reference ref = production_reference(ctx.cfg);
  const std::size_t n = ctx.grid.size();
  std::vector<double> rel(n);
  std::vector<ProductionCoefficients> gen(n);
  parallel_for(n, ctx.threads, [&](std::size_t i) {
    const ThermalState& s = ctx.grid[i];
    const ClosureValues v = ctx.closure().evaluate(s, k);
    const StateEvaluation ev = evaluate(ctx.model(), s, k);
    gen[i] = production_coefficients(v, ev, s, tr, k);
    if (ref == Reference::None) {
      const bool finite =
          std::isfinite(gen[i].a1) && std::isfinite(gen[i].a2) && std::isfinite(gen[i].a3);
      rel[i] = finite ? 0.0 : std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const ProductionCoefficients r = reference_production(ref, v, ev, s, tr, k);
    rel[i] = std::max({rel_diff(gen[i].a1, r.a1), rel_diff(gen[i].a2, r.a2),
                       rel_diff(gen[i].a3, r.a3)});
  });
  const Stats st = statistics(rel);
  const double tol = ctx.cfg.tolerances.production;

  std::size_t a2_non_negative = 0;
  for (const auto& p : gen) a2_non_negative += p.a2 >= 0.0;

  ojson j;
  if (ref == Reference::None) {
    j["status"] = st.non_finite ? "fail" : "skip";
    j["diagnostic"] = "no independent reference form for this closure/model pair; generic values "
                      "checked for finiteness only";
  } else {
    j["status"] = verdict(st.within(tol));
  }
  j["reference"] = reference_name(ref);
  j["tolerance"] = tol;
  j["statistics"] = stats_json(st, "relative to the reference coefficient");
  j["worst"] = state_json(ctx.grid[st.argmax], k);
  j["a2_negative_everywhere"] = a2_non_negative == 0;

  const std::size_t mid = n / 2;
  const LmrSymbols lmr = lmr_symbols(gen[mid], k);
  ojson sample = state_json(ctx.grid[mid], k);
  sample["a1"] = gen[mid].a1;
  sample["a2"] = gen[mid].a2;
  sample["a3"] = gen[mid].a3;
  sample["B1_pi"] = lmr.B1_pi;
  sample["B3"] = lmr.B3;
  sample["B4"] = lmr.B4;
  j["lmr_symbols"] = {{"mapping", "B1_pi = -a3 c^2 / 4, B3 = a2, B4 = a1"}, {"sample", sample}};
  return j;
}

// --- heat-flux conditions ---------------------------------------------------------

ojson suite_heatflux(const Context& ctx) {
  const auto& k = ctx.k();
  const auto& tr = ctx.cfg.transport;
  tr.validate();
  std::vector<double> rel(ctx.grid.size());
  parallel_for(rel.size(), ctx.threads, [&](std::size_t i) {
    const HeatfluxResiduals h =
        heatflux_condition_residuals(ctx.closure(), ctx.grid[i], ctx.model(), tr, k);
    const double e1 = h.scale1 > 0.0 ? std::abs(h.r1) / h.scale1 : std::abs(h.r1);
    const double e2 = h.scale2 > 0.0 ? std::abs(h.r2) / h.scale2 : std::abs(h.r2);
    rel[i] = std::max(e1, e2);
  });
  const Stats st = statistics(rel);
  const double tol = ctx.cfg.tolerances.heatflux;
  ojson j;
  j["status"] = verdict(st.within(tol));
  j["tolerance"] = tol;
  j["statistics"] = stats_json(st, "largest term of each condition");
  j["worst"] = state_json(ctx.grid[st.argmax], k);
  return j;
}

// --- projection residuals ----------------------------------------------------------

struct ProjectionRow {
  double x0 = 0.0;
  double x1 = 0.0;
  ThermalState state;
  double trace = 0.0;
  double heat = 0.0;
  double shear = 0.0;
  double scale = 0.0;
  double rel = 0.0;
  double sigma = 0.0;
  bool warning = false;
};

std::vector<ProjectionRow> projection_rows(const RunConfig& cfg, int threads) {
  const auto& k = cfg.constants;
  const auto& fc = cfg.field_check;
  cfg.transport.validate();
  std::vector<ProjectionRow> rows(static_cast<std::size_t>(fc.points));
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    const FieldPoint pt = fc.family == "bump" ? fc.bump.sample(fc.seed, i, k)
                                              : random_field_point(fc.seed, i, fc.random, k);
    const ProductionCoefficients prod =
        production_coefficients(*cfg.closure, pt.state, *cfg.model, cfg.transport, k);
    const ProjectionResiduals r = projection_residuals(pt, *cfg.closure, prod, cfg.transport,
                                                       *cfg.model, k, cfg.tolerances.compatibility);
    const MaterialDerivatives md = eliminate_material_derivatives(pt, *cfg.model, k);
    const NoneqFields f = eckart_constitutive(pt, cfg.transport, *cfg.model, k);
    ProjectionRow& row = rows[i];
    row.x0 = pt.x0;
    row.x1 = pt.x1;
    row.state = pt.state;
    row.trace = std::abs(r.trace);
    row.heat = r.heat_norm;
    row.shear = r.shear_norm;
    row.scale = r.scale;
    row.rel = r.max_relative();
    row.sigma = eckart_entropy_production(pt, f, md, k);
    row.warning = r.warning.has_value();
  });
  return rows;
}

ojson suite_projection(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::vector<ProjectionRow> rows = projection_rows(cfg, ctx.threads);
  std::vector<double> rel(rows.size());
  std::vector<double> trace(rows.size());
  std::vector<double> heat(rows.size());
  std::vector<double> shear(rows.size());
  double sigma_min = std::numeric_limits<double>::infinity();
  double sigma_max_abs = 0.0;
  std::size_t warnings = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    rel[i] = r.rel;
    trace[i] = r.scale > 0.0 ? r.trace / r.scale : r.trace;
    heat[i] = r.scale > 0.0 ? r.heat / r.scale : r.heat;
    shear[i] = r.scale > 0.0 ? r.shear / r.scale : r.shear;
    sigma_min = std::min(sigma_min, r.sigma);
    sigma_max_abs = std::max(sigma_max_abs, std::abs(r.sigma));
    warnings += r.warning;
  }
  const Stats st = statistics(rel);
  const double tol = cfg.tolerances.projection;
  const bool sigma_ok = sigma_min >= -1e-12 * sigma_max_abs;
  ojson j;
  j["status"] = verdict(st.within(tol) && sigma_ok);
  j["tolerance"] = tol;
  j["family"] = cfg.field_check.family;
  j["seed"] = cfg.field_check.seed;
  j["statistics"] = stats_json(st, "rho c^3 max(|d rho|/rho, |d T|/T, |d U|/c)");
  j["components"] = {{"trace", stats_json(statistics(trace), "same")},
                     {"heat", stats_json(statistics(heat), "same")},
                     {"shear", stats_json(statistics(shear), "same")}};
  if (!rows.empty()) {
    const auto& w = rows[st.argmax];
    j["worst"] = {{"x0", w.x0}, {"x1", w.x1}, {"rho", w.state.rho}, {"T", w.state.T}};
  }
  j["compatibility_warnings"] = warnings;
  j["entropy_production"] = {{"min", sigma_min},
                             {"max_abs", sigma_max_abs},
                             {"non_negative", sigma_ok}};
  return j;
}

// --- main-field identities -------------------------------------------------------

ojson suite_main_field(const Context& ctx) {
  const auto& k = ctx.k();
  const std::size_t n = ctx.grid.size();
  std::vector<double> routes(n);
  std::vector<double> norm(n);
  std::vector<double> deviation(n);
  const FourVector U = velocity_from_three({0.5 * k.c, 0.2 * k.c, 0.0}, k.c);
  parallel_for(n, ctx.threads, [&](std::size_t i) {
    const ThermalState& s = ctx.grid[i];
    const ClosureValues v = ctx.closure().evaluate(s, k);
    const double a_b = a_from_b(v.b, v.b_rho, v.b_T, s, ctx.model(), k);
    const double a_g = a_from_gamma1(v.b, v.b_rho, v.b_T, s, ctx.model(), k);
    const PotentialCoefficients pc =
        potential_coefficients(v.b, v.b_rho, v.b_T, s, ctx.model(), k);
    const double a_p = a_from_potential(pc, s, k);
    const double scale = std::max(std::abs(a_b), s.rho * k.c * k.c);
    routes[i] = std::max(std::abs(a_g - a_b), std::abs(a_p - a_b)) / scale;
    deviation[i] = std::abs(v.a - a_b) / scale;
    const MainFieldEq mf = equilibrium_main_field(s, U, ctx.model(), k);
    norm[i] = std::abs(dot(mf.lambda_vec, mf.lambda_vec) - mf.G0) / mf.G0;
  });
  const Stats sr = statistics(routes);
  const Stats sn = statistics(norm);
  const double tol = ctx.cfg.tolerances.main_field;
  ojson j;
  j["status"] = verdict(sr.within(tol) && sn.within(tol));
  j["tolerance"] = tol;
  j["statistics"] = stats_json(sr, "max(|a|, rho c^2)");
  j["worst"] = state_json(ctx.grid[sr.argmax], k);
  j["boosted_norm"] = stats_json(sn, "G0 = c^2 / T^2");
  // Informational: how far the configured a is from the one the potential implies.
  j["closure_deviation"] = stats_json(statistics(deviation), "max(|a|, rho c^2)");
  return j;
}

// --- Euler convexity -------------------------------------------------------------

ojson suite_convexity(const Context& ctx) {
  const auto& k = ctx.k();
  const std::size_t n = ctx.grid.size();
  std::vector<int> definite(n);
  std::vector<int> stable(n);
  std::vector<double> top(n);
  parallel_for(n, ctx.threads, [&](std::size_t i) {
    const ThermalState& s = ctx.grid[i];
    const StateEvaluation ev = evaluate(ctx.model(), s, k);
    const ConvexityReport r = euler_convexity(s, ctx.model(), k, ctx.cfg.tolerances.convexity);
    definite[i] = r.negative_definite;
    stable[i] = ev.mechanically_stable() && ev.thermally_stable();
    top[i] = r.eigenvalues[4];
  });
  std::size_t n_definite = 0;
  std::size_t n_stable = 0;
  std::size_t mismatches = 0;
  std::optional<std::size_t> first_mismatch;
  for (std::size_t i = 0; i < n; ++i) {
    n_definite += definite[i];
    n_stable += stable[i];
    if (definite[i] != stable[i]) {
      ++mismatches;
      if (!first_mismatch) first_mismatch = i;
    }
  }
  ojson j;
  j["status"] = verdict(mismatches == 0);
  j["threshold"] = ctx.cfg.tolerances.convexity;
  j["points"] = n;
  j["negative_definite"] = n_definite;
  j["indefinite"] = n - n_definite;
  j["stable"] = n_stable;
  j["verdict_mismatches"] = mismatches;
  if (first_mismatch) j["first_mismatch"] = state_json(ctx.grid[*first_mismatch], k);
  j["largest_scaled_eigenvalue"] = n ? *std::max_element(top.begin(), top.end()) : 0.0;
  return j;
}

// --- classical limit -------------------------------------------------------------

ojson limit_json(const LimitEstimate& e) {
  ojson j;
  j["name"] = e.name;
  j["c"] = e.c_values;
  j["sequence"] = e.sequence;
  j["value"] = e.value;
  j["error"] = e.error;
  j["rate"] = e.rate ? ojson(*e.rate) : ojson(nullptr);
  j["exact"] = e.exact;
  j["converged"] = e.converged;
  if (!e.diagnostic.empty()) j["diagnostic"] = e.diagnostic;
  return j;
}

struct ClassicalRun {
  std::vector<double> cs;
  ClassicalCoefficients coeffs;
  LimitEstimate compat;
};

ClassicalRun classical_run(const RunConfig& cfg) {
  ClassicalRun r;
  r.cs = cfg.classical.c_sequence(cfg.constants);
  r.coeffs = classical_coefficients(*cfg.closure, *cfg.model, cfg.transport, cfg.classical.state,
                                    cfg.constants, r.cs, cfg.tolerances.classical);
  r.compat = classical_compatibility_residual(r.coeffs, *cfg.closure, *cfg.model, cfg.constants,
                                              r.cs, cfg.tolerances.classical);
  return r;
}

ojson suite_classical(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const ClassicalRun run = classical_run(cfg);
  const auto& cc = run.coeffs;
  ojson j;
  ojson rows = ojson::array();
  for (const LimitEstimate* e : cc.all()) rows.push_back(limit_json(*e));
  rows.push_back(limit_json(run.compat));

  ojson checks = ojson::array();
  bool ok = run.compat.converged && std::abs(run.compat.value) <= cfg.tolerances.classical;
  checks.push_back({{"name", "compatibility_limit"},
                    {"value", run.compat.value},
                    {"tolerance", cfg.tolerances.classical},
                    {"status", verdict(ok)}});
  if (cfg.builtin == BuiltinClosureKind::MonatomicJuttner && cfg.model_kind == "juttner") {
    const auto& k = cfg.constants;
    const ThermalState& s = cfg.classical.state;
    const double kt = k.k_B * s.T / k.m;
    const std::pair<const LimitEstimate*, double> expected[] = {{&cc.a_C, s.rho * kt},
                                                                {&cc.b_C, 5.0 * s.rho * kt * kt}};
    for (const auto& [e, target] : expected) {
      const double rel = std::abs(e->value - target) / std::abs(target);
      const bool pass = rel <= 1e-4;
      ok = ok && pass;
      checks.push_back({{"name", e->name + "_target"},
                        {"value", e->value},
                        {"expected", target},
                        {"relative_error", rel},
                        {"tolerance", 1e-4},
                        {"status", verdict(pass)}});
    }
  }

  if (!cc.converged) {
    j["status"] = "skip-with-diagnostics";
    j["diagnostic"] = "rescaled coefficients do not converge as 1/c^2 -> 0";
  } else {
    j["status"] = verdict(ok);
  }
  j["state"] = state_json(cfg.classical.state, cfg.constants);
  j["c_sequence"] = run.cs;
  j["convergence_rate"] = cc.convergence_rate;
  j["converged"] = cc.converged;
  j["checks"] = checks;
  j["limits"] = rows;
  ojson mapping = ojson::array();
  for (const auto& m : kLimitMappings) {
    mapping.push_back(
        {{"relativistic", m.relativistic}, {"classical", m.classical}, {"coefficients", m.coefficients}});
  }
  j["mapping"] = mapping;
  j["warnings"] = cc.warnings;
  return j;
}

using SuiteFn = ojson (*)(const Context&);

SuiteFn suite_function(const std::string& name) {
  if (name == "compatibility") return suite_compatibility;
  if (name == "production") return suite_production;
  if (name == "heatflux") return suite_heatflux;
  if (name == "projection") return suite_projection;
  if (name == "main_field") return suite_main_field;
  if (name == "convexity") return suite_convexity;
  if (name == "classical_limit") return suite_classical;
  return nullptr;
}

ojson provenance(const RunConfig& cfg) {
  ojson j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config_hash"] = "fnv1a64:" + hex64(cfg.hash);
  j["model"] = cfg.model->name();
  j["closure"] = cfg.closure->provenance();
  j["constants"] = {{"c", cfg.constants.c}, {"m", cfg.constants.m}, {"k_B", cfg.constants.k_B}};
  j["transport"] = {
      {"chi", cfg.transport.chi}, {"mu", cfg.transport.mu}, {"nu", cfg.transport.nu}};
  j["grid"] = {{"rho", {{"min", cfg.grid.rho.min},
                        {"max", cfg.grid.rho.max},
                        {"count", cfg.grid.rho.count},
                        {"spacing", cfg.grid.rho.log ? "log" : "linear"}}},
               {"T", {{"min", cfg.grid.T.min},
                      {"max", cfg.grid.T.max},
                      {"count", cfg.grid.T.count},
                      {"spacing", cfg.grid.T.log ? "log" : "linear"}}}};
  j["rng"] = {{"generator", "splitmix64 counter hash"}, {"seed", cfg.field_check.seed}};
  return j;
}

}  // namespace

VerifyResult run_verify(const RunConfig& config, const VerifyOptions& options) {
  const std::vector<std::string>& wanted = options.suites.empty() ? config.suites : options.suites;
  for (const auto& s : wanted) {
    if (!suite_function(s)) throw ConfigError("/suites", "unknown suite '" + s + "'");
  }
  // Canonical order, duplicates dropped.
  std::vector<std::string> selected;
  for (const auto& s : kSuiteNames) {
    if (std::find(wanted.begin(), wanted.end(), s) != wanted.end()) selected.push_back(s);
  }

  const Context ctx{config, options.threads > 0 ? options.threads : default_thread_count(),
                    config.grid.states()};

  std::vector<ojson> results(selected.size());
  for (std::size_t i = 0; i < selected.size(); ++i) {
    try {
      results[i] = suite_function(selected[i])(ctx);
    } catch (const std::exception& e) {
      results[i] = ojson{{"status", "error"}, {"error", e.what()}};
    }
  }

  VerifyResult out;
  bool any_error = false;
  bool any_fail = false;
  ojson statuses = ojson::object();
  ojson suites = ojson::object();
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const std::string status = results[i]["status"].get<std::string>();
    any_error = any_error || status == "error";
    any_fail = any_fail || status == "fail";
    statuses[selected[i]] = status;
    suites[selected[i]] = std::move(results[i]);
  }
  out.exit_code = any_error ? kExitRuntimeError : any_fail ? kExitCheckFailed : kExitPass;
  out.report["provenance"] = provenance(config);
  out.report["summary"] = {{"status", any_error ? "error" : any_fail ? "fail" : "pass"},
                           {"exit_code", out.exit_code},
                           {"suites", statuses}};
  out.report["suites"] = std::move(suites);
  return out;
}

std::string serialize_report(const ojson& report) { return report.dump(2) + "\n"; }

// --- export ----------------------------------------------------------------------

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << csv_field(cells[i]);
    }
    out_ << '\n';
  }
  void close() {
    out_.close();
    if (!out_) throw Error("error writing '" + path_.string() + "'");
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::vector<std::string> numbers(std::initializer_list<double> xs) {
  std::vector<std::string> out;
  for (double x : xs) out.push_back(format_double(x));
  return out;
}

}  // namespace

std::vector<std::filesystem::path> run_export(const RunConfig& cfg,
                                              const std::filesystem::path& out_dir, int threads) {
  namespace fs = std::filesystem;
  if (threads <= 0) threads = default_thread_count();
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  const auto& k = cfg.constants;
  cfg.transport.validate();

  // Coefficient table over the grid.
  const std::vector<ThermalState> grid = cfg.grid.states();
  std::vector<std::vector<double>> table(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const ThermalState& s = grid[i];
    const ClosureValues v = cfg.closure->evaluate(s, k);
    const StateEvaluation ev = evaluate(*cfg.model, s, k);
    const ProductionCoefficients p = production_coefficients(v, ev, s, cfg.transport, k);
    const HeatfluxResiduals h = heatflux_condition_residuals(v, p.a1, ev, s, cfg.transport);
    table[i] = {s.rho, s.T, k.gamma(s.T), v.a, v.b, p.a1, p.a2, p.a3,
                compatibility_residual(v, ev, s), h.r1, h.r2};
    if (cfg.output.lmr_columns) {
      const LmrSymbols l = lmr_symbols(p, k);
      table[i].insert(table[i].end(), {l.B1_pi, l.B3, l.B4});
    }
  });
  std::vector<std::string> columns{"rho", "T",  "gamma", "a",  "b", "a1",
                                   "a2",  "a3", "compat_residual", "r1", "r2"};
  if (cfg.output.lmr_columns) columns.insert(columns.end(), {"B1_pi", "B3", "B4"});

  {
    CsvWriter w(out_dir / "coefficients.csv");
    w.row(columns);
    for (const auto& r : table) {
      std::vector<std::string> cells;
      for (double x : r) cells.push_back(format_double(x));
      w.row(cells);
    }
    w.close();
    written.push_back(out_dir / "coefficients.csv");
  }
  {
    ojson j;
    j["provenance"] = provenance(cfg);
    j["columns"] = columns;
    ojson rows = ojson::array();
    for (const auto& r : table) {
      ojson row = ojson::array();
      for (double x : r) row.push_back(std::isfinite(x) ? ojson(x) : ojson(format_double(x)));
      rows.push_back(row);
    }
    j["rows"] = rows;
    const fs::path p = out_dir / "coefficients.json";
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << j.dump(2) << '\n';
    out.close();
    if (!out) throw Error("error writing '" + p.string() + "'");
    written.push_back(p);
  }

  // Projection residuals over the field family.
  {
    const std::vector<ProjectionRow> rows = projection_rows(cfg, threads);
    CsvWriter w(out_dir / "projection.csv");
    w.row({"t", "x", "r_trace", "r_heat", "r_shear", "scale"});
    for (const auto& r : rows) {
      w.row(numbers({r.x0 / k.c, r.x1, r.trace, r.heat, r.shear, r.scale}));
    }
    w.close();
    written.push_back(out_dir / "projection.csv");
  }

  // Classical-limit sequences, extrapolants and fitted rates.
  {
    const ClassicalRun run = classical_run(cfg);
    const auto all = run.coeffs.all();
    std::vector<const LimitEstimate*> est(all.begin(), all.end());
    est.push_back(&run.compat);
    CsvWriter w(out_dir / "classical_limit.csv");
    std::vector<std::string> header{"row", "c"};
    for (const auto* e : est) header.push_back(e->name);
    w.row(header);
    for (std::size_t i = 0; i < run.cs.size(); ++i) {
      std::vector<std::string> cells{"sequence", format_double(run.cs[i])};
      for (const auto* e : est) cells.push_back(format_double(e->sequence[i]));
      w.row(cells);
    }
    auto summary = [&](const char* label, auto field) {
      std::vector<std::string> cells{label, ""};
      for (const auto* e : est) cells.push_back(field(*e));
      w.row(cells);
    };
    summary("extrapolated", [](const LimitEstimate& e) { return format_double(e.value); });
    summary("error", [](const LimitEstimate& e) { return format_double(e.error); });
    summary("rate", [](const LimitEstimate& e) {
      return e.rate ? format_double(*e.rate) : std::string(e.exact ? "exact" : "");
    });
    summary("converged",
            [](const LimitEstimate& e) { return std::string(e.converged ? "true" : "false"); });
    w.close();
    written.push_back(out_dir / "classical_limit.csv");
  }
  return written;
}

}  // namespace ret14
