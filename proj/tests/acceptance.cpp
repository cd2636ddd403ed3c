// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 if any
// criterion outside --known-failure fails or a listed one passes.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ret14/classical_limit.hpp"
#include "ret14/main_field.hpp"
#include "ret14/verify.hpp"
#include "support.hpp"

using namespace ret14;
using ret14::testing::log_space;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int g_failures = 0;
int g_unexpected = 0;
std::vector<int> g_known;

void report(int n, const Outcome& o, double secs) {
  const bool known = std::find(g_known.begin(), g_known.end(), n) != g_known.end();
  if (!o.pass) ++g_failures;
  if (o.pass == known) ++g_unexpected;
  std::printf("criterion %d: %s  %s  (%.3f s)%s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
              known ? (o.pass ? "  [listed as known failure but passed]" : "  [known failure]") : "");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rho_c2(const ThermalState& s, const PhysicalConstants& k) { return s.rho * k.c * k.c; }

// a -> a + delta rho c^2: a violation of the compatibility condition of
// relative size delta in the units the compatibility residual is judged in.
class ShiftedClosure final : public EquilibriumClosure {
 public:
  ShiftedClosure(ClosurePtr base, double delta) : base_(std::move(base)), delta_(delta) {}
  ClosureValues evaluate(const ThermalState& s, const PhysicalConstants& k) const override {
    ClosureValues v = base_->evaluate(s, k);
    v.a += delta_ * s.rho * k.c * k.c;
    v.a_rho += delta_ * k.c * k.c;
    return v;
  }
  std::string provenance() const override { return base_->provenance() + "+shifted"; }

 private:
  ClosurePtr base_;
  double delta_;
};

// --- 1 ---------------------------------------------------------------------
Outcome bessel_identity() {
  double worst = 0.0;
  double at = 0.0;
  for (double g : log_space(0.1, 1e3, 200)) {
    const double dG = ret14::testing::fd5(bessel_ratio_g, g, 1e-3 * g);
    const double G = bessel_ratio_g(g);
    const double r = std::abs(dG + 1.0 + 5.0 * G / g - G * G) / (1e-10 * (1.0 + std::abs(dG)));
    if (r > worst) {
      worst = r;
      at = g;
    }
  }
  return {worst <= 1.0, fmt("max |G' + 1 + 5G/gamma - G^2| / (1e-10 (1 + |G'|)) = %.3g at gamma = %.4g", worst, at)};
}

std::vector<ThermalState> grid_20(const PhysicalConstants& k) {
  std::vector<ThermalState> out;
  for (double rho : log_space(0.1, 10.0, 20))
    for (double g : log_space(0.1, 100.0, 20)) out.push_back({rho, k.temperature(g)});
  return out;
}

// --- 2 ---------------------------------------------------------------------
Outcome monatomic_compatibility(const RunConfig& cfg) {
  const PhysicalConstants& k = cfg.constants;
  const JuttnerModel j;
  const MonatomicJuttnerClosure mono;
  double worst_r = 0.0;
  double worst_p = 0.0;
  for (const ThermalState& s : cfg.grid.states()) {
    worst_r = std::max(worst_r, std::abs(compatibility_residual(mono, s, j, k)) / rho_c2(s, k));
    const ProductionCoefficients gen = production_coefficients(mono, s, j, cfg.transport, k);
    const ProductionCoefficients cf = monatomic_production_closed_form(s, cfg.transport, k);
    for (auto [x, y] : {std::pair{gen.a1, cf.a1}, {gen.a2, cf.a2}, {gen.a3, cf.a3}}) {
      worst_p = std::max(worst_p, std::abs(x - y) / std::abs(y));
    }
  }
  return {worst_r <= 1e-9 && worst_p <= 1e-9 && cfg.grid.states().size() >= 400,
          fmt("%zu states; max |R|/(rho c^2) = %.3g (<= 1e-9); closed form vs generic max rel = %.3g (<= 1e-9)",
              cfg.grid.states().size(), worst_r, worst_p)};
}

// --- 3 ---------------------------------------------------------------------
Outcome acpr_identity(const PhysicalConstants& k) {
  const CounterRng rng(0xACE, 3);
  double worst = 0.0;
  for (int n = 0; n < 10; ++n) {
    std::vector<double> x = log_space(0.1, 100.0, 12);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = rng.uniform(100 * n + i, -1.0, 1.0);
    auto spline = std::make_shared<CubicSpline>(x, y);
    auto omega = std::make_shared<ret14::testing::PerturbedJuttnerOmega>(spline, 0.05 * (1 + n % 3));
    const PolyatomicModel model(omega);
    const PolyatomicAcprClosure closure(omega);
    for (const ThermalState& s : grid_20(k)) {
      worst = std::max(worst, std::abs(compatibility_residual(closure, s, model, k)) / rho_c2(s, k));
    }
  }
  return {worst <= 1e-8, fmt("10 perturbed omega, 20x20 grid each; max |R|/(rho c^2) = %.3g (<= 1e-8)", worst)};
}

// --- 4 ---------------------------------------------------------------------
Outcome theorem_oracles(const PhysicalConstants& k) {
  const CounterRng rng(0xB0B);
  std::vector<StateModelPtr> models{std::make_shared<JuttnerModel>(),
                                    std::make_shared<PolyatomicModel>(std::make_shared<IdealDofOmega>(5.0)),
                                    std::make_shared<PolyatomicModel>(std::make_shared<IdealDofOmega>(7.0))};
  double worst = 0.0;
  int pairs = 0;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto b = ret14::testing::SplineB::random(rng, 1000 * i, 0.05, 2000.0);
    const StateModel& m = *models[i % models.size()];
    for (int q = 0; q < 4; ++q) {
      const double g = std::exp(rng.uniform(1000 * i + 500 + 2 * q, std::log(0.1), std::log(1e3)));
      const double rho = std::exp(rng.uniform(1000 * i + 501 + 2 * q, std::log(1e-2), std::log(1e2)));
      const ThermalState s{rho, k.temperature(g)};
      double bv, br, bt;
      b.eval(s, k, bv, br, bt);
      const double ab = a_from_b(bv, br, bt, s, m, k);
      const double ag = a_from_gamma1(bv, br, bt, s, m, k);
      worst = std::max(worst, std::abs(ag - ab) / std::abs(ab));
    }
    ++pairs;
  }
  return {worst <= 1e-10 && pairs == 500,
          fmt("%d (b, model) pairs x 4 states; max |a_gamma1 - a_b| / |a_b| = %.3g (<= 1e-10)", pairs, worst)};
}

// --- 5 ---------------------------------------------------------------------
struct Named {
  std::string name;
  StateModelPtr model;
  ClosurePtr closure;
};

Outcome field_check(const RunConfig& cfg) {
  const PhysicalConstants& k = cfg.constants;
  auto juttner = std::make_shared<JuttnerModel>();
  GammaFunctionPtr dof5 = std::make_shared<IdealDofOmega>(5.0);
  auto poly = std::make_shared<PolyatomicModel>(dof5);
  BuiltinClosureOptions jo;
  jo.omega = std::make_shared<JuttnerOmega>();
  BuiltinClosureOptions po;
  po.omega = dof5;
  po.beta = std::make_shared<JuttnerBeta>();
  const std::vector<Named> cases{
      {"monatomic_juttner", juttner, builtin_closure(BuiltinClosureKind::MonatomicJuttner)},
      {"polyatomic_acpr/juttner", juttner, builtin_closure(BuiltinClosureKind::PolyatomicAcpr, jo)},
      {"polyatomic_acpr/dof5", poly, builtin_closure(BuiltinClosureKind::PolyatomicAcpr, po)},
      {"polyatomic_pr/dof5", poly, builtin_closure(BuiltinClosureKind::PolyatomicPr, po)},
      {"geroch_lindblom", juttner, builtin_closure(BuiltinClosureKind::GerochLindblom)},
  };
  const TransportCoefficients& tr = cfg.transport;
  const int n = 100;
  const std::uint64_t seed = cfg.field_check.seed;
  const RandomPointOptions& opt = cfg.field_check.random;

  std::ostringstream detail;
  bool ok = true;
  double worst_all = 0.0;
  for (const Named& c : cases) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const FieldPoint pt = random_field_point(seed, i, opt, k);
      const ProductionCoefficients prod = production_coefficients(*c.closure, pt.state, *c.model, tr, k);
      worst = std::max(worst, projection_residuals(pt, *c.closure, prod, tr, *c.model, k).max_relative());
    }
    worst_all = std::max(worst_all, worst);
    ok = ok && worst <= 1e-8;
  }
  detail << fmt("%zu closures x %d points: max residual/scale = %.3g (<= 1e-8)", cases.size(), n, worst_all);

  // Sensitivity: a 1% violation, delta a = 0.01 rho c^2, must show in the heat projection.
  auto heat_range = [&](const EquilibriumClosure& closure) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < n; ++i) {
      const FieldPoint pt = random_field_point(seed, i, opt, k);
      const ProductionCoefficients prod = production_coefficients(closure, pt.state, *juttner, tr, k);
      const ProjectionResiduals r = projection_residuals(pt, closure, prod, tr, *juttner, k);
      lo = std::min(lo, r.heat_norm / r.scale);
      hi = std::max(hi, r.heat_norm / r.scale);
    }
    return std::pair{lo, hi};
  };
  const ShiftedClosure shifted(builtin_closure(BuiltinClosureKind::MonatomicJuttner), 0.01);
  const auto [shift_lo, shift_hi] = heat_range(shifted);
  Perturbation scale_a;
  scale_a.scale_a = 1.01;
  const PerturbedClosure scaled(builtin_closure(BuiltinClosureKind::MonatomicJuttner), scale_a);
  const auto [scale_lo, scale_hi] = heat_range(scaled);
  // Every point must show it. The residual is 4 delta_a Udot / c, which is
  // O(p / (e + p)) of the scale and so shrinks like 1/gamma.
  ok = ok && shift_lo >= 1e-3;
  detail << fmt("; 1%% violation, heat/scale per point (min >= 1e-3 required): delta a = 0.01 rho c^2 "
                "min %.3g max %.3g; a -> 1.01 a min %.3g max %.3g",
                shift_lo, shift_hi, scale_lo, scale_hi);
  return {ok, detail.str()};
}

// --- 6 ---------------------------------------------------------------------
Outcome geroch_lindblom(const RunConfig& cfg) {
  const PhysicalConstants& k = cfg.constants;
  const JuttnerModel j;
  const GerochLindblomClosure gl(0.0, 1.0);
  const TransportCoefficients& tr = cfg.transport;
  const double c2 = k.c * k.c;
  double coeff = 0.0, compat = 0.0, heat = 0.0, proj = 0.0;
  for (const ThermalState& s : cfg.grid.states()) {
    const ProductionCoefficients p = production_coefficients(gl, s, j, tr, k);
    coeff = std::max({coeff, std::abs(p.a1 + 1.0 / tr.chi) * tr.chi, std::abs(p.a2 + s.T / tr.mu) / (s.T / tr.mu),
                      std::abs(p.a3 + 8.0 * s.T / (3.0 * c2 * tr.nu)) / (8.0 * s.T / (3.0 * c2 * tr.nu))});
    const ClosureValues v = gl.evaluate(s, k);
    compat = std::max(compat, std::abs(compatibility_residual(gl, s, j, k)) /
                                  std::max({std::abs(v.a), std::abs(v.b), rho_c2(s, k)}));
    const HeatfluxResiduals h = heatflux_condition_residuals(gl, s, j, tr, k);
    heat = std::max({heat, std::abs(h.r1) / h.scale1, std::abs(h.r2) / h.scale2});
  }
  for (int i = 0; i < cfg.field_check.points; ++i) {
    const FieldPoint pt = random_field_point(cfg.field_check.seed, i, cfg.field_check.random, k);
    const ProductionCoefficients p = production_coefficients(gl, pt.state, j, tr, k);
    proj = std::max(proj, projection_residuals(pt, gl, p, tr, j, k).max_relative());
  }
  const double roundoff = 1e-12;
  return {coeff <= roundoff && compat <= roundoff && heat <= roundoff && proj <= roundoff,
          fmt("a1, a2, a3 rel dev %.2g; compatibility %.2g; heatflux %.2g; projection %.2g (all <= 1e-12)",
              coeff, compat, heat, proj)};
}

// --- 7 ---------------------------------------------------------------------
Outcome classical(const RunConfig& cfg) {
  const PhysicalConstants& k = cfg.constants;
  const JuttnerModel j;
  const MonatomicJuttnerClosure mono;
  const ThermalState& s = cfg.classical.state;
  const std::vector<double> cs = cfg.classical.c_sequence(k);
  const ClassicalCoefficients cc = classical_coefficients(mono, j, cfg.transport, s, k, cs, 1e-4);
  const double kTm = k.k_B * s.T / k.m;
  const double ta = s.rho * kTm;
  const double tb = 5.0 * s.rho * kTm * kTm;
  const double ea = std::abs(cc.a_C.value - ta) / ta;
  const double eb = std::abs(cc.b_C.value - tb) / tb;
  const double ra = cc.a_C.rate.value_or(std::nan(""));
  const double rb = cc.b_C.rate.value_or(std::nan(""));
  const double xa = cc.a_C.error / ta;
  const double xb = cc.b_C.error / tb;
  const bool ok = ea <= 1e-4 && eb <= 1e-4 && std::abs(ra - 2.0) <= 0.2 && std::abs(rb - 2.0) <= 0.2 &&
                  xa <= 1e-4 && xb <= 1e-4;
  return {ok, fmt("a_C rel err %.2g, rate %.3f, extrap err %.2g; b_C rel err %.2g, rate %.3f, extrap err %.2g",
                  ea, ra, xa, eb, rb, xb)};
}

// --- 8 ---------------------------------------------------------------------
Outcome entropy_production_check(const PhysicalConstants& k) {
  const JuttnerModel j;
  const CounterRng rng(0x5E);
  RandomPointOptions opt;
  int negatives = 0, mismatches = 0, zero_samples = 0;
  double most_negative = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    FieldPoint pt = random_field_point(0x5E, i, opt, k);
    TransportCoefficients tr{rng.uniform(4 * i, 0.1, 3.0), rng.uniform(4 * i + 1, 0.1, 3.0),
                             rng.uniform(4 * i + 2, 0.1, 3.0)};
    switch (i % 10) {
      case 0: tr = {0.0, 0.0, 0.0}; break;
      case 1: {  // rigid rotation at rest: gradients present, no dissipation
        pt.U = rest_velocity(k.c);
        pt.grad_rho = {};
        pt.grad_T = {};
        pt.grad_U = {};
        const double w[3] = {rng.uniform(4 * i + 3, -1, 1), rng.uniform(4 * i + 3 + 4000, -1, 1),
                             rng.uniform(4 * i + 3 + 8000, -1, 1)};
        pt.grad_U[1][2] = w[2]; pt.grad_U[2][1] = -w[2];
        pt.grad_U[2][3] = w[0]; pt.grad_U[3][2] = -w[0];
        pt.grad_U[3][1] = w[1]; pt.grad_U[1][3] = -w[1];
        break;
      }
      case 2:  // uniform motion
        pt.grad_rho = {};
        pt.grad_T = {};
        pt.grad_U = {};
        break;
      case 3: tr.chi = 0.0; break;
      case 4: tr.mu = 0.0; break;
      case 5: tr.nu = 0.0; break;
      default: break;
    }
    const NoneqFields f = eckart_constitutive(pt, tr, j, k);
    const MaterialDerivatives md = eliminate_material_derivatives(pt, j, k);
    const double sigma = eckart_entropy_production(pt, f, md, k);

    double gT = 0.0, gU = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      gT = std::max(gT, std::abs(pt.grad_T[a]) + pt.state.T * std::abs(md.U_dot[a]) / (k.c * k.c));
      for (std::size_t b = 0; b < 4; ++b) gU = std::max(gU, std::abs(pt.grad_U[a][b]));
    }
    const double cmax = std::max({tr.chi, tr.mu, tr.nu});
    const double field_scale = cmax * std::max(gT, gU);
    const double sigma_scale = cmax * (gT * gT / (pt.state.T * pt.state.T) + gU * gU / pt.state.T);
    const double qn = std::sqrt(std::abs(dot(f.q, f.q)));
    const double tn = std::sqrt(std::abs(full_contract(f.t, f.t)));
    const bool fields_zero = std::max({qn, tn, std::abs(f.pi)}) <= 1e-12 * field_scale;
    const bool sigma_zero = std::abs(sigma) <= 1e-12 * sigma_scale;
    if (sigma < -1e-12 * sigma_scale) {
      ++negatives;
      most_negative = std::min(most_negative, sigma / sigma_scale);
    }
    if (fields_zero != sigma_zero) ++mismatches;
    if (fields_zero) ++zero_samples;
  }
  return {negatives == 0 && mismatches == 0,
          fmt("1000 samples (%d with vanishing fields): sigma < 0 in %d (worst %.2g), "
              "zero-iff mismatches %d",
              zero_samples, negatives, most_negative, mismatches)};
}

// --- 9 ---------------------------------------------------------------------
Outcome convexity(const RunConfig& cfg) {
  const PhysicalConstants& k = cfg.constants;
  const JuttnerModel j;
  int definite = 0, total = 0;
  std::vector<ThermalState> states = cfg.grid.states();
  for (double rho : log_space(0.1, 10.0, 5))
    for (double g : log_space(0.1, 1e3, 40)) states.push_back({rho, k.temperature(g)});
  for (const ThermalState& s : states) {
    ++total;
    if (euler_convexity(s, j, k, cfg.tolerances.convexity).negative_definite) ++definite;
  }
  const auto vdw = ret14::testing::van_der_waals(3.0, 1.0 / 3.0);
  const PhysicalConstants unit;
  const ThermalState spin{1.0, 1.0};
  const double p_rho = evaluate(*vdw, spin, unit).p_rho;
  const ConvexityReport r = euler_convexity(spin, *vdw, unit, cfg.tolerances.convexity);
  const bool flagged = !r.negative_definite && r.n_positive > 0;
  return {definite == total && flagged && p_rho < 0.0,
          fmt("Juttner negative definite at %d/%d states; van der Waals p_rho = %.3g: %s (%d positive eigenvalues)",
              definite, total, p_rho, flagged ? "indefinite" : "NOT flagged", r.n_positive)};
}

// --- 10 --------------------------------------------------------------------
Outcome determinism(const RunConfig& cfg, const std::string& config_path, const std::string& cli) {
  const std::string a = serialize_report(run_verify(cfg, {{}, 1}).report);
  const std::string b = serialize_report(run_verify(cfg, {{}, 4}).report);
  bool ok = a == b;
  std::string detail = fmt("in-process threads 1 vs 4: %s", a == b ? "identical" : "DIFFER");
  if (!cli.empty()) {
    const fs::path dir = fs::temp_directory_path() / "ret14_acceptance";
    fs::create_directories(dir);
    auto run = [&](const std::string& name, int threads) {
      const fs::path out = dir / name;
      const std::string cmd = "RET14_THREADS=" + std::to_string(threads) + " \"" + cli +
                              "\" verify -q --config \"" + config_path + "\" --report \"" + out.string() + "\"";
      const int rc = std::system(cmd.c_str());
      std::ifstream in(out, std::ios::binary);
      std::ostringstream s;
      s << in.rdbuf();
      return std::pair{rc, s.str()};
    };
    const auto [rc1, r1] = run("run1.json", 1);
    const auto [rc2, r2] = run("run2.json", 3);
    const bool same = !r1.empty() && r1 == r2;
    ok = ok && same && rc1 == rc2;
    detail += fmt("; CLI runs: %zu bytes, %s", r1.size(), same ? "byte-identical" : "DIFFER");
    fs::remove_all(dir);
  } else {
    detail += "; CLI runs skipped (no --cli given)";
  }
  return {ok, detail};
}

template <class F>
void timed(int n, F&& f, double limit = 0.0) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = seconds_since(t0);
  if (limit > 0.0 && secs > limit) {
    o.pass = false;
    o.detail += fmt("; runtime %.3g s exceeds %.3g s", secs, limit);
  }
  report(n, o, secs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string config_path = std::string(RET14_SOURCE_DIR) + "/configs/monatomic.json";
  std::string cli;
  app.add_option("--config", config_path, "Configuration for the grid-based criteria");
  app.add_option("--cli", cli, "ret14 executable for the determinism criterion");
  app.add_option("--known-failure", g_known,
                 "Criterion expected to fail; the exit status is 0 only if exactly these fail");
  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "cannot load " << config_path << ": " << e.what() << '\n';
    return 2;
  }
  const PhysicalConstants& k = cfg.constants;

  timed(1, [] { return bessel_identity(); }, 1.0);
  timed(2, [&] { return monatomic_compatibility(cfg); }, 5.0);
  timed(3, [&] { return acpr_identity(k); });
  timed(4, [&] { return theorem_oracles(k); }, 30.0);
  timed(5, [&] { return field_check(cfg); });
  timed(6, [&] { return geroch_lindblom(cfg); });
  timed(7, [&] { return classical(cfg); }, 10.0);
  timed(8, [&] { return entropy_production_check(k); });
  timed(9, [&] { return convexity(cfg); });
  timed(10, [&] { return determinism(cfg, config_path, cli); });

  std::printf("%d of 10 criteria failed", g_failures);
  if (!g_known.empty()) std::printf(" (%zu listed as known)", g_known.size());
  std::printf("\n");
  return g_unexpected == 0 ? 0 : 1;
}
