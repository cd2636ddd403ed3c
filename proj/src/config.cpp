#include "ret14/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "ret14/expression.hpp"
#include "ret14/gamma_function.hpp"

namespace ret14 {

using json = nlohmann::json;

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> GridAxis::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = min;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / (count - 1);
    out[i] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                 : min + f * (max - min);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

std::vector<ThermalState> GridSpec::states() const {
  std::vector<ThermalState> out;
  for (double r : rho.points())
    for (double t : T.points()) out.push_back(ThermalState{r, t});
  return out;
}

std::vector<double> ClassicalSpec::c_sequence(const PhysicalConstants& base) const {
  const double c0v = c0 ? *c0 : std::sqrt(10.0 * base.k_B * state.T / base.m);
  std::vector<double> out;
  for (double f : factors) out.push_back(c0v * f);
  return out;
}

namespace {

std::string escape(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') {
      out += "~0";
    } else if (ch == '/') {
      out += "~1";
    } else {
      out += ch;
    }
  }
  return out;
}

// Object reader that remembers which keys were consumed so the rest can be
// rejected as unknown.
class Obj {
 public:
  Obj(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) throw ConfigError(ptr_, "expected an object");
  }

  const std::string& ptr() const { return ptr_; }
  std::string at(const std::string& key) const { return ptr_ + "/" + escape(key); }

  const json* get(const std::string& key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = get(key);
    if (!v) throw ConfigError(at(key), "required key is missing");
    return *v;
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const json* v = get(key);
    if (!v) {
      if (!fallback) throw ConfigError(at(key), "required key is missing");
      return *fallback;
    }
    if (!v->is_number()) throw ConfigError(at(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(at(key), "expected a finite number");
    return d;
  }

  double positive(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double d = number(key, fallback);
    if (!(d > 0.0)) throw ConfigError(at(key), "must be strictly positive");
    return d;
  }

  double non_negative(const std::string& key, double fallback) {
    const double d = number(key, fallback);
    if (!(d >= 0.0)) throw ConfigError(at(key), "must be non-negative");
    return d;
  }

  long long integer(const std::string& key, long long fallback, long long lo, long long hi) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(at(key), "expected an integer");
    const long long i = v->get<long long>();
    if (i < lo || i > hi) {
      throw ConfigError(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                     "]");
    }
    return i;
  }

  std::string string(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const json* v = get(key);
    if (!v) {
      if (!fallback) throw ConfigError(at(key), "required key is missing");
      return *fallback;
    }
    if (!v->is_string()) throw ConfigError(at(key), "expected a string");
    return v->get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v->get<bool>();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string ptr_;
  std::set<std::string> used_;
};

// A string is shorthand for {"kind": string}.
json normalize_kind(const json& j) {
  if (j.is_string()) return json{{"kind", j}};
  return j;
}

const std::vector<std::string> kExpressionVariables{"rho", "T", "c", "m", "k_B", "gamma"};

StateFunction make_function(const std::string& source, const std::string& ptr) {
  std::shared_ptr<const Expression> e;
  try {
    e = std::make_shared<const Expression>(Expression::parse(source, kExpressionVariables));
  } catch (const ExpressionError& err) {
    throw ConfigError(ptr, err.what());
  }
  return [e](double rho, double T, const PhysicalConstants& k) {
    const double v[] = {rho, T, k.c, k.m, k.k_B, k.gamma(T)};
    return e->evaluate(v);
  };
}

StateFunction optional_function(Obj& o, const std::string& key) {
  const json* v = o.get(key);
  if (!v) return {};
  if (!v->is_string()) throw ConfigError(o.at(key), "expected an expression string");
  return make_function(v->get<std::string>(), o.at(key));
}

StateFunction required_function(Obj& o, const std::string& key) {
  StateFunction f = optional_function(o, key);
  if (!f) throw ConfigError(o.at(key), "required expression is missing");
  return f;
}

GammaFunctionPtr parse_table(Obj& o) {
  const json& pts = o.require("points");
  const std::string ptr = o.at("points");
  if (!pts.is_array() || pts.size() < 3) {
    throw ConfigError(ptr, "expected an array of at least three [gamma, value] pairs");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const json& p = pts[i];
    const std::string pi = ptr + "/" + std::to_string(i);
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ConfigError(pi, "expected [gamma, value]");
    }
    x.push_back(p[0].get<double>());
    y.push_back(p[1].get<double>());
    if (!(x.back() > 0.0)) throw ConfigError(pi + "/0", "gamma must be positive");
    if (i > 0 && !(x[i] > x[i - 1])) throw ConfigError(pi + "/0", "gamma must increase strictly");
  }
  return std::make_shared<CubicSpline>(std::move(x), std::move(y));
}

GammaFunctionPtr parse_omega(const json& raw, const std::string& ptr) {
  const json j = normalize_kind(raw);
  Obj o(j, ptr);
  const std::string kind = o.string("kind");
  GammaFunctionPtr out;
  if (kind == "juttner") {
    out = std::make_shared<JuttnerOmega>();
  } else if (kind == "ideal_dof") {
    out = std::make_shared<IdealDofOmega>(o.positive("dof"));
  } else if (kind == "table") {
    out = parse_table(o);
  } else {
    throw ConfigError(o.at("kind"), "unknown omega kind '" + kind +
                                        "' (expected juttner, ideal_dof or table)");
  }
  o.finish();
  return out;
}

GammaFunctionPtr parse_beta(const json& raw, const std::string& ptr) {
  const json j = normalize_kind(raw);
  Obj o(j, ptr);
  const std::string kind = o.string("kind");
  GammaFunctionPtr out;
  if (kind == "juttner_beta") {
    out = std::make_shared<JuttnerBeta>();
  } else if (kind == "table") {
    out = parse_table(o);
  } else {
    throw ConfigError(o.at("kind"),
                      "unknown beta kind '" + kind + "' (expected juttner_beta or table)");
  }
  o.finish();
  return out;
}

ThermalState parse_state(const json& j, const std::string& ptr) {
  Obj o(j, ptr);
  ThermalState s{o.positive("rho"), o.positive("T")};
  o.finish();
  return s;
}

void parse_model(const json& raw, const std::string& ptr, RunConfig& cfg) {
  const json j = normalize_kind(raw);
  Obj o(j, ptr);
  cfg.model_kind = o.string("kind");
  if (cfg.model_kind == "juttner") {
    cfg.model = std::make_shared<JuttnerModel>();
    cfg.builtin_options.omega = std::make_shared<JuttnerOmega>();
  } else if (cfg.model_kind == "polyatomic") {
    GammaFunctionPtr omega = parse_omega(o.require("omega"), o.at("omega"));
    cfg.builtin_options.omega = omega;
    cfg.model = std::make_shared<PolyatomicModel>(omega);
  } else if (cfg.model_kind == "user") {
    UserModelSpec spec;
    spec.name = o.string("name", "user");
    spec.p = required_function(o, "p");
    spec.eps = required_function(o, "eps");
    spec.p_rho = optional_function(o, "p_rho");
    spec.p_T = optional_function(o, "p_T");
    spec.eps_rho = optional_function(o, "eps_rho");
    spec.eps_T = optional_function(o, "eps_T");
    if (const json* r = o.get("reference")) spec.reference = parse_state(*r, o.at("reference"));
    spec.integrability_tol = o.positive("integrability_tol", 1e-6);
    cfg.model = std::make_shared<UserModel>(std::move(spec));
  } else {
    throw ConfigError(o.at("kind"), "unknown model kind '" + cfg.model_kind +
                                        "' (expected juttner, polyatomic or user)");
  }
  o.finish();
}

void parse_closure(const json& raw, const std::string& ptr, RunConfig& cfg) {
  const json j = normalize_kind(raw);
  Obj o(j, ptr);
  cfg.closure_kind = o.string("kind");
  const std::string& kind = cfg.closure_kind;
  const bool has_omega = static_cast<bool>(cfg.builtin_options.omega);

  ClosurePtr base;
  if (kind == "monatomic_juttner") {
    cfg.builtin = BuiltinClosureKind::MonatomicJuttner;
  } else if (kind == "polyatomic_acpr") {
    if (!has_omega) {
      throw ConfigError(o.at("kind"),
                        "polyatomic_acpr needs omega(gamma): use a juttner or polyatomic model");
    }
    cfg.builtin = BuiltinClosureKind::PolyatomicAcpr;
  } else if (kind == "polyatomic_pr") {
    if (!has_omega) {
      throw ConfigError(o.at("kind"),
                        "polyatomic_pr needs omega(gamma): use a juttner or polyatomic model");
    }
    cfg.builtin_options.beta = parse_beta(o.require("beta"), o.at("beta"));
    cfg.builtin = BuiltinClosureKind::PolyatomicPr;
  } else if (kind == "geroch_lindblom") {
    cfg.builtin_options.c1 = o.number("c1", 0.0);
    cfg.builtin_options.c2 = o.number("c2", 1.0);
    cfg.builtin = BuiltinClosureKind::GerochLindblom;
  } else if (kind == "user") {
    UserClosureSpec spec;
    spec.a = required_function(o, "a");
    spec.b = required_function(o, "b");
    spec.a_rho = optional_function(o, "a_rho");
    spec.a_T = optional_function(o, "a_T");
    spec.b_rho = optional_function(o, "b_rho");
    spec.b_T = optional_function(o, "b_T");
    base = std::make_shared<UserClosure>(std::move(spec));
  } else if (kind == "completed") {
    StateFunction b = required_function(o, "b");
    StateFunction b_rho = optional_function(o, "b_rho");
    StateFunction b_T = optional_function(o, "b_T");
    base = std::make_shared<CompletedClosure>(std::move(b), cfg.model, std::move(b_rho),
                                              std::move(b_T));
  } else {
    throw ConfigError(o.at("kind"),
                      "unknown closure kind '" + kind +
                          "' (expected monatomic_juttner, polyatomic_acpr, polyatomic_pr, "
                          "geroch_lindblom, user or completed)");
  }
  if (cfg.builtin) base = builtin_closure(*cfg.builtin, cfg.builtin_options);

  if (const json* p = o.get("perturb")) {
    Obj po(*p, o.at("perturb"));
    cfg.perturbation.scale_a = po.number("scale_a", 1.0);
    cfg.perturbation.scale_b = po.number("scale_b", 1.0);
    cfg.perturbation.shift_a = po.number("shift_a", 0.0);
    po.finish();
  }
  o.finish();

  if (!cfg.perturbation.is_identity()) {
    base = std::make_shared<PerturbedClosure>(base, cfg.perturbation);
    cfg.builtin.reset();
  }
  cfg.closure = base;
}

GridAxis parse_axis(const json& j, const std::string& ptr, GridAxis fallback) {
  Obj o(j, ptr);
  GridAxis a;
  a.min = o.positive("min", fallback.min);
  a.max = o.positive("max", fallback.max);
  a.count = static_cast<int>(o.integer("count", fallback.count, 1, 100000));
  const std::string spacing = o.string("spacing", fallback.log ? "log" : "linear");
  if (spacing != "log" && spacing != "linear") {
    throw ConfigError(o.at("spacing"), "expected \"log\" or \"linear\"");
  }
  a.log = spacing == "log";
  if (a.max < a.min) throw ConfigError(o.at("max"), "max must not be below min");
  o.finish();
  return a;
}

void parse_grid(const json& j, const std::string& ptr, RunConfig& cfg) {
  Obj o(j, ptr);
  if (const json* r = o.get("rho")) cfg.grid.rho = parse_axis(*r, o.at("rho"), cfg.grid.rho);
  const json* t = o.get("T");
  const json* g = o.get("gamma");
  if (t && g) throw ConfigError(o.at("gamma"), "give either T or gamma, not both");
  if (t) cfg.grid.T = parse_axis(*t, o.at("T"), cfg.grid.T);
  if (g) {
    // Stored as temperatures, in increasing gamma order.
    const GridAxis ga = parse_axis(*g, o.at("gamma"), GridAxis{0.1, 100.0, 20, true});
    GridAxis ta = ga;
    ta.min = cfg.constants.temperature(ga.min);
    ta.max = cfg.constants.temperature(ga.max);
    ta.log = ga.log;
    cfg.grid.T = ta;
    if (!ga.log) throw ConfigError(o.at("gamma") + "/spacing", "gamma axes must be log-spaced");
  }
  o.finish();
}

void parse_field_check(const json& j, const std::string& ptr, RunConfig& cfg) {
  Obj o(j, ptr);
  FieldCheckSpec& f = cfg.field_check;
  f.points = static_cast<int>(o.integer("points", f.points, 1, 1000000));
  {
    const json* s = o.get("seed");
    if (s) {
      if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
        throw ConfigError(o.at("seed"), "expected a non-negative integer");
      }
      f.seed = s->get<std::uint64_t>();
    }
  }
  f.family = o.string("family", f.family);
  if (f.family != "random" && f.family != "bump") {
    throw ConfigError(o.at("family"), "expected \"random\" or \"bump\"");
  }
  f.random.velocity_max = o.number("velocity_max", f.random.velocity_max);
  if (!(f.random.velocity_max >= 0.0 && f.random.velocity_max < 1.0)) {
    throw ConfigError(o.at("velocity_max"), "must lie in [0, 1)");
  }
  f.random.gradient = o.positive("gradient", f.random.gradient);
  if (const json* b = o.get("bump")) {
    Obj bo(*b, o.at("bump"));
    BumpFamily& bf = f.bump;
    bf.rho0 = bo.positive("rho0", bf.rho0);
    bf.T0 = bo.positive("T0", bf.T0);
    bf.A = bo.number("A", bf.A);
    bf.B = bo.number("B", bf.B);
    if (!(std::abs(bf.A) < 1.0)) throw ConfigError(bo.at("A"), "|A| must be below 1");
    if (!(std::abs(bf.B) < 1.0)) throw ConfigError(bo.at("B"), "|B| must be below 1");
    bf.width = bo.positive("width", bf.width);
    bf.v0 = bo.number("v0", bf.v0);
    if (!(std::abs(bf.v0) < 1.0)) throw ConfigError(bo.at("v0"), "|v0| must be below 1");
    bf.kx = bo.number("kx", bf.kx);
    bf.kt = bo.number("kt", bf.kt);
    bf.phase = bo.number("phase", bf.phase);
    bf.extent = bo.positive("extent", bf.extent);
    bo.finish();
  }
  o.finish();
}

void parse_classical(const json& j, const std::string& ptr, RunConfig& cfg) {
  Obj o(j, ptr);
  ClassicalSpec& c = cfg.classical;
  c.state.rho = o.positive("rho", c.state.rho);
  c.state.T = o.positive("T", c.state.T);
  if (o.get("c0")) c.c0 = o.positive("c0");
  if (const json* f = o.get("factors")) {
    if (!f->is_array() || f->size() < 3) {
      throw ConfigError(o.at("factors"), "expected an array of at least three numbers");
    }
    c.factors.clear();
    for (std::size_t i = 0; i < f->size(); ++i) {
      const std::string pi = o.at("factors") + "/" + std::to_string(i);
      if (!(*f)[i].is_number()) throw ConfigError(pi, "expected a number");
      const double v = (*f)[i].get<double>();
      if (!(v > 0.0)) throw ConfigError(pi, "must be positive");
      if (!c.factors.empty() && !(v > c.factors.back())) {
        throw ConfigError(pi, "factors must increase strictly");
      }
      c.factors.push_back(v);
    }
  }
  o.finish();
}

void parse_tolerances(const json& j, const std::string& ptr, Tolerances& t) {
  Obj o(j, ptr);
  t.compatibility = o.positive("compatibility", t.compatibility);
  t.production = o.positive("production", t.production);
  t.heatflux = o.positive("heatflux", t.heatflux);
  t.projection = o.positive("projection", t.projection);
  t.main_field = o.positive("main_field", t.main_field);
  t.classical = o.positive("classical", t.classical);
  t.convexity = o.positive("convexity", t.convexity);
  o.finish();
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  RunConfig cfg;
  cfg.canonical = j.dump();
  cfg.hash = fnv1a64(cfg.canonical);

  Obj o(j, "");
  o.get("description");
  if (const json* c = o.get("constants")) {
    Obj co(*c, "/constants");
    cfg.constants.c = co.positive("c", 1.0);
    cfg.constants.m = co.positive("m", 1.0);
    cfg.constants.k_B = co.positive("k_B", 1.0);
    co.finish();
  }
  parse_model(o.require("model"), "/model", cfg);
  parse_closure(o.require("closure"), "/closure", cfg);
  if (const json* t = o.get("transport")) {
    Obj to(*t, "/transport");
    cfg.transport.chi = to.non_negative("chi", 1.0);
    cfg.transport.mu = to.non_negative("mu", 1.0);
    cfg.transport.nu = to.non_negative("nu", 1.0);
    to.finish();
  }
  if (const json* g = o.get("grid")) parse_grid(*g, "/grid", cfg);
  // Random field points default to the grid's state range.
  cfg.field_check.random.rho_min = cfg.grid.rho.min;
  cfg.field_check.random.rho_max = cfg.grid.rho.max;
  cfg.field_check.random.T_min = cfg.grid.T.min;
  cfg.field_check.random.T_max = cfg.grid.T.max;
  if (const json* f = o.get("field_check")) parse_field_check(*f, "/field_check", cfg);
  if (const json* c = o.get("classical_limit")) parse_classical(*c, "/classical_limit", cfg);
  if (const json* t = o.get("tolerances")) parse_tolerances(*t, "/tolerances", cfg.tolerances);
  if (const json* out = o.get("output")) {
    Obj oo(*out, "/output");
    if (oo.get("report")) cfg.output.report = oo.string("report");
    cfg.output.lmr_columns = oo.boolean("lmr_columns", true);
    oo.finish();
  }
  if (const json* s = o.get("suites")) {
    if (!s->is_array()) throw ConfigError("/suites", "expected an array of suite names");
    for (std::size_t i = 0; i < s->size(); ++i) {
      const std::string pi = "/suites/" + std::to_string(i);
      if (!(*s)[i].is_string()) throw ConfigError(pi, "expected a suite name");
      const std::string name = (*s)[i].get<std::string>();
      if (std::find(kSuiteNames.begin(), kSuiteNames.end(), name) == kSuiteNames.end()) {
        throw ConfigError(pi, "unknown suite '" + name + "'");
      }
      cfg.suites.push_back(name);
    }
  } else {
    cfg.suites = kSuiteNames;
  }
  o.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open configuration file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ret14
