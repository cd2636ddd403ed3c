#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ret14/classical_limit.hpp"
#include "ret14/closure.hpp"
#include "ret14/config.hpp"
#include "ret14/covariant.hpp"
#include "ret14/eckart_check.hpp"
#include "ret14/main_field.hpp"
#include "ret14/special_functions.hpp"
#include "ret14/state_models.hpp"
#include "ret14/verify.hpp"

namespace py = pybind11;
using namespace ret14;

namespace {

FourVector to_vec(const std::array<double, 4>& a) { return FourVector{a}; }

std::array<std::array<double, 4>, 4> unpack(const SymTensor2& t) {
  std::array<std::array<double, 4>, 4> m{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m[i][j] = t(i, j);
  return m;
}

py::dict limit_dict(const LimitEstimate& e) {
  py::dict d;
  d["name"] = e.name;
  d["value"] = e.value;
  d["error"] = e.error;
  d["rate"] = e.rate ? py::cast(*e.rate) : py::none();
  d["exact"] = e.exact;
  d["converged"] = e.converged;
  d["diagnostic"] = e.diagnostic;
  d["c_values"] = e.c_values;
  d["sequence"] = e.sequence;
  return d;
}

py::object to_python_json(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(serialize_report(j));
}

}  // namespace

PYBIND11_MODULE(_ret14, m) {
  m.doc() = "Relativistic 14-moment closure checks";
  m.attr("__version__") = kToolVersion;

  auto err = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", err.ptr());
  py::register_exception<UnsupportedOrderError>(m, "UnsupportedOrderError", err.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", err.ptr());
  py::register_exception<IntegrabilityError>(m, "IntegrabilityError", err.ptr());
  py::register_exception<SingularDerivativeError>(m, "SingularDerivativeError", err.ptr());
  py::register_exception<DegeneracyError>(m, "DegeneracyError", err.ptr());
  py::register_exception<DivisionError>(m, "DivisionError", err.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", err.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", err.ptr());
  py::register_exception<MissingModelError>(m, "MissingModelError", err.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", err.ptr());

  // special functions
  m.def("bessel_k", &bessel_k, py::arg("order"), py::arg("x"));
  m.def("bessel_k_scaled", &bessel_k_scaled, py::arg("order"), py::arg("x"));
  m.def("bessel_ratio_g", &bessel_ratio_g, py::arg("gamma"));
  m.def("bessel_ratio_g_prime", &bessel_ratio_g_prime, py::arg("gamma"));

  // state
  py::class_<PhysicalConstants>(m, "PhysicalConstants")
      .def(py::init([](double c, double mass, double k_B) {
             PhysicalConstants k{c, mass, k_B};
             k.validate();
             return k;
           }),
           py::arg("c") = 1.0, py::arg("m") = 1.0, py::arg("k_B") = 1.0)
      .def_readwrite("c", &PhysicalConstants::c)
      .def_readwrite("m", &PhysicalConstants::m)
      .def_readwrite("k_B", &PhysicalConstants::k_B)
      .def("gamma", &PhysicalConstants::gamma, py::arg("T"))
      .def("temperature", &PhysicalConstants::temperature, py::arg("gamma"));

  py::class_<ThermalState>(m, "ThermalState")
      .def(py::init([](double rho, double T) {
             ThermalState s{rho, T};
             s.validate();
             return s;
           }),
           py::arg("rho"), py::arg("T"))
      .def_readwrite("rho", &ThermalState::rho)
      .def_readwrite("T", &ThermalState::T)
      .def("__repr__", [](const ThermalState& s) {
        return "ThermalState(rho=" + format_double(s.rho) + ", T=" + format_double(s.T) + ")";
      });

  py::class_<StateEvaluation>(m, "StateEvaluation")
      .def_readonly("p", &StateEvaluation::p)
      .def_readonly("e", &StateEvaluation::e)
      .def_readonly("eps", &StateEvaluation::eps)
      .def_readonly("S", &StateEvaluation::S)
      .def_readonly("p_rho", &StateEvaluation::p_rho)
      .def_readonly("p_T", &StateEvaluation::p_T)
      .def_readonly("e_rho", &StateEvaluation::e_rho)
      .def_readonly("e_T", &StateEvaluation::e_T)
      .def_readonly("eps_rho", &StateEvaluation::eps_rho)
      .def_readonly("eps_T", &StateEvaluation::eps_T);

  py::class_<GammaFunction, std::shared_ptr<GammaFunction>>(m, "GammaFunction")
      .def("value", &GammaFunction::value, py::arg("gamma"))
      .def("d1", &GammaFunction::d1, py::arg("gamma"))
      .def("d2", &GammaFunction::d2, py::arg("gamma"))
      .def("antiderivative", &GammaFunction::antiderivative, py::arg("gamma"))
      .def_property_readonly("name", &GammaFunction::name);
  py::class_<JuttnerOmega, GammaFunction, std::shared_ptr<JuttnerOmega>>(m, "JuttnerOmega")
      .def(py::init<>());
  py::class_<IdealDofOmega, GammaFunction, std::shared_ptr<IdealDofOmega>>(m, "IdealDofOmega")
      .def(py::init<double>(), py::arg("dof"));
  py::class_<JuttnerBeta, GammaFunction, std::shared_ptr<JuttnerBeta>>(m, "JuttnerBeta")
      .def(py::init<>());
  py::class_<CubicSpline, GammaFunction, std::shared_ptr<CubicSpline>>(m, "CubicSpline")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("knots"),
           py::arg("values"));

  py::class_<StateModel, std::shared_ptr<StateModel>>(m, "StateModel")
      .def("evaluate", &StateModel::evaluate, py::arg("state"), py::arg("constants"))
      .def_property_readonly("name", &StateModel::name);
  py::class_<PolyatomicModel, StateModel, std::shared_ptr<PolyatomicModel>>(m, "PolyatomicModel")
      .def(py::init([](std::shared_ptr<GammaFunction> omega, std::string name) {
             return std::make_shared<PolyatomicModel>(std::move(omega), std::move(name));
           }),
           py::arg("omega"), py::arg("name") = "polyatomic");
  py::class_<JuttnerModel, PolyatomicModel, std::shared_ptr<JuttnerModel>>(m, "JuttnerModel")
      .def(py::init<>());
  m.def("evaluate",
        py::overload_cast<const StateModel&, const ThermalState&, const PhysicalConstants&>(
            &evaluate),
        py::arg("model"), py::arg("state"), py::arg("constants"));
  m.def("gibbs_residual", &gibbs_residual, py::arg("evaluation"), py::arg("state"));

  // closures
  py::class_<TransportCoefficients>(m, "TransportCoefficients")
      .def(py::init([](double chi, double mu, double nu) {
             return TransportCoefficients{chi, mu, nu};
           }),
           py::arg("chi") = 1.0, py::arg("mu") = 1.0, py::arg("nu") = 1.0)
      .def_readwrite("chi", &TransportCoefficients::chi)
      .def_readwrite("mu", &TransportCoefficients::mu)
      .def_readwrite("nu", &TransportCoefficients::nu);

  py::class_<ClosureValues>(m, "ClosureValues")
      .def_readonly("a", &ClosureValues::a)
      .def_readonly("b", &ClosureValues::b)
      .def_readonly("a_rho", &ClosureValues::a_rho)
      .def_readonly("a_T", &ClosureValues::a_T)
      .def_readonly("b_rho", &ClosureValues::b_rho)
      .def_readonly("b_T", &ClosureValues::b_T);

  py::class_<ProductionCoefficients>(m, "ProductionCoefficients")
      .def_readonly("a1", &ProductionCoefficients::a1)
      .def_readonly("a2", &ProductionCoefficients::a2)
      .def_readonly("a3", &ProductionCoefficients::a3);

  py::class_<EquilibriumClosure, std::shared_ptr<EquilibriumClosure>>(m, "EquilibriumClosure")
      .def("evaluate", &EquilibriumClosure::evaluate, py::arg("state"), py::arg("constants"))
      .def_property_readonly("provenance", &EquilibriumClosure::provenance);
  py::class_<MonatomicJuttnerClosure, EquilibriumClosure,
             std::shared_ptr<MonatomicJuttnerClosure>>(m, "MonatomicJuttnerClosure")
      .def(py::init<>());
  py::class_<PolyatomicAcprClosure, EquilibriumClosure, std::shared_ptr<PolyatomicAcprClosure>>(
      m, "PolyatomicAcprClosure")
      .def(py::init([](std::shared_ptr<GammaFunction> omega) {
             return std::make_shared<PolyatomicAcprClosure>(std::move(omega));
           }),
           py::arg("omega"));
  py::class_<PolyatomicPrClosure, EquilibriumClosure, std::shared_ptr<PolyatomicPrClosure>>(
      m, "PolyatomicPrClosure")
      .def(py::init([](std::shared_ptr<GammaFunction> beta, std::shared_ptr<GammaFunction> omega) {
             return std::make_shared<PolyatomicPrClosure>(std::move(beta), std::move(omega));
           }),
           py::arg("beta"), py::arg("omega"));
  py::class_<GerochLindblomClosure, EquilibriumClosure, std::shared_ptr<GerochLindblomClosure>>(
      m, "GerochLindblomClosure")
      .def(py::init<double, double>(), py::arg("c1") = 0.0, py::arg("c2") = 1.0);
  py::class_<PerturbedClosure, EquilibriumClosure, std::shared_ptr<PerturbedClosure>>(
      m, "PerturbedClosure")
      .def(py::init([](std::shared_ptr<EquilibriumClosure> base, double scale_a, double scale_b, double shift_a) {
             return std::make_shared<PerturbedClosure>(std::move(base),
                                                       Perturbation{scale_a, scale_b, shift_a});
           }),
           py::arg("base"), py::arg("scale_a") = 1.0, py::arg("scale_b") = 1.0,
           py::arg("shift_a") = 0.0);

  m.def("compatibility_residual",
        py::overload_cast<const EquilibriumClosure&, const ThermalState&, const StateModel&,
                          const PhysicalConstants&>(&compatibility_residual),
        py::arg("closure"), py::arg("state"), py::arg("model"), py::arg("constants"));
  m.def(
      "a_from_b",
      [](double b, double b_rho, double b_T, const ThermalState& s, const StateModel& model,
         const PhysicalConstants& k) { return a_from_b(b, b_rho, b_T, s, model, k); },
      py::arg("b"), py::arg("b_rho"), py::arg("b_T"), py::arg("state"), py::arg("model"),
      py::arg("constants"));
  m.def("production_coefficients",
        py::overload_cast<const EquilibriumClosure&, const ThermalState&, const StateModel&,
                          const TransportCoefficients&, const PhysicalConstants&>(
            &production_coefficients),
        py::arg("closure"), py::arg("state"), py::arg("model"), py::arg("transport"),
        py::arg("constants"));
  m.def("monatomic_production_closed_form", &monatomic_production_closed_form, py::arg("state"),
        py::arg("transport"), py::arg("constants"));
  m.def(
      "heatflux_condition_residuals",
      [](const EquilibriumClosure& closure, const ThermalState& s, const StateModel& model,
         const TransportCoefficients& tr, const PhysicalConstants& k) {
        const HeatfluxResiduals r = heatflux_condition_residuals(closure, s, model, tr, k);
        py::dict d;
        d["r1"] = r.r1;
        d["r2"] = r.r2;
        d["scale1"] = r.scale1;
        d["scale2"] = r.scale2;
        return d;
      },
      py::arg("closure"), py::arg("state"), py::arg("model"), py::arg("transport"),
      py::arg("constants"));

  // covariant helpers; vectors and tensors cross as nested lists with upper indices
  m.def(
      "velocity_from_three",
      [](const std::array<double, 3>& v, double c) { return velocity_from_three(v, c).x; },
      py::arg("v"), py::arg("c"));
  m.def(
      "projector",
      [](const std::array<double, 4>& U, double c) { return unpack(projector(to_vec(U), c)); },
      py::arg("U"), py::arg("c"));

  // field projection
  m.def(
      "random_projection_residuals",
      [](const EquilibriumClosure& closure, const StateModel& model,
         const TransportCoefficients& tr, const PhysicalConstants& k, std::uint64_t seed,
         std::uint64_t index) {
        const FieldPoint pt = random_field_point(seed, index, RandomPointOptions{}, k);
        const ProductionCoefficients prod =
            production_coefficients(closure, pt.state, model, tr, k);
        const ProjectionResiduals r = projection_residuals(pt, closure, prod, tr, model, k);
        py::dict d;
        d["rho"] = pt.state.rho;
        d["T"] = pt.state.T;
        d["trace"] = r.trace;
        d["heat"] = r.heat.x;
        d["heat_norm"] = r.heat_norm;
        d["shear"] = unpack(r.shear);
        d["shear_norm"] = r.shear_norm;
        d["scale"] = r.scale;
        d["max_relative"] = r.max_relative();
        d["compatibility_residual"] = r.compatibility_residual;
        d["warning"] = r.warning ? py::cast(*r.warning) : py::none();
        return d;
      },
      py::arg("closure"), py::arg("model"), py::arg("transport"), py::arg("constants"),
      py::arg("seed") = 20240101, py::arg("index") = 0);

  // main field
  m.def(
      "equilibrium_main_field",
      [](const ThermalState& s, const std::array<double, 4>& U, const StateModel& model,
         const PhysicalConstants& k) {
        const MainFieldEq mf = equilibrium_main_field(s, to_vec(U), model, k);
        py::dict d;
        d["lambda"] = mf.lambda;
        d["lambda_vec"] = mf.lambda_vec.x;
        d["G0"] = mf.G0;
        d["g_r"] = mf.g_r;
        return d;
      },
      py::arg("state"), py::arg("U"), py::arg("model"), py::arg("constants"));
  m.def(
      "euler_convexity",
      [](const ThermalState& s, const StateModel& model, const PhysicalConstants& k,
         double threshold) {
        const ConvexityReport r = euler_convexity(s, model, k, threshold);
        py::dict d;
        d["negative_definite"] = r.negative_definite;
        d["n_negative"] = r.n_negative;
        d["n_zero"] = r.n_zero;
        d["n_positive"] = r.n_positive;
        d["eigenvalues"] = r.eigenvalues;
        return d;
      },
      py::arg("state"), py::arg("model"), py::arg("constants"), py::arg("threshold") = 1e-12);

  // classical limit
  m.def("default_c_sequence", &default_c_sequence, py::arg("state"), py::arg("constants"));
  m.def(
      "classical_coefficients",
      [](const EquilibriumClosure& closure, const StateModel& model,
         const TransportCoefficients& tr, const ThermalState& s, const PhysicalConstants& k,
         std::optional<std::vector<double>> cs, double tol) {
        const std::vector<double> seq = cs ? *cs : default_c_sequence(s, k);
        const ClassicalCoefficients cc = classical_coefficients(closure, model, tr, s, k, seq, tol);
        py::dict d;
        for (const LimitEstimate* e : cc.all()) d[py::str(e->name)] = limit_dict(*e);
        d["convergence_rate"] = cc.convergence_rate;
        d["converged"] = cc.converged;
        d["warnings"] = cc.warnings;
        return d;
      },
      py::arg("closure"), py::arg("model"), py::arg("transport"), py::arg("state"),
      py::arg("constants"), py::arg("c_sequence") = py::none(), py::arg("tol") = 1e-6);

  // configuration driven runs
  py::class_<RunConfig>(m, "RunConfig")
      .def_readonly("canonical", &RunConfig::canonical)
      .def_property_readonly("hash", [](const RunConfig& c) { return c.hash; })
      .def_readonly("suites", &RunConfig::suites);
  m.def("parse_config", &parse_config, py::arg("json_text"));
  m.def("load_config", &load_config, py::arg("path"));
  m.def(
      "run_verify",
      [](const RunConfig& cfg, std::vector<std::string> suites, int threads) {
        VerifyResult r;
        {
          py::gil_scoped_release release;
          r = run_verify(cfg, VerifyOptions{std::move(suites), threads});
        }
        return py::make_tuple(to_python_json(r.report), r.exit_code);
      },
      py::arg("config"), py::arg("suites") = std::vector<std::string>{}, py::arg("threads") = 0);
  m.def(
      "run_export",
      [](const RunConfig& cfg, const std::filesystem::path& dir, int threads) {
        py::gil_scoped_release release;
        return run_export(cfg, dir, threads);
      },
      py::arg("config"), py::arg("out_dir"), py::arg("threads") = 0);
}
