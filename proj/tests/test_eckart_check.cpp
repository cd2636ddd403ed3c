#include <doctest.h>

#include "ret14/eckart_check.hpp"
#include "ret14/errors.hpp"
#include "support.hpp"

using namespace ret14;
using ret14::testing::rel_err;

namespace {

const PhysicalConstants kOdd{3.0, 2.0, 0.5};

FieldPoint at_rest(const ThermalState& s, double c) {
  FieldPoint pt;
  pt.state = s;
  pt.U = rest_velocity(c);
  return pt;
}

struct Setup {
  StateModelPtr model;
  ClosurePtr closure;
};

std::vector<Setup> builtin_setups() {
  auto juttner = std::make_shared<JuttnerModel>();
  GammaFunctionPtr omega = std::make_shared<IdealDofOmega>(5.0);
  auto poly = std::make_shared<PolyatomicModel>(omega);
  BuiltinClosureOptions opt;
  opt.omega = omega;
  opt.beta = std::make_shared<JuttnerBeta>();
  BuiltinClosureOptions jopt;
  jopt.omega = std::make_shared<JuttnerOmega>();
  return {
      {juttner, builtin_closure(BuiltinClosureKind::MonatomicJuttner)},
      {juttner, builtin_closure(BuiltinClosureKind::PolyatomicAcpr, jopt)},
      {poly, builtin_closure(BuiltinClosureKind::PolyatomicAcpr, opt)},
      {poly, builtin_closure(BuiltinClosureKind::PolyatomicPr, opt)},
      {juttner, builtin_closure(BuiltinClosureKind::GerochLindblom)},
      {poly, std::make_shared<GerochLindblomClosure>(0.2, 1.7)},
  };
}

ProjectionResiduals residuals(const FieldPoint& pt, const Setup& su, const TransportCoefficients& tr,
                              const PhysicalConstants& k) {
  const ProductionCoefficients prod = production_coefficients(*su.closure, pt.state, *su.model, tr, k);
  return projection_residuals(pt, *su.closure, prod, tr, *su.model, k);
}

FieldPoint scaled_gradients(FieldPoint pt, double f) {
  pt.grad_rho *= f;
  pt.grad_T *= f;
  for (auto& row : pt.grad_U)
    for (double& x : row) x *= f;
  return pt;
}

}  // namespace

TEST_SUITE("eckart_check") {
  TEST_CASE("material derivatives") {
    const JuttnerModel j;
    const ThermalState s{1.5, kOdd.temperature(2.0)};

    const MaterialDerivatives zero = eliminate_material_derivatives(at_rest(s, kOdd.c), j, kOdd);
    CHECK(zero.rho_dot == 0.0);
    CHECK(zero.T_dot == 0.0);
    for (std::size_t a = 0; a < 4; ++a) CHECK(zero.U_dot[a] == 0.0);

    FieldPoint pt = at_rest(s, kOdd.c);
    const double theta = 0.6;
    for (std::size_t i = 1; i < 4; ++i) pt.grad_U[i][i] = theta / 3.0;
    const MaterialDerivatives md = eliminate_material_derivatives(pt, j, kOdd);
    const StateEvaluation ev = evaluate(j, s, kOdd);
    CHECK(rel_err(md.rho_dot, -s.rho * theta) <= 1e-15);
    CHECK(rel_err(md.T_dot, -s.T * ev.p_T / ev.e_T * theta) <= 1e-15);

    RandomPointOptions opt;
    for (std::uint64_t i = 0; i < 50; ++i) {
      const FieldPoint rp = random_field_point(3, i, opt, kOdd);
      const MaterialDerivatives m = eliminate_material_derivatives(rp, j, kOdd);
      double scale = 0.0;
      for (std::size_t a = 0; a < 4; ++a) scale = std::max(scale, std::abs(m.U_dot[a] * rp.U[a]));
      CHECK(std::abs(dot(m.U_dot, rp.U)) <= 1e-12 * std::max(scale, 1.0));
    }

    UserModelSpec spec;
    spec.p = [](double rho, double T, const PhysicalConstants&) { return rho * T; };
    spec.eps = [](double, double, const PhysicalConstants&) { return 1.0; };
    spec.eps_T = [](double, double, const PhysicalConstants&) { return 0.0; };
    const UserModel frozen(spec);
    CHECK_THROWS_AS(eliminate_material_derivatives(pt, frozen, kOdd), DegeneracyError);
  }

  TEST_CASE("Eckart constitutive laws") {
    const JuttnerModel j;
    const TransportCoefficients tr{1.3, 0.8, 0.5};
    const ThermalState s{1.2, kOdd.temperature(1.5)};

    // Uniform motion at constant temperature produces no dissipative fields.
    FieldPoint rigid;
    rigid.state = s;
    rigid.U = velocity_from_three({0.4 * kOdd.c, 0.1 * kOdd.c, 0.0}, kOdd.c);
    const NoneqFields none = eckart_constitutive(rigid, tr, j, kOdd);
    CHECK(none.pi == 0.0);
    for (std::size_t a = 0; a < 4; ++a) CHECK(none.q[a] == 0.0);
    for (double v : none.t.packed()) CHECK(v == 0.0);

    // Temperature gradient at rest: q^x = -chi dT/dx (1 - T p_T / (e + p)),
    // the pressure-driven acceleration supplying the second term.
    FieldPoint heat = at_rest(s, kOdd.c);
    const double dTdx = 0.37;
    heat.grad_T[1] = dTdx;
    const StateEvaluation ev = evaluate(j, s, kOdd);
    const NoneqFields fq = eckart_constitutive(heat, tr, j, kOdd);
    CHECK(rel_err(fq.q[1], -tr.chi * dTdx * (1.0 - s.T * ev.p_T / (ev.e + ev.p))) <= 1e-14);
    CHECK(fq.q[0] == 0.0);

    // d_x U^y = s gives t^xy = -mu s; with the lowered component d_x U_y = s
    // the sign flips.
    FieldPoint shear = at_rest(s, kOdd.c);
    const double sh = 0.25;
    shear.grad_U[1][2] = sh;
    const NoneqFields ft = eckart_constitutive(shear, tr, j, kOdd);
    CHECK(rel_err(ft.t(1, 2), -tr.mu * sh) <= 1e-14);
    shear.grad_U[1][2] = -sh;  // U_y = -U^y
    CHECK(rel_err(eckart_constitutive(shear, tr, j, kOdd).t(1, 2), tr.mu * sh) <= 1e-14);

    FieldPoint exp_pt = at_rest(s, kOdd.c);
    for (std::size_t i = 1; i < 4; ++i) exp_pt.grad_U[i][i] = 0.1;
    CHECK(rel_err(eckart_constitutive(exp_pt, tr, j, kOdd).pi, -tr.nu * 0.3) <= 1e-14);
  }

  TEST_CASE("projections vanish for compatible built-in closures at random points") {
    const TransportCoefficients tr{1.1, 0.9, 1.7};
    RandomPointOptions opt;
    opt.T_min = kOdd.temperature(100.0);
    opt.T_max = kOdd.temperature(0.1);
    for (const Setup& su : builtin_setups()) {
      double worst = 0.0;
      for (std::uint64_t i = 0; i < 60; ++i) {
        const FieldPoint pt = random_field_point(11, i, opt, kOdd);
        const ProjectionResiduals r = residuals(pt, su, tr, kOdd);
        worst = std::max(worst, r.max_relative());
        CHECK_FALSE(r.warning.has_value());
      }
      INFO("closure " << su.closure->provenance() << ", model " << su.model->name());
      CHECK(worst <= 1e-8);
    }
  }

  TEST_CASE("bump family for every built-in closure") {
    const TransportCoefficients tr{0.7, 1.2, 0.4};
    BumpFamily bump;
    bump.T0 = kOdd.temperature(2.0);
    for (const Setup& su : builtin_setups()) {
      double worst = 0.0;
      for (std::uint64_t i = 0; i < 40; ++i) {
        const FieldPoint pt = bump.sample(5, i, kOdd);
        CHECK_NOTHROW(pt.validate(kOdd.c));
        worst = std::max(worst, residuals(pt, su, tr, kOdd).max_relative());
      }
      INFO("closure " << su.closure->provenance());
      CHECK(worst <= 1e-8);
    }
  }

  TEST_CASE("structure of the residual projections") {
    auto j = std::make_shared<JuttnerModel>();
    Perturbation pert;
    pert.scale_a = 1.05;
    const Setup su{j, std::make_shared<PerturbedClosure>(std::make_shared<MonatomicJuttnerClosure>(), pert)};
    const TransportCoefficients tr{1.0, 1.0, 1.0};
    RandomPointOptions opt;
    for (std::uint64_t i = 0; i < 20; ++i) {
      const FieldPoint pt = random_field_point(17, i, opt, kOdd);
      const ProjectionResiduals r = residuals(pt, su, tr, kOdd);
      REQUIRE(r.warning.has_value());
      CHECK(r.heat_norm > 1e-6 * r.scale);
      const double c = kOdd.c;
      CHECK(std::abs(dot(r.heat, pt.U)) <= 1e-10 * r.heat_norm * c * 10);
      CHECK(std::abs(trace(r.shear)) <= 1e-10 * std::max(r.shear_norm, r.scale));
      const FourVector sU = contract(r.shear, pt.U);
      for (std::size_t a = 0; a < 4; ++a) CHECK(std::abs(sU[a]) <= 1e-10 * r.scale * c * 10);

      // Linear in the gradients.
      const ProjectionResiduals r2 = residuals(scaled_gradients(pt, 2.0), su, tr, kOdd);
      CHECK(rel_err(r2.heat_norm, 2.0 * r.heat_norm) <= 1e-8);
    }

    // Homogeneous state: nothing to balance.
    FieldPoint still;
    still.state = {1.0, 1.0};
    still.U = velocity_from_three({0.3 * kOdd.c, 0.0, 0.0}, kOdd.c);
    const ProjectionResiduals r0 = residuals(still, su, tr, kOdd);
    CHECK(r0.max_relative() == 0.0);
  }

  TEST_CASE("heat residual is linear in the compatibility violation") {
    auto j = std::make_shared<JuttnerModel>();
    const TransportCoefficients tr{1.0, 1.0, 1.0};
    const FieldPoint pt = random_field_point(23, 4, RandomPointOptions{}, kOdd);
    auto heat_for = [&](double eps) {
      Perturbation pert;
      pert.scale_a = 1.0 + eps;
      const Setup su{j, std::make_shared<PerturbedClosure>(std::make_shared<MonatomicJuttnerClosure>(), pert)};
      return residuals(pt, su, tr, kOdd).heat_norm;
    };
    const double h1 = heat_for(1e-3);
    const double h2 = heat_for(2e-3);
    CHECK(h1 > 0.0);
    CHECK(rel_err(h2, 2.0 * h1) <= 1e-5);
  }

  TEST_CASE("a shift of a enters the heat projection only through the acceleration") {
    // h_bd U_c d_a [da U^a (h^bc + 3 U^b U^c / c^2)] / c = 4 da Udot_d / c.
    auto j = std::make_shared<JuttnerModel>();
    const TransportCoefficients tr{1.0, 1.0, 1.0};
    Perturbation pert;
    pert.shift_a = 0.3;
    const Setup su{j, std::make_shared<PerturbedClosure>(std::make_shared<MonatomicJuttnerClosure>(), pert)};
    for (std::uint64_t i = 0; i < 20; ++i) {
      const FieldPoint pt = random_field_point(41, i, RandomPointOptions{}, kOdd);
      const double da = 0.3 * pt.state.rho * kOdd.k_B * pt.state.T / kOdd.m;
      const MaterialDerivatives md = eliminate_material_derivatives(pt, *j, kOdd);
      const double udot = std::sqrt(-dot(md.U_dot, md.U_dot));
      const ProjectionResiduals r = residuals(pt, su, tr, kOdd);
      CHECK(rel_err(r.heat_norm, 4.0 * da * udot / kOdd.c) <= 1e-8);
    }
  }

  TEST_CASE("Eckart entropy production is non-negative") {
    const JuttnerModel j;
    RandomPointOptions opt;
    for (std::uint64_t i = 0; i < 100; ++i) {
      const FieldPoint pt = random_field_point(29, i, opt, kOdd);
      const TransportCoefficients tr{i % 3 == 0 ? 0.0 : 1.2, i % 5 == 0 ? 0.0 : 0.7, i % 7 == 0 ? 0.0 : 2.0};
      const NoneqFields f = eckart_constitutive(pt, tr, j, kOdd);
      const MaterialDerivatives md = eliminate_material_derivatives(pt, j, kOdd);
      const double sigma = eckart_entropy_production(pt, f, md, kOdd);
      CHECK(sigma >= -1e-12 * std::max(1.0, std::abs(sigma)));
    }
  }

  TEST_CASE("counter-based randomness is reproducible") {
    const CounterRng a(42), b(42), other(42, 1);
    for (std::uint64_t i = 0; i < 100; ++i) {
      CHECK(a.bits(i) == b.bits(i));
      CHECK(a.bits(i) != other.bits(i));
      const double u = a.uniform(i);
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
    const FieldPoint p1 = random_field_point(9, 7, RandomPointOptions{}, kOdd);
    const FieldPoint p2 = random_field_point(9, 7, RandomPointOptions{}, kOdd);
    CHECK(p1.state.rho == p2.state.rho);
    CHECK(p1.grad_U == p2.grad_U);
  }

  TEST_CASE("field point validation") {
    FieldPoint pt = at_rest({1.0, 1.0}, kOdd.c);
    pt.grad_U[1][0] = 0.5;  // U_b d_x U^b != 0
    CHECK_THROWS_AS(pt.validate(kOdd.c), ValidationError);
    pt = at_rest({1.0, 1.0}, kOdd.c);
    pt.U[0] *= 1.1;
    CHECK_THROWS_AS(pt.validate(kOdd.c), NormalizationError);
  }
}
