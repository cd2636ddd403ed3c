#include <doctest.h>

#include "ret14/closure.hpp"
#include "ret14/errors.hpp"
#include "ret14/special_functions.hpp"
#include "support.hpp"

using namespace ret14;
using ret14::testing::log_space;
using ret14::testing::rel_err;

namespace {

const PhysicalConstants kOdd{3.0, 2.0, 0.5};

std::vector<ThermalState> invariant_grid(const PhysicalConstants& k, int n = 12) {
  std::vector<ThermalState> out;
  for (double rho : log_space(1e-3, 1e3, n)) {
    for (double g : log_space(0.1, 100.0, n)) out.push_back({rho, k.temperature(g)});
  }
  return out;
}

double rho_c2(const ThermalState& s, const PhysicalConstants& k) { return s.rho * k.c * k.c; }

}  // namespace

TEST_SUITE("closure") {
  TEST_CASE("Geroch-Lindblom closure is compatible with every model") {
    const JuttnerModel j;
    const PolyatomicModel poly(std::make_shared<IdealDofOmega>(5.0));
    const auto ideal = ret14::testing::ideal_gas_fd();
    for (const auto& [c1, c2] : std::vector<std::pair<double, double>>{{0.0, 1.0}, {0.3, -2.0}, {5.0, 0.5}}) {
      const GerochLindblomClosure gl(c1, c2);
      for (const StateModel* m : {static_cast<const StateModel*>(&j),
                                  static_cast<const StateModel*>(&poly), ideal.get()}) {
        for (const auto& s : invariant_grid(kOdd, 6)) {
          const double r = compatibility_residual(gl, s, *m, kOdd);
          const ClosureValues v = gl.evaluate(s, kOdd);
          CHECK(std::abs(r) <= 1e-12 * std::max({std::abs(v.a), std::abs(v.b), rho_c2(s, kOdd)}));
        }
      }
    }
  }

  TEST_CASE("monatomic closure is compatible with the Juttner gas") {
    const JuttnerModel j;
    const MonatomicJuttnerClosure mono;
    for (double g : {0.5, 1.0, 5.0, 50.0}) {
      const ThermalState s{1.7, kOdd.temperature(g)};
      CHECK(std::abs(compatibility_residual(mono, s, j, kOdd)) <= 1e-9 * rho_c2(s, kOdd));
    }
    double worst = 0.0;
    for (const auto& s : invariant_grid(kOdd)) {
      worst = std::max(worst, std::abs(compatibility_residual(mono, s, j, kOdd)) / rho_c2(s, kOdd));
    }
    CHECK(worst <= 1e-9);
  }

  TEST_CASE("a 1% rescaling of b shows up linearly in the residual") {
    const JuttnerModel j;
    Perturbation pert;
    pert.scale_b = 1.01;
    const PerturbedClosure closure(std::make_shared<MonatomicJuttnerClosure>(), pert);
    for (double g : {0.5, 2.0, 20.0}) {
      const ThermalState s{1.0, kOdd.temperature(g)};
      const double expected = -0.01 * rho_c2(s, kOdd) * (0.25 + bessel_ratio_g(g) / g);
      CHECK(std::abs(compatibility_residual(closure, s, j, kOdd) - expected) <=
            1e-10 * rho_c2(s, kOdd));
    }
  }

  TEST_CASE("a from b") {
    const JuttnerModel j;
    const PhysicalConstants k;
    const ThermalState s{2.0, 0.7};
    // b = T, b_T = 1: a = (1/4)(-T + T) = 0.
    CHECK(std::abs(a_from_b(s.T, 0.0, 1.0, s, j, k)) <= 1e-15);

    for (double g : {0.3, 3.0, 30.0}) {
      const ThermalState st{1.3, kOdd.temperature(g)};
      const ClosureValues mono = MonatomicJuttnerClosure().evaluate(st, kOdd);
      const double a = a_from_b(mono.b, mono.b_rho, mono.b_T, st, j, kOdd);
      CHECK(rel_err(a, rho_c2(st, kOdd) * (0.25 + bessel_ratio_g(g) / g)) <= 1e-10);
    }

    // Polyatomic: b = c^2 rho (gamma omega + 1)/gamma^2 completes to the ACPR a.
    for (const GammaFunctionPtr& omega :
         {GammaFunctionPtr(std::make_shared<IdealDofOmega>(5.0)), GammaFunctionPtr(std::make_shared<JuttnerOmega>())}) {
      const PolyatomicModel poly(omega);
      const PolyatomicAcprClosure acpr(omega);
      for (double g : {0.2, 1.0, 10.0, 80.0}) {
        const ThermalState st{0.6, kOdd.temperature(g)};
        const ClosureValues v = acpr.evaluate(st, kOdd);
        const double w = omega->value(g);
        CHECK(rel_err(v.b, rho_c2(st, kOdd) * (g * w + 1.0) / (g * g)) <= 1e-14);
        CHECK(rel_err(v.a, 0.25 * rho_c2(st, kOdd) * (1.0 / (g * g) + w / g + w * w - omega->d1(g))) <=
              1e-13);
        CHECK(std::abs(a_from_b(v.b, v.b_rho, v.b_T, st, poly, kOdd) - v.a) <= 1e-9 * rho_c2(st, kOdd));
      }
    }
  }

  TEST_CASE("completed closure reproduces the monatomic a") {
    const auto j = std::make_shared<JuttnerModel>();
    const double c = kOdd.c;
    auto b = [](double rho, double T, const PhysicalConstants& k) {
      const double g = k.gamma(T);
      return rho * k.c * k.c * bessel_ratio_g(g) / g;
    };
    const CompletedClosure completed(b, j);
    for (double g : {0.5, 4.0, 40.0}) {
      const ThermalState s{0.8, kOdd.temperature(g)};
      const ClosureValues ref = MonatomicJuttnerClosure().evaluate(s, kOdd);
      const ClosureValues v = completed.evaluate(s, kOdd);
      CHECK(std::abs(v.a - ref.a) <= 1e-8 * s.rho * c * c);
      CHECK(rel_err(v.b_rho, ref.b_rho) <= 1e-6);
      CHECK(rel_err(v.b_T, ref.b_T) <= 1e-6);
      CHECK(rel_err(v.a_rho, ref.a_rho) <= 1e-6);
      CHECK(rel_err(v.a_T, ref.a_T) <= 1e-5);
      CHECK(std::abs(compatibility_residual(completed, s, *j, kOdd)) <= 1e-8 * s.rho * c * c);
    }
  }

  TEST_CASE("monatomic production: closed form against the generic expressions") {
    const JuttnerModel j;
    const MonatomicJuttnerClosure mono;
    const TransportCoefficients tr{1.3, 0.7, 2.1};
    double worst = 0.0;
    for (const auto& s : invariant_grid(kOdd)) {
      const ProductionCoefficients gen = production_coefficients(mono, s, j, tr, kOdd);
      const ProductionCoefficients cf = monatomic_production_closed_form(s, tr, kOdd);
      worst = std::max({worst, rel_err(gen.a1, cf.a1), rel_err(gen.a2, cf.a2), rel_err(gen.a3, cf.a3)});
      CHECK(gen.a2 < 0.0);
    }
    CHECK(worst <= 1e-9);
  }

  TEST_CASE("monatomic a1 needs gamma, not 1, as the leading term of its bracket") {
    // a1 = -(p/(chi T)) (gamma + 5G - gamma G^2). Replacing the leading gamma
    // by 1 breaks the agreement with the generic expression except at gamma = 1.
    const JuttnerModel j;
    const MonatomicJuttnerClosure mono;
    const TransportCoefficients tr{1.0, 1.0, 1.0};
    const PhysicalConstants k;
    for (double g : {0.5, 1.0, 3.0, 20.0}) {
      const ThermalState s{1.0, k.temperature(g)};
      const double G = bessel_ratio_g(g);
      const double p = s.rho / g;
      const double generic = production_coefficients(mono, s, j, tr, k).a1;
      const double right = -p / s.T * (g + 5.0 * G - g * G * G);
      const double misprint = -p / s.T * (1.0 + 5.0 * G - g * G * G);
      CHECK(rel_err(generic, right) <= 1e-9);
      if (g != 1.0) CHECK(rel_err(generic, misprint) > 1e-3);
    }
  }

  TEST_CASE("linear-in-rho production matches the generic form") {
    auto omega = std::make_shared<IdealDofOmega>(5.0);
    const PolyatomicModel poly(omega);
    const TransportCoefficients tr{0.9, 1.4, 0.6};
    const PolyatomicPrClosure pr(std::make_shared<JuttnerBeta>(), omega);
    const PolyatomicAcprClosure acpr(omega);
    for (const EquilibriumClosure* cl : {static_cast<const EquilibriumClosure*>(&pr),
                                         static_cast<const EquilibriumClosure*>(&acpr)}) {
      for (const auto& s : invariant_grid(kOdd, 6)) {
        const ClosureValues v = cl->evaluate(s, kOdd);
        const StateEvaluation ev = evaluate(poly, s, kOdd);
        const ProductionCoefficients gen = production_coefficients(v, ev, s, tr, kOdd);
        const ProductionCoefficients lin = linear_in_rho_production(v, ev, s, tr, kOdd);
        CHECK(std::abs(gen.a1 - lin.a1) <= 1e-9 * std::max(std::abs(gen.a1), ev.p / (tr.chi * s.T)));
        CHECK(rel_err(gen.a2, lin.a2) <= 1e-12);
        CHECK(std::abs(gen.a3 - lin.a3) <=
              1e-9 * std::max(std::abs(gen.a3), ev.p / (kOdd.c * kOdd.c * tr.nu)));
      }
    }
  }

  TEST_CASE("production errors") {
    const JuttnerModel j;
    const MonatomicJuttnerClosure mono;
    const ThermalState s{1.0, 1.0};
    const PhysicalConstants k;
    for (const auto& [tr, name] :
         std::vector<std::pair<TransportCoefficients, std::string>>{{{0.0, 1.0, 1.0}, "chi"},
                                                                    {{1.0, 0.0, 1.0}, "mu"},
                                                                    {{1.0, 1.0, 0.0}, "nu"}}) {
      try {
        (void)production_coefficients(mono, s, j, tr, k);
        FAIL("expected DivisionError");
      } catch (const DivisionError& e) {
        CHECK(e.coefficient() == name);
      }
    }
    CHECK_THROWS_AS(TransportCoefficients({-1.0, 1.0, 1.0}).validate(), DomainError);

    UserModelSpec spec;
    spec.p = [](double, double T, const PhysicalConstants&) { return T * T; };
    spec.eps = [](double, double T, const PhysicalConstants&) { return 1.5 * T; };
    spec.p_rho = [](double, double, const PhysicalConstants&) { return 0.0; };
    const UserModel flat(spec);
    CHECK_THROWS_AS(production_coefficients(GerochLindblomClosure(), s, flat, TransportCoefficients{}, k),
                    SingularDerivativeError);
    CHECK_THROWS_AS(compatibility_residual(GerochLindblomClosure(), s, flat, k), SingularDerivativeError);

    CHECK_THROWS_AS(builtin_closure(BuiltinClosureKind::PolyatomicAcpr), MissingModelError);
    BuiltinClosureOptions only_omega;
    only_omega.omega = std::make_shared<IdealDofOmega>(3.0);
    CHECK_THROWS_AS(builtin_closure(BuiltinClosureKind::PolyatomicPr, only_omega), MissingModelError);
    CHECK_NOTHROW(builtin_closure(BuiltinClosureKind::PolyatomicAcpr, only_omega));
    CHECK(builtin_closure(BuiltinClosureKind::MonatomicJuttner)->provenance() == "monatomic_juttner");
  }

  TEST_CASE("heat-flux conditions") {
    const JuttnerModel j;
    const TransportCoefficients tr{1.7, 1.0, 1.0};
    for (const auto& s : invariant_grid(kOdd, 6)) {
      const HeatfluxResiduals r = heatflux_condition_residuals(MonatomicJuttnerClosure(), s, j, tr, kOdd);
      CHECK(std::abs(r.r1) <= 1e-9 * r.scale1);
      CHECK(std::abs(r.r2) <= 1e-9 * r.scale2);

      const ClosureValues v = MonatomicJuttnerClosure().evaluate(s, kOdd);
      const StateEvaluation ev = evaluate(j, s, kOdd);
      const double a1 = production_coefficients(v, ev, s, tr, kOdd).a1;
      const HeatfluxResiduals bad = heatflux_condition_residuals(v, 2.0 * a1, ev, s, tr);
      // Doubling a1 shifts r1 by exactly -chi a1 T p_rho, small next to
      // (e+p) b_rho at large gamma but far above round-off.
      CHECK(std::abs(bad.r1) > 1e-5 * bad.scale1);
      CHECK(rel_err(bad.r1, -tr.chi * a1 * s.T * ev.p_rho) <= 1e-6);
    }

    // Geroch-Lindblom: b_rho = 0, so a1 = -b_T / chi = -c2 / chi.
    const GerochLindblomClosure gl(0.4, 1.5);
    const ThermalState s{2.0, 0.5};
    CHECK(rel_err(production_coefficients(gl, s, j, tr, kOdd).a1, -1.5 / tr.chi) <= 1e-14);
    const HeatfluxResiduals r = heatflux_condition_residuals(gl, s, j, tr, kOdd);
    CHECK(std::abs(r.r1) <= 1e-12 * r.scale1);
    CHECK(std::abs(r.r2) <= 1e-12 * r.scale2);
  }

  TEST_CASE("classical-literature symbols") {
    const ProductionCoefficients prod{0.3, -0.7, 1.1};
    const LmrSymbols l = lmr_symbols(prod, kOdd);
    CHECK(l.B4 == prod.a1);
    CHECK(l.B3 == prod.a2);
    CHECK(l.B1_pi == doctest::Approx(-prod.a3 * kOdd.c * kOdd.c / 4.0));
  }

  TEST_CASE("monatomic invariants over a wide grid") {
    const JuttnerModel j;
    const TransportCoefficients tr{1.0, 1.0, 1.0};
    for (const auto& s : invariant_grid(PhysicalConstants{}, 15)) {
      const PhysicalConstants k;
      const ClosureValues v = MonatomicJuttnerClosure().evaluate(s, k);
      CHECK(std::isfinite(v.a));
      CHECK(v.b > 0.0);
      const ProductionCoefficients prod = production_coefficients(MonatomicJuttnerClosure(), s, j, tr, k);
      CHECK(prod.a2 < 0.0);
      CHECK(std::isfinite(prod.a1));
      CHECK(std::isfinite(prod.a3));
      CHECK(std::abs(compatibility_residual(v, evaluate(j, s, k), s)) <= 1e-9 * s.rho);
    }
  }
}
