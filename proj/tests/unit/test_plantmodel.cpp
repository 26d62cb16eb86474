#include "doctest.h"
#include "rfoc/plantmodel.hpp"
#include "support/fixtures.hpp"

using namespace rfoc;

TEST_CASE("instantiate on the example plant") {
  const UncertainPlant p = fixtures::example_plant();
  CHECK(p.a_dev()[0] == doctest::Approx(0.6));
  CHECK(p.a_dev()[1] == doctest::Approx(2.0));
  CHECK(p.b_dev()[0] == doctest::Approx(1.6));
  CHECK(p.b_dev()[1] == doctest::Approx(0.8));
  const PlantInstance z = instantiate(p, {{0, 0}, {0, 0}});
  CHECK(z.a == p.a_center());
  CHECK(z.b == p.b_center());
  const PlantInstance hi = instantiate(p, {{1, 1}, {1, 1}});
  const std::vector<double> a_hi{1, 3.6, -8.0}, b_hi{0, 9.6, 4.8};
  for (int i = 0; i < 3; ++i) {
    CHECK(hi.a[i] == doctest::Approx(a_hi[i]));
    CHECK(hi.b[i] == doctest::Approx(b_hi[i]));
  }
  const PlantInstance lo = instantiate(p, {{-1, -1}, {-1, -1}});
  const std::vector<double> a_lo{1, 2.4, -12.0}, b_lo{0, 6.4, 3.2};
  for (int i = 0; i < 3; ++i) {
    CHECK(lo.a[i] == doctest::Approx(a_lo[i]));
    CHECK(lo.b[i] == doctest::Approx(b_lo[i]));
  }
  CHECK_THROWS_AS(instantiate(p, {{1.5, 0}, {0, 0}}), std::invalid_argument);
}

TEST_CASE("instantiated coefficients stay inside the interval bounds") {
  const UncertainPlant p = fixtures::example_plant();
  const auto ab = p.a_bounds(), bb = p.b_bounds();
  const double g[] = {-1.0, 0.0, 1.0};
  for (double d0 : g)
    for (double d1 : g)
      for (double d2 : g)
        for (double d3 : g) {
          const PlantInstance q = instantiate(p, {{d0, d1}, {d2, d3}});
          CHECK(q.a[0] == 1.0);
          CHECK(q.b[0] == 0.0);
          for (int i = 0; i < 2; ++i) {
            CHECK(q.a[i + 1] >= ab[i].first - 1e-12);
            CHECK(q.a[i + 1] <= ab[i].second + 1e-12);
            CHECK(q.b[i + 1] >= bb[i].first - 1e-12);
            CHECK(q.b[i + 1] <= bb[i].second + 1e-12);
          }
        }
}

TEST_CASE("plant validation") {
  CHECK_THROWS_AS(UncertainPlant(Poly{2, 1}, Poly{0, 1}, {0.1}, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(UncertainPlant(Poly{1, 1}, Poly{1, 1}, {0.1}, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(UncertainPlant(Poly{1, 1}, Poly{0, 1}, {-0.1}, {0.1}), std::invalid_argument);
  // negative nominal values use |nominal| for the deviation
  CHECK(UncertainPlant::from_relative({-5.0}, {2.0}, 0.1).a_dev()[0] == doctest::Approx(0.5));
}

TEST_CASE("closed_loop_charpoly examples") {
  const ControllerParams k = fixtures::reference_case1();
  const PlantInstance p = fixtures::perturbed_plant();
  const Poly cp = closed_loop_charpoly(p.a, p.b, k);
  CHECK(cp.degree() == 4);
  CHECK(cp[0] == 1.0);
  auto r = roots(cp);
  double mx = -1e9;
  for (auto z : r) mx = std::max(mx, z.real());
  CHECK(mx == doctest::Approx(-0.4801).epsilon(2e-3));
  CHECK(closed_loop_charpoly(Poly{1, 3, -10}, Poly{0, 0, 0}, k) == conv(Poly{1, 3, -10}, k.x()));
  const ControllerParams k0(Poly{1}, Poly{2.5});
  CHECK(closed_loop_charpoly(Poly{1}, Poly{0}, k0) == Poly{1});
}

TEST_CASE("loop transfers satisfy S + T = 1") {
  const PlantInstance p = fixtures::perturbed_plant();
  for (const auto& k : {fixtures::reference_case1(), fixtures::reference_case2(), fixtures::reference_case3()}) {
    const LoopTransfers lt = loop_transfers(p.a, p.b, k);
    const Poly sum = lt.sensitivity.num + lt.complementary.num;
    for (std::size_t i = 0; i < sum.size(); ++i) CHECK(sum[i] == doctest::Approx(lt.sensitivity.den[i]));
    for (int i = 0; i < 50; ++i) {
      const std::complex<double> s(0.0, std::pow(10.0, -3.0 + 6.0 * i / 49.0));
      CHECK(std::abs(lt.sensitivity.eval(s) + lt.complementary.eval(s) - 1.0) < 1e-10);
    }
  }
  const LoopTransfers open = loop_transfers(Poly{1, 1}, Poly{0, 0}, ControllerParams(Poly{1}, Poly{3}));
  CHECK(std::abs(open.sensitivity.eval({0.0, 2.0}) - 1.0) < 1e-15);
  CHECK(std::abs(open.complementary.eval({0.0, 2.0})) < 1e-15);
  // an unstable loop is flagged, not rejected
  const LoopTransfers bad = loop_transfers(Poly{1, 3, -10}, Poly{0, 0, 0}, fixtures::reference_case1());
  CHECK_FALSE(bad.stable);
}

TEST_CASE("nominal plant with the reference controller meets the sensitivity bound at 0.05 rad/s") {
  const UncertainPlant p = fixtures::example_plant();
  const LoopTransfers lt = loop_transfers(p.a_center(), p.b_center(), fixtures::reference_case1());
  CHECK(std::abs(lt.sensitivity.eval({0.0, 0.05})) < db_to_gain(-3.0));
}

TEST_CASE("shaped numerators agree with direct convolution") {
  const UncertainPlant p = fixtures::example_plant();
  const SynthesisSpec spec = fixtures::example_spec();
  VarRegistry reg;
  const ControllerVariables k = register_controller(reg, 2, fixtures::example_pins());
  CHECK(reg.size() == 4);
  const ShapedNumerators sn = shaped_numerators(p, k, spec.d_c);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> z(reg.size());
    for (double& v : z) v = u(rng);
    const Poly x = k.x.evaluate(z), y = k.y.evaluate(z);
    CHECK(x[0] == 1.0);
    CHECK(x[2] == 0.0);
    const ControllerParams kk(x, y, fixtures::example_pins());
    const Poly cp = closed_loop_charpoly(p.a_center(), p.b_center(), kk);
    const Poly gsn = sn.sn.evaluate(z), gp1 = sn.p1n.evaluate(z);
    for (std::size_t i = 0; i < cp.size(); ++i) {
      CHECK(gsn[i] == doctest::Approx(cp[i]));
      CHECK(gp1[i] == doctest::Approx(spec.d_c[i] - cp[i]));
    }
    CHECK(sn.p2n.evaluate(z) == conv(p.a_center(), x));
    CHECK(sn.p3n.evaluate(z) == conv(p.b_center(), y));
  }
  VarRegistry r2;
  const ControllerVariables k2 = register_controller(r2, 2, {{Coefficient::X, 1, 0.0}, {Coefficient::X, 2, 0.0}});
  const ShapedNumerators s2 = shaped_numerators(p, k2, spec.d_c);
  CHECK(s2.p2n.evaluate(std::vector<double>(r2.size(), 0.0)) == Poly{1, 3, -10, 0, 0});
  CHECK_THROWS_AS(shaped_numerators(p, k2, Poly{1, 2, 1}), std::invalid_argument);
}

TEST_CASE("controller validation") {
  CHECK_THROWS_AS(ControllerParams(Poly{2, 1}, Poly{1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ControllerParams(Poly{1, 1}, Poly{1}), std::invalid_argument);
  CHECK_THROWS_AS(ControllerParams(Poly{1, 1, 0.5}, Poly{1, 1, 1}, fixtures::example_pins()), std::invalid_argument);
  VarRegistry reg;
  CHECK_THROWS_AS(register_controller(reg, 2, {{Coefficient::X, 0, 1.0}}), std::invalid_argument);
}

TEST_CASE("spec validation names the field") {
  SynthesisSpec s = fixtures::example_spec();
  s.delta_s = 1.0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("delta_s"), std::invalid_argument);
  s = fixtures::example_spec();
  s.d_c = Poly{1, -1, 2, 3, 4};
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("central_polynomial"), std::invalid_argument);
  CHECK(db_to_gain(-3.0) == doctest::Approx(0.70794578));
  CHECK(gain_to_db(db_to_gain(-7.5)) == doctest::Approx(-7.5));
}
