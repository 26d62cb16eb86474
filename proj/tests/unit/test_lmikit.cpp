#include <Eigen/Eigenvalues>
#include <random>

#include "doctest.h"
#include "rfoc/lmikit.hpp"
#include "rfoc/sdpgate.hpp"
#include "rfoc/verify.hpp"
#include "support/fixtures.hpp"

using namespace rfoc;
using fixtures::solve_lmis;

namespace {

double max_eig_h(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues().maxCoeff();
}

SolveStatus pr_status(const fixtures::RandomSystem& s) {
  VarRegistry reg;
  const AffineMatrix f = kyp_pr_lmi(fixtures::realize(s), reg, "g");
  return solve_lmis(reg, {{"pr", f}}).status;
}

SolveStatus bg_status(const fixtures::RandomSystem& s, const FrequencyBand& band, double rho) {
  VarRegistry reg;
  const AffineMatrix f = gkyp_bg_lmi(fixtures::realize(s), band, rho, reg, "g");
  return solve_lmis(reg, {{"bg", f}}).status;
}

fixtures::RandomSystem sys(Poly num, Poly den) { return {std::move(num), std::move(den)}; }

}  // namespace

TEST_CASE("hermitian_embed examples") {
  Eigen::MatrixXcd h(2, 2);
  h << 2.0, std::complex<double>(0, 1), std::complex<double>(0, -1), 2.0;
  const AffineMatrix e = hermitian_embed(AffineMatrix(h));
  Eigen::MatrixXd expect(4, 4);
  expect << 2, 0, 0, -1,
            0, 2, 1, 0,
            0, 1, 2, 0,
            -1, 0, 0, 2;
  CHECK((e.constant().real() - expect).norm() < 1e-15);
  CHECK(e.is_real());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(expect);
  CHECK(es.eigenvalues()(0) == doctest::Approx(1.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));
  CHECK(es.eigenvalues()(2) == doctest::Approx(3.0));
  CHECK(es.eigenvalues()(3) == doctest::Approx(3.0));
  const AffineMatrix r = hermitian_embed(AffineMatrix(Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3))));
  CHECK(r.rows() == 6);
  CHECK((r.constant() - Eigen::MatrixXcd::Identity(6, 6)).norm() == 0.0);
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, 2.0, 3.0, 1.0;
  CHECK_THROWS_AS(hermitian_embed(AffineMatrix(bad)), std::invalid_argument);
}

TEST_CASE("hermitian_embed preserves the spectrum of random Hermitian matrices") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 5;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
    const Eigen::MatrixXcd h = a + a.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eh(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ee(hermitian_embed(AffineMatrix(h)).constant().real());
    for (int i = 0; i < n; ++i) {
      CHECK(ee.eigenvalues()(2 * i) == doctest::Approx(eh.eigenvalues()(i)));
      CHECK(ee.eigenvalues()(2 * i + 1) == doctest::Approx(eh.eigenvalues()(i)));
    }
  }
}

TEST_CASE("robust synthesis LMIs on the example have the expected dimensions and are Hermitian") {
  const UncertainPlant p = fixtures::example_plant();
  const SynthesisSpec spec = fixtures::example_spec();
  VarRegistry reg;
  const ControllerVariables k = register_controller(reg, 2, fixtures::example_pins());
  const std::vector<Lmi> lmis = robust_synthesis_lmis(p, spec, k, reg);
  REQUIRE(lmis.size() == 5);
  const std::vector<std::string> names{"stability", "sensitivity_shaping", "sensitivity_residual",
                                       "complementary_shaping", "complementary_residual"};
  const std::vector<int> dims{9, 10, 8, 10, 8};
  for (int i = 0; i < 5; ++i) {
    CHECK(lmis[i].name == names[i]);
    CHECK(lmis[i].lhs.rows() == dims[i]);
    CHECK(lmis[i].lhs.cols() == dims[i]);
    CHECK(lmis[i].lhs.hermitian_defect() < 1e-12);
  }
  CHECK(lmis[0].lhs.is_real());
  for (int i = 1; i < 5; ++i) {
    CHECK_FALSE(lmis[i].lhs.is_real());
    CHECK(hermitian_embed(lmis[i].lhs).rows() == 2 * dims[i]);
  }
  for (const char* name : {"P_s", "R_sa", "R_sb", "P_p1", "Q_p1", "R_p1a", "R_p1b", "P_p2", "Q_p2", "R_p2a", "P_p3",
                           "Q_p3", "R_p3a", "R_p3b", "P_p4", "Q_p4", "R_p4b"}) {
    CHECK_MESSAGE(reg.find(name) >= 0, name);
  }
  CHECK(reg.find("R_p2b") < 0);
  CHECK(reg.find("R_p4a") < 0);
  CHECK(reg.block(reg.find("P_p1")).kind == VarKind::Hermitian);
  CHECK(reg.block(reg.find("P_s")).kind == VarKind::Symmetric);
}

TEST_CASE("real bands give real symmetric multipliers") {
  const UncertainPlant p = fixtures::example_plant();
  SynthesisSpec spec = fixtures::example_spec();
  spec.band_s = freq_band(BandKind::Low, 0.1, 0.0);
  spec.band_t = freq_band(BandKind::High, 0.0, 20.0);
  VarRegistry reg;
  const ControllerVariables k = register_controller(reg, 2, fixtures::example_pins());
  for (const Lmi& l : robust_synthesis_lmis(p, spec, k, reg)) CHECK(l.lhs.is_real());
  CHECK(reg.block(reg.find("Q_p3")).kind == VarKind::Symmetric);
  spec.band_t = freq_band(BandKind::All, 0.0, 0.0);
  VarRegistry r2;
  const ControllerVariables k2 = register_controller(r2, 2, fixtures::example_pins());
  robust_synthesis_lmis(p, spec, k2, r2);
  CHECK(r2.find("Q_p3") < 0);
  CHECK(r2.find("Q_p4") < 0);
}

TEST_CASE("zero deviations drop the scaling blocks") {
  const UncertainPlant p(Poly{1, 3, -10}, Poly{0, 8, 4}, {0, 0}, {0.5, 0});
  VarRegistry reg;
  const ControllerVariables k = register_controller(reg, 2, fixtures::example_pins());
  const std::vector<Lmi> lmis = robust_synthesis_lmis(p, fixtures::example_spec(), k, reg);
  CHECK(lmis[0].lhs.rows() == 7);
  CHECK(lmis[2].lhs.rows() == 6);
  CHECK(lmis[4].lhs.rows() == 8);
  CHECK(reg.find("R_sa") < 0);
  CHECK(reg.find("R_sb") >= 0);
}

TEST_CASE("LMI builders reject size mismatches") {
  const UncertainPlant p = fixtures::example_plant();
  SynthesisSpec spec = fixtures::example_spec();
  VarRegistry reg;
  const ControllerVariables k1 = register_controller(reg, 1, {});
  CHECK_THROWS_AS(robust_synthesis_lmis(p, spec, k1, reg), std::invalid_argument);
  VarRegistry r2;
  const ControllerVariables k2 = register_controller(r2, 2, fixtures::example_pins());
  spec.d_c = Poly{1, 6, 11, 6};
  spec.m = 2;
  CHECK_THROWS_AS(robust_synthesis_lmis(p, spec, k2, r2), std::invalid_argument);
  VarRegistry r3;
  CHECK_THROWS_AS(gkyp_bg_lmi(ctrl_canonical(AffinePoly(Poly{0, 1}), Poly{1, 1}), freq_band(BandKind::All, 0, 0), 0.0,
                              r3, "g"),
                  std::invalid_argument);
}

TEST_CASE("positive realness examples") {
  CHECK(pr_status(sys(Poly{1, 2}, Poly{1, 1})) == SolveStatus::Feasible);
  CHECK(pr_status(sys(Poly{-1, 1}, Poly{1, 1})) == SolveStatus::Infeasible);
  CHECK(pr_status(sys(Poly{1, 1}, Poly{1, 1})) == SolveStatus::Feasible);
}

TEST_CASE("finite-frequency bounded realness examples") {
  const FrequencyBand high = freq_band(BandKind::High, 0.0, 2.0);
  CHECK(bg_status(sys(Poly{0, 1}, Poly{1, 1}), high, 0.8) == SolveStatus::Feasible);
  CHECK(bg_status(sys(Poly{0, 1}, Poly{1, 1}), high, 0.4) == SolveStatus::Infeasible);
  CHECK(bg_status(sys(Poly{0, 0}, Poly{1, 1}), high, 0.5) == SolveStatus::Feasible);
  // the whole axis needs the DC gain 1 to be below rho
  const FrequencyBand all = freq_band(BandKind::All, 0.0, 0.0);
  CHECK(bg_status(sys(Poly{0, 1}, Poly{1, 1}), all, 0.8) == SolveStatus::Infeasible);
  CHECK(bg_status(sys(Poly{0, 1}, Poly{1, 1}), all, 1.2) == SolveStatus::Feasible);
}

TEST_CASE("positive realness LMI agrees with a sampled frequency oracle") {
  std::mt19937_64 rng(101);
  int decided = 0, feasible = 0;
  while (decided < 40) {
    fixtures::RandomSystem s = fixtures::random_system(rng, 3, true);
    const double mn = fixtures::sampled_min_real(s);
    if (std::abs(mn) < 0.05) continue;
    const SolveStatus st = pr_status(s);
    if (mn > 0) {
      CHECK(st == SolveStatus::Feasible);
      ++feasible;
    } else {
      CHECK(st == SolveStatus::Infeasible);
    }
    ++decided;
  }
  CHECK(feasible > 0);
}

TEST_CASE("bounded realness LMI agrees with a sampled frequency oracle on every band kind") {
  std::mt19937_64 rng(202);
  const std::vector<FrequencyBand> bands{freq_band(BandKind::Low, 0.5, 0.0), freq_band(BandKind::Mid, 0.3, 3.0),
                                         freq_band(BandKind::High, 0.0, 2.0), freq_band(BandKind::All, 0.0, 0.0)};
  for (const FrequencyBand& band : bands) {
    for (int t = 0; t < 12; ++t) {
      fixtures::RandomSystem s = fixtures::random_system(rng, 3, t % 2 == 0);
      const double g = fixtures::sampled_max_gain(s, band);
      if (g < 1e-3) continue;
      CHECK_MESSAGE(bg_status(s, band, 1.1 * g) == SolveStatus::Feasible, to_string(band.kind));
      // below the gain the solver must not certify; on complex bands it
      // sometimes stops at "almost infeasible" or a numerical error instead
      const SolveStatus below = bg_status(s, band, 0.9 * g);
      CHECK_MESSAGE(below != SolveStatus::Feasible, to_string(band.kind));
      if (!band.is_complex()) CHECK_MESSAGE(below == SolveStatus::Infeasible, to_string(band.kind));
    }
  }
}

TEST_CASE("the residual LMIs hold for the synthesized controller with every coefficient fixed") {
  const UncertainPlant p = fixtures::example_plant();
  const SynthesisSpec spec = fixtures::example_spec();
  VarRegistry reg;
  const ControllerVariables k = register_controller(reg, 2, fixtures::example_pins());
  const auto res = solve_lmis(reg, robust_synthesis_lmis(p, spec, k, reg));
  REQUIRE(res.status == SolveStatus::Feasible);
  const ControllerParams kk = extract_controller(res, reg, 2, fixtures::example_pins());
  std::vector<Pin> all{{Coefficient::X, 1, kk.x()[1]}, {Coefficient::X, 2, 0.0}};
  for (int i = 0; i <= 2; ++i) all.push_back({Coefficient::Y, i, kk.y()[i]});
  VarRegistry r2;
  const ControllerVariables fixed = register_controller(r2, 2, all);
  CHECK(r2.size() == 0);
  const auto again = solve_lmis(r2, robust_synthesis_lmis(p, spec, fixed, r2));
  CHECK(again.status == SolveStatus::Feasible);
  // and every scaling-free vertex condition holds as well
  VarRegistry r3;
  const ControllerVariables fixed3 = register_controller(r3, 2, all);
  CHECK(solve_lmis(r3, vertex_baseline_lmis(p, spec, fixed3, r3)).status == SolveStatus::Feasible);
}

TEST_CASE("vertex baseline counts") {
  const SynthesisSpec spec = fixtures::example_spec();
  {
    VarRegistry reg;
    const ControllerVariables k = register_controller(reg, 2, fixtures::example_pins());
    const auto l = vertex_baseline_lmis(fixtures::example_plant(), spec, k, reg);
    CHECK(l.size() == 80);
    CHECK(l.front().name == "v0_stability");
    CHECK(l.back().name == "v15_complementary_residual");
    const auto nom = nominal_lmis(fixtures::example_plant(), spec, k, reg);
    CHECK(nom.size() == 5);
    CHECK(nom[0].name == "nom_stability");
  }
  {
    VarRegistry reg;
    const ControllerVariables k = register_controller(reg, 2, fixtures::example_pins());
    const UncertainPlant exact(Poly{1, 3, -10}, Poly{0, 8, 4}, {0, 0}, {0, 0});
    CHECK(vertex_baseline_lmis(exact, spec, k, reg).size() == 5);
  }
  {
    SynthesisSpec s1 = spec;
    s1.d_c = Poly{1, 3, 2};
    s1.m = 1;
    VarRegistry reg;
    const ControllerVariables k = register_controller(reg, 1, {});
    const UncertainPlant first(Poly{1, 1}, Poly{0, 2}, {0.1}, {0.2});
    CHECK(vertex_baseline_lmis(first, s1, k, reg).size() == 20);
  }
  {
    VarRegistry reg;
    const ControllerVariables k = register_controller(reg, 2, fixtures::example_pins());
    CHECK_THROWS_WITH_AS(vertex_baseline_lmis(fixtures::example_plant(), spec, k, reg, 3),
                         doctest::Contains("vertex guard"), std::invalid_argument);
  }
}

TEST_CASE("feasibility of the scaled LMIs implies the specifications over the whole interval box") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int feasible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double a1 = -2.0 + 4.0 * u(rng), b1 = 0.5 + 2.0 * u(rng);
    const UncertainPlant p = UncertainPlant::from_relative({a1}, {b1}, 0.05 + 0.15 * u(rng));
    SynthesisSpec spec;
    spec.m = 1;
    spec.d_c = fixtures::poly_from_roots({-(0.5 + 2.0 * u(rng)), -(2.0 + 8.0 * u(rng))});
    spec.rho_s = db_to_gain(-3.0 - 12.0 * u(rng));
    spec.rho_t = db_to_gain(-3.0 - 12.0 * u(rng));
    const double ws = 0.01 + 0.05 * u(rng);
    spec.band_s = freq_band(BandKind::Low, ws, 0.0);
    const double wt = 30.0 + 50.0 * u(rng);
    spec.band_t = freq_band(BandKind::High, 0.0, wt);
    spec.delta_s = 0.3 + 0.4 * u(rng);
    spec.delta_t = 0.3 + 0.4 * u(rng);
    VarRegistry reg;
    const ControllerVariables k = register_controller(reg, 1, {});
    const auto res = solve_lmis(reg, robust_synthesis_lmis(p, spec, k, reg));
    if (res.status != SolveStatus::Feasible) continue;
    ++feasible;
    const ControllerParams kk = extract_controller(res, reg, 1, {});
    const auto report = verify_specs(p, kk, spec, sample_uncertainty(50, trial, p));
    CHECK_MESSAGE(report.passed(), "trial " << trial);
  }
  MESSAGE("feasible cases: " << feasible);
  CHECK(feasible >= 10);
}
