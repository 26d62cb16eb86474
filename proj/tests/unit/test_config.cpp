#include "doctest.h"
#include "rfoc/config.hpp"
#include "support/fixtures.hpp"

using namespace rfoc;

namespace {

const char* kExample = R"(
plant:
  a: [3, -10]
  b: [8, 4]
  deviation_percent: 20
  perturbed:
    a: [3.5486, -9.9415]
    b: [6.9044, 3.6471]
controller:
  order: 2
  pins: {x2: 0}
spec:
  rho_s_db: -3
  rho_t_db: -3
  band_s: {kind: mid, low: 0.01, high: 0.1}
  band_t: {kind: mid, low: 20, high: 100}
  delta_s: 0.5
  delta_t: 0.5
  central_polynomial: [1, 16, 89, 390, 200]
verify:
  samples: 200
  seed: 7
)";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("the example config parses to the example problem") {
  const RunConfig c = parse_config(kExample);
  const UncertainPlant& p = c.uncertain_plant();
  const UncertainPlant e = fixtures::example_plant();
  CHECK(p.a_center() == e.a_center());
  CHECK(p.b_center() == e.b_center());
  for (int i = 0; i < 2; ++i) {
    CHECK(p.a_dev()[i] == doctest::Approx(e.a_dev()[i]));
    CHECK(p.b_dev()[i] == doctest::Approx(e.b_dev()[i]));
  }
  CHECK(c.m == 2);
  REQUIRE(c.pins.size() == 1);
  CHECK(c.pins[0].which == Coefficient::X);
  CHECK(c.pins[0].index == 2);
  CHECK(c.spec.rho_s == doctest::Approx(0.70794578));
  CHECK(c.spec.band_t.omega_l == 20.0);
  CHECK(c.spec.d_c == Poly{1, 16, 89, 390, 200});
  CHECK(c.seed == 7);
  CHECK(c.samples == 200);
  CHECK(c.simulation_plant().a == fixtures::perturbed_plant().a);
  CHECK(c.sim_duration() == doctest::Approx(10.0 * 2.0 * std::numbers::pi / 0.05));
  CHECK_FALSE(c.controller.has_value());
}

TEST_CASE("gains can be given in absolute form") {
  const RunConfig c = parse_config(replace(kExample, "rho_s_db: -3", "rho_s: 0.5"));
  CHECK(c.spec.rho_s == 0.5);
  CHECK_THROWS_WITH_AS(parse_config(replace(kExample, "rho_s_db: -3", "rho_s: 0.5\n  rho_s_db: -3")),
                       doctest::Contains("rho_s"), std::invalid_argument);
}

TEST_CASE("absolute deviations") {
  const RunConfig c =
      parse_config(replace(kExample, "deviation_percent: 20", "a_dev: [0.1, 0.2]\n  b_dev: [0, 0.4]"));
  CHECK(c.uncertain_plant().a_dev()[1] == 0.2);
  CHECK(c.uncertain_plant().b_dev()[0] == 0.0);
}

TEST_CASE("controller coefficients in the config") {
  const RunConfig c =
      parse_config(replace(kExample, "pins: {x2: 0}", "pins: {x2: 0}\n  x: [0.3307, 0]\n  y: [1.5790, 16.9886, 10.2572]"));
  REQUIRE(c.controller.has_value());
  CHECK(c.controller->x() == Poly{1, 0.3307, 0});
  CHECK_THROWS_AS(
      parse_config(replace(kExample, "pins: {x2: 0}", "pins: {x2: 0}\n  x: [0.3307, 1]\n  y: [1.5790, 16.9886, 10.2572]")),
      std::invalid_argument);
  CHECK(controller_from_coeffs({0.3307, 0.0}, {1, 2, 3}, fixtures::example_pins()).y() == Poly{1, 2, 3});
}

TEST_CASE("errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_config(replace(kExample, "low: 0.01", "low: abc")), doctest::Contains("spec.band_s.low"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(replace(kExample, "kind: mid, low: 20", "kind: middle, low: 20")),
                       doctest::Contains("spec.band_t.kind"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(replace(kExample, "delta_s: 0.5", "delta_s: 1.5")), doctest::Contains("delta_s"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(replace(kExample, "seed: 7", "seed: 7\n  colour: red")),
                       doctest::Contains("verify.colour"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(replace(kExample, "b: [8, 4]", "b: [8]")), doctest::Contains("plant"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config(replace(kExample, "central_polynomial: [1, 16, 89, 390, 200]",
                                            "central_polynomial: [1, 16, 89]")),
                       doctest::Contains("central_polynomial"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("plant: [unclosed"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.yaml"), std::invalid_argument);
}

TEST_CASE("shipped configs load") {
  const RunConfig c = load_config(std::string(RFOC_SOURCE_DIR) + "/configs/example.yaml");
  CHECK(c.m == 2);
  const RunConfig d = load_config(std::string(RFOC_SOURCE_DIR) + "/configs/reference_case1.yaml");
  REQUIRE(d.controller.has_value());
  CHECK(d.controller->y() == fixtures::reference_case1().y());
}
