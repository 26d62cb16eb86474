#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfoc/plantmodel.hpp"
#include "rfoc/sdpgate.hpp"
#include "rfoc/simulate.hpp"
#include "rfoc/verify.hpp"

namespace rfoc {

struct RunConfig {
  std::optional<UncertainPlant> plant;
  // Concrete plant used by simulate and compare; the nominal plant if absent.
  std::optional<PlantInstance> perturbed;
  int m = 0;
  std::vector<Pin> pins;
  // Controller supplied in the config (check, bode, simulate).
  std::optional<ControllerParams> controller;
  SynthesisSpec spec;

  std::string adapter;  // empty: $RFOC_SOLVER or the default
  double margin = kDefaultMargin;
  SolverSettings solver;

  int samples = 200;
  std::uint64_t seed = 1;
  VerifyOptions verify;

  Reference reference;
  double duration = 0.0;  // 0: `periods` sine periods (or 100 s)
  double periods = 10.0;
  double dt = 1e-3;
  double settle_fraction = kDefaultSettleFraction;

  [[nodiscard]] const UncertainPlant& uncertain_plant() const;
  [[nodiscard]] PlantInstance simulation_plant() const;
  [[nodiscard]] double sim_duration() const;
};

// YAML. Errors are std::invalid_argument naming the offending field, e.g.
// "spec.band_s.low: expected a number".
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Controller from x1..xm and y0..ym; pins are re-applied and must agree.
ControllerParams controller_from_coeffs(const std::vector<double>& x_tail, const std::vector<double>& y,
                                        const std::vector<Pin>& pins = {});

}  // namespace rfoc
