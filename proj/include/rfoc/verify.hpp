#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rfoc/plantmodel.hpp"
#include "rfoc/realization.hpp"

namespace rfoc {

struct StabilityCheck {
  bool stable = false;
  double margin = 0.0;  // largest real part among the roots
};

// Throws std::invalid_argument unless the polynomial is monic.
StabilityCheck check_stability(const Poly& charpoly);

inline constexpr double kPoleTolerance = 1e-12;

struct GainPoint {
  double omega = 0.0;
  double magnitude = 0.0;  // +inf at a flagged point
  bool pole = false;       // |den(jw)| < kPoleTolerance
};

// Throws std::invalid_argument unless the grid is strictly positive and sorted.
std::vector<GainPoint> gain_response(const Rational& g, std::span<const double> omegas);

std::vector<double> log_grid(double lo, double hi, int count);
// Log grid over the band; the low band spans two decades below omega_l,
// the high band two decades above omega_h, the entire axis 1e-3..1e3.
std::vector<double> band_grid(const FrequencyBand& band, int count);

// Seeded uniform samples over [-1, 1]^(2n).
std::vector<UncertaintySample> sample_uncertainty(int count, std::uint64_t seed, const UncertainPlant& plant);
// All 2^(2n) corners, each entry +-1.
std::vector<UncertaintySample> vertices(const UncertainPlant& plant);

struct VerifyOptions {
  int grid_points = 200;
  double slack = 1e-3;  // a gain counts as a violation when >= bound*(1+slack)
  int vertex_limit = 12;  // vertices are added when 2n <= vertex_limit
};

struct GainViolation {
  std::string sample;
  char which = 'S';
  double omega = 0.0;
  double gain = 0.0;
  double bound = 0.0;
};

struct SampleCheck {
  std::string tag;
  UncertaintySample sample;
  bool stable = false;
  double margin = 0.0;
  double worst_s = 0.0;
  double worst_s_omega = 0.0;
  double worst_t = 0.0;
  double worst_t_omega = 0.0;
};

struct VerificationReport {
  bool stable_nominal = false;
  double nominal_margin = 0.0;
  double stable_fraction = 0.0;
  double worst_margin = 0.0;
  std::vector<GainViolation> gain_violations;
  double worst_s_gain = 0.0;
  double worst_s_omega = 0.0;
  std::string worst_s_sample;
  double worst_t_gain = 0.0;
  double worst_t_omega = 0.0;
  std::string worst_t_sample;
  std::vector<SampleCheck> samples;

  [[nodiscard]] bool all_stable() const { return stable_fraction == 1.0; }
  [[nodiscard]] bool passed() const { return all_stable() && gain_violations.empty(); }
};

// Checks the nominal plant, every vertex (when 2n <= vertex_limit) and the
// given samples, in that order. Unstable samples are recorded, not fatal.
VerificationReport verify_specs(const UncertainPlant& plant, const ControllerParams& k, const SynthesisSpec& spec,
                                const std::vector<UncertaintySample>& samples, const VerifyOptions& opts = {});

std::string report_json(const VerificationReport& r);
// omega, then |S| and |T| per sample; the grid is the union of both band grids.
std::string gain_table_csv(const UncertainPlant& plant, const ControllerParams& k, const SynthesisSpec& spec,
                           const VerificationReport& r, const VerifyOptions& opts = {});

}  // namespace rfoc
