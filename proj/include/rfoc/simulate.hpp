#pragma once

#include <string>
#include <vector>

#include "rfoc/plantmodel.hpp"

namespace rfoc {

struct Reference {
  enum class Kind { Sine, Step, Zero };
  Kind kind = Kind::Sine;
  double amplitude = 1.0;
  double omega = 0.05;

  [[nodiscard]] double at(double t) const;
  [[nodiscard]] double period() const;  // sine only
};

Reference::Kind reference_kind_from_string(const std::string& s);
std::string to_string(Reference::Kind k);

struct SimResult {
  std::vector<double> t;
  std::vector<double> r;
  std::vector<double> y;
  std::vector<double> e;
  double rmse = 0.0;
  double max_abs_error = 0.0;
  std::string warning;  // set when the closed loop is not stable
};

inline constexpr double kDefaultSettleFraction = 0.2;

// RK4 on the controllable canonical realization of T = b y / charpoly.
// Throws std::invalid_argument when dt > 1/(50 max|pole|), quoting the
// largest admissible step. rmse / max_abs_error use kDefaultSettleFraction.
SimResult simulate_tracking(const PlantInstance& plant, const ControllerParams& k, const Reference& ref,
                            double duration, double dt);

struct TrackingMetrics {
  double rmse = 0.0;
  double max_abs_error = 0.0;
};

// Over the samples after the first settle_fraction of the run.
TrackingMetrics metrics(const SimResult& result, double settle_fraction);

// Least-squares amplitude of a sinusoid at omega fitted to y on the
// samples after the first from_fraction of the run.
double sinusoid_amplitude(const SimResult& result, double omega, double from_fraction);

std::string sim_csv(const SimResult& result, int stride = 1);

}  // namespace rfoc
