#include "rfoc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rfoc {

StabilityCheck check_stability(const Poly& charpoly) {
  const Poly p = charpoly.trimmed();
  if (p[0] != 1.0) throw std::invalid_argument("check_stability: polynomial must be monic");
  const StabilityMargin sm = stability_margin(p);
  return {sm.verdict == Stability::Stable, sm.margin};
}

std::vector<GainPoint> gain_response(const Rational& g, std::span<const double> omegas) {
  std::vector<GainPoint> out;
  out.reserve(omegas.size());
  double prev = 0.0;
  for (double w : omegas) {
    if (!(w > prev)) throw std::invalid_argument("gain_response: grid must be strictly positive and increasing");
    prev = w;
    const std::complex<double> s(0.0, w);
    const std::complex<double> den = eval(g.den, s);
    GainPoint pt{w, 0.0, false};
    if (std::abs(den) < kPoleTolerance) {
      pt.pole = true;
      pt.magnitude = std::numeric_limits<double>::infinity();
    } else {
      pt.magnitude = std::abs(eval(g.num, s) / den);
    }
    out.push_back(pt);
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  const double a = std::log10(lo), b = std::log10(hi);
  for (int i = 0; i < count; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> band_grid(const FrequencyBand& band, int count) {
  switch (band.kind) {
    case BandKind::Low: return log_grid(band.omega_l * 1e-2, band.omega_l, count);
    case BandKind::Mid: return log_grid(band.omega_l, band.omega_h, count);
    case BandKind::High: return log_grid(band.omega_h, band.omega_h * 1e2, count);
    case BandKind::All: return log_grid(1e-3, 1e3, count);
  }
  return {};
}

std::vector<UncertaintySample> sample_uncertainty(int count, std::uint64_t seed, const UncertainPlant& plant) {
  if (count < 0) throw std::invalid_argument("verify.samples: must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = plant.order();
  std::vector<UncertaintySample> out(count);
  for (auto& s : out) {
    s.delta_a.resize(n);
    s.delta_b.resize(n);
    for (double& d : s.delta_a) d = u(rng);
    for (double& d : s.delta_b) d = u(rng);
  }
  return out;
}

std::vector<UncertaintySample> vertices(const UncertainPlant& plant) {
  const int n = plant.order();
  std::vector<UncertaintySample> out;
  for (unsigned long mask = 0; mask < (1UL << (2 * n)); ++mask) {
    UncertaintySample s;
    for (int i = 0; i < n; ++i) s.delta_a.push_back(((mask >> i) & 1UL) ? 1.0 : -1.0);
    for (int i = 0; i < n; ++i) s.delta_b.push_back(((mask >> (n + i)) & 1UL) ? 1.0 : -1.0);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

struct Tagged {
  std::string tag;
  UncertaintySample sample;
};

std::vector<Tagged> sample_set(const UncertainPlant& plant, const std::vector<UncertaintySample>& samples,
                               const VerifyOptions& opts) {
  const int n = plant.order();
  std::vector<Tagged> out{{"nominal", {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)}}};
  if (!plant.has_uncertainty()) return out;
  if (2 * n <= opts.vertex_limit) {
    int i = 0;
    for (auto& v : vertices(plant)) out.push_back({"vertex" + std::to_string(i++), std::move(v)});
  }
  int i = 0;
  for (const auto& s : samples) out.push_back({"mc" + std::to_string(i++), s});
  return out;
}

}  // namespace

VerificationReport verify_specs(const UncertainPlant& plant, const ControllerParams& k, const SynthesisSpec& spec,
                                const std::vector<UncertaintySample>& samples, const VerifyOptions& opts) {
  if (k.order() != spec.m) throw std::invalid_argument("controller.order: does not match spec.m");
  const std::vector<double> ws = band_grid(spec.band_s, opts.grid_points);
  const std::vector<double> wt = band_grid(spec.band_t, opts.grid_points);
  VerificationReport rep;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  int stable = 0;
  for (const Tagged& ts : sample_set(plant, samples, opts)) {
    const PlantInstance p = instantiate(plant, ts.sample);
    const LoopTransfers lt = loop_transfers(p.a, p.b, k);
    SampleCheck sc{ts.tag, ts.sample, lt.stable, lt.margin};
    if (lt.stable) ++stable;
    rep.worst_margin = std::max(rep.worst_margin, lt.margin);
    auto scan = [&](const Rational& g, const std::vector<double>& grid, double bound, char which, double& worst,
                    double& worst_w) {
      for (const GainPoint& pt : gain_response(g, grid)) {
        if (pt.magnitude > worst || worst_w == 0.0) {
          worst = pt.magnitude;
          worst_w = pt.omega;
        }
        if (pt.pole || pt.magnitude >= bound * (1.0 + opts.slack)) {
          rep.gain_violations.push_back({ts.tag, which, pt.omega, pt.magnitude, bound});
        }
      }
    };
    scan(lt.sensitivity, ws, spec.rho_s, 'S', sc.worst_s, sc.worst_s_omega);
    scan(lt.complementary, wt, spec.rho_t, 'T', sc.worst_t, sc.worst_t_omega);
    if (ts.tag == "nominal") {
      rep.stable_nominal = lt.stable;
      rep.nominal_margin = lt.margin;
    }
    if (rep.samples.empty() || sc.worst_s > rep.worst_s_gain) {
      rep.worst_s_gain = sc.worst_s;
      rep.worst_s_omega = sc.worst_s_omega;
      rep.worst_s_sample = ts.tag;
    }
    if (rep.samples.empty() || sc.worst_t > rep.worst_t_gain) {
      rep.worst_t_gain = sc.worst_t;
      rep.worst_t_omega = sc.worst_t_omega;
      rep.worst_t_sample = ts.tag;
    }
    rep.samples.push_back(std::move(sc));
  }
  rep.stable_fraction = static_cast<double>(stable) / static_cast<double>(rep.samples.size());
  return rep;
}

namespace {

// JSON has no infinity; unbounded gains are written as null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

std::string report_json(const VerificationReport& r) {
  nlohmann::json j;
  j["passed"] = r.passed();
  j["stable_nominal"] = r.stable_nominal;
  j["nominal_margin"] = num(r.nominal_margin);
  j["stable_fraction"] = r.stable_fraction;
  j["worst_margin"] = num(r.worst_margin);
  j["worst_S"] = {{"gain", num(r.worst_s_gain)}, {"omega", r.worst_s_omega}, {"sample", r.worst_s_sample}};
  j["worst_T"] = {{"gain", num(r.worst_t_gain)}, {"omega", r.worst_t_omega}, {"sample", r.worst_t_sample}};
  j["violation_count"] = r.gain_violations.size();
  auto& v = j["gain_violations"] = nlohmann::json::array();
  for (const auto& g : r.gain_violations) {
    v.push_back({{"sample", g.sample}, {"which", std::string(1, g.which)}, {"omega", g.omega}, {"gain", num(g.gain)},
                 {"bound", g.bound}});
  }
  auto& s = j["samples"] = nlohmann::json::array();
  for (const auto& c : r.samples) {
    s.push_back({{"tag", c.tag},
                 {"delta_a", c.sample.delta_a},
                 {"delta_b", c.sample.delta_b},
                 {"stable", c.stable},
                 {"margin", num(c.margin)},
                 {"worst_S", num(c.worst_s)},
                 {"worst_S_omega", c.worst_s_omega},
                 {"worst_T", num(c.worst_t)},
                 {"worst_T_omega", c.worst_t_omega}});
  }
  return j.dump(2);
}

std::string gain_table_csv(const UncertainPlant& plant, const ControllerParams& k, const SynthesisSpec& spec,
                           const VerificationReport& r, const VerifyOptions& opts) {
  std::vector<double> grid = band_grid(spec.band_s, opts.grid_points);
  const std::vector<double> wt = band_grid(spec.band_t, opts.grid_points);
  grid.insert(grid.end(), wt.begin(), wt.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<std::vector<GainPoint>> cols;
  std::ostringstream os;
  os << "omega";
  for (const auto& c : r.samples) {
    os << ",S_" << c.tag << ",T_" << c.tag;
    const PlantInstance p = instantiate(plant, c.sample);
    const LoopTransfers lt = loop_transfers(p.a, p.b, k);
    cols.push_back(gain_response(lt.sensitivity, grid));
    cols.push_back(gain_response(lt.complementary, grid));
  }
  os << "\n" << std::setprecision(10);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    os << grid[i];
    for (const auto& c : cols) os << "," << c[i].magnitude;
    os << "\n";
  }
  return os.str();
}

}  // namespace rfoc
