#pragma once

// Example problem data and independent oracles shared by the unit tests and
// the acceptance binary.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "rfoc/lmikit.hpp"
#include "rfoc/plantmodel.hpp"
#include "rfoc/realization.hpp"
#include "rfoc/sdpgate.hpp"

namespace rfoc::fixtures {

inline UncertainPlant example_plant() { return UncertainPlant::from_relative({3.0, -10.0}, {8.0, 4.0}, 0.2); }

inline PlantInstance perturbed_plant() { return {Poly{1.0, 3.5486, -9.9415}, Poly{0.0, 6.9044, 3.6471}}; }

inline std::vector<Pin> example_pins() { return {{Coefficient::X, 2, 0.0}}; }

inline SynthesisSpec example_spec() {
  SynthesisSpec s;
  s.rho_s = db_to_gain(-3.0);
  s.rho_t = db_to_gain(-3.0);
  s.band_s = freq_band(BandKind::Mid, 0.01, 0.1);
  s.band_t = freq_band(BandKind::Mid, 20.0, 100.0);
  s.delta_s = 0.5;
  s.delta_t = 0.5;
  s.d_c = Poly{1.0, 16.0, 89.0, 390.0, 200.0};
  s.m = 2;
  return s;
}

inline ControllerParams pid(double x1, double y0, double y1, double y2) {
  return ControllerParams(Poly{1.0, x1, 0.0}, Poly{y0, y1, y2}, example_pins());
}

// Reference controllers: robust design, vertex design, nominal-only design.
inline ControllerParams reference_case1() { return pid(0.3307, 1.5790, 16.9886, 10.2572); }
inline ControllerParams reference_case2() { return pid(7.2850, 1.0875, 13.1769, 68.6918); }
inline ControllerParams reference_case3() { return pid(12.7610, 0.4414, 11.6312, 62.9964); }

// Real polynomial with the given roots; complex roots are taken together
// with their conjugates.
inline Poly poly_from_roots(const std::vector<double>& real_roots,
                            const std::vector<std::complex<double>>& complex_roots = {}) {
  Poly p{1.0};
  for (double r : real_roots) p = conv(p, Poly{1.0, -r});
  for (const auto& z : complex_roots) p = conv(p, Poly{1.0, -2.0 * z.real(), std::norm(z)});
  return p;
}

// Routh array test: true iff every root has negative real part. A zero
// pivot (root on or symmetric about the axis) counts as not Hurwitz.
inline bool routh_hurwitz(const Poly& p_in) {
  Poly p = p_in.trimmed();
  const int n = p.degree();
  if (n == 0) return true;
  std::vector<double> c = p.coeffs();
  if (c[0] < 0) {
    for (double& v : c) v = -v;
  }
  const int cols = n / 2 + 1;
  std::vector<std::vector<double>> t(n + 1, std::vector<double>(cols + 1, 0.0));
  for (int i = 0; i <= n; ++i) t[i % 2][i / 2] = c[i];
  for (int r = 2; r <= n; ++r) {
    const double piv = t[r - 1][0];
    if (std::abs(piv) < 1e-14) return false;
    for (int j = 0; j < cols; ++j) {
      t[r][j] = (piv * t[r - 2][j + 1] - t[r - 2][0] * t[r - 1][j + 1]) / piv;
    }
  }
  for (int r = 0; r <= n; ++r) {
    if (!(t[r][0] > 0.0)) return false;
  }
  return true;
}

inline SolveResult solve_lmis(const VarRegistry& reg, const std::vector<Lmi>& lmis) {
  const ConicProblem p = ConicProblem::assemble(reg, lmis);
  auto adapter = make_adapter("clarabel");
  return solve(p, *adapter);
}

// Random strictly stable system num/den with monic den of degree 1..max_deg,
// pole damping ratio >= 0.3, and deg num <= deg den.
struct RandomSystem {
  Poly num;
  Poly den;
};

inline RandomSystem random_system(std::mt19937_64& rng, int max_deg, bool proper_feedthrough) {
  std::uniform_int_distribution<int> deg_d(1, max_deg);
  std::uniform_real_distribution<double> mag(0.3, 5.0), angle(0.0, std::acos(0.3)), coef(-2.0, 2.0);
  const int n = deg_d(rng);
  std::vector<double> rr;
  std::vector<std::complex<double>> cr;
  int left = n;
  while (left > 0) {
    if (left >= 2 && coef(rng) > 0.0) {
      cr.push_back(std::polar(mag(rng), std::numbers::pi - angle(rng)));
      left -= 2;
    } else {
      rr.push_back(-mag(rng));
      left -= 1;
    }
  }
  RandomSystem s;
  s.den = poly_from_roots(rr, cr);
  std::vector<double> num(n + 1);
  for (double& v : num) v = coef(rng);
  if (!proper_feedthrough) num[0] = 0.0;
  s.num = Poly(num);
  return s;
}

inline double gain_at(const RandomSystem& s, double w) {
  const std::complex<double> jw(0.0, w);
  return std::abs(eval(s.num, jw) / eval(s.den, jw));
}

// Frequencies covering the band densely; infinity is represented by the
// feedthrough separately.
inline std::vector<double> oracle_grid(const FrequencyBand& band, int count) {
  double lo = 0.0, hi = 0.0;
  switch (band.kind) {
    case BandKind::Low: lo = band.omega_l * 1e-5; hi = band.omega_l; break;
    case BandKind::Mid: lo = band.omega_l; hi = band.omega_h; break;
    case BandKind::High: lo = band.omega_h; hi = band.omega_h * 1e5; break;
    case BandKind::All: lo = 1e-5; hi = 1e5; break;
  }
  std::vector<double> g{0.0};
  if (band.kind == BandKind::Mid || band.kind == BandKind::High) g.clear();
  for (int i = 0; i < count; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return g;
}

inline double sampled_max_gain(const RandomSystem& s, const FrequencyBand& band) {
  double mx = 0.0;
  for (double w : oracle_grid(band, 6000)) mx = std::max(mx, gain_at(s, w));
  if (band.kind == BandKind::High || band.kind == BandKind::All) {
    mx = std::max(mx, std::abs(s.num[0]));
  }
  return mx;
}

// min over omega of Re G(jw), including 0 and infinity.
inline double sampled_min_real(const RandomSystem& s) {
  double mn = std::numeric_limits<double>::infinity();
  for (double w : oracle_grid(freq_band(BandKind::All, 0, 0), 6000)) {
    const std::complex<double> jw(0.0, w);
    mn = std::min(mn, (eval(s.num, jw) / eval(s.den, jw)).real());
  }
  return std::min(mn, s.num[0]);
}

inline StateSpace realize(const RandomSystem& s) { return ctrl_canonical(AffinePoly(s.num), s.den); }

}  // namespace rfoc::fixtures
