#include "rfoc/plantmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rfoc {

UncertainPlant::UncertainPlant(Poly a_center, Poly b_center, std::vector<double> a_dev, std::vector<double> b_dev)
    : a_center_(std::move(a_center)), b_center_(std::move(b_center)), a_dev_(std::move(a_dev)), b_dev_(std::move(b_dev)) {
  const int n = a_center_.degree();
  if (n < 0 || a_center_[0] != 1.0) throw std::invalid_argument("plant.a: denominator must be monic (a_c[0] = 1)");
  if (b_center_.degree() != n) throw std::invalid_argument("plant.b: numerator must have n+1 entries with a leading 0");
  if (b_center_[0] != 0.0) throw std::invalid_argument("plant.b: leading entry must be 0 (strictly proper plant)");
  if (static_cast<int>(a_dev_.size()) != n) throw std::invalid_argument("plant.a_dev: expected n entries");
  if (static_cast<int>(b_dev_.size()) != n) throw std::invalid_argument("plant.b_dev: expected n entries");
  auto negative = [](double d) { return !(d >= 0.0); };
  if (std::any_of(a_dev_.begin(), a_dev_.end(), negative)) throw std::invalid_argument("plant.a_dev: deviations must be >= 0");
  if (std::any_of(b_dev_.begin(), b_dev_.end(), negative)) throw std::invalid_argument("plant.b_dev: deviations must be >= 0");
}

UncertainPlant UncertainPlant::from_relative(const std::vector<double>& a_nominal,
                                             const std::vector<double>& b_nominal, double fraction) {
  if (a_nominal.size() != b_nominal.size()) throw std::invalid_argument("plant: a and b must both have n entries");
  if (!(fraction >= 0.0)) throw std::invalid_argument("plant.deviation: must be >= 0");
  std::vector<double> a{1.0}, b{0.0}, ad, bd;
  for (double v : a_nominal) {
    a.push_back(v);
    ad.push_back(std::abs(v) * fraction);
  }
  for (double v : b_nominal) {
    b.push_back(v);
    bd.push_back(std::abs(v) * fraction);
  }
  return UncertainPlant(Poly(a), Poly(b), ad, bd);
}

bool UncertainPlant::has_uncertainty() const {
  auto nz = [](double d) { return d != 0.0; };
  return std::any_of(a_dev_.begin(), a_dev_.end(), nz) || std::any_of(b_dev_.begin(), b_dev_.end(), nz);
}

std::vector<std::pair<double, double>> UncertainPlant::a_bounds() const {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < order(); ++i) out.emplace_back(a_center_[i + 1] - a_dev_[i], a_center_[i + 1] + a_dev_[i]);
  return out;
}

std::vector<std::pair<double, double>> UncertainPlant::b_bounds() const {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < order(); ++i) out.emplace_back(b_center_[i + 1] - b_dev_[i], b_center_[i + 1] + b_dev_[i]);
  return out;
}

PlantInstance instantiate(const UncertainPlant& plant, const UncertaintySample& sample) {
  const int n = plant.order();
  if (static_cast<int>(sample.delta_a.size()) != n || static_cast<int>(sample.delta_b.size()) != n) {
    throw std::invalid_argument("instantiate: sample must have n entries per coefficient group");
  }
  auto in_box = [](double d) { return d >= -1.0 && d <= 1.0; };
  if (!std::all_of(sample.delta_a.begin(), sample.delta_a.end(), in_box) ||
      !std::all_of(sample.delta_b.begin(), sample.delta_b.end(), in_box)) {
    throw std::invalid_argument("instantiate: sample outside [-1, 1]");
  }
  Poly a = plant.a_center();
  Poly b = plant.b_center();
  for (int i = 0; i < n; ++i) {
    a[i + 1] += plant.a_dev()[i] * sample.delta_a[i];
    b[i + 1] += plant.b_dev()[i] * sample.delta_b[i];
  }
  return {a, b};
}

ControllerParams::ControllerParams(Poly x, Poly y, std::vector<Pin> pins)
    : x_(std::move(x)), y_(std::move(y)), pins_(std::move(pins)) {
  if (x_[0] != 1.0) throw std::invalid_argument("controller.x: denominator must be monic");
  if (y_.size() != x_.size()) throw std::invalid_argument("controller.y: expected m+1 coefficients");
  for (const Pin& p : pins_) {
    const Poly& target = p.which == Coefficient::X ? x_ : y_;
    if (p.index < 0 || p.index > order()) throw std::invalid_argument("controller.pin: index out of range");
    if (target[p.index] != p.value) throw std::invalid_argument("controller.pin: coefficient differs from its pinned value");
  }
}

ControllerVariables register_controller(VarRegistry& registry, int m, const std::vector<Pin>& pins) {
  if (m < 0) throw std::invalid_argument("controller.order: must be >= 0");
  ControllerVariables k;
  k.m = m;
  k.pins = pins;
  std::vector<AffineScalar> x(m + 1), y(m + 1);
  k.x_ids.assign(m + 1, -1);
  k.y_ids.assign(m + 1, -1);
  auto pinned = [&](Coefficient c, int i) -> const Pin* {
    for (const Pin& p : pins) {
      if (p.which == c && p.index == i) return &p;
    }
    return nullptr;
  };
  for (const Pin& p : pins) {
    if (p.index < 0 || p.index > m || (p.which == Coefficient::X && p.index == 0)) {
      throw std::invalid_argument("controller.pin: index out of range");
    }
  }
  x[0] = 1.0;
  for (int i = 1; i <= m; ++i) {
    if (const Pin* p = pinned(Coefficient::X, i)) {
      x[i] = p->value;
    } else {
      k.x_ids[i] = registry.add_scalar("x" + std::to_string(i));
      x[i] = registry.scalar(k.x_ids[i]);
    }
  }
  for (int i = 0; i <= m; ++i) {
    if (const Pin* p = pinned(Coefficient::Y, i)) {
      y[i] = p->value;
    } else {
      k.y_ids[i] = registry.add_scalar("y" + std::to_string(i));
      y[i] = registry.scalar(k.y_ids[i]);
    }
  }
  k.x = AffinePoly(std::move(x));
  k.y = AffinePoly(std::move(y));
  return k;
}

void SynthesisSpec::validate() const {
  if (!(rho_s > 0.0)) throw std::invalid_argument("spec.rho_s: must be > 0");
  if (!(rho_t > 0.0)) throw std::invalid_argument("spec.rho_t: must be > 0");
  if (!(delta_s > 0.0 && delta_s < 1.0)) throw std::invalid_argument("spec.delta_s: must lie in (0, 1)");
  if (!(delta_t > 0.0 && delta_t < 1.0)) throw std::invalid_argument("spec.delta_t: must lie in (0, 1)");
  if (d_c.size() == 0 || d_c[0] != 1.0) throw std::invalid_argument("spec.central_polynomial: must be monic");
  if (!is_hurwitz(d_c)) throw std::invalid_argument("spec.central_polynomial: must be Hurwitz");
  if (m < 0) throw std::invalid_argument("spec.m: must be >= 0");
}

double db_to_gain(double db) { return std::pow(10.0, db / 20.0); }
double gain_to_db(double gain) { return 20.0 * std::log10(gain); }

Poly closed_loop_charpoly(const Poly& a, const Poly& b, const ControllerParams& k) {
  if (a.degree() != b.degree()) throw std::invalid_argument("closed_loop_charpoly: a and b must have equal length");
  return conv(a, k.x()) + conv(b, k.y());
}

std::complex<double> Rational::eval(std::complex<double> s) const { return rfoc::eval(num, s) / rfoc::eval(den, s); }

LoopTransfers loop_transfers(const Poly& a, const Poly& b, const ControllerParams& k) {
  LoopTransfers out;
  const Poly den = closed_loop_charpoly(a, b, k);
  out.sensitivity = {conv(a, k.x()), den};
  out.complementary = {conv(b, k.y()), den};
  const StabilityMargin sm = stability_margin(den);
  out.stable = sm.verdict == Stability::Stable;
  out.margin = sm.margin;
  return out;
}

ShapedNumerators shaped_numerators(const Poly& a, const Poly& b, const ControllerVariables& k, const Poly& d_c) {
  const int n = a.degree();
  if (d_c.degree() != k.m + n) throw std::invalid_argument("spec.central_polynomial: degree must equal m + n");
  ShapedNumerators out;
  out.p2n = conv(AffinePoly(a), k.x);
  out.p3n = conv(AffinePoly(b), k.y);
  out.sn = out.p2n + out.p3n;
  out.p1n = AffinePoly(d_c) - out.sn;
  return out;
}

ShapedNumerators shaped_numerators(const UncertainPlant& plant, const ControllerVariables& k, const Poly& d_c) {
  return shaped_numerators(plant.a_center(), plant.b_center(), k, d_c);
}

}  // namespace rfoc
