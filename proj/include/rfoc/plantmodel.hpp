#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rfoc/lmi_expr.hpp"
#include "rfoc/polyalg.hpp"
#include "rfoc/realization.hpp"

namespace rfoc {

// Interval plant  P(s) = (b_c + [0 b_d D_b]) s_n' / (a_c + [0 a_d D_a]) s_n'.
class UncertainPlant {
 public:
  // a_center = [1 a1 .. an], b_center = [0 b1 .. bn], deviations of length n.
  UncertainPlant(Poly a_center, Poly b_center, std::vector<double> a_dev, std::vector<double> b_dev);

  // Builds the plant from nominal a1..an, b1..bn and a relative deviation
  // (0.2 for +-20%), applied to |nominal|.
  static UncertainPlant from_relative(const std::vector<double>& a_nominal,
                                      const std::vector<double>& b_nominal, double fraction);

  [[nodiscard]] int order() const { return a_center_.degree(); }
  [[nodiscard]] const Poly& a_center() const { return a_center_; }
  [[nodiscard]] const Poly& b_center() const { return b_center_; }
  [[nodiscard]] const std::vector<double>& a_dev() const { return a_dev_; }
  [[nodiscard]] const std::vector<double>& b_dev() const { return b_dev_; }
  [[nodiscard]] bool has_uncertainty() const;

  // Interval bounds [lower, upper] for a_i and b_i (i = 1..n).
  [[nodiscard]] std::vector<std::pair<double, double>> a_bounds() const;
  [[nodiscard]] std::vector<std::pair<double, double>> b_bounds() const;

 private:
  Poly a_center_;
  Poly b_center_;
  std::vector<double> a_dev_;
  std::vector<double> b_dev_;
};

struct UncertaintySample {
  std::vector<double> delta_a;
  std::vector<double> delta_b;
  friend bool operator==(const UncertaintySample&, const UncertaintySample&) = default;
};

struct PlantInstance {
  Poly a;
  Poly b;
};

// Throws std::invalid_argument when a sample entry lies outside [-1, 1].
PlantInstance instantiate(const UncertainPlant& plant, const UncertaintySample& sample);

enum class Coefficient { X, Y };

struct Pin {
  Coefficient which;
  int index;  // x_index (1..m) or y_index (0..m)
  double value;
};

// K(s) = y s_m' / x s_m' with x monic.
class ControllerParams {
 public:
  ControllerParams(Poly x, Poly y, std::vector<Pin> pins = {});
  [[nodiscard]] int order() const { return x_.degree(); }
  [[nodiscard]] const Poly& x() const { return x_; }
  [[nodiscard]] const Poly& y() const { return y_; }
  [[nodiscard]] const std::vector<Pin>& pins() const { return pins_; }

 private:
  Poly x_;
  Poly y_;
  std::vector<Pin> pins_;
};

// Controller coefficients as affine expressions: free coefficients are
// registered as scalar decision variables "x1".."xm", "y0".."ym"; x0 = 1 and
// pinned coefficients are constants.
struct ControllerVariables {
  int m = 0;
  AffinePoly x;
  AffinePoly y;
  std::vector<Pin> pins;
  std::vector<int> x_ids;  // registry ids, -1 when constant (index 0 is x0)
  std::vector<int> y_ids;
};

ControllerVariables register_controller(VarRegistry& registry, int m, const std::vector<Pin>& pins);

struct SynthesisSpec {
  double rho_s = 0.0;
  FrequencyBand band_s;
  double rho_t = 0.0;
  FrequencyBand band_t;
  double delta_s = 0.5;
  double delta_t = 0.5;
  Poly d_c;
  int m = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

double db_to_gain(double db);
double gain_to_db(double gain);

// conv(a, x) + conv(b, y), degree m + n.
Poly closed_loop_charpoly(const Poly& a, const Poly& b, const ControllerParams& k);

struct Rational {
  Poly num;
  Poly den;
  [[nodiscard]] std::complex<double> eval(std::complex<double> s) const;
};

struct LoopTransfers {
  Rational sensitivity;
  Rational complementary;
  bool stable = false;
  double margin = 0.0;
};

LoopTransfers loop_transfers(const Poly& a, const Poly& b, const ControllerParams& k);

// Numerators over d_c of G_sn, G_p1n = 1 - G_sn, G_p2n and G_p3n.
struct ShapedNumerators {
  AffinePoly sn;
  AffinePoly p1n;
  AffinePoly p2n;
  AffinePoly p3n;
};

// Throws std::invalid_argument unless deg d_c = m + n.
ShapedNumerators shaped_numerators(const Poly& a, const Poly& b, const ControllerVariables& k, const Poly& d_c);
ShapedNumerators shaped_numerators(const UncertainPlant& plant, const ControllerVariables& k, const Poly& d_c);

}  // namespace rfoc
