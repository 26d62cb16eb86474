#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace rfoc {

// Affine function of the flattened decision vector: constant + w . z.
// The weight vector may be shorter than the decision vector; missing
// trailing weights are zero.
class AffineScalar {
 public:
  AffineScalar() = default;
  AffineScalar(double constant) : constant_{constant} {}  // NOLINT: implicit on purpose
  static AffineScalar variable(int index, double weight = 1.0);

  [[nodiscard]] double constant() const { return constant_; }
  [[nodiscard]] const std::vector<double>& weights() const { return weights_; }
  [[nodiscard]] double weight(int index) const;
  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] double evaluate(std::span<const double> vars) const;

  AffineScalar& operator+=(const AffineScalar& o);
  AffineScalar& operator-=(const AffineScalar& o);
  AffineScalar& operator*=(double k);

  friend AffineScalar operator+(AffineScalar a, const AffineScalar& b) { return a += b; }
  friend AffineScalar operator-(AffineScalar a, const AffineScalar& b) { return a -= b; }
  friend AffineScalar operator*(AffineScalar a, double k) { return a *= k; }
  friend AffineScalar operator*(double k, AffineScalar a) { return a *= k; }
  friend AffineScalar operator-(AffineScalar a) { return a *= -1.0; }

 private:
  double constant_ = 0.0;
  std::vector<double> weights_;
};

}  // namespace rfoc
