#include "rfoc/affine.hpp"

#include <algorithm>

namespace rfoc {

AffineScalar AffineScalar::variable(int index, double weight) {
  AffineScalar a;
  a.weights_.assign(static_cast<std::size_t>(index) + 1, 0.0);
  a.weights_[index] = weight;
  return a;
}

double AffineScalar::weight(int index) const {
  return index < static_cast<int>(weights_.size()) ? weights_[index] : 0.0;
}

bool AffineScalar::is_constant() const {
  return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w == 0.0; });
}

double AffineScalar::evaluate(std::span<const double> vars) const {
  double v = constant_;
  const std::size_t n = std::min(vars.size(), weights_.size());
  for (std::size_t i = 0; i < n; ++i) v += weights_[i] * vars[i];
  for (std::size_t i = n; i < weights_.size(); ++i) {
    if (weights_[i] != 0.0) throw std::out_of_range("AffineScalar: assignment too short");
  }
  return v;
}

AffineScalar& AffineScalar::operator+=(const AffineScalar& o) {
  constant_ += o.constant_;
  if (weights_.size() < o.weights_.size()) weights_.resize(o.weights_.size(), 0.0);
  for (std::size_t i = 0; i < o.weights_.size(); ++i) weights_[i] += o.weights_[i];
  return *this;
}

AffineScalar& AffineScalar::operator-=(const AffineScalar& o) {
  constant_ -= o.constant_;
  if (weights_.size() < o.weights_.size()) weights_.resize(o.weights_.size(), 0.0);
  for (std::size_t i = 0; i < o.weights_.size(); ++i) weights_[i] -= o.weights_[i];
  return *this;
}

AffineScalar& AffineScalar::operator*=(double k) {
  constant_ *= k;
  for (double& w : weights_) w *= k;
  return *this;
}

}  // namespace rfoc
