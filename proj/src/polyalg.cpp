#include "rfoc/polyalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rfoc {

Poly::Poly(std::initializer_list<double> c) : coeffs_(c) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Poly::Poly(std::vector<double> c) : coeffs_(std::move(c)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

bool Poly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

Poly Poly::trimmed() const {
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](double c) { return c != 0.0; });
  if (first == coeffs_.end()) return Poly{0.0};
  return Poly(std::vector<double>(first, coeffs_.end()));
}

Poly Poly::padded(std::size_t length) const {
  if (length < coeffs_.size()) throw std::invalid_argument("Poly::padded: length below size");
  std::vector<double> out(length - coeffs_.size(), 0.0);
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return Poly(std::move(out));
}

namespace {

template <class T>
std::vector<T> add_aligned(const std::vector<T>& p, const std::vector<T>& q, double sign) {
  const std::size_t n = std::max(p.size(), q.size());
  std::vector<T> out(n, T{0.0});
  for (std::size_t i = 0; i < p.size(); ++i) out[n - p.size() + i] += p[i];
  for (std::size_t i = 0; i < q.size(); ++i) out[n - q.size() + i] += sign * q[i];
  return out;
}

}  // namespace

Poly operator+(const Poly& p, const Poly& q) { return Poly(add_aligned(p.coeffs(), q.coeffs(), 1.0)); }
Poly operator-(const Poly& p, const Poly& q) { return Poly(add_aligned(p.coeffs(), q.coeffs(), -1.0)); }

Poly operator*(double k, const Poly& p) {
  std::vector<double> c = p.coeffs();
  for (double& v : c) v *= k;
  return Poly(std::move(c));
}

AffinePoly::AffinePoly(std::vector<AffineScalar> c) : coeffs_(std::move(c)) {
  if (coeffs_.empty()) coeffs_.emplace_back();
}

AffinePoly::AffinePoly(const Poly& p) {
  coeffs_.reserve(p.size());
  for (double c : p.coeffs()) coeffs_.emplace_back(c);
}

bool AffinePoly::is_constant() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const AffineScalar& a) { return a.is_constant(); });
}

Poly AffinePoly::evaluate(std::span<const double> vars) const {
  std::vector<double> c;
  c.reserve(coeffs_.size());
  for (const auto& a : coeffs_) c.push_back(a.evaluate(vars));
  return Poly(std::move(c));
}

AffinePoly AffinePoly::padded(std::size_t length) const {
  if (length < coeffs_.size()) throw std::invalid_argument("AffinePoly::padded: length below size");
  std::vector<AffineScalar> out(length - coeffs_.size());
  out.insert(out.end(), coeffs_.begin(), coeffs_.end());
  return AffinePoly(std::move(out));
}

AffinePoly operator+(const AffinePoly& p, const AffinePoly& q) {
  return AffinePoly(add_aligned(p.coeffs(), q.coeffs(), 1.0));
}
AffinePoly operator-(const AffinePoly& p, const AffinePoly& q) {
  return AffinePoly(add_aligned(p.coeffs(), q.coeffs(), -1.0));
}

Poly conv(const Poly& p, const Poly& q) {
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return Poly(std::move(out));
}

AffinePoly conv(const AffinePoly& p, const Poly& q) {
  std::vector<AffineScalar> out(p.size() + q.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q[j] != 0.0) out[i + j] += q[j] * p[i];
    }
  }
  return AffinePoly(std::move(out));
}

AffinePoly conv(const Poly& p, const AffinePoly& q) { return conv(q, p); }

AffinePoly conv(const AffinePoly& p, const AffinePoly& q) {
  if (p.is_constant()) return conv(q, p.evaluate({}));
  if (q.is_constant()) return conv(p, q.evaluate({}));
  throw std::invalid_argument("conv: both operands depend on decision variables (bilinear product)");
}

std::complex<double> eval(const Poly& p, std::complex<double> s) {
  std::complex<double> acc = 0.0;
  for (double c : p.coeffs()) acc = acc * s + c;
  return acc;
}

std::vector<std::complex<double>> roots(const Poly& p) {
  const Poly t = p.trimmed();
  if (t.is_zero()) throw std::invalid_argument("roots: zero polynomial");
  const int n = t.degree();
  if (n == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) companion(0, j) = -t[j + 1] / t[0];
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("roots: eigenvalue iteration failed");
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

StabilityMargin stability_margin(const Poly& p) {
  const auto r = roots(p);
  double margin = -std::numeric_limits<double>::infinity();
  for (const auto& z : r) margin = std::max(margin, z.real());
  Stability verdict = Stability::Stable;
  if (std::abs(margin) < kBoundaryTolerance) {
    verdict = Stability::Boundary;
  } else if (margin > 0.0) {
    verdict = Stability::Unstable;
  }
  return {verdict, margin};
}

bool is_hurwitz(const Poly& p) { return stability_margin(p).verdict == Stability::Stable; }

}  // namespace rfoc
