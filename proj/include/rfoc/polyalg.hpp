#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include "rfoc/affine.hpp"

namespace rfoc {

// Polynomial with real coefficients in descending powers: coeffs()[0] is the
// coefficient of s^degree. A leading zero is kept as-is (padded vectors such
// as the plant numerator [0 b1 ... bn] rely on it).
class Poly {
 public:
  Poly() : coeffs_{0.0} {}
  Poly(std::initializer_list<double> c);
  explicit Poly(std::vector<double> c);

  [[nodiscard]] const std::vector<double>& coeffs() const { return coeffs_; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }

  [[nodiscard]] bool is_zero() const;
  // Drops leading zeros, keeping at least one coefficient.
  [[nodiscard]] Poly trimmed() const;
  // Left-pads with zeros to the given length (length >= size()).
  [[nodiscard]] Poly padded(std::size_t length) const;

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<double> coeffs_;
};

Poly operator+(const Poly& p, const Poly& q);  // right-aligned (same powers)
Poly operator-(const Poly& p, const Poly& q);
Poly operator*(double k, const Poly& p);

// Polynomial with affine coefficients, same ordering as Poly.
class AffinePoly {
 public:
  AffinePoly() : coeffs_{AffineScalar{}} {}
  explicit AffinePoly(std::vector<AffineScalar> c);
  explicit AffinePoly(const Poly& p);

  [[nodiscard]] const std::vector<AffineScalar>& coeffs() const { return coeffs_; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
  [[nodiscard]] int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  [[nodiscard]] const AffineScalar& operator[](std::size_t i) const { return coeffs_[i]; }
  AffineScalar& operator[](std::size_t i) { return coeffs_[i]; }

  [[nodiscard]] bool is_constant() const;
  [[nodiscard]] Poly evaluate(std::span<const double> vars) const;
  [[nodiscard]] AffinePoly padded(std::size_t length) const;

 private:
  std::vector<AffineScalar> coeffs_;
};

AffinePoly operator+(const AffinePoly& p, const AffinePoly& q);
AffinePoly operator-(const AffinePoly& p, const AffinePoly& q);

Poly conv(const Poly& p, const Poly& q);
AffinePoly conv(const AffinePoly& p, const Poly& q);
AffinePoly conv(const Poly& p, const AffinePoly& q);
// Throws std::invalid_argument when both operands depend on decision
// variables: the product would be bilinear.
AffinePoly conv(const AffinePoly& p, const AffinePoly& q);

std::complex<double> eval(const Poly& p, std::complex<double> s);

// Roots as eigenvalues of the companion matrix of the monic-normalized,
// trimmed polynomial. Throws std::invalid_argument for the zero polynomial.
std::vector<std::complex<double>> roots(const Poly& p);

enum class Stability { Stable, Boundary, Unstable };

struct StabilityMargin {
  Stability verdict;
  // Largest real part among the roots (-inf for a nonzero constant).
  double margin;
};

inline constexpr double kBoundaryTolerance = 1e-9;

StabilityMargin stability_margin(const Poly& p);
bool is_hurwitz(const Poly& p);

// Banded Toeplitz matrix: row i holds c starting at column i.
// Throws std::invalid_argument when cols < rows + c.size() - 1.
template <class T>
std::vector<std::vector<T>> toeplitz_band(const std::vector<T>& c, int rows, int cols) {
  if (c.empty() || rows < 0) throw std::invalid_argument("toeplitz_band: empty band");
  const int width = static_cast<int>(c.size());
  if (cols < rows + width - 1) {
    throw std::invalid_argument("toeplitz_band: cols < rows + m truncates the band");
  }
  std::vector<std::vector<T>> out(rows, std::vector<T>(cols, T{0.0}));
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < width; ++k) out[i][i + k] = c[k];
  }
  return out;
}

}  // namespace rfoc
