#pragma once

#include <Eigen/Core>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "rfoc/polyalg.hpp"

namespace rfoc {

class UncertainPlant;
struct ControllerVariables;

// Controllable canonical realization over a monic d_c of degree N:
// A has -d_c(1..N) in its first row and an identity subdiagonal, B = e1,
// so state i carries s^(N-i) / d_c. Only C and D depend on decision
// variables.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  std::vector<AffineScalar> C;
  AffineScalar D;

  [[nodiscard]] int order() const { return static_cast<int>(A.rows()); }
  // C (sI - A)^{-1} B + D at a concrete assignment.
  [[nodiscard]] std::complex<double> transfer(std::complex<double> s, std::span<const double> vars = {}) const;
};

// Throws std::invalid_argument if deg(numer) > deg(d_c) or d_c is not monic.
StateSpace ctrl_canonical(const AffinePoly& numer, const Poly& d_c);

// X = toeplitz_band(x, n, m+n), Y = toeplitz_band(y, n, m+n).
struct OutputOffset {
  std::vector<std::vector<AffineScalar>> X;
  std::vector<std::vector<AffineScalar>> Y;
};

OutputOffset uncertain_output_offset(const UncertainPlant& plant, const ControllerVariables& k);

enum class BandKind { Low, Mid, High, All };

std::string to_string(BandKind kind);
BandKind band_kind_from_string(const std::string& s);

struct FrequencyBand {
  BandKind kind = BandKind::All;
  double omega_l = 0.0;
  double omega_h = 0.0;
  Eigen::Matrix2cd phi = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd psi = Eigen::Matrix2cd::Zero();

  [[nodiscard]] bool is_complex() const;
  [[nodiscard]] bool contains(double omega) const;
};

// Low uses omega_l as its upper edge and High uses omega_h as its lower edge;
// the unused edge is ignored. Throws std::invalid_argument on bad edges.
FrequencyBand freq_band(BandKind kind, double omega_l, double omega_h);

// [lambda; 1]^* M [lambda; 1] (real part; M Hermitian).
double sigma(std::complex<double> lambda, const Eigen::Matrix2cd& m);

}  // namespace rfoc
