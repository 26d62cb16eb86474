#include "rfoc/realization.hpp"

#include <Eigen/LU>
#include <stdexcept>

#include "rfoc/plantmodel.hpp"

namespace rfoc {

std::complex<double> StateSpace::transfer(std::complex<double> s, std::span<const double> vars) const {
  const int n = order();
  std::complex<double> d = D.evaluate(vars);
  if (n == 0) return d;
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i) c(i) = C[i].evaluate(vars);
  Eigen::MatrixXcd m = s * Eigen::MatrixXcd::Identity(n, n) - A.cast<std::complex<double>>();
  Eigen::VectorXcd x = m.partialPivLu().solve(B.cast<std::complex<double>>());
  return (c.transpose() * x)(0) + d;
}

StateSpace ctrl_canonical(const AffinePoly& numer, const Poly& d_c) {
  const int n = d_c.degree();
  if (d_c[0] != 1.0) throw std::invalid_argument("ctrl_canonical: d_c must be monic");
  if (numer.degree() > n) throw std::invalid_argument("ctrl_canonical: numerator degree exceeds denominator degree");
  const AffinePoly num = numer.padded(n + 1);
  StateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::VectorXd::Zero(n);
  if (n > 0) {
    for (int j = 0; j < n; ++j) ss.A(0, j) = -d_c[j + 1];
    for (int i = 1; i < n; ++i) ss.A(i, i - 1) = 1.0;
    ss.B(0) = 1.0;
  }
  ss.D = num[0];
  ss.C.reserve(n);
  for (int i = 1; i <= n; ++i) ss.C.push_back(num[i] - d_c[i] * num[0]);
  return ss;
}

OutputOffset uncertain_output_offset(const UncertainPlant& plant, const ControllerVariables& k) {
  const int n = plant.order();
  const int cols = n + k.m;
  return {toeplitz_band(k.x.coeffs(), n, cols), toeplitz_band(k.y.coeffs(), n, cols)};
}

std::string to_string(BandKind kind) {
  switch (kind) {
    case BandKind::Low: return "low";
    case BandKind::Mid: return "mid";
    case BandKind::High: return "high";
    case BandKind::All: return "all";
  }
  return "?";
}

BandKind band_kind_from_string(const std::string& s) {
  if (s == "low") return BandKind::Low;
  if (s == "mid") return BandKind::Mid;
  if (s == "high") return BandKind::High;
  if (s == "all") return BandKind::All;
  throw std::invalid_argument("band kind must be one of low, mid, high, all (got '" + s + "')");
}

bool FrequencyBand::is_complex() const { return psi.imag().cwiseAbs().maxCoeff() > 0.0; }

bool FrequencyBand::contains(double omega) const {
  switch (kind) {
    case BandKind::Low: return omega >= 0.0 && omega <= omega_l;
    case BandKind::Mid: return omega >= omega_l && omega <= omega_h;
    case BandKind::High: return omega >= omega_h;
    case BandKind::All: return omega >= 0.0;
  }
  return false;
}

FrequencyBand freq_band(BandKind kind, double omega_l, double omega_h) {
  using C = std::complex<double>;
  FrequencyBand band;
  band.kind = kind;
  band.omega_l = omega_l;
  band.omega_h = omega_h;
  band.phi << 0.0, 1.0, 1.0, 0.0;
  switch (kind) {
    case BandKind::Low:
      if (!(omega_l > 0.0)) throw std::invalid_argument("band.omega_l: must be > 0 for a low band");
      band.psi << -1.0, 0.0, 0.0, omega_l * omega_l;
      break;
    case BandKind::Mid: {
      if (!(omega_l >= 0.0)) throw std::invalid_argument("band.omega_l: must be >= 0");
      if (!(omega_l < omega_h)) throw std::invalid_argument("band.omega_h: must exceed omega_l");
      const double wc = 0.5 * (omega_l + omega_h);
      band.psi << -1.0, C(0.0, wc), C(0.0, -wc), -omega_l * omega_h;
      break;
    }
    case BandKind::High:
      if (!(omega_h > 0.0)) throw std::invalid_argument("band.omega_h: must be > 0 for a high band");
      band.psi << 1.0, 0.0, 0.0, -omega_h * omega_h;
      break;
    case BandKind::All:
      break;
  }
  return band;
}

double sigma(std::complex<double> lambda, const Eigen::Matrix2cd& m) {
  Eigen::Vector2cd v(lambda, 1.0);
  return (v.adjoint() * m * v)(0, 0).real();
}

}  // namespace rfoc
