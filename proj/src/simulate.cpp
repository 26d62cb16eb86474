#include "rfoc/simulate.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rfoc {

double Reference::at(double t) const {
  switch (kind) {
    case Kind::Sine: return amplitude * std::sin(omega * t);
    case Kind::Step: return amplitude;
    case Kind::Zero: return 0.0;
  }
  return 0.0;
}

double Reference::period() const {
  if (kind != Kind::Sine || !(omega > 0.0)) throw std::invalid_argument("simulate.reference: period needs a sine");
  return 2.0 * std::numbers::pi / omega;
}

Reference::Kind reference_kind_from_string(const std::string& s) {
  if (s == "sine") return Reference::Kind::Sine;
  if (s == "step") return Reference::Kind::Step;
  if (s == "zero") return Reference::Kind::Zero;
  throw std::invalid_argument("simulate.reference: unknown kind '" + s + "' (sine, step, zero)");
}

std::string to_string(Reference::Kind k) {
  switch (k) {
    case Reference::Kind::Sine: return "sine";
    case Reference::Kind::Step: return "step";
    case Reference::Kind::Zero: return "zero";
  }
  return "sine";
}

SimResult simulate_tracking(const PlantInstance& plant, const ControllerParams& k, const Reference& ref,
                            double duration, double dt) {
  if (!(duration > 0.0)) throw std::invalid_argument("simulate.duration: must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("simulate.dt: must be positive");
  const LoopTransfers lt = loop_transfers(plant.a, plant.b, k);
  const Poly den = lt.complementary.den.trimmed();
  double max_pole = 0.0;
  for (const auto& z : roots(den)) max_pole = std::max(max_pole, std::abs(z));
  if (max_pole > 0.0) {
    const double dt_max = 1.0 / (50.0 * max_pole);
    if (dt > dt_max) {
      std::ostringstream os;
      os << "simulate.dt: " << dt << " exceeds 1/(50 max|pole|); use dt <= " << dt_max;
      throw std::invalid_argument(os.str());
    }
  }
  // Controllable canonical form of num/den (den monic, deg num <= deg den).
  const int n = den.degree();
  const Poly num = lt.complementary.num.padded(n + 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) a(0, j) = -den[j + 1];
  for (int i = 1; i < n; ++i) a(i, i - 1) = 1.0;
  Eigen::VectorXd c(n);
  const double d = num[0];
  for (int j = 0; j < n; ++j) c(j) = num[j + 1] - d * den[j + 1];

  SimResult out;
  if (!lt.stable) out.warning = "closed loop is not stable (max real part " + std::to_string(lt.margin) + ")";
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  out.t.reserve(steps + 1);
  out.r.reserve(steps + 1);
  out.y.reserve(steps + 1);
  out.e.reserve(steps + 1);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  auto f = [&](const Eigen::VectorXd& s, double t) {
    Eigen::VectorXd ds = a * s;
    if (n > 0) ds(0) += ref.at(t);
    return ds;
  };
  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * dt;
    const double r = ref.at(t);
    const double y = c.dot(x) + d * r;
    out.t.push_back(t);
    out.r.push_back(r);
    out.y.push_back(y);
    out.e.push_back(r - y);
    if (i == steps) break;
    const Eigen::VectorXd k1 = f(x, t);
    const Eigen::VectorXd k2 = f(x + 0.5 * dt * k1, t + 0.5 * dt);
    const Eigen::VectorXd k3 = f(x + 0.5 * dt * k2, t + 0.5 * dt);
    const Eigen::VectorXd k4 = f(x + dt * k3, t + dt);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  const TrackingMetrics m = metrics(out, kDefaultSettleFraction);
  out.rmse = m.rmse;
  out.max_abs_error = m.max_abs_error;
  return out;
}

TrackingMetrics metrics(const SimResult& result, double settle_fraction) {
  if (!(settle_fraction >= 0.0 && settle_fraction < 1.0)) {
    throw std::invalid_argument("simulate.settle_fraction: must lie in [0, 1)");
  }
  const std::size_t n = result.e.size();
  const auto start = static_cast<std::size_t>(std::floor(settle_fraction * static_cast<double>(n)));
  if (start >= n) throw std::invalid_argument("metrics: empty evaluation window");
  double sq = 0.0, mx = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    sq += result.e[i] * result.e[i];
    mx = std::max(mx, std::abs(result.e[i]));
  }
  return {std::sqrt(sq / static_cast<double>(n - start)), mx};
}

double sinusoid_amplitude(const SimResult& result, double omega, double from_fraction) {
  const std::size_t n = result.y.size();
  const auto start = static_cast<std::size_t>(std::floor(from_fraction * static_cast<double>(n)));
  if (start + 3 > n) throw std::invalid_argument("sinusoid_amplitude: window too short");
  Eigen::MatrixXd basis(n - start, 3);
  Eigen::VectorXd rhs(n - start);
  for (std::size_t i = start; i < n; ++i) {
    basis(i - start, 0) = std::sin(omega * result.t[i]);
    basis(i - start, 1) = std::cos(omega * result.t[i]);
    basis(i - start, 2) = 1.0;
    rhs(i - start) = result.y[i];
  }
  const Eigen::Vector3d coef = basis.colPivHouseholderQr().solve(rhs);
  return std::hypot(coef(0), coef(1));
}

std::string sim_csv(const SimResult& result, int stride) {
  if (stride < 1) throw std::invalid_argument("sim_csv: stride must be >= 1");
  std::ostringstream os;
  os.precision(12);
  os << "t,r,y,e\n";
  for (std::size_t i = 0; i < result.t.size(); i += static_cast<std::size_t>(stride)) {
    os << result.t[i] << "," << result.r[i] << "," << result.y[i] << "," << result.e[i] << "\n";
  }
  return os.str();
}

}  // namespace rfoc
