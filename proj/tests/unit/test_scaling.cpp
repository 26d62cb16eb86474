#include <random>

#include "doctest.h"
#include "rfoc/scaling.hpp"

using namespace rfoc::scaling;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> g;
  MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  return m;
}

MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  const MatrixXd a = random_matrix(rng, n, n);
  return a + a.transpose();
}

VectorXd random_positive(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.1, 3.0);
  VectorXd v(k);
  for (int i = 0; i < k; ++i) v(i) = u(rng);
  return v;
}

// Every point of a 21-point grid per uncertainty entry (capped at two entries
// per channel, extra entries take the grid's corner values).
std::vector<VectorXd> delta_grid(int k) {
  std::vector<VectorXd> out;
  const int g = 21;
  if (k == 1) {
    for (int i = 0; i < g; ++i) out.push_back(VectorXd::Constant(1, -1.0 + 2.0 * i / (g - 1)));
    return out;
  }
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      VectorXd d = VectorXd::Constant(k, (i + j) % 2 ? 1.0 : -1.0);
      d(0) = -1.0 + 2.0 * i / (g - 1);
      d(1) = -1.0 + 2.0 * j / (g - 1);
      out.push_back(d);
    }
  return out;
}

}  // namespace

TEST_CASE("scaling_pair example") {
  MatrixXd q = -MatrixXd::Identity(2, 2);
  const MatrixXd h = MatrixXd::Constant(1, 1, 0.5), e = MatrixXd::Constant(1, 1, 1.0);
  const ScalingPair s = scaling_pair(q, h, e, VectorXd::Constant(1, 1.0), VectorXd::Constant(1, 1.0));
  MatrixXd df(2, 2), sf(2, 2);
  df << -1, 0.5, 0.5, -1;
  sf << 0, 0, 0, -0.75;
  CHECK((s.delta_form - df).norm() < 1e-15);
  CHECK((s.scaled_form - sf).norm() < 1e-15);
  CHECK_THROWS_AS(scaling_pair(MatrixXd::Identity(3, 3), h, e, VectorXd::Constant(1, 1.0), VectorXd::Constant(1, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(scaling_pair(q, h, e, VectorXd::Constant(1, 0.0), VectorXd::Constant(1, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("diagonal scaling bound dominates every diagonal uncertainty in the unit box") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 1 + trial % 4, qd = 1 + (trial / 4) % 3, k = 1 + trial % 3;
    const int gap = trial % 5 == 0 ? 2 : 0;
    const int channels = 1 + trial % 2;
    std::vector<Channel> ch;
    for (int c = 0; c < channels; ++c) {
      ch.push_back({random_matrix(rng, qd, k), random_matrix(rng, k, p), VectorXd::Zero(k), random_positive(rng, k)});
    }
    MatrixXd q = random_symmetric(rng, p + gap + qd);
    ScalingPair base = scaling_pair(q, ch, gap);
    // shift Q so that the scaled form is negative definite with margin 0.1
    const double lam = max_eigenvalue(base.scaled_form);
    q -= (lam + 0.1) * MatrixXd::Identity(q.rows(), q.cols());
    for (const VectorXd& d : delta_grid(k)) {
      for (Channel& c : ch) c.delta = d;
      const ScalingPair s = scaling_pair(q, ch, gap);
      CHECK(max_eigenvalue(s.scaled_form) == doctest::Approx(-0.1));
      CHECK(max_eigenvalue(s.delta_form) < 0.0);
      // the gap between both forms is positive semidefinite
      CHECK(-max_eigenvalue(s.delta_form - s.scaled_form) >= -1e-10);
    }
  }
}

TEST_CASE("norm-bounded bound dominates the uncertain form") {
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> eps(0.2, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4, a = 1 + trial % 3, b = 1 + (trial / 3) % 3;
    const MatrixXd q = random_symmetric(rng, n), h = random_matrix(rng, n, a), e = random_matrix(rng, b, n);
    const MatrixXd f = random_matrix(rng, a, b);
    const MatrixXd r = f.transpose() * f + 0.01 * MatrixXd::Identity(b, b);
    const double ep = eps(rng);
    const MatrixXd lhs = norm_bounded_form(q, h, f, e), rhs = norm_bounded_bound(q, h, e, r, ep);
    CHECK(max_eigenvalue(lhs - rhs) <= 1e-9);
  }
}
