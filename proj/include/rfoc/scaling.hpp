#pragma once

// Concrete-matrix forms of the diagonal-scaling elimination of interval
// uncertainty. These are checking tools: the synthesis path uses the
// already-eliminated LMIs in lmikit.

#include <Eigen/Core>
#include <vector>

namespace rfoc::scaling {

// One uncertainty channel: H (q x k), E (k x p), diagonal Delta and
// diagonal R > 0, both of length k.
struct Channel {
  Eigen::MatrixXd H;
  Eigen::MatrixXd E;
  Eigen::VectorXd delta;
  Eigen::VectorXd r;
};

struct ScalingPair {
  // Q + [0 . sum E'DH'; . 0 .; sum HDE . 0]
  Eigen::MatrixXd delta_form;
  // Q + diag(sum E'R^{-1}E, 0, sum HRH')
  Eigen::MatrixXd scaled_form;
};

// Q has size p + gap + q, where p = E.cols() and q = H.rows(); gap is the
// zero band between the E-block and the H-block (0 for the two-block form).
ScalingPair scaling_pair(const Eigen::MatrixXd& q, const std::vector<Channel>& channels, int gap = 0);

// Single-channel convenience overload.
ScalingPair scaling_pair(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, const Eigen::MatrixXd& e,
                         const Eigen::VectorXd& r, const Eigen::VectorXd& delta);

// Norm-bounded form Q + HFE + E'F'H' and its bound Q + eps^2 HH' + eps^-2 E'RE.
Eigen::MatrixXd norm_bounded_form(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, const Eigen::MatrixXd& f,
                                  const Eigen::MatrixXd& e);
Eigen::MatrixXd norm_bounded_bound(const Eigen::MatrixXd& q, const Eigen::MatrixXd& h, const Eigen::MatrixXd& e,
                                   const Eigen::MatrixXd& r, double eps);

double max_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace rfoc::scaling
