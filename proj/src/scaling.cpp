#include "rfoc/scaling.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace rfoc::scaling {

using Eigen::MatrixXd;

ScalingPair scaling_pair(const MatrixXd& q, const std::vector<Channel>& channels, int gap) {
  if (channels.empty()) throw std::invalid_argument("scaling_pair: no channels");
  const int p = static_cast<int>(channels.front().E.cols());
  const int h = static_cast<int>(channels.front().H.rows());
  if (q.rows() != q.cols() || q.rows() != p + gap + h) throw std::invalid_argument("scaling_pair: Q has wrong size");
  ScalingPair out{q, q};
  for (const Channel& c : channels) {
    const auto k = c.delta.size();
    if (c.E.cols() != p || c.H.rows() != h || c.E.rows() != static_cast<Eigen::Index>(k) ||
        c.H.cols() != static_cast<Eigen::Index>(k) || c.r.size() != static_cast<Eigen::Index>(k)) {
      throw std::invalid_argument("scaling_pair: channel dimensions disagree");
    }
    if ((c.r.array() <= 0.0).any()) throw std::invalid_argument("scaling_pair: R must be positive");
    const MatrixXd hde = c.H * c.delta.asDiagonal() * c.E;
    out.delta_form.block(p + gap, 0, h, p) += hde;
    out.delta_form.block(0, p + gap, p, h) += hde.transpose();
    out.scaled_form.block(0, 0, p, p) += c.E.transpose() * c.r.cwiseInverse().asDiagonal() * c.E;
    out.scaled_form.block(p + gap, p + gap, h, h) += c.H * c.r.asDiagonal() * c.H.transpose();
  }
  return out;
}

ScalingPair scaling_pair(const MatrixXd& q, const MatrixXd& h, const MatrixXd& e, const Eigen::VectorXd& r,
                         const Eigen::VectorXd& delta) {
  return scaling_pair(q, std::vector<Channel>{{h, e, delta, r}}, 0);
}

MatrixXd norm_bounded_form(const MatrixXd& q, const MatrixXd& h, const MatrixXd& f, const MatrixXd& e) {
  const MatrixXd hfe = h * f * e;
  return q + hfe + hfe.transpose();
}

MatrixXd norm_bounded_bound(const MatrixXd& q, const MatrixXd& h, const MatrixXd& e, const MatrixXd& r,
                            double eps) {
  return q + eps * eps * h * h.transpose() + e.transpose() * r * e / (eps * eps);
}

double max_eigenvalue(const MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace rfoc::scaling
