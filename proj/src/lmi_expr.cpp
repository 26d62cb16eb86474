#include "rfoc/lmi_expr.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace rfoc {

int VarRegistry::add(VarBlock b) {
  if (b.name.empty()) throw std::invalid_argument("VarRegistry: empty variable name");
  if (by_name_.count(b.name) != 0) {
    throw std::invalid_argument("VarRegistry: duplicate variable name '" + b.name + "'");
  }
  if (b.dim < 1) throw std::invalid_argument("VarRegistry: dimension must be positive");
  b.offset = size_;
  size_ += b.count;
  const int id = static_cast<int>(blocks_.size());
  by_name_[b.name] = id;
  blocks_.push_back(std::move(b));
  return id;
}

int VarRegistry::add_scalar(const std::string& name) {
  return add({name, VarKind::Scalar, 1, 0, 1, false});
}

int VarRegistry::add_symmetric(const std::string& name, int n, bool positive) {
  return add({name, VarKind::Symmetric, n, 0, n * (n + 1) / 2, positive});
}

int VarRegistry::add_hermitian(const std::string& name, int n, bool positive) {
  return add({name, VarKind::Hermitian, n, 0, n * n, positive});
}

int VarRegistry::add_positive_diagonal(const std::string& name, int n) {
  return add({name, VarKind::PositiveDiagonal, n, 0, n, true});
}

int VarRegistry::find(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

std::string VarRegistry::scalar_name(int index) const {
  for (const auto& b : blocks_) {
    if (index < b.offset || index >= b.offset + b.count) continue;
    const int k = index - b.offset;
    std::ostringstream os;
    os << b.name;
    switch (b.kind) {
      case VarKind::Scalar:
        break;
      case VarKind::PositiveDiagonal:
        os << '[' << k << ']';
        break;
      case VarKind::Symmetric:
      case VarKind::Hermitian: {
        // Same enumeration as matrix(): upper triangle row by row, then (for
        // Hermitian variables) the strictly upper imaginary parts.
        const int real_count = b.dim * (b.dim + 1) / 2;
        const bool imag = k >= real_count;
        const int skip = imag ? 1 : 0;
        int t = imag ? k - real_count : k;
        int i = 0;
        while (t >= b.dim - i - skip) {
          t -= b.dim - i - skip;
          ++i;
        }
        const int j = i + skip + t;
        if (b.kind == VarKind::Hermitian) os << (imag ? ".im" : ".re");
        os << '[' << i << ',' << j << ']';
        break;
      }
    }
    return os.str();
  }
  throw std::out_of_range("VarRegistry: scalar index out of range");
}

AffineMatrix VarRegistry::matrix(int id) const {
  const VarBlock& b = block(id);
  const int n = b.dim;
  AffineMatrix out(n, n);
  int k = b.offset;
  switch (b.kind) {
    case VarKind::Scalar:
      out.add_term(k, AffineMatrix::Mat::Ones(1, 1));
      break;
    case VarKind::PositiveDiagonal:
      for (int i = 0; i < n; ++i) {
        AffineMatrix::Mat e = AffineMatrix::Mat::Zero(n, n);
        e(i, i) = 1.0;
        out.add_term(k++, e);
      }
      break;
    case VarKind::Symmetric:
    case VarKind::Hermitian:
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          AffineMatrix::Mat e = AffineMatrix::Mat::Zero(n, n);
          e(i, j) = 1.0;
          e(j, i) = 1.0;
          out.add_term(k++, e);
        }
      }
      if (b.kind == VarKind::Hermitian) {
        const std::complex<double> j1(0.0, 1.0);
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            AffineMatrix::Mat e = AffineMatrix::Mat::Zero(n, n);
            e(i, j) = j1;
            e(j, i) = -j1;
            out.add_term(k++, e);
          }
        }
      }
      break;
  }
  return out;
}

AffineScalar VarRegistry::scalar(int id, int i) const {
  const VarBlock& b = block(id);
  if (b.kind != VarKind::Scalar && b.kind != VarKind::PositiveDiagonal) {
    throw std::invalid_argument("VarRegistry::scalar: '" + b.name + "' is a matrix variable");
  }
  if (i < 0 || i >= b.count) throw std::out_of_range("VarRegistry::scalar: entry out of range");
  return AffineScalar::variable(b.offset + i);
}

AffineMatrix::AffineMatrix(int rows, int cols) : constant_(Mat::Zero(rows, cols)) {}

AffineMatrix::AffineMatrix(Mat constant) : constant_(std::move(constant)) {}

AffineMatrix::AffineMatrix(const Eigen::MatrixXd& constant) : constant_(constant.cast<std::complex<double>>()) {}

AffineMatrix AffineMatrix::from_scalars(const std::vector<std::vector<AffineScalar>>& grid) {
  const int r = static_cast<int>(grid.size());
  const int c = r == 0 ? 0 : static_cast<int>(grid.front().size());
  AffineMatrix out(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(grid[i].size()) != c) throw std::invalid_argument("from_scalars: ragged grid");
    for (int j = 0; j < c; ++j) {
      const AffineScalar& a = grid[i][j];
      out.constant_(i, j) = a.constant();
      const auto& w = a.weights();
      for (int v = 0; v < static_cast<int>(w.size()); ++v) {
        if (w[v] == 0.0) continue;
        auto [it, inserted] = out.terms_.try_emplace(v, Mat::Zero(r, c));
        it->second(i, j) += w[v];
      }
    }
  }
  return out;
}

AffineMatrix AffineMatrix::row(const std::vector<AffineScalar>& entries) { return from_scalars({entries}); }

AffineMatrix AffineMatrix::scalar(const AffineScalar& a) { return from_scalars({{a}}); }

AffineMatrix AffineMatrix::blocks(const std::vector<std::vector<AffineMatrix>>& grid) {
  if (grid.empty()) return AffineMatrix(0, 0);
  std::vector<int> heights, widths;
  for (const auto& r : grid) heights.push_back(r.front().rows());
  for (const auto& b : grid.front()) widths.push_back(b.cols());
  int total_r = 0, total_c = 0;
  for (int h : heights) total_r += h;
  for (int w : widths) total_c += w;
  AffineMatrix out(total_r, total_c);
  int r0 = 0;
  for (std::size_t bi = 0; bi < grid.size(); ++bi) {
    if (grid[bi].size() != widths.size()) throw std::invalid_argument("blocks: ragged block grid");
    int c0 = 0;
    for (std::size_t bj = 0; bj < grid[bi].size(); ++bj) {
      const AffineMatrix& b = grid[bi][bj];
      if (b.rows() != heights[bi] || b.cols() != widths[bj]) {
        throw std::invalid_argument("blocks: inconsistent block dimensions");
      }
      out.constant_.block(r0, c0, b.rows(), b.cols()) = b.constant_;
      for (const auto& [v, m] : b.terms_) {
        auto [it, inserted] = out.terms_.try_emplace(v, Mat::Zero(total_r, total_c));
        it->second.block(r0, c0, b.rows(), b.cols()) += m;
      }
      c0 += widths[bj];
    }
    r0 += heights[bi];
  }
  return out;
}

AffineMatrix AffineMatrix::kron(const Eigen::Matrix2cd& phi, const AffineMatrix& x) {
  const int r = x.rows(), c = x.cols();
  auto kron_one = [&](const Mat& m) {
    Mat out = Mat::Zero(2 * r, 2 * c);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) out.block(i * r, j * c, r, c) = phi(i, j) * m;
    }
    return out;
  };
  AffineMatrix out(kron_one(x.constant_));
  for (const auto& [v, m] : x.terms_) out.terms_.emplace(v, kron_one(m));
  return out;
}

AffineMatrix::Mat AffineMatrix::evaluate(std::span<const double> z) const {
  Mat out = constant_;
  for (const auto& [v, m] : terms_) {
    if (v >= static_cast<int>(z.size())) throw std::out_of_range("AffineMatrix: assignment too short");
    out += z[v] * m;
  }
  return out;
}

bool AffineMatrix::is_real() const {
  if (constant_.imag().cwiseAbs().maxCoeff() > 0.0) return false;
  for (const auto& [v, m] : terms_) {
    if (m.size() > 0 && m.imag().cwiseAbs().maxCoeff() > 0.0) return false;
  }
  return true;
}

double AffineMatrix::hermitian_defect() const {
  if (rows() != cols()) return std::numeric_limits<double>::infinity();
  double d = (constant_ - constant_.adjoint()).norm();
  for (const auto& [v, m] : terms_) d = std::max(d, (m - m.adjoint()).norm());
  return d;
}

AffineMatrix AffineMatrix::adjoint() const {
  AffineMatrix out(Mat(constant_.adjoint()));
  for (const auto& [v, m] : terms_) out.terms_.emplace(v, m.adjoint());
  return out;
}

AffineMatrix AffineMatrix::congruence(const Mat& t) const { return t.adjoint() * (*this) * t; }

AffineMatrix& AffineMatrix::operator+=(const AffineMatrix& o) {
  if (o.rows() != rows() || o.cols() != cols()) throw std::invalid_argument("AffineMatrix: dimension mismatch in +");
  constant_ += o.constant_;
  for (const auto& [v, m] : o.terms_) add_term(v, m);
  return *this;
}

AffineMatrix& AffineMatrix::operator-=(const AffineMatrix& o) {
  if (o.rows() != rows() || o.cols() != cols()) throw std::invalid_argument("AffineMatrix: dimension mismatch in -");
  constant_ -= o.constant_;
  for (const auto& [v, m] : o.terms_) add_term(v, -m);
  return *this;
}

AffineMatrix& AffineMatrix::operator*=(std::complex<double> k) {
  constant_ *= k;
  for (auto& [v, m] : terms_) m *= k;
  return *this;
}

void AffineMatrix::add_term(int var, const Mat& coeff) {
  if (coeff.rows() != rows() || coeff.cols() != cols()) throw std::invalid_argument("AffineMatrix: term shape mismatch");
  auto [it, inserted] = terms_.try_emplace(var, coeff);
  if (!inserted) it->second += coeff;
}

AffineMatrix operator*(const AffineMatrix::Mat& l, const AffineMatrix& m) {
  if (l.cols() != m.rows()) throw std::invalid_argument("AffineMatrix: dimension mismatch in left product");
  AffineMatrix out(AffineMatrix::Mat(l * m.constant_));
  for (const auto& [v, c] : m.terms_) out.terms_.emplace(v, l * c);
  return out;
}

AffineMatrix operator*(const AffineMatrix& m, const AffineMatrix::Mat& r) {
  if (m.cols() != r.rows()) throw std::invalid_argument("AffineMatrix: dimension mismatch in right product");
  AffineMatrix out(AffineMatrix::Mat(m.constant_ * r));
  for (const auto& [v, c] : m.terms_) out.terms_.emplace(v, c * r);
  return out;
}

}  // namespace rfoc
