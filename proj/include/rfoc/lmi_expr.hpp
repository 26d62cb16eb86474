#pragma once

#include <Eigen/Core>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rfoc/affine.hpp"

namespace rfoc {

enum class VarKind { Scalar, Symmetric, Hermitian, PositiveDiagonal };

// One registered decision variable; it occupies `count` consecutive
// entries of the flattened scalar decision vector starting at `offset`.
struct VarBlock {
  std::string name;
  VarKind kind;
  int dim = 1;
  int offset = 0;
  int count = 1;
  // Matrix variables flagged positive get a strict definiteness constraint
  // when the problem is assembled; positive-diagonal variables always do.
  bool positive = false;
};

class AffineMatrix;

class VarRegistry {
 public:
  int add_scalar(const std::string& name);
  int add_symmetric(const std::string& name, int n, bool positive);
  int add_hermitian(const std::string& name, int n, bool positive);
  int add_positive_diagonal(const std::string& name, int n);

  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] const std::vector<VarBlock>& blocks() const { return blocks_; }
  [[nodiscard]] const VarBlock& block(int id) const { return blocks_.at(id); }
  [[nodiscard]] int find(const std::string& name) const;  // -1 when absent
  [[nodiscard]] std::string scalar_name(int index) const;

  // Matrix-valued view of a non-scalar variable (dim x dim).
  [[nodiscard]] AffineMatrix matrix(int id) const;
  // Scalar view of a scalar variable, or of diagonal entry i of a
  // positive-diagonal variable.
  [[nodiscard]] AffineScalar scalar(int id, int i = 0) const;

 private:
  int add(VarBlock b);
  std::vector<VarBlock> blocks_;
  std::map<std::string, int> by_name_;
  int size_ = 0;
};

// Complex matrix-valued affine expression M(z) = M0 + sum_i z_i M_i over the
// flattened decision vector. LMI left-hand sides are square and Hermitian;
// rectangular expressions appear as borders during assembly.
class AffineMatrix {
 public:
  using Mat = Eigen::MatrixXcd;

  AffineMatrix() = default;
  AffineMatrix(int rows, int cols);
  explicit AffineMatrix(Mat constant);
  explicit AffineMatrix(const Eigen::MatrixXd& constant);
  static AffineMatrix from_scalars(const std::vector<std::vector<AffineScalar>>& grid);
  static AffineMatrix row(const std::vector<AffineScalar>& entries);
  static AffineMatrix scalar(const AffineScalar& a);
  // Block assembly; every row of blocks shares a height, every column a width.
  static AffineMatrix blocks(const std::vector<std::vector<AffineMatrix>>& grid);
  // Phi (x) X for a 2x2 Phi.
  static AffineMatrix kron(const Eigen::Matrix2cd& phi, const AffineMatrix& x);

  [[nodiscard]] int rows() const { return static_cast<int>(constant_.rows()); }
  [[nodiscard]] int cols() const { return static_cast<int>(constant_.cols()); }
  [[nodiscard]] const Mat& constant() const { return constant_; }
  [[nodiscard]] const std::map<int, Mat>& terms() const { return terms_; }
  [[nodiscard]] Mat evaluate(std::span<const double> z) const;
  [[nodiscard]] bool is_real() const;
  // max over the constant part and all coefficient matrices of ||M - M^H||_F.
  [[nodiscard]] double hermitian_defect() const;
  [[nodiscard]] AffineMatrix adjoint() const;
  // T^H M T for a constant T.
  [[nodiscard]] AffineMatrix congruence(const Mat& t) const;

  AffineMatrix& operator+=(const AffineMatrix& o);
  AffineMatrix& operator-=(const AffineMatrix& o);
  AffineMatrix& operator*=(std::complex<double> k);

  friend AffineMatrix operator+(AffineMatrix a, const AffineMatrix& b) { return a += b; }
  friend AffineMatrix operator-(AffineMatrix a, const AffineMatrix& b) { return a -= b; }
  friend AffineMatrix operator*(std::complex<double> k, AffineMatrix a) { return a *= k; }
  friend AffineMatrix operator-(AffineMatrix a) { return a *= -1.0; }
  friend AffineMatrix operator*(const Mat& l, const AffineMatrix& m);
  friend AffineMatrix operator*(const AffineMatrix& m, const Mat& r);

  void add_term(int var, const Mat& coeff);

 private:
  Mat constant_;
  std::map<int, Mat> terms_;
};

}  // namespace rfoc
