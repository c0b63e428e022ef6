#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>

namespace sdd {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Symmetric sparse matrix in compressed row storage. Both triangles are
/// stored explicitly.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Writes `m` in coordinate text form, one `row col value` triple per line
/// (0-based indices, full precision).
void write_coordinate(const SparseMatrix& m, const std::string& path);

/// max |a_ij - a_ji| over stored entries.
double asymmetry(const SparseMatrix& m);

/// Dense Cholesky factorization that reports the failing pivot.
///
/// A pivot is rejected when it drops to `relative_tolerance` times the
/// original diagonal entry or below, which flags numerically dependent
/// columns as well as indefinite input.
class DenseCholesky {
public:
  DenseCholesky() = default;
  explicit DenseCholesky(const DenseMatrix& a, double relative_tolerance = 1e-12) { factor(a, relative_tolerance); }

  /// Throws SingularMatrix with the offending pivot index.
  void factor(const DenseMatrix& a, double relative_tolerance = 1e-12);
  Vector solve(const Vector& b) const;
  Index size() const noexcept { return l_.rows(); }
  const DenseMatrix& lower() const noexcept { return l_; }

private:
  DenseMatrix l_;
};

}  // namespace sdd
