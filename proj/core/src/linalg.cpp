#include "spectral_dd/linalg.hpp"

#include "spectral_dd/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace sdd {

void write_coordinate(const SparseMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << std::setprecision(17);
  for (Index row = 0; row < m.outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(m, row); it; ++it) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

double asymmetry(const SparseMatrix& m) {
  double worst = 0.0;
  for (Index row = 0; row < m.outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(m, row); it; ++it)
      worst = std::max(worst, std::abs(it.value() - m.coeff(it.col(), it.row())));
  return worst;
}


void DenseCholesky::factor(const DenseMatrix& a, double relative_tolerance) {
  if (a.rows() != a.cols()) throw DimensionMismatch("DenseCholesky: matrix is not square");
  const Index n = a.rows();
  l_ = a.triangularView<Eigen::Lower>();
  for (Index k = 0; k < n; ++k) {
    const double diag = a(k, k);
    double pivot = l_(k, k) - l_.row(k).head(k).squaredNorm();
    if (!(diag > 0.0) || !(pivot > relative_tolerance * diag))
      throw SingularMatrix("DenseCholesky: matrix is singular or indefinite", static_cast<std::size_t>(k));
    pivot = std::sqrt(pivot);
    l_(k, k) = pivot;
    if (k + 1 < n) {
      l_.col(k).tail(n - k - 1).noalias() -= l_.bottomLeftCorner(n - k - 1, k) * l_.row(k).head(k).transpose();
      l_.col(k).tail(n - k - 1) /= pivot;
    }
  }
  l_.triangularView<Eigen::StrictlyUpper>().setZero();
}

Vector DenseCholesky::solve(const Vector& b) const {
  if (b.size() != l_.rows()) throw DimensionMismatch("DenseCholesky::solve: size mismatch");
  Vector y = l_.triangularView<Eigen::Lower>().solve(b);
  return l_.transpose().triangularView<Eigen::Upper>().solve(y);
}

}  // namespace sdd
