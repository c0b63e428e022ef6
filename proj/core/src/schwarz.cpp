#include "spectral_dd/schwarz.hpp"

#include "spectral_dd/error.hpp"
#include "spectral_dd/parallel.hpp"

#include <string>

namespace sdd {

void IdentityPreconditioner::apply(const Vector& r, Vector& z) const {
  if (r.size() != n_) throw DimensionMismatch("IdentityPreconditioner: size mismatch");
  z = r;
}

DirectSolvePreconditioner::DirectSolvePreconditioner(const SparseMatrix& A) : n_(A.rows()) {
  llt_.compute(Eigen::SparseMatrix<double>(A));
  if (llt_.info() != Eigen::Success) throw NumericalFailure("DirectSolvePreconditioner: matrix is not SPD");
}

void DirectSolvePreconditioner::apply(const Vector& r, Vector& z) const {
  if (r.size() != n_) throw DimensionMismatch("DirectSolvePreconditioner: size mismatch");
  z = llt_.solve(r);
}

Eigen::SparseMatrix<double> principal_submatrix(const SparseMatrix& A, const std::vector<int>& dofs) {
  std::vector<int> position(A.rows(), -1);
  for (std::size_t k = 0; k < dofs.size(); ++k) position[dofs[k]] = static_cast<int>(k);
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t k = 0; k < dofs.size(); ++k)
    for (SparseMatrix::InnerIterator it(A, dofs[k]); it; ++it)
      if (const int col = position[it.col()]; col >= 0) triplets.emplace_back(static_cast<int>(k), col, it.value());
  Eigen::SparseMatrix<double> sub(static_cast<Index>(dofs.size()), static_cast<Index>(dofs.size()));
  sub.setFromTriplets(triplets.begin(), triplets.end());
  return sub;
}

TwoLevelPreconditioner::TwoLevelPreconditioner(const SparseMatrix& A, const StructuredGrid& grid,
                                               const std::vector<SubdomainPatch>& patches,
                                               const SpectralCoarseSpace& coarse, Options options)
    : n_(A.rows()), options_(options), R0_(coarse.R0) {
  if (A.rows() != A.cols() || A.rows() != grid.dof_count())
    throw DimensionMismatch("TwoLevelPreconditioner: matrix does not match the grid");
  if (R0_.cols() != n_) throw DimensionMismatch("TwoLevelPreconditioner: coarse basis has wrong length");

  if (options_.use_coarse && R0_.rows() > 0) {
    const SparseMatrix AR = A * R0_.transpose();
    A0_ = DenseMatrix(R0_ * AR);
    A0_ = 0.5 * (A0_ + A0_.transpose()).eval();
    try {
      coarse_.factor(A0_);
    } catch (const SingularMatrix& e) {
      throw SingularMatrix("coarse operator is singular: coarse basis vector " + std::to_string(e.pivot()) +
                               " is dependent on the previous ones",
                           e.pivot());
    }
  }

  if (options_.use_local) {
    locals_.resize(patches.size());
    parallel_for(static_cast<int>(patches.size()), [&](int j) {
      auto local = std::make_unique<LocalSolver>();
      for (int node : patches[j].interior_nodes) local->dofs.push_back(grid.dof(node));
      if (local->dofs.empty()) return;
      local->llt.compute(principal_submatrix(A, local->dofs));
      if (local->llt.info() != Eigen::Success)
        throw NumericalFailure("local Dirichlet matrix of patch " + std::to_string(j) + " is not SPD");
      locals_[j] = std::move(local);
    });
  }
}

void TwoLevelPreconditioner::apply(const Vector& r, Vector& z) const {
  if (r.size() != n_) throw DimensionMismatch("TwoLevelPreconditioner: residual has wrong length");
  z = Vector::Zero(n_);
  if (options_.use_coarse && R0_.rows() > 0) z.noalias() += R0_.transpose() * coarse_.solve(R0_ * r);
  Vector rj, zj;
  for (const auto& local : locals_) {
    if (!local) continue;
    const auto m = static_cast<Index>(local->dofs.size());
    rj.resize(m);
    for (Index k = 0; k < m; ++k) rj[k] = r[local->dofs[k]];
    zj = local->llt.solve(rj);
    for (Index k = 0; k < m; ++k) z[local->dofs[k]] += zj[k];
  }
}

}  // namespace sdd
