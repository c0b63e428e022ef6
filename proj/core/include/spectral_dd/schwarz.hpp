#pragma once

#include "spectral_dd/grid.hpp"
#include "spectral_dd/linalg.hpp"
#include "spectral_dd/spectral.hpp"

#include <memory>
#include <vector>

namespace sdd {

/// Symmetric positive definite approximation of A^{-1}.
class Preconditioner {
public:
  virtual ~Preconditioner() = default;
  virtual Index size() const noexcept = 0;
  /// z = P r.
  virtual void apply(const Vector& r, Vector& z) const = 0;

  Vector apply(const Vector& r) const {
    Vector z;
    apply(r, z);
    return z;
  }
};

class IdentityPreconditioner final : public Preconditioner {
public:
  explicit IdentityPreconditioner(Index n) : n_(n) {}
  Index size() const noexcept override { return n_; }
  void apply(const Vector& r, Vector& z) const override;
  using Preconditioner::apply;

private:
  Index n_;
};

/// Exact inverse through a sparse Cholesky factorization.
class DirectSolvePreconditioner final : public Preconditioner {
public:
  explicit DirectSolvePreconditioner(const SparseMatrix& A);
  Index size() const noexcept override { return n_; }
  void apply(const Vector& r, Vector& z) const override;
  using Preconditioner::apply;

private:
  Index n_;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

/// Two-level additive Schwarz:
///   P = R0^T A0^{-1} R0 + sum_j R_j^T (A_j^00)^{-1} R_j
/// with A0 = R0 A R0^T and A_j^00 the restriction of A to the interior
/// dofs of patch j.
class TwoLevelPreconditioner final : public Preconditioner {
public:
  struct Options {
    bool use_coarse = true;
    bool use_local = true;
  };

  TwoLevelPreconditioner(const SparseMatrix& A, const StructuredGrid& grid, const std::vector<SubdomainPatch>& patches,
                         const SpectralCoarseSpace& coarse, Options options);
  TwoLevelPreconditioner(const SparseMatrix& A, const StructuredGrid& grid, const std::vector<SubdomainPatch>& patches,
                         const SpectralCoarseSpace& coarse)
      : TwoLevelPreconditioner(A, grid, patches, coarse, Options{}) {}

  Index size() const noexcept override { return n_; }
  void apply(const Vector& r, Vector& z) const override;
  using Preconditioner::apply;

  int coarse_dimension() const noexcept { return static_cast<int>(R0_.rows()); }
  const DenseMatrix& coarse_matrix() const noexcept { return A0_; }

private:
  struct LocalSolver {
    std::vector<int> dofs;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
  };

  Index n_;
  Options options_;
  SparseMatrix R0_;
  DenseMatrix A0_;
  DenseCholesky coarse_;
  std::vector<std::unique_ptr<LocalSolver>> locals_;
};

/// A(dofs, dofs) as a column-major sparse matrix.
Eigen::SparseMatrix<double> principal_submatrix(const SparseMatrix& A, const std::vector<int>& dofs);

}  // namespace sdd
