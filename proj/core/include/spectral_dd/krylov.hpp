#pragma once

#include "spectral_dd/linalg.hpp"
#include "spectral_dd/schwarz.hpp"

#include <string>
#include <vector>

namespace sdd {

struct PcgOptions {
  /// Stop once sqrt(r_k^T z_k / r_0^T z_0) <= tol.
  double tol = 1e-6;
  int maxit = 1000;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  /// sqrt(r_k^T z_k / r_0^T z_0) for k = 0..iterations.
  std::vector<double> preconditioned_residual;
  /// ||r_k|| / ||r_0|| for k = 0..iterations.
  std::vector<double> true_residual;
  /// Extreme Ritz values of the CG Lanczos matrix.
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double condition = 1.0;
  double seconds = 0.0;
};

struct PcgResult {
  Vector x;
  SolveReport report;
};

/// Preconditioned conjugate gradients from a zero initial guess. Throws
/// NumericalFailure on breakdown (p^T A p <= 0 or r^T z < 0). Hitting
/// `maxit` is not an error: `converged` stays false.
PcgResult pcg(const SparseMatrix& A, const Preconditioner& precond, const Vector& b, PcgOptions options = {});

/// Eigenvalues of the Lanczos tridiagonal matrix built from CG step
/// lengths `alpha` and ratios `beta` (beta[k] = rho_{k+1} / rho_k).
std::vector<double> lanczos_ritz_values(const std::vector<double>& alpha, const std::vector<double>& beta);

struct CondEstimate {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double condition = 0.0;
};

inline constexpr Index kDenseOracleLimit = 5000;

/// Extreme eigenvalues of P A by dense linear algebra: P is materialized
/// column by column through `apply`, factored P = L L^T, and the symmetric
/// matrix L^T A L is diagonalized.
CondEstimate dense_cond_oracle(const SparseMatrix& A, const Preconditioner& precond);

/// `iteration,preconditioned,true` rows.
void export_history_csv(const SolveReport& report, const std::string& path);

}  // namespace sdd
