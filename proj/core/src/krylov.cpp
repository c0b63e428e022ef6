#include "spectral_dd/krylov.hpp"

#include "spectral_dd/error.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace sdd {

std::vector<double> lanczos_ritz_values(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const auto k = static_cast<Index>(alpha.size());
  if (k == 0) return {};
  Vector diag(k);
  Vector sub(std::max<Index>(k - 1, 0));
  for (Index i = 0; i < k; ++i) {
    diag[i] = 1.0 / alpha[i];
    if (i > 0) diag[i] += beta[i - 1] / alpha[i - 1];
    if (i + 1 < k) sub[i] = std::sqrt(beta[i]) / alpha[i];
  }
  if (k == 1) return {diag[0]};
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("lanczos_ritz_values: tridiagonal eigensolver failed");
  return {eig.eigenvalues().data(), eig.eigenvalues().data() + k};
}

PcgResult pcg(const SparseMatrix& A, const Preconditioner& precond, const Vector& b, PcgOptions options) {
  const auto start = std::chrono::steady_clock::now();
  const Index n = A.rows();
  if (A.cols() != n || b.size() != n || precond.size() != n) throw DimensionMismatch("pcg: inconsistent sizes");

  PcgResult out;
  SolveReport& rep = out.report;
  out.x = Vector::Zero(n);
  Vector r = b;
  Vector z = precond.apply(r);
  double rho = r.dot(z);
  const double rho0 = rho;
  const double rnorm0 = r.norm();
  if (rho0 < 0.0) throw NumericalFailure("pcg: preconditioner is not positive definite");
  rep.preconditioned_residual.push_back(1.0);
  rep.true_residual.push_back(1.0);

  std::vector<double> alphas, betas;
  if (rho0 == 0.0) {
    rep.converged = true;
  } else {
    Vector p = z;
    Vector q(n);
    while (rep.iterations < options.maxit) {
      q.noalias() = A * p;
      const double pq = p.dot(q);
      if (!(pq > 0.0)) throw NumericalFailure("pcg: breakdown, p^T A p <= 0 (matrix is not SPD)");
      const double alpha = rho / pq;
      alphas.push_back(alpha);
      out.x.noalias() += alpha * p;
      r.noalias() -= alpha * q;
      precond.apply(r, z);
      const double rho_next = r.dot(z);
      ++rep.iterations;
      if (rho_next < 0.0) throw NumericalFailure("pcg: breakdown, r^T z < 0 (preconditioner is not SPD)");
      const double rel = std::sqrt(rho_next / rho0);
      rep.preconditioned_residual.push_back(rel);
      rep.true_residual.push_back(rnorm0 > 0.0 ? r.norm() / rnorm0 : 0.0);
      if (rel <= options.tol) {
        rep.converged = true;
        break;
      }
      const double beta = rho_next / rho;
      betas.push_back(beta);
      p = z + beta * p;
      rho = rho_next;
    }
  }

  if (!alphas.empty()) {
    const auto ritz = lanczos_ritz_values(alphas, betas);
    rep.lambda_min = ritz.front();
    rep.lambda_max = ritz.back();
    rep.condition = rep.lambda_max / rep.lambda_min;
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

CondEstimate dense_cond_oracle(const SparseMatrix& A, const Preconditioner& precond) {
  const Index n = A.rows();
  if (n > kDenseOracleLimit)
    throw InvalidArgument("dense_cond_oracle: dimension " + std::to_string(n) + " exceeds the limit of " +
                          std::to_string(kDenseOracleLimit));
  if (precond.size() != n) throw DimensionMismatch("dense_cond_oracle: preconditioner size mismatch");

  DenseMatrix P(n, n);
  Vector e = Vector::Zero(n), col;
  for (Index k = 0; k < n; ++k) {
    e[k] = 1.0;
    precond.apply(e, col);
    P.col(k) = col;
    e[k] = 0.0;
  }
  const double asym = (P - P.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * P.cwiseAbs().maxCoeff()) throw NumericalFailure("dense_cond_oracle: preconditioner is not symmetric");
  P = 0.5 * (P + P.transpose()).eval();
  Eigen::LLT<DenseMatrix> llt(P);
  if (llt.info() != Eigen::Success) throw NumericalFailure("dense_cond_oracle: preconditioner is not definite");

  const DenseMatrix L = llt.matrixL();
  DenseMatrix C = L.transpose() * (A * L);
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(C, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalFailure("dense_cond_oracle: eigensolver failed");
  CondEstimate est;
  est.lambda_min = eig.eigenvalues()[0];
  est.lambda_max = eig.eigenvalues()[n - 1];
  est.condition = est.lambda_max / est.lambda_min;
  return est;
}

void export_history_csv(const SolveReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "iteration,preconditioned,true\n" << std::setprecision(17);
  for (std::size_t k = 0; k < report.preconditioned_residual.size(); ++k)
    out << k << ',' << report.preconditioned_residual[k] << ',' << report.true_residual[k] << '\n';
}

}  // namespace sdd
