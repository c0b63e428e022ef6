// Randomized property checks over a matrix of small configurations.
// Exit status is the number of failed properties.

#include "spectral_dd/assembly.hpp"
#include "spectral_dd/pipeline.hpp"
#include "spectral_dd/pou.hpp"
#include "spectral_dd/spectral.hpp"

#include "support.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>

using namespace sdd;

namespace {

struct Tally {
  std::map<std::string, std::pair<int, double>> results;  // name -> (failures, worst value)
  std::vector<std::string> order;

  void record(const std::string& name, bool ok, double value) {
    if (!results.count(name)) {
      order.push_back(name);
      results[name] = {0, 0.0};
    }
    auto& r = results[name];
    if (!ok) ++r.first;
    r.second = std::max(r.second, value);
  }
};

double min_eigenvalue(const DenseMatrix& m) {
  return Eigen::SelfAdjointEigenSolver<DenseMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

DenseMatrix take(const DenseMatrix& m, const std::vector<int>& idx) {
  DenseMatrix out(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) out(a, b) = m(idx[a], idx[b]);
  return out;
}

void check_pou(Tally& t, const StructuredGrid& g, const PartitionOfUnity& pou) {
  double worst = 0.0, lo = 0.0;
  for (int n = 0; n < g.fine_node_count(); ++n) {
    double s = 0.0;
    for (int j = 0; j < pou.size(); ++j) {
      s += pou.value(j, n);
      lo = std::min(lo, pou.value(j, n));
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  t.record("pou sums to one", worst <= 1e-12, worst);
  t.record("pou is nonnegative", lo >= -1e-12, -lo);
}

void check_patch(Tally& t, const PatchOperators& ops, std::mt19937_64& rng) {
  const double scale = ops.A.cwiseAbs().maxCoeff();
  const double asym = std::max((ops.A - ops.A.transpose()).cwiseAbs().maxCoeff(),
                               (ops.M - ops.M.transpose()).cwiseAbs().maxCoeff());
  t.record("patch operators symmetric", asym <= 1e-12 * scale, asym / scale);

  const double a_min = min_eigenvalue(ops.A);
  t.record("patch A positive semidefinite", a_min >= -1e-10 * scale, std::max(0.0, -a_min / scale));
  const double m_min = min_eigenvalue(ops.M);
  t.record("patch M positive semidefinite", m_min >= -1e-10 * scale, std::max(0.0, -m_min / scale));
  // Tiny multiscale pou values make M_II numerically semidefinite at high
  // contrast; what the eigensolver needs is a Cholesky factor.
  const bool mi_ok = Eigen::LLT<DenseMatrix>(take(ops.M, ops.interior)).info() == Eigen::Success;
  t.record("patch M_II admits Cholesky", mi_ok, mi_ok ? 0.0 : 1.0);
  const double ai_min = min_eigenvalue(take(ops.A, ops.interior));
  t.record("local Dirichlet block definite", ai_min > 0.0, ai_min > 0.0 ? 0.0 : 1.0);

  const PatchSpectrum sp = solve_patch_eig(ops);
  const Index k = sp.vectors.cols();
  double residual = 0.0;
  // Eigenpairs that can enter a coarse space (lambda <= 1).
  for (Index i = 0; i < k && sp.eigenvalues[i] <= 1.0; ++i) {
    const Vector v = sp.vectors.col(i);
    const Vector r = ops.A * v - sp.eigenvalues[i] * (ops.M * v);
    double worst = 0.0;
    for (int a : ops.interior) worst = std::max(worst, std::abs(r[a]));
    // Rim rows carry the harmonic-extension condition A_rim v = 0.
    for (int a : ops.rim) worst = std::max(worst, std::abs((ops.A * v)[a]));
    residual = std::max(residual, worst / (scale * v.cwiseAbs().maxCoeff()));
  }
  t.record("eigen residual", residual <= 1e-8, residual);
  Index low = 0;
  while (low < k && sp.eigenvalues[low] <= 1.0) ++low;
  if (low > 0) {
    const DenseMatrix V = sp.vectors.leftCols(low);
    const DenseMatrix gram = V.transpose() * ops.M * V;
    const double ortho = (gram - DenseMatrix::Identity(low, low)).cwiseAbs().maxCoeff();
    t.record("eigenvectors M-orthonormal", ortho <= 1e-8, ortho);
  }

  // m(phi - phi0, phi - phi0) <= a(phi, phi) / lambda_L with phi0 the
  // m-projection onto the L eigenvectors below 0.5.
  const int L = select_L(sp, 0.5);
  if (L < static_cast<int>(sp.eigenvalues.size())) {
    const double tau = 1.0 / sp.eigenvalues[L];
    double excess = 0.0;
    for (int trial = 0; trial < 4; ++trial) {
      const Vector phi = test::random_vector(static_cast<Index>(ops.nodes.size()), rng);
      Vector phi0 = Vector::Zero(phi.size());
      for (int i = 0; i < L; ++i) phi0 += (sp.vectors.col(i).dot(ops.M * phi)) * sp.vectors.col(i);
      const Vector e = phi - phi0;
      const double lhs = e.dot(ops.M * e), rhs = tau * phi.dot(ops.A * phi);
      excess = std::max(excess, (lhs - rhs) / std::max(1.0, rhs));
    }
    t.record("projection inequality", excess <= 1e-8, std::max(0.0, excess));
  }
}

void check_preconditioner(Tally& t, const StructuredGrid& g, const std::vector<SubdomainPatch>& patches,
                          const CoefficientField& f, std::mt19937_64& rng) {
  for (auto v : {CoarseVariant::none, CoarseVariant::standard, CoarseVariant::multiscale,
                 CoarseVariant::spectral_standard_pou, CoarseVariant::spectral_multiscale_pou}) {
    auto s = setup_scalar(g, patches, f, linear_drop_x(), v);
    double worst = 0.0;
    bool positive = true;
    for (int trial = 0; trial < 3; ++trial) {
      const Vector r = test::random_vector(g.dof_count(), rng), q = test::random_vector(g.dof_count(), rng);
      const Vector pr = s.preconditioner->apply(r), pq = s.preconditioner->apply(q);
      const double a = q.dot(pr), b = r.dot(pq);
      worst = std::max(worst, std::abs(a - b) / std::sqrt(r.dot(pr) * q.dot(pq)));
      positive = positive && r.dot(pr) > 0.0;
    }
    t.record("preconditioner symmetric", worst <= 1e-10, worst);
    t.record("preconditioner positive", positive, positive ? 0.0 : 1.0);
  }
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  Tally tally;
  const std::uint64_t seeds[5] = {11, 23, 37, 41, 59};
  for (std::uint64_t seed : seeds) {
    std::mt19937_64 rng(seed);
    const int nc = 3 + static_cast<int>(seed % 2);
    const int r = 3 + static_cast<int>(seed % 3);
    const double contrast = std::pow(10.0, 2 + static_cast<int>(seed % 5));
    const StructuredGrid g(nc, r);
    const auto patches = subdomain_patches(g);
    const auto f = test::random_binary_field(g, contrast, 0.35, seed);
    for (auto kind : {PouKind::standard, PouKind::multiscale}) {
      const auto pou = make_pou(g, f, kind);
      check_pou(tally, g, pou);
      for (const auto& p : patches) check_patch(tally, assemble_patch(g, f, p, patches, pou), rng);
    }
    check_preconditioner(tally, g, patches, f, rng);
  }

  int failed = 0;
  for (const auto& name : tally.order) {
    const auto& [failures, worst] = tally.results[name];
    std::printf("%-36s %s  (worst %.3e)\n", name.c_str(), failures == 0 ? "ok  " : "FAIL", worst);
    failed += failures > 0;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("property suite: %zu properties, %d failed, %zu seeds, %.2f s\n", tally.order.size(), failed,
              std::size(seeds), seconds);
  return failed;
}
