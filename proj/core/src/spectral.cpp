#include "spectral_dd/spectral.hpp"

#include "spectral_dd/error.hpp"
#include "spectral_dd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <tuple>

namespace sdd {

namespace {

DenseMatrix submatrix(const DenseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  DenseMatrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = m(rows[a], cols[b]);
  return out;
}

}  // namespace

PatchSpectrum solve_patch_eig(const PatchOperators& ops, VectorRetention keep) {
  const auto& I = ops.interior;
  const auto& B = ops.rim;
  const auto ni = static_cast<Index>(I.size());

  PatchSpectrum out;
  out.j = ops.j;
  out.nodes = ops.nodes;
  if (ni == 0) {
    out.vectors.resize(static_cast<Index>(ops.nodes.size()), 0);
    return out;
  }

  // Schur complement onto the interior: S = A_II - A_IB A_BB^{-1} A_BI.
  DenseMatrix S = submatrix(ops.A, I, I);
  DenseMatrix harmonic;  // -A_BB^{-1} A_BI
  if (!B.empty()) {
    const DenseMatrix Abb = submatrix(ops.A, B, B);
    const DenseMatrix Abi = submatrix(ops.A, B, I);
    Eigen::LLT<DenseMatrix> llt(Abb);
    if (llt.info() != Eigen::Success) throw NumericalFailure("solve_patch_eig: patch boundary block is not definite");
    harmonic = -llt.solve(Abi);
    S.noalias() += Abi.transpose() * harmonic;
  }
  S = 0.5 * (S + S.transpose()).eval();
  DenseMatrix Mii = submatrix(ops.M, I, I);
  Mii = 0.5 * (Mii + Mii.transpose()).eval();

  // S v = lambda M v is solved as M v = mu (S + M) v with mu = 1 / (1 + lambda).
  // S + M is well conditioned even where M is nearly singular (tiny pou
  // values), and the eigenvalues of interest map to mu near 1, where the
  // absolute error of the symmetric solver is smallest.
  Eigen::LLT<DenseMatrix> chol(S + Mii);
  if (chol.info() != Eigen::Success)
    throw SingularMatrix("solve_patch_eig: shifted pencil of patch " + std::to_string(ops.j) + " is not definite", 0);

  // C = L^{-1} M L^{-T}, eigenvalues mu in (0, 1].
  DenseMatrix C = Mii;
  chol.matrixL().solveInPlace<Eigen::OnTheLeft>(C);
  chol.matrixU().solveInPlace<Eigen::OnTheRight>(C);
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(C);
  if (eig.info() != Eigen::Success) throw NumericalFailure("solve_patch_eig: eigensolver did not converge");

  // Ascending lambda is descending mu.
  out.eigenvalues.resize(ni);
  for (Index k = 0; k < ni; ++k) {
    const double mu = eig.eigenvalues()[ni - 1 - k];
    // mu at rounding level: M is numerically singular in that direction.
    double lambda = mu > 0.0 ? 1.0 / mu - 1.0 : std::numeric_limits<double>::infinity();
    if (lambda < 0.0 && lambda >= -1e-12) lambda = 0.0;
    out.eigenvalues[k] = lambda;
  }

  Index kept = 0;
  while (kept < ni && kept < keep.max_keep && out.eigenvalues[kept] < keep.keep_below) ++kept;

  DenseMatrix Vi(ni, kept);
  for (Index k = 0; k < kept; ++k)
    Vi.col(k) = eig.eigenvectors().col(ni - 1 - k) / std::sqrt(eig.eigenvalues()[ni - 1 - k]);
  chol.matrixU().solveInPlace(Vi);
  out.vectors = DenseMatrix::Zero(static_cast<Index>(ops.nodes.size()), kept);
  for (Index a = 0; a < ni; ++a) out.vectors.row(I[a]) = Vi.row(a);
  if (!B.empty() && kept > 0) {
    const DenseMatrix Vb = harmonic * Vi;
    for (std::size_t b = 0; b < B.size(); ++b) out.vectors.row(B[b]) = Vb.row(static_cast<Index>(b));
  }
  return out;
}

int select_L(const PatchSpectrum& spectrum, double threshold) {
  return static_cast<int>(std::count_if(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                                        [threshold](double l) { return l < threshold; }));
}

std::vector<PatchSpectrum> compute_spectra(const StructuredGrid& grid, const CoefficientField& field,
                                           const std::vector<SubdomainPatch>& patches, const PartitionOfUnity& pou,
                                           VectorRetention keep) {
  std::vector<PatchSpectrum> spectra(patches.size());
  parallel_for(static_cast<int>(patches.size()), [&](int j) {
    spectra[j] = solve_patch_eig(assemble_patch(grid, field, patches[j], patches, pou), keep);
  });
  return spectra;
}

void apply_threshold(std::vector<PatchSpectrum>& spectra, double threshold) {
  if (!(threshold > 0.0)) throw InvalidArgument("threshold must be positive");
  for (auto& s : spectra) {
    const int L = select_L(s, threshold);
    if (L > s.vectors.cols())
      throw InvalidArgument("patch " + std::to_string(s.j) + " needs " + std::to_string(L) +
                            " eigenvectors but only " + std::to_string(s.vectors.cols()) + " were kept");
    s.selected = L;
    s.threshold = threshold;
  }
}

FixedDimensionSelection fixed_dimension_threshold(const std::vector<PatchSpectrum>& spectra, int target) {
  std::vector<std::tuple<double, int, int>> all;
  for (std::size_t p = 0; p < spectra.size(); ++p)
    for (std::size_t k = 0; k < spectra[p].eigenvalues.size(); ++k)
      all.emplace_back(spectra[p].eigenvalues[k], static_cast<int>(p), static_cast<int>(k));
  if (target < 0 || static_cast<std::size_t>(target) > all.size())
    throw InvalidArgument("fixed dimension " + std::to_string(target) + " exceeds the " + std::to_string(all.size()) +
                          " available eigenpairs");
  std::sort(all.begin(), all.end());

  FixedDimensionSelection sel;
  sel.counts.assign(spectra.size(), 0);
  for (int k = 0; k < target; ++k) ++sel.counts[std::get<1>(all[k])];
  sel.threshold = static_cast<std::size_t>(target) < all.size() ? std::get<0>(all[target])
                                                                 : std::numeric_limits<double>::infinity();
  return sel;
}

void apply_counts(std::vector<PatchSpectrum>& spectra, const std::vector<int>& counts) {
  if (counts.size() != spectra.size()) throw DimensionMismatch("apply_counts: one count per patch required");
  for (std::size_t p = 0; p < spectra.size(); ++p) {
    if (counts[p] < 0 || counts[p] > spectra[p].vectors.cols())
      throw InvalidArgument("patch " + std::to_string(p) + " has only " + std::to_string(spectra[p].vectors.cols()) +
                            " eigenvectors available");
    spectra[p].selected = counts[p];
  }
}

SpectralCoarseSpace build_coarse_basis(const StructuredGrid& grid, const PartitionOfUnity& pou,
                                       const std::vector<PatchSpectrum>& spectra) {
  SpectralCoarseSpace cs;
  cs.pou = pou.kind();
  std::vector<Eigen::Triplet<double>> triplets;
  int row = 0;
  for (const auto& s : spectra) {
    std::vector<double> xi = pou.gather(s.j, s.nodes);
    for (int i = 0; i < s.selected; ++i) {
      double norm2 = 0.0;
      const std::size_t first = triplets.size();
      for (std::size_t a = 0; a < s.nodes.size(); ++a) {
        const double v = xi[a] * s.vectors(static_cast<Index>(a), i);
        if (v == 0.0) continue;
        const int d = grid.dof(s.nodes[a]);
        if (d < 0) throw NumericalFailure("coarse basis touches a Dirichlet node");
        triplets.emplace_back(row, d, v);
        norm2 += v * v;
      }
      if (std::sqrt(norm2) < 1e-14) {
        triplets.resize(first);
        throw NumericalFailure("degenerate coarse basis vector (patch " + std::to_string(s.j) + ", eigenpair " +
                               std::to_string(i) + ")");
      }
      cs.tags.emplace_back(s.j, i);
      ++row;
    }
  }
  cs.R0.resize(row, grid.dof_count());
  cs.R0.setFromTriplets(triplets.begin(), triplets.end());
  cs.R0.makeCompressed();
  return cs;
}

SpectralCoarseSpace build_legacy_coarse(const StructuredGrid& grid, const PartitionOfUnity& pou) {
  SpectralCoarseSpace cs;
  cs.pou = pou.kind();
  std::vector<Eigen::Triplet<double>> triplets;
  int row = 0;
  for (int j = 0; j < grid.coarse_node_count(); ++j) {
    if (grid.coarse_on_boundary(j)) continue;
    for (int d = 0; d < grid.dof_count(); ++d) {
      const double v = pou.value(j, grid.dof_node(d));
      if (v != 0.0) triplets.emplace_back(row, d, v);
    }
    cs.tags.emplace_back(j, -1);
    ++row;
  }
  cs.R0.resize(row, grid.dof_count());
  cs.R0.setFromTriplets(triplets.begin(), triplets.end());
  cs.R0.makeCompressed();
  return cs;
}

SpectralCoarseSpace empty_coarse(const StructuredGrid& grid) {
  SpectralCoarseSpace cs;
  cs.R0.resize(0, grid.dof_count());
  return cs;
}

void export_spectra_csv(const std::vector<PatchSpectrum>& spectra, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "patch,index,eigenvalue,selected\n" << std::setprecision(17);
  for (const auto& s : spectra)
    for (std::size_t k = 0; k < s.eigenvalues.size(); ++k)
      out << s.j << ',' << k << ',' << s.eigenvalues[k] << ',' << (static_cast<int>(k) < s.selected ? 1 : 0) << '\n';
}

}  // namespace sdd
