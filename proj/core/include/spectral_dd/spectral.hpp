#pragma once

#include "spectral_dd/assembly.hpp"
#include "spectral_dd/coeff.hpp"
#include "spectral_dd/grid.hpp"
#include "spectral_dd/linalg.hpp"
#include "spectral_dd/pou.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace sdd {

/// Finite spectrum of the local pencil (A_j, M_j), ascending.
///
/// There is one finite eigenvalue per patch-interior dof; the rows of M_j on
/// the artificial boundary are zero and only contribute infinite
/// eigenvalues. Eigenvectors live on all eigen dofs (`nodes`), are
/// M_j-orthonormal, and are A_j-harmonic on the patch boundary.
struct PatchSpectrum {
  int j = 0;
  std::vector<int> nodes;
  std::vector<double> eigenvalues;
  /// First `vectors.cols()` eigenvectors, one per column.
  DenseMatrix vectors;
  /// Number of leading eigenpairs used for the coarse space.
  int selected = 0;
  double threshold = std::numeric_limits<double>::quiet_NaN();
};

/// Which eigenvectors to keep: those with eigenvalue below `keep_below`,
/// at most `max_keep`.
struct VectorRetention {
  double keep_below = std::numeric_limits<double>::infinity();
  Index max_keep = std::numeric_limits<Index>::max();
};

/// Solves the local generalized eigenproblem. The patch-boundary dofs are
/// eliminated by a Schur complement; the remaining pencil (S, M) is solved
/// densely in the shifted form M v = mu (S + M) v. Directions where M is
/// singular to working precision get eigenvalue +inf.
PatchSpectrum solve_patch_eig(const PatchOperators& ops, VectorRetention keep = {});

/// Number of eigenvalues strictly below `threshold`.
int select_L(const PatchSpectrum& spectrum, double threshold);

/// Assembles and solves every patch problem.
std::vector<PatchSpectrum> compute_spectra(const StructuredGrid& grid, const CoefficientField& field,
                                           const std::vector<SubdomainPatch>& patches, const PartitionOfUnity& pou,
                                           VectorRetention keep = {});

/// Sets `selected` to the threshold count on every patch.
void apply_threshold(std::vector<PatchSpectrum>& spectra, double threshold);

struct FixedDimensionSelection {
  /// (target + 1)-th smallest eigenvalue overall; +inf when every pair is
  /// selected.
  double threshold = 0.0;
  std::vector<int> counts;
};

/// Picks the `target` globally smallest eigenvalues, ties broken by
/// (patch, index).
FixedDimensionSelection fixed_dimension_threshold(const std::vector<PatchSpectrum>& spectra, int target);

/// Sets `selected` from an explicit per-patch count.
void apply_counts(std::vector<PatchSpectrum>& spectra, const std::vector<int>& counts);

/// Coarse basis on the reduced (free) dofs, one basis vector per row of R0.
struct SpectralCoarseSpace {
  SparseMatrix R0;
  /// (patch, eigen index) per basis vector; eigen index -1 for pou-only
  /// (legacy) vectors.
  std::vector<std::pair<int, int>> tags;
  PouKind pou = PouKind::standard;

  int dimension() const noexcept { return static_cast<int>(R0.rows()); }
};

/// span{ xi_j * phi_i^j : i < selected_j } with products taken nodally.
SpectralCoarseSpace build_coarse_basis(const StructuredGrid& grid, const PartitionOfUnity& pou,
                                       const std::vector<PatchSpectrum>& spectra);

/// One pou function per interior coarse node.
SpectralCoarseSpace build_legacy_coarse(const StructuredGrid& grid, const PartitionOfUnity& pou);

/// Empty coarse space (one-level method).
SpectralCoarseSpace empty_coarse(const StructuredGrid& grid);

/// `patch,index,eigenvalue,selected` rows.
void export_spectra_csv(const std::vector<PatchSpectrum>& spectra, const std::string& path);

}  // namespace sdd
