#pragma once

#include "spectral_dd/assembly.hpp"
#include "spectral_dd/coeff.hpp"
#include "spectral_dd/grid.hpp"
#include "spectral_dd/krylov.hpp"
#include "spectral_dd/pou.hpp"
#include "spectral_dd/schwarz.hpp"
#include "spectral_dd/spectral.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sdd {

enum class CoarseVariant {
  none,
  standard,
  multiscale,
  spectral_standard_pou,
  spectral_multiscale_pou,
};

const char* to_string(CoarseVariant v);
CoarseVariant coarse_variant_from_string(const std::string& name);

/// Eigenpair selection for the spectral variants: either every eigenvalue
/// below `threshold`, or the `fixed_dimension` globally smallest ones.
struct CoarseSelection {
  double threshold = 0.5;
  std::optional<int> fixed_dimension;
};

/// Everything needed to solve one scalar problem with one coarse space.
struct ScalarSetup {
  GlobalSystem system;
  SpectralCoarseSpace coarse;
  std::vector<PatchSpectrum> spectra;  // empty for non-spectral variants
  /// Threshold actually used (the fixed-dimension cut-off in that mode).
  double realized_threshold = 0.0;
  std::unique_ptr<TwoLevelPreconditioner> preconditioner;
};

ScalarSetup setup_scalar(const StructuredGrid& grid, const std::vector<SubdomainPatch>& patches,
                         const CoefficientField& field, const DirichletSpec& bc, CoarseVariant variant,
                         const CoarseSelection& selection = {});

/// Builds the coarse space alone.
SpectralCoarseSpace build_coarse(const StructuredGrid& grid, const std::vector<SubdomainPatch>& patches,
                                 const CoefficientField& field, CoarseVariant variant, const CoarseSelection& selection,
                                 std::vector<PatchSpectrum>* spectra = nullptr, double* realized_threshold = nullptr);

}  // namespace sdd
