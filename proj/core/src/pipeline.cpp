#include "spectral_dd/pipeline.hpp"

#include "spectral_dd/error.hpp"

namespace sdd {

const char* to_string(CoarseVariant v) {
  switch (v) {
    case CoarseVariant::none: return "none";
    case CoarseVariant::standard: return "standard";
    case CoarseVariant::multiscale: return "multiscale";
    case CoarseVariant::spectral_standard_pou: return "spectral_standard_pou";
    case CoarseVariant::spectral_multiscale_pou: return "spectral_multiscale_pou";
  }
  return "unknown";
}

CoarseVariant coarse_variant_from_string(const std::string& name) {
  for (auto v : {CoarseVariant::none, CoarseVariant::standard, CoarseVariant::multiscale,
                 CoarseVariant::spectral_standard_pou, CoarseVariant::spectral_multiscale_pou})
    if (name == to_string(v)) return v;
  throw InvalidArgument("unknown coarse-space variant '" + name + "'");
}

SpectralCoarseSpace build_coarse(const StructuredGrid& grid, const std::vector<SubdomainPatch>& patches,
                                 const CoefficientField& field, CoarseVariant variant, const CoarseSelection& selection,
                                 std::vector<PatchSpectrum>* spectra_out, double* realized_threshold) {
  if (realized_threshold) *realized_threshold = 0.0;
  switch (variant) {
    case CoarseVariant::none:
      return empty_coarse(grid);
    case CoarseVariant::standard:
      return build_legacy_coarse(grid, standard_pou(grid));
    case CoarseVariant::multiscale:
      return build_legacy_coarse(grid, multiscale_pou(grid, field));
    case CoarseVariant::spectral_standard_pou:
    case CoarseVariant::spectral_multiscale_pou:
      break;
  }

  const PouKind kind = variant == CoarseVariant::spectral_standard_pou ? PouKind::standard : PouKind::multiscale;
  const PartitionOfUnity pou = make_pou(grid, field, kind);
  VectorRetention keep;
  if (selection.fixed_dimension)
    keep.max_keep = *selection.fixed_dimension;
  else
    keep.keep_below = selection.threshold;
  std::vector<PatchSpectrum> spectra = compute_spectra(grid, field, patches, pou, keep);

  double threshold = selection.threshold;
  if (selection.fixed_dimension) {
    const auto sel = fixed_dimension_threshold(spectra, *selection.fixed_dimension);
    apply_counts(spectra, sel.counts);
    threshold = sel.threshold;
    for (auto& s : spectra) s.threshold = threshold;
  } else {
    apply_threshold(spectra, selection.threshold);
  }
  if (realized_threshold) *realized_threshold = threshold;
  SpectralCoarseSpace cs = build_coarse_basis(grid, pou, spectra);
  if (spectra_out) *spectra_out = std::move(spectra);
  return cs;
}

ScalarSetup setup_scalar(const StructuredGrid& grid, const std::vector<SubdomainPatch>& patches,
                         const CoefficientField& field, const DirichletSpec& bc, CoarseVariant variant,
                         const CoarseSelection& selection) {
  ScalarSetup s;
  s.system = assemble_global(grid, field, bc);
  s.coarse = build_coarse(grid, patches, field, variant, selection, &s.spectra, &s.realized_threshold);
  s.preconditioner = std::make_unique<TwoLevelPreconditioner>(s.system.A, grid, patches, s.coarse);
  return s;
}

}  // namespace sdd
