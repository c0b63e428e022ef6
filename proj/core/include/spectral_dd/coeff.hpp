#pragma once

#include "spectral_dd/grid.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdd {

/// Axis-aligned block of fine cells `[cx, cx + w) x [cy, cy + h)`.
struct CellRect {
  int cx = 0;
  int cy = 0;
  int w = 1;
  int h = 1;
};

enum class GeometryKind {
  channels_and_islands,
  many_islands,
  periodic_plus_random_islands,
  random_background_plus_islands,
  from_file,
};

const char* to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string& name);

/// Parameters of a coefficient layout. Binary layouts take the value 1 in
/// the background and `contrast` on inclusions.
struct GeometrySpec {
  GeometryKind kind = GeometryKind::many_islands;
  double contrast = 1e6;
  std::uint64_t seed = 1;

  // channels_and_islands: horizontal high-conductivity channels, evenly
  // spaced in y, leaving `channel_margin` background cells at both ends.
  int channel_count = 4;
  int channel_width = 1;
  int channel_margin = 4;

  // Randomly placed square islands (all binary variants and the random
  // background variant).
  int island_count = 0;
  int island_size = 2;
  /// Minimum number of background cells between two islands, and between
  /// islands and channels.
  int island_gap = 1;
  /// Keep islands off every coarse-cell edge (no cell of an island touches
  /// a coarse grid line).
  bool islands_avoid_coarse_edges = false;

  // periodic_plus_random_islands: square inclusions of `periodic_size`
  // cells repeated every `period` cells in both directions.
  int period = 4;
  int periodic_size = 1;

  // random_background_plus_islands: kappa = 10^(gamma * U(0,1)) per cell;
  // islands get 10^gamma. Defaults to log10(contrast).
  std::optional<double> gamma;

  /// Extra inclusions placed verbatim (designed layouts).
  std::vector<CellRect> rects;

  /// Source file for `from_file`.
  std::string path;
};

struct FieldProvenance {
  std::string generator;
  std::string parameters;
  std::uint64_t seed = 0;
  std::string source;
};

/// Per-fine-cell positive conductivity.
class CoefficientField {
public:
  CoefficientField(int nf, std::vector<double> values, FieldProvenance provenance = {});

  int fine_cells() const noexcept { return nf_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](int cell) const noexcept { return values_[cell]; }
  double kappa_min() const noexcept { return kmin_; }
  double kappa_max() const noexcept { return kmax_; }
  double contrast() const noexcept { return kmax_ / kmin_; }
  /// At most two distinct values.
  bool is_binary() const noexcept;
  const FieldProvenance& provenance() const noexcept { return provenance_; }

  /// Cellwise `scale / kappa`.
  CoefficientField inverted(double scale) const;

private:
  int nf_;
  std::vector<double> values_;
  double kmin_;
  double kmax_;
  FieldProvenance provenance_;
};

/// Deterministic for a fixed spec (seed included).
CoefficientField generate(const StructuredGrid& grid, const GeometrySpec& spec);

/// Same layout as `generate(grid, spec)` with the contrast replaced.
CoefficientField generate(const StructuredGrid& grid, GeometrySpec spec, double contrast);

/// Text format: line 1 `nf`, then nf^2 lines with one value each in
/// row-major cell order, printed with 17 significant digits.
void save_field(const CoefficientField& field, const std::string& path);
CoefficientField load_field(const StructuredGrid& grid, const std::string& path);
/// `cx,cy,kappa` rows with a header line.
void export_field_csv(const StructuredGrid& grid, const CoefficientField& field, const std::string& path);

enum class Phase { low, high };

/// 4-connected components of one phase of a binary field inside a patch.
struct PatchComponents {
  /// L_j: number of components (1 by convention when the phase is absent).
  int count = 0;
  /// Components with a cell edge on a coarse grid line interior to the patch.
  int touching_interior_edges = 0;
  /// Component label per patch cell (same order as `patch.cells`), -1 when
  /// the cell is not in the phase.
  std::vector<int> labels;
  /// True when the phase is empty in the patch and the whole patch counts
  /// as a single component.
  bool convention_applied = false;
};

PatchComponents patch_components(const StructuredGrid& grid, const CoefficientField& field,
                                 const SubdomainPatch& patch, Phase side);

}  // namespace sdd
