#pragma once

#include "spectral_dd/coeff.hpp"
#include "spectral_dd/grid.hpp"

#include <string>
#include <vector>

namespace sdd {

enum class PouKind { standard, multiscale };

const char* to_string(PouKind kind);

/// Partition of unity subordinate to the coarse-node patches.
///
/// Each function is stored on the closed box of its patch (row-major over
/// `[x0, x1] x [y0, y1]`) and is zero elsewhere.
class PartitionOfUnity {
public:
  PartitionOfUnity(const StructuredGrid& grid, PouKind kind);

  PouKind kind() const noexcept { return kind_; }
  int size() const noexcept { return static_cast<int>(boxes_.size()); }

  /// xi_j at fine node n (0 outside the patch closure).
  double value(int j, int n) const noexcept;
  /// xi_j over the box, row-major.
  const std::vector<double>& box_values(int j) const noexcept { return values_[j]; }
  std::vector<double>& box_values(int j) noexcept { return values_[j]; }

  /// xi_j sampled at the given fine nodes.
  std::vector<double> gather(int j, const std::vector<int>& nodes) const;

  /// xi_j as a full fine-nodal vector.
  std::vector<double> nodal(int j) const;

private:
  struct Box {
    int x0, x1, y0, y1;
  };
  int nf_;
  PouKind kind_;
  std::vector<Box> boxes_;
  std::vector<std::vector<double>> values_;
};

/// Coarse bilinear hat functions evaluated at fine nodes.
PartitionOfUnity standard_pou(const StructuredGrid& grid);

/// Per coarse cell, the discrete kappa-harmonic extension of the hat traces.
PartitionOfUnity multiscale_pou(const StructuredGrid& grid, const CoefficientField& field);

PartitionOfUnity make_pou(const StructuredGrid& grid, const CoefficientField& field, PouKind kind);

/// max_j H * max |grad xi_j| (cellwise bilinear gradient at the cell corners).
/// Diagnostic only.
double scaled_max_gradient(const StructuredGrid& grid, const PartitionOfUnity& pou);

/// `x,y,value` rows for xi_j over its patch closure.
void export_pou_csv(const StructuredGrid& grid, const PartitionOfUnity& pou, int j, const std::string& path);

}  // namespace sdd
