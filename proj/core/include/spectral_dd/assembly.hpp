#pragma once

#include "spectral_dd/coeff.hpp"
#include "spectral_dd/grid.hpp"
#include "spectral_dd/linalg.hpp"
#include "spectral_dd/pou.hpp"

#include <functional>
#include <vector>

namespace sdd {

/// Dirichlet data g(x, y) on the domain boundary.
using DirichletSpec = std::function<double(double, double)>;

/// g = 1 - x: linear temperature drop in x.
DirichletSpec linear_drop_x();

/// Q1 discretization of -div(kappa grad u) = 0 with u = g on the boundary,
/// reduced to the free dofs of the grid.
struct GlobalSystem {
  SparseMatrix A;
  Vector rhs;
  /// Full fine-nodal vector holding g on boundary nodes and 0 elsewhere.
  Vector lifting;
};

GlobalSystem assemble_global(const StructuredGrid& grid, const CoefficientField& field,
                             const DirichletSpec& bc = linear_drop_x());

/// Stiffness matrix over all fine nodes (no boundary condition applied).
SparseMatrix assemble_neumann(const StructuredGrid& grid, const CoefficientField& field);

/// Full nodal solution from reduced dofs plus lifting.
Vector expand_solution(const StructuredGrid& grid, const GlobalSystem& sys, const Vector& reduced);

/// Local operators of one patch on its eigen dofs (closure nodes off the
/// domain boundary, in increasing node order).
///
/// `A` is the patch energy without any condition on the artificial
/// boundary. `M` is the weighted form sum_i D_i A D_i with
/// D_i = diag(xi_j xi_i) for every overlapping patch i. Since xi_j vanishes
/// on the patch boundary, the rows of `M` belonging to patch-boundary nodes
/// are zero; `M` is definite on the `interior` dofs.
struct PatchOperators {
  int j = 0;
  std::vector<int> nodes;
  /// Positions in `nodes` of patch-interior nodes.
  std::vector<int> interior;
  /// Positions in `nodes` of nodes on the artificial patch boundary.
  std::vector<int> rim;
  DenseMatrix A;
  DenseMatrix M;

  /// A restricted to the interior dofs (local Dirichlet problem).
  DenseMatrix interior_block() const;
};

inline constexpr int kMaxDensePatchDofs = 4096;

PatchOperators assemble_patch(const StructuredGrid& grid, const CoefficientField& field, const SubdomainPatch& patch,
                              const std::vector<SubdomainPatch>& patches, const PartitionOfUnity& pou);

}  // namespace sdd
