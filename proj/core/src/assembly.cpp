#include "spectral_dd/assembly.hpp"

#include "spectral_dd/error.hpp"
#include "spectral_dd/q1.hpp"

#include <cmath>
#include <string>

namespace sdd {

DirichletSpec linear_drop_x() {
  return [](double x, double) { return 1.0 - x; };
}

GlobalSystem assemble_global(const StructuredGrid& grid, const CoefficientField& field, const DirichletSpec& bc) {
  if (field.fine_cells() != grid.fine_cells())
    throw DimensionMismatch("assemble_global: field has nf=" + std::to_string(field.fine_cells()) + ", grid has nf=" +
                            std::to_string(grid.fine_cells()));
  GlobalSystem sys;
  sys.lifting = Vector::Zero(grid.fine_node_count());
  for (int n = 0; n < grid.fine_node_count(); ++n) {
    if (!grid.on_boundary(n)) continue;
    const double g = bc(grid.x(n), grid.y(n));
    if (!std::isfinite(g)) throw InvalidArgument("assemble_global: non-finite boundary value at node " + std::to_string(n));
    sys.lifting[n] = g;
  }

  const int nd = grid.dof_count();
  sys.rhs = Vector::Zero(nd);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(grid.fine_cell_count()) * 16);
  for (int c = 0; c < grid.fine_cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    const double kappa = field[c];
    for (int a = 0; a < 4; ++a) {
      const int da = grid.dof(nodes[a]);
      if (da < 0) continue;
      for (int b = 0; b < 4; ++b) {
        const double k = kappa * q1::kStiffness[a][b];
        const int db = grid.dof(nodes[b]);
        if (db >= 0)
          triplets.emplace_back(da, db, k);
        else
          sys.rhs[da] -= k * sys.lifting[nodes[b]];
      }
    }
  }
  sys.A.resize(nd, nd);
  sys.A.setFromTriplets(triplets.begin(), triplets.end());
  sys.A.makeCompressed();
  return sys;
}

SparseMatrix assemble_neumann(const StructuredGrid& grid, const CoefficientField& field) {
  if (field.fine_cells() != grid.fine_cells()) throw DimensionMismatch("assemble_neumann: field/grid mismatch");
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(grid.fine_cell_count()) * 16);
  for (int c = 0; c < grid.fine_cell_count(); ++c) {
    const auto nodes = grid.cell_nodes(c);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) triplets.emplace_back(nodes[a], nodes[b], field[c] * q1::kStiffness[a][b]);
  }
  SparseMatrix K(grid.fine_node_count(), grid.fine_node_count());
  K.setFromTriplets(triplets.begin(), triplets.end());
  K.makeCompressed();
  return K;
}

Vector expand_solution(const StructuredGrid& grid, const GlobalSystem& sys, const Vector& reduced) {
  if (reduced.size() != grid.dof_count()) throw DimensionMismatch("expand_solution: wrong reduced size");
  Vector full = sys.lifting;
  for (int d = 0; d < grid.dof_count(); ++d) full[grid.dof_node(d)] = reduced[d];
  return full;
}

DenseMatrix PatchOperators::interior_block() const {
  const auto n = static_cast<Index>(interior.size());
  DenseMatrix out(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) out(a, b) = A(interior[a], interior[b]);
  return out;
}

PatchOperators assemble_patch(const StructuredGrid& grid, const CoefficientField& field, const SubdomainPatch& patch,
                              const std::vector<SubdomainPatch>& patches, const PartitionOfUnity& pou) {
  if (field.fine_cells() != grid.fine_cells()) throw DimensionMismatch("assemble_patch: field/grid mismatch");
  if (pou.size() != grid.coarse_node_count() || static_cast<int>(patches.size()) != grid.coarse_node_count())
    throw InvalidArgument("assemble_patch: partition of unity does not cover every patch");
  for (int i : patch.neighbors)
    if (i < 0 || i >= pou.size()) throw InvalidArgument("assemble_patch: missing partition of unity function " + std::to_string(i));

  const auto n = static_cast<Index>(patch.eigen_nodes.size());
  if (n > kMaxDensePatchDofs)
    throw InvalidArgument("assemble_patch: patch has " + std::to_string(n) + " dofs, dense limit is " +
                          std::to_string(kMaxDensePatchDofs));

  PatchOperators ops;
  ops.j = patch.j;
  ops.nodes = patch.eigen_nodes;

  const int bw = patch.x1 - patch.x0 + 1;
  std::vector<int> local(static_cast<std::size_t>(bw) * (patch.y1 - patch.y0 + 1), -1);
  auto box = [&](int node) { return (grid.node_y(node) - patch.y0) * bw + (grid.node_x(node) - patch.x0); };
  for (Index a = 0; a < n; ++a) {
    const int node = ops.nodes[a];
    local[box(node)] = static_cast<int>(a);
    (patch.strictly_contains_node(grid, node) ? ops.interior : ops.rim).push_back(static_cast<int>(a));
  }

  ops.A = DenseMatrix::Zero(n, n);
  for (int c : patch.cells) {
    const auto nodes = grid.cell_nodes(c);
    int ids[4];
    for (int a = 0; a < 4; ++a) ids[a] = local[box(nodes[a])];
    for (int a = 0; a < 4; ++a) {
      if (ids[a] < 0) continue;
      for (int b = 0; b < 4; ++b)
        if (ids[b] >= 0) ops.A(ids[a], ids[b]) += field[c] * q1::kStiffness[a][b];
    }
  }

  // W(:, k) = xi_j * xi_{i_k} at the patch dofs; M = A .* (W W^T).
  DenseMatrix W(n, static_cast<Index>(patch.neighbors.size()));
  for (std::size_t k = 0; k < patch.neighbors.size(); ++k) {
    const int i = patch.neighbors[k];
    for (Index a = 0; a < n; ++a) W(a, static_cast<Index>(k)) = pou.value(patch.j, ops.nodes[a]) * pou.value(i, ops.nodes[a]);
  }
  ops.M = ops.A.cwiseProduct(W * W.transpose());

  for (int a : ops.interior)
    if (!(ops.M(a, a) > 0.0))
      throw InvalidArgument("assemble_patch: weighted matrix has non-positive diagonal at node " +
                            std::to_string(ops.nodes[a]) + " of patch " + std::to_string(patch.j));
  return ops;
}

}  // namespace sdd
