#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace sdd {

/// Nested uniform quadrilateral mesh of the unit square.
///
/// The coarse mesh has `nc x nc` square cells, each refined into `r x r`
/// fine cells, so the fine mesh has `nf = nc * r` cells per direction.
/// Fine nodes are numbered row-major (y outer, x inner):
/// `node = iy * (nf + 1) + ix`; fine cells likewise `cell = cy * nf + cx`.
/// Coarse node `j = JY * (nc + 1) + JX` sits on fine node `(JX * r, JY * r)`.
class StructuredGrid {
public:
  StructuredGrid(int nc, int r);

  int coarse_cells() const noexcept { return nc_; }
  int refinement() const noexcept { return r_; }
  int fine_cells() const noexcept { return nf_; }

  int fine_node_count() const noexcept { return (nf_ + 1) * (nf_ + 1); }
  int fine_cell_count() const noexcept { return nf_ * nf_; }
  int coarse_node_count() const noexcept { return (nc_ + 1) * (nc_ + 1); }

  double h() const noexcept { return 1.0 / nf_; }
  double H() const noexcept { return 1.0 / nc_; }

  int node(int ix, int iy) const noexcept { return iy * (nf_ + 1) + ix; }
  int node_x(int n) const noexcept { return n % (nf_ + 1); }
  int node_y(int n) const noexcept { return n / (nf_ + 1); }
  double x(int n) const noexcept { return node_x(n) * h(); }
  double y(int n) const noexcept { return node_y(n) * h(); }

  int cell(int cx, int cy) const noexcept { return cy * nf_ + cx; }
  int cell_x(int c) const noexcept { return c % nf_; }
  int cell_y(int c) const noexcept { return c / nf_; }

  /// Corner nodes of a fine cell, counter-clockwise from the lower left.
  std::array<int, 4> cell_nodes(int c) const noexcept;

  bool on_boundary(int n) const noexcept;

  int coarse_node(int jx, int jy) const noexcept { return jy * (nc_ + 1) + jx; }
  int coarse_node_x(int j) const noexcept { return j % (nc_ + 1); }
  int coarse_node_y(int j) const noexcept { return j / (nc_ + 1); }
  /// Fine node coinciding with coarse node j.
  int coarse_to_fine(int j) const noexcept;
  bool coarse_on_boundary(int j) const noexcept;

  /// Reduced (free) dofs are the fine nodes off the domain boundary,
  /// numbered in increasing node order. Returns -1 for boundary nodes.
  int dof(int n) const noexcept { return dof_of_node_[n]; }
  int dof_count() const noexcept { return static_cast<int>(node_of_dof_.size()); }
  int dof_node(int d) const noexcept { return node_of_dof_[d]; }

private:
  int nc_;
  int r_;
  int nf_;
  std::vector<int> dof_of_node_;
  std::vector<int> node_of_dof_;
};

/// Overlapping subdomain: the union of coarse cells around coarse node j.
///
/// Node sets are stored as global fine node ids in increasing order. The
/// closure box spans fine node coordinates `[x0, x1] x [y0, y1]`.
struct SubdomainPatch {
  int j = 0;
  int x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  std::vector<int> cells;
  /// All fine nodes of the closed patch.
  std::vector<int> closure_nodes;
  /// Nodes strictly inside the box (dofs of the local Dirichlet space).
  std::vector<int> interior_nodes;
  /// Closure nodes not on the domain boundary (dofs of the local eigenproblem).
  std::vector<int> eigen_nodes;
  /// Coarse nodes whose patches overlap this one (includes j).
  std::vector<int> neighbors;
  /// The closed box reaches the domain boundary.
  bool touches_boundary = false;

  bool contains_node(const StructuredGrid& g, int n) const noexcept {
    const int ix = g.node_x(n), iy = g.node_y(n);
    return ix >= x0 && ix <= x1 && iy >= y0 && iy <= y1;
  }
  bool strictly_contains_node(const StructuredGrid& g, int n) const noexcept {
    const int ix = g.node_x(n), iy = g.node_y(n);
    return ix > x0 && ix < x1 && iy > y0 && iy < y1;
  }
};

/// One patch per coarse node (boundary coarse nodes included), in coarse
/// node order.
std::vector<SubdomainPatch> subdomain_patches(const StructuredGrid& grid);

/// Largest neighbor count over all patches.
int max_overlap(const std::vector<SubdomainPatch>& patches);

}  // namespace sdd
