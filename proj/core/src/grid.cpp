#include "spectral_dd/grid.hpp"

#include "spectral_dd/error.hpp"

#include <algorithm>
#include <string>

namespace sdd {

StructuredGrid::StructuredGrid(int nc, int r) : nc_(nc), r_(r), nf_(0) {
  if (nc < 2) throw InvalidArgument("grid: need at least 2 coarse cells per direction, got " + std::to_string(nc));
  if (r < 1) throw InvalidArgument("grid: refinement factor must be >= 1, got " + std::to_string(r));
  nf_ = nc * r;
  const int nn = fine_node_count();
  dof_of_node_.assign(nn, -1);
  node_of_dof_.reserve(static_cast<std::size_t>(nf_ - 1) * (nf_ - 1));
  for (int n = 0; n < nn; ++n) {
    if (!on_boundary(n)) {
      dof_of_node_[n] = static_cast<int>(node_of_dof_.size());
      node_of_dof_.push_back(n);
    }
  }
}

std::array<int, 4> StructuredGrid::cell_nodes(int c) const noexcept {
  const int cx = cell_x(c), cy = cell_y(c);
  return {node(cx, cy), node(cx + 1, cy), node(cx + 1, cy + 1), node(cx, cy + 1)};
}

bool StructuredGrid::on_boundary(int n) const noexcept {
  const int ix = node_x(n), iy = node_y(n);
  return ix == 0 || iy == 0 || ix == nf_ || iy == nf_;
}

int StructuredGrid::coarse_to_fine(int j) const noexcept {
  return node(coarse_node_x(j) * r_, coarse_node_y(j) * r_);
}

bool StructuredGrid::coarse_on_boundary(int j) const noexcept {
  const int jx = coarse_node_x(j), jy = coarse_node_y(j);
  return jx == 0 || jy == 0 || jx == nc_ || jy == nc_;
}

std::vector<SubdomainPatch> subdomain_patches(const StructuredGrid& grid) {
  const int nc = grid.coarse_cells();
  const int r = grid.refinement();
  std::vector<SubdomainPatch> patches(grid.coarse_node_count());

  for (int j = 0; j < grid.coarse_node_count(); ++j) {
    SubdomainPatch& p = patches[j];
    const int jx = grid.coarse_node_x(j), jy = grid.coarse_node_y(j);
    const int cx0 = std::max(jx - 1, 0), cx1 = std::min(jx + 1, nc);
    const int cy0 = std::max(jy - 1, 0), cy1 = std::min(jy + 1, nc);
    p.j = j;
    p.x0 = cx0 * r;
    p.x1 = cx1 * r;
    p.y0 = cy0 * r;
    p.y1 = cy1 * r;
    p.touches_boundary = p.x0 == 0 || p.y0 == 0 || p.x1 == grid.fine_cells() || p.y1 == grid.fine_cells();

    for (int cy = p.y0; cy < p.y1; ++cy)
      for (int cx = p.x0; cx < p.x1; ++cx) p.cells.push_back(grid.cell(cx, cy));

    for (int iy = p.y0; iy <= p.y1; ++iy) {
      for (int ix = p.x0; ix <= p.x1; ++ix) {
        const int n = grid.node(ix, iy);
        p.closure_nodes.push_back(n);
        if (!grid.on_boundary(n)) p.eigen_nodes.push_back(n);
        if (ix > p.x0 && ix < p.x1 && iy > p.y0 && iy < p.y1) p.interior_nodes.push_back(n);
      }
    }

    // Open patches overlap iff their coarse centres are at most one coarse
    // cell apart in both directions.
    for (int iy = std::max(jy - 1, 0); iy <= std::min(jy + 1, nc); ++iy)
      for (int ix = std::max(jx - 1, 0); ix <= std::min(jx + 1, nc); ++ix)
        p.neighbors.push_back(grid.coarse_node(ix, iy));
  }
  return patches;
}

int max_overlap(const std::vector<SubdomainPatch>& patches) {
  std::size_t n = 0;
  for (const auto& p : patches) n = std::max(n, p.neighbors.size());
  return static_cast<int>(n);
}

}  // namespace sdd
