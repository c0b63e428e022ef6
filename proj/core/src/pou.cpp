#include "spectral_dd/pou.hpp"

#include "spectral_dd/error.hpp"
#include "spectral_dd/linalg.hpp"
#include "spectral_dd/q1.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>

namespace sdd {

const char* to_string(PouKind kind) { return kind == PouKind::standard ? "standard" : "multiscale"; }

PartitionOfUnity::PartitionOfUnity(const StructuredGrid& grid, PouKind kind) : nf_(grid.fine_cells()), kind_(kind) {
  const int nc = grid.coarse_cells(), r = grid.refinement();
  boxes_.reserve(grid.coarse_node_count());
  values_.reserve(grid.coarse_node_count());
  for (int j = 0; j < grid.coarse_node_count(); ++j) {
    const int jx = grid.coarse_node_x(j), jy = grid.coarse_node_y(j);
    Box b{std::max(jx - 1, 0) * r, std::min(jx + 1, nc) * r, std::max(jy - 1, 0) * r, std::min(jy + 1, nc) * r};
    values_.emplace_back(static_cast<std::size_t>(b.x1 - b.x0 + 1) * (b.y1 - b.y0 + 1), 0.0);
    boxes_.push_back(b);
  }
}

double PartitionOfUnity::value(int j, int n) const noexcept {
  const Box& b = boxes_[j];
  const int ix = n % (nf_ + 1), iy = n / (nf_ + 1);
  if (ix < b.x0 || ix > b.x1 || iy < b.y0 || iy > b.y1) return 0.0;
  return values_[j][static_cast<std::size_t>(iy - b.y0) * (b.x1 - b.x0 + 1) + (ix - b.x0)];
}

std::vector<double> PartitionOfUnity::gather(int j, const std::vector<int>& nodes) const {
  std::vector<double> out(nodes.size());
  std::transform(nodes.begin(), nodes.end(), out.begin(), [&](int n) { return value(j, n); });
  return out;
}

std::vector<double> PartitionOfUnity::nodal(int j) const {
  std::vector<double> out(static_cast<std::size_t>(nf_ + 1) * (nf_ + 1), 0.0);
  const Box& b = boxes_[j];
  for (int iy = b.y0; iy <= b.y1; ++iy)
    for (int ix = b.x0; ix <= b.x1; ++ix) out[static_cast<std::size_t>(iy) * (nf_ + 1) + ix] = value(j, iy * (nf_ + 1) + ix);
  return out;
}

namespace {

double hat(const StructuredGrid& grid, int j, int n) {
  const int r = grid.refinement();
  const int dx = std::abs(grid.node_x(n) - grid.coarse_node_x(j) * r);
  const int dy = std::abs(grid.node_y(n) - grid.coarse_node_y(j) * r);
  if (dx >= r || dy >= r) return 0.0;
  return static_cast<double>(r - dx) / r * static_cast<double>(r - dy) / r;
}

void fill_standard(const StructuredGrid& grid, PartitionOfUnity& pou) {
  const int r = grid.refinement(), nc = grid.coarse_cells();
  for (int j = 0; j < grid.coarse_node_count(); ++j) {
    const int jx = grid.coarse_node_x(j), jy = grid.coarse_node_y(j);
    const int x0 = std::max(jx - 1, 0) * r, x1 = std::min(jx + 1, nc) * r;
    const int y0 = std::max(jy - 1, 0) * r, y1 = std::min(jy + 1, nc) * r;
    auto& vals = pou.box_values(j);
    std::size_t k = 0;
    for (int iy = y0; iy <= y1; ++iy)
      for (int ix = x0; ix <= x1; ++ix) vals[k++] = hat(grid, j, grid.node(ix, iy));
  }
}

}  // namespace

PartitionOfUnity standard_pou(const StructuredGrid& grid) {
  PartitionOfUnity pou(grid, PouKind::standard);
  fill_standard(grid, pou);
  return pou;
}

PartitionOfUnity multiscale_pou(const StructuredGrid& grid, const CoefficientField& field) {
  if (field.fine_cells() != grid.fine_cells()) throw DimensionMismatch("multiscale_pou: field/grid mismatch");
  PartitionOfUnity pou(grid, PouKind::multiscale);
  fill_standard(grid, pou);  // hat traces on coarse edges are kept as is
  const int r = grid.refinement(), nc = grid.coarse_cells();
  if (r == 1) return pou;

  const int m = r + 1;        // local nodes per direction
  const int ni = (r - 1) * (r - 1);
  auto local = [m](int lx, int ly) { return ly * m + lx; };
  auto interior_index = [r](int lx, int ly) { return (ly - 1) * (r - 1) + (lx - 1); };

  for (int CY = 0; CY < nc; ++CY) {
    for (int CX = 0; CX < nc; ++CX) {
      const int ox = CX * r, oy = CY * r;
      DenseMatrix K = DenseMatrix::Zero(m * m, m * m);
      for (int ly = 0; ly < r; ++ly) {
        for (int lx = 0; lx < r; ++lx) {
          const double kappa = field[grid.cell(ox + lx, oy + ly)];
          const int ids[4] = {local(lx, ly), local(lx + 1, ly), local(lx + 1, ly + 1), local(lx, ly + 1)};
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) K(ids[a], ids[b]) += kappa * q1::kStiffness[a][b];
        }
      }
      std::vector<int> interior, boundary;
      for (int ly = 0; ly <= r; ++ly)
        for (int lx = 0; lx <= r; ++lx)
          (lx > 0 && lx < r && ly > 0 && ly < r ? interior : boundary).push_back(local(lx, ly));

      DenseMatrix Kii(ni, ni), Kib(ni, boundary.size());
      for (int a = 0; a < ni; ++a) {
        for (int b = 0; b < ni; ++b) Kii(a, b) = K(interior[a], interior[b]);
        for (std::size_t b = 0; b < boundary.size(); ++b) Kib(a, b) = K(interior[a], boundary[b]);
      }
      Eigen::LLT<DenseMatrix> llt(Kii);
      if (llt.info() != Eigen::Success) throw NumericalFailure("multiscale_pou: singular cell problem");

      const int corners[4] = {grid.coarse_node(CX, CY), grid.coarse_node(CX + 1, CY), grid.coarse_node(CX + 1, CY + 1),
                              grid.coarse_node(CX, CY + 1)};
      Vector u[4];
      for (int c = 0; c < 4; ++c) {
        Vector g(boundary.size());
        for (std::size_t b = 0; b < boundary.size(); ++b) {
          const int lb = boundary[b];
          g[b] = hat(grid, corners[c], grid.node(ox + lb % m, oy + lb / m));
        }
        u[c] = llt.solve(-(Kib * g));
      }
      // The exact extensions sum to one; remove the rounding drift.
      const Vector total = u[0] + u[1] + u[2] + u[3];
      for (int c = 0; c < 4; ++c) {
        u[c] = u[c].cwiseQuotient(total);
        const int j = corners[c];
        const int jx = grid.coarse_node_x(j), jy = grid.coarse_node_y(j);
        const int bx0 = std::max(jx - 1, 0) * r, by0 = std::max(jy - 1, 0) * r;
        const int bw = std::min(jx + 1, nc) * r - bx0 + 1;
        auto& vals = pou.box_values(j);
        for (int ly = 1; ly < r; ++ly)
          for (int lx = 1; lx < r; ++lx)
            vals[static_cast<std::size_t>(oy + ly - by0) * bw + (ox + lx - bx0)] = u[c][interior_index(lx, ly)];
      }
    }
  }
  return pou;
}

PartitionOfUnity make_pou(const StructuredGrid& grid, const CoefficientField& field, PouKind kind) {
  return kind == PouKind::standard ? standard_pou(grid) : multiscale_pou(grid, field);
}

double scaled_max_gradient(const StructuredGrid& grid, const PartitionOfUnity& pou) {
  const double h = grid.h();
  double gmax = 0.0;
  for (int j = 0; j < pou.size(); ++j) {
    for (int c = 0; c < grid.fine_cell_count(); ++c) {
      const auto n = grid.cell_nodes(c);
      const double u0 = pou.value(j, n[0]), u1 = pou.value(j, n[1]), u2 = pou.value(j, n[2]), u3 = pou.value(j, n[3]);
      // The bilinear gradient attains its extreme magnitude at a corner.
      const double gx[2] = {(u1 - u0) / h, (u2 - u3) / h};
      const double gy[2] = {(u3 - u0) / h, (u2 - u1) / h};
      for (double ax : gx)
        for (double ay : gy) gmax = std::max(gmax, std::hypot(ax, ay));
    }
  }
  return gmax * grid.H();
}

void export_pou_csv(const StructuredGrid& grid, const PartitionOfUnity& pou, int j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "x,y,value\n" << std::setprecision(17);
  for (int n = 0; n < grid.fine_node_count(); ++n) {
    const double v = pou.value(j, n);
    if (v != 0.0) out << grid.x(n) << ',' << grid.y(n) << ',' << v << '\n';
  }
}

}  // namespace sdd
