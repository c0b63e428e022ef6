#pragma once

#include "spectral_dd/coeff.hpp"
#include "spectral_dd/grid.hpp"
#include "spectral_dd/linalg.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace sdd::test {

inline CoefficientField constant_field(const StructuredGrid& g, double value) {
  return CoefficientField(g.fine_cells(), std::vector<double>(g.fine_cell_count(), value));
}

/// Binary field from a cell predicate: `high` where pred(cx, cy) holds, 1 elsewhere.
template <class Pred>
CoefficientField painted_field(const StructuredGrid& g, double high, Pred pred) {
  std::vector<double> v(g.fine_cell_count(), 1.0);
  for (int cy = 0; cy < g.fine_cells(); ++cy)
    for (int cx = 0; cx < g.fine_cells(); ++cx)
      if (pred(cx, cy)) v[g.cell(cx, cy)] = high;
  return CoefficientField(g.fine_cells(), std::move(v));
}

/// Independent cells drawn high with probability `p`.
inline CoefficientField random_binary_field(const StructuredGrid& g, double contrast, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<double> v(g.fine_cell_count());
  for (auto& x : v) x = coin(rng) ? contrast : 1.0;
  return CoefficientField(g.fine_cells(), std::move(v));
}

inline Vector random_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline DenseMatrix dense(const SparseMatrix& m) { return DenseMatrix(m); }

inline std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("sdd_test_" + name)).string();
}

/// Bilinear element stiffness on [0,h]^2 by 2x2 Gauss quadrature of
/// grad(N_a) . grad(N_b), local nodes counter-clockwise from the lower left.
inline Eigen::Matrix4d gauss_element_stiffness(double h) {
  const double g = 0.5 / std::sqrt(3.0);
  const double pts[2] = {0.5 - g, 0.5 + g};
  const int sx[4] = {0, 1, 1, 0}, sy[4] = {0, 0, 1, 1};
  Eigen::Matrix4d k = Eigen::Matrix4d::Zero();
  for (double s : pts)
    for (double t : pts) {
      Eigen::Matrix<double, 2, 4> grad;
      for (int a = 0; a < 4; ++a) {
        const double fx = sx[a] ? s : 1 - s, fy = sy[a] ? t : 1 - t;
        grad(0, a) = (sx[a] ? 1.0 : -1.0) * fy / h;
        grad(1, a) = (sy[a] ? 1.0 : -1.0) * fx / h;
      }
      k += 0.25 * h * h * grad.transpose() * grad;
    }
  return k;
}

}  // namespace sdd::test
