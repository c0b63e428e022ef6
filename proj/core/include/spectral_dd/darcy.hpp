#pragma once

#include "spectral_dd/coeff.hpp"
#include "spectral_dd/grid.hpp"
#include "spectral_dd/krylov.hpp"
#include "spectral_dd/linalg.hpp"
#include "spectral_dd/pipeline.hpp"

#include <string>
#include <vector>

namespace sdd {

/// Lowest-order Raviart-Thomas velocity as one normal flux per fine edge.
///
/// Ordering: first the x-edges (vertical edges, flux of u_x, normal +x),
/// index `cy * (nf + 1) + ix`; then the y-edges (horizontal edges, flux of
/// u_y, normal +y), index `(nf + 1) * nf + iy * nf + cx`. Fluxes are
/// integrals over the edge, so a unit velocity gives flux h.
struct RT0Field {
  int nf = 0;
  std::vector<double> flux;

  int x_edge(int ix, int cy) const noexcept { return cy * (nf + 1) + ix; }
  int y_edge(int cx, int iy) const noexcept { return (nf + 1) * nf + iy * nf + cx; }
  /// Net outflow of a fine cell divided by its area.
  double divergence(int cx, int cy) const noexcept;
  double max_abs_divergence() const noexcept;
};

/// Edge fluxes of u = curl(phi) = (d phi / dy, -d phi / dx) for a Q1
/// stream function given at all fine nodes.
RT0Field recover_rt0(const StructuredGrid& grid, const Vector& stream);

/// Text format: line 1 `nf`, then one flux per line in the order above.
void save_rt0(const RT0Field& field, const std::string& path);

/// sum over cells of coef * |grad phi|^2 through the element matrix.
double stream_energy(const StructuredGrid& grid, const CoefficientField& coef, const Vector& stream);
/// sum over cells of coef * |curl phi|^2 integrated in closed form.
double velocity_energy(const StructuredGrid& grid, const CoefficientField& coef, const Vector& stream);

/// Stream data for u . n = e1 . n: phi = y on the boundary.
DirichletSpec unit_x_flow_stream();

struct DarcyResult {
  Vector stream;  // all fine nodes
  RT0Field velocity;
  SolveReport report;
  int coarse_dimension = 0;
  double realized_threshold = 0.0;
};

/// Stream-function solve with coefficient mu / kappa, preconditioned by the
/// same two-level method as the scalar problem, followed by velocity
/// recovery.
DarcyResult solve_darcy_stream(const StructuredGrid& grid, const std::vector<SubdomainPatch>& patches,
                               const CoefficientField& kappa, double mu, CoarseVariant variant,
                               const CoarseSelection& selection = {}, PcgOptions options = {});

}  // namespace sdd
