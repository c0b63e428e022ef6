#include "spectral_dd/darcy.hpp"

#include "spectral_dd/error.hpp"
#include "spectral_dd/q1.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

namespace sdd {

double RT0Field::divergence(int cx, int cy) const noexcept {
  const double h = 1.0 / nf;
  const double out = flux[x_edge(cx + 1, cy)] - flux[x_edge(cx, cy)] + flux[y_edge(cx, cy + 1)] - flux[y_edge(cx, cy)];
  return out / (h * h);
}

double RT0Field::max_abs_divergence() const noexcept {
  double worst = 0.0;
  for (int cy = 0; cy < nf; ++cy)
    for (int cx = 0; cx < nf; ++cx) worst = std::max(worst, std::abs(divergence(cx, cy)));
  return worst;
}

RT0Field recover_rt0(const StructuredGrid& grid, const Vector& stream) {
  if (stream.size() != grid.fine_node_count()) throw DimensionMismatch("recover_rt0: stream must hold every fine node");
  const int nf = grid.fine_cells();
  RT0Field u;
  u.nf = nf;
  u.flux.assign(static_cast<std::size_t>(2) * (nf + 1) * nf, 0.0);
  // Integral of curl(phi) . n over an edge is the jump of phi along it.
  for (int cy = 0; cy < nf; ++cy)
    for (int ix = 0; ix <= nf; ++ix) u.flux[u.x_edge(ix, cy)] = stream[grid.node(ix, cy + 1)] - stream[grid.node(ix, cy)];
  for (int iy = 0; iy <= nf; ++iy)
    for (int cx = 0; cx < nf; ++cx) u.flux[u.y_edge(cx, iy)] = -(stream[grid.node(cx + 1, iy)] - stream[grid.node(cx, iy)]);
  return u;
}

void save_rt0(const RT0Field& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << field.nf << '\n' << std::setprecision(17);
  for (double f : field.flux) out << f << '\n';
}

double stream_energy(const StructuredGrid& grid, const CoefficientField& coef, const Vector& stream) {
  double e = 0.0;
  for (int c = 0; c < grid.fine_cell_count(); ++c) {
    const auto n = grid.cell_nodes(c);
    e += q1::cell_energy(coef[c], {stream[n[0]], stream[n[1]], stream[n[2]], stream[n[3]]});
  }
  return e;
}

double velocity_energy(const StructuredGrid& grid, const CoefficientField& coef, const Vector& stream) {
  double e = 0.0;
  for (int c = 0; c < grid.fine_cell_count(); ++c) {
    const auto n = grid.cell_nodes(c);
    // h * u_x is linear in x between a = phi3 - phi0 and b = phi2 - phi1;
    // h * u_y is linear in y between -(phi1 - phi0) and -(phi2 - phi3).
    const double a = stream[n[3]] - stream[n[0]], b = stream[n[2]] - stream[n[1]];
    const double p = stream[n[1]] - stream[n[0]], q = stream[n[2]] - stream[n[3]];
    e += coef[c] * ((a * a + a * b + b * b) + (p * p + p * q + q * q)) / 3.0;
  }
  return e;
}

DirichletSpec unit_x_flow_stream() {
  return [](double, double y) { return y; };
}

DarcyResult solve_darcy_stream(const StructuredGrid& grid, const std::vector<SubdomainPatch>& patches,
                               const CoefficientField& kappa, double mu, CoarseVariant variant,
                               const CoarseSelection& selection, PcgOptions options) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("solve_darcy_stream: viscosity must be positive");
  const CoefficientField coef = kappa.inverted(mu);
  const DirichletSpec bc = unit_x_flow_stream();
  ScalarSetup setup = setup_scalar(grid, patches, coef, bc, variant, selection);
  // Solve for the correction to phi = y, which is exact for uniform kappa.
  Vector guess(grid.dof_count());
  for (int d = 0; d < grid.dof_count(); ++d) guess[d] = bc(grid.x(grid.dof_node(d)), grid.y(grid.dof_node(d)));
  const Vector residual = setup.system.rhs - setup.system.A * guess;
  PcgResult solved = pcg(setup.system.A, *setup.preconditioner, residual, options);
  solved.x += guess;

  DarcyResult out;
  out.stream = expand_solution(grid, setup.system, solved.x);
  out.velocity = recover_rt0(grid, out.stream);
  out.report = std::move(solved.report);
  out.coarse_dimension = setup.coarse.dimension();
  out.realized_threshold = setup.realized_threshold;
  return out;
}

}  // namespace sdd
