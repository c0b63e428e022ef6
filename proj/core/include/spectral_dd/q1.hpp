#pragma once

#include <array>

namespace sdd::q1 {

/// Exact stiffness matrix of the bilinear element on a square with unit
/// coefficient, local nodes counter-clockwise from the lower left. In two
/// dimensions it does not depend on the side length.
inline constexpr std::array<std::array<double, 4>, 4> kStiffness{{
    {{4.0 / 6.0, -1.0 / 6.0, -2.0 / 6.0, -1.0 / 6.0}},
    {{-1.0 / 6.0, 4.0 / 6.0, -1.0 / 6.0, -2.0 / 6.0}},
    {{-2.0 / 6.0, -1.0 / 6.0, 4.0 / 6.0, -1.0 / 6.0}},
    {{-1.0 / 6.0, -2.0 / 6.0, -1.0 / 6.0, 4.0 / 6.0}},
}};

/// kappa * u^T K u for the four nodal values of one cell.
inline double cell_energy(double kappa, const std::array<double, 4>& u) {
  double e = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) e += u[a] * kStiffness[a][b] * u[b];
  return kappa * e;
}

}  // namespace sdd::q1
