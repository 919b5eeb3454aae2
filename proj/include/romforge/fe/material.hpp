#pragma once

#include "romforge/types.hpp"

namespace romforge::fe {

/// Saint Venant-Kirchhoff material: S = lambda tr(E) I + 2 mu E applied to the
/// Green-Lagrange strain E, which makes the internal force an exact cubic
/// polynomial in the nodal displacements.
struct Material {
    Real E   = 210e9; ///< Young's modulus [Pa]
    Real nu  = 0.3;   ///< Poisson's ratio
    Real rho = 7800;  ///< density [kg/m^3]

    Real lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
    Real mu() const { return E / (2.0 * (1.0 + nu)); }
};

} // namespace romforge::fe
