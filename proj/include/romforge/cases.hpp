#pragma once

#include "romforge/fe/generators.hpp"
#include "romforge/fe/material.hpp"
#include "romforge/fe/mesh.hpp"

#include <string>

namespace romforge::cases {

/// One of the built-in benchmark structures: mesh plus material plus the
/// geometric thickness that scales prescribed-displacement amplitudes.
struct Preset {
    std::string name;
    fe::Mesh mesh;
    fe::Material material;
    Real thickness = 0;
};

/// Slender doubly clamped beam, 1 m x 50 mm x 1 mm, bending in the 1 mm
/// direction. nx quadratic elements along the length, one through width and
/// thickness.
Preset thin_beam(Index nx = 40, Real nu = 0.3);

/// Stocky doubly clamped beam, 1 m x 30 mm x 30 mm square section. The
/// default division (15 x 2 x 2 quadratic elements) has 1287 free dofs, small
/// enough for full-spectrum work.
Preset thick_beam(Index nx = 15, Index ny = 2, Index nz = 2, Real nu = 0.3);

/// Clamped circular plate, radius 0.3 m, thickness 5 mm, meshed as a
/// five-block butterfly grid of quadratic hexahedra.
/// ns: center-block divisions, nr: ring divisions, ntz: thickness layers.
/// (10, 11, 2) gives the 540-element face of the reference study; (4, 3, 2)
/// is a reduced variant sized for full-spectrum eigensolves.
Preset circular_plate(Index ns = 10, Index nr = 11, Index ntz = 2);
Preset circular_plate_small();

/// Preset by name: thin_beam | thick_beam | circular_plate |
/// circular_plate_small (default parameters). Throws on unknown names.
Preset by_name(const std::string& name);

} // namespace romforge::cases
