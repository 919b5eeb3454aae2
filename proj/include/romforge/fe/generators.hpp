#pragma once

#include "romforge/fe/mesh.hpp"

namespace romforge::fe {

/// Structured beam along x: cross-section y in [-width/2, width/2],
/// z in [-thickness/2, thickness/2]. Node sets (tolerance-selected, may be
/// empty on meshes without a node layer on the line):
///   "midline"            y = 0,        z = 0
///   "upper_line"         y = 0,        z = +thickness/2
///   "lateral_line"       y = +width/2, z = 0
///   "upper_lateral_line" y = +width/2, z = +thickness/2
/// clamp_both_ends pins every dof on the x = 0 and x = length faces.
Mesh generate_beam_mesh(Real length, Real width, Real thickness, int nx, int ny, int nz,
                        ElementKind kind, bool clamp_both_ends);

/// Circular plate, midplane z = 0, five-block O-grid (butterfly): a central
/// square of half-width radius/2 and four blocks blending the square edge to
/// the rim. ns = cells per square side, nr = radial cells per outer block,
/// ntz = cells through the thickness; face cell count is ns^2 + 4 ns nr.
/// Node set "midsurface" holds the z = 0 nodes; clamp_rim pins the lateral
/// boundary nodes (all three dofs, every z layer).
Mesh generate_circular_plate_mesh(Real radius, Real thickness, int ns, int nr, int ntz,
                                  ElementKind kind, bool clamp_rim);

} // namespace romforge::fe
