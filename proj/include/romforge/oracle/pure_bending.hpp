#pragma once

#include "romforge/types.hpp"

namespace romforge::oracle {

/// Exact linear-elastic pure-bending field of a prismatic bar: axial stress
/// linear through the height, cross sections rotating rigidly plus Poisson
/// distortion. x is the bar axis, y the deflection direction. `curvature` is
/// the imposed bending curvature (1/length).
Vec3 pure_bending_displacement(const Vec3& X, Real curvature, Real nu);

/// Displacement gradient H = dU/dX of the same field.
Mat3 pure_bending_gradient(const Vec3& X, Real curvature, Real nu);

/// Small-strain tensor sym(H): diag(k y, -nu k y, -nu k y).
Mat3 pure_bending_strain_linear(const Vec3& X, Real curvature, Real nu);

/// The three quadratic strain contributions that together with the linear
/// part reproduce the full Green-Lagrange tensor of the field:
///  part 1: the membrane-stretching term (k^2/2) x^2 along the axis;
///  part 2: section-rotation effects, Poisson-independent;
///  part 3: Poisson-coupled stretching and shear (vanishes at nu = 0).
Mat3 pure_bending_strain_quadratic(const Vec3& X, Real curvature, Real nu, int part);

/// Full Green-Lagrange strain: linear + parts 1..3.
Mat3 pure_bending_strain(const Vec3& X, Real curvature, Real nu);

} // namespace romforge::oracle
