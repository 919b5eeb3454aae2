#pragma once

#include "romforge/fe/material.hpp"
#include "romforge/fe/shape.hpp"
#include "romforge/types.hpp"

namespace romforge::fe {

/// Which displacement terms of the Green-Lagrange strain participate.
/// Full      : gamma = e(u) + q(u,u), the standard total-Lagrangian kernel.
/// Linear    : gamma = e(u) only; internal force reduces to K0 u.
/// CubicOnly : odd displacement part of Full, i.e. the quadratic force
///             contribution is removed while the linear and cubic survive.
enum class Kinematics { Full, Linear, CubicOnly };

/// Nodal internal force of one element, (nn x 3), node-major layout.
/// X: reference coordinates (nn x 3); u: nodal displacements (nn x 3).
MatX element_internal_force(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u,
                            Kinematics kin = Kinematics::Full);

/// Consistent tangent stiffness (3nn x 3nn, dof = 3*node + dir).
MatX element_tangent(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u,
                     Kinematics kin = Kinematics::Full);

/// Consistent mass matrix (3nn x 3nn, dof = 3*node + dir).
MatX element_mass(const ShapeTable& st, const Material& mat, const MatX& X);

/// Element volume from the quadrature rule.
Real element_volume(const ShapeTable& st, const MatX& X);

/// Strain energy of one element. Full uses the Green-Lagrange measure,
/// Linear the small-strain one; CubicOnly is rejected (its force is the odd
/// displacement part, whose potential is assembled at the global level).
Real element_strain_energy(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u,
                           Kinematics kin = Kinematics::Full);

/// Green-Lagrange strain tensor at quadrature point qp.
Mat3 element_strain(const ShapeTable& st, const MatX& X, const MatX& u, std::size_t qp);

/// Linear (small-displacement) strain tensor at quadrature point qp.
Mat3 element_linear_strain(const ShapeTable& st, const MatX& X, const MatX& u, std::size_t qp);

} // namespace romforge::fe
