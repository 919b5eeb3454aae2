#pragma once

#include "romforge/fe/mesh.hpp"
#include "romforge/types.hpp"

#include <array>
#include <vector>

namespace romforge::fe {

// ===== Reference geometry =====

/// Reference coordinates of the element nodes, following the Mesh ordering.
const std::vector<Vec3>& reference_nodes(ElementKind kind);

/// Shape function values at a reference point; size = nodes_per_element.
VecX shape_values(ElementKind kind, const Vec3& xi);

/// Shape function gradients wrt reference coordinates; rows = nodes, cols = 3.
MatX shape_gradients(ElementKind kind, const Vec3& xi);

// ===== Quadrature =====

struct QuadraturePoint {
    Vec3 xi;
    Real weight;
};

/// Full Gauss-Legendre rule: 2x2x2 for HEX8, 3x3x3 for HEX20. Exact for the
/// polynomial orders produced by the cubic internal force on affine elements.
const std::vector<QuadraturePoint>& quadrature(ElementKind kind);

/// Precomputed shape data at every quadrature point of the rule.
struct ShapeTable {
    ElementKind kind;
    std::vector<VecX> N;  ///< values per quadrature point
    std::vector<MatX> dN; ///< reference gradients per quadrature point
    std::vector<Real> w;  ///< quadrature weights

    static const ShapeTable& get(ElementKind kind);
};

} // namespace romforge::fe
