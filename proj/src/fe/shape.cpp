#include "romforge/fe/shape.hpp"

#include <cmath>
#include <stdexcept>

namespace romforge::fe {

namespace {

// Corner ordering shared by HEX8 and HEX20.
constexpr std::array<std::array<int, 3>, 8> kCorners = {{
    {-1, -1, -1}, {+1, -1, -1}, {+1, +1, -1}, {-1, +1, -1},
    {-1, -1, +1}, {+1, -1, +1}, {+1, +1, +1}, {-1, +1, +1},
}};

// HEX20 midside edges in node order 8..19 (see Mesh docs).
constexpr std::array<std::array<int, 2>, 12> kEdges = {{
    {0, 1}, {1, 2}, {2, 3}, {3, 0},
    {4, 5}, {5, 6}, {6, 7}, {7, 4},
    {0, 4}, {1, 5}, {2, 6}, {3, 7},
}};

std::vector<Vec3> build_reference_nodes(ElementKind kind) {
    std::vector<Vec3> nodes;
    for (const auto& c : kCorners)
        nodes.emplace_back(static_cast<Real>(c[0]), static_cast<Real>(c[1]), static_cast<Real>(c[2]));
    if (kind == ElementKind::HEX20) {
        for (const auto& e : kEdges) {
            const Vec3 mid = 0.5 * (nodes[static_cast<std::size_t>(e[0])] + nodes[static_cast<std::size_t>(e[1])]);
            nodes.push_back(mid);
        }
    }
    return nodes;
}

std::vector<Real> gauss_points_1d(int n) {
    if (n == 2) {
        const Real a = 1.0 / std::sqrt(3.0);
        return {-a, a};
    }
    if (n == 3) {
        const Real a = std::sqrt(0.6);
        return {-a, 0.0, a};
    }
    throw std::invalid_argument("unsupported 1d rule");
}

std::vector<Real> gauss_weights_1d(int n) {
    if (n == 2) return {1.0, 1.0};
    if (n == 3) return {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    throw std::invalid_argument("unsupported 1d rule");
}

} // namespace

const std::vector<Vec3>& reference_nodes(ElementKind kind) {
    static const std::vector<Vec3> hex8 = build_reference_nodes(ElementKind::HEX8);
    static const std::vector<Vec3> hex20 = build_reference_nodes(ElementKind::HEX20);
    return kind == ElementKind::HEX8 ? hex8 : hex20;
}

VecX shape_values(ElementKind kind, const Vec3& p) {
    const Real x = p[0], y = p[1], z = p[2];
    if (kind == ElementKind::HEX8) {
        VecX N(8);
        for (int a = 0; a < 8; ++a) {
            const auto& c = kCorners[static_cast<std::size_t>(a)];
            N[a] = 0.125 * (1 + c[0] * x) * (1 + c[1] * y) * (1 + c[2] * z);
        }
        return N;
    }
    VecX N(20);
    // Corners: 1/8 (1+xi xi_a)(1+eta eta_a)(1+zeta zeta_a)(xi xi_a + eta eta_a + zeta zeta_a - 2)
    for (int a = 0; a < 8; ++a) {
        const auto& c = kCorners[static_cast<std::size_t>(a)];
        const Real sx = c[0] * x, sy = c[1] * y, sz = c[2] * z;
        N[a] = 0.125 * (1 + sx) * (1 + sy) * (1 + sz) * (sx + sy + sz - 2.0);
    }
    // Midsides: quadratic along the edge direction, linear across.
    const auto& ref = reference_nodes(ElementKind::HEX20);
    for (int a = 8; a < 20; ++a) {
        const Vec3& r = ref[static_cast<std::size_t>(a)];
        Real v = 0.25;
        for (int d = 0; d < 3; ++d) {
            if (r[d] == 0.0)
                v *= (1.0 - p[d] * p[d]);
            else
                v *= (1.0 + r[d] * p[d]);
        }
        N[a] = v;
    }
    return N;
}

MatX shape_gradients(ElementKind kind, const Vec3& p) {
    const int nn = nodes_per_element(kind);
    MatX dN(nn, 3);
    if (kind == ElementKind::HEX8) {
        for (int a = 0; a < 8; ++a) {
            const auto& c = kCorners[static_cast<std::size_t>(a)];
            const Real fx = 1 + c[0] * p[0], fy = 1 + c[1] * p[1], fz = 1 + c[2] * p[2];
            dN(a, 0) = 0.125 * c[0] * fy * fz;
            dN(a, 1) = 0.125 * fx * c[1] * fz;
            dN(a, 2) = 0.125 * fx * fy * c[2];
        }
        return dN;
    }
    const Real x = p[0], y = p[1], z = p[2];
    for (int a = 0; a < 8; ++a) {
        const auto& c = kCorners[static_cast<std::size_t>(a)];
        const Real sx = c[0] * x, sy = c[1] * y, sz = c[2] * z;
        const Real q = sx + sy + sz - 2.0;
        dN(a, 0) = 0.125 * c[0] * (1 + sy) * (1 + sz) * (q + (1 + sx));
        dN(a, 1) = 0.125 * c[1] * (1 + sx) * (1 + sz) * (q + (1 + sy));
        dN(a, 2) = 0.125 * c[2] * (1 + sx) * (1 + sy) * (q + (1 + sz));
    }
    const auto& ref = reference_nodes(ElementKind::HEX20);
    for (int a = 8; a < 20; ++a) {
        const Vec3& r = ref[static_cast<std::size_t>(a)];
        std::array<Real, 3> f{}, df{};
        for (int d = 0; d < 3; ++d) {
            if (r[d] == 0.0) {
                f[static_cast<std::size_t>(d)] = 1.0 - p[d] * p[d];
                df[static_cast<std::size_t>(d)] = -2.0 * p[d];
            } else {
                f[static_cast<std::size_t>(d)] = 1.0 + r[d] * p[d];
                df[static_cast<std::size_t>(d)] = r[d];
            }
        }
        dN(a, 0) = 0.25 * df[0] * f[1] * f[2];
        dN(a, 1) = 0.25 * f[0] * df[1] * f[2];
        dN(a, 2) = 0.25 * f[0] * f[1] * df[2];
    }
    return dN;
}

const std::vector<QuadraturePoint>& quadrature(ElementKind kind) {
    static const auto build = [](int n) {
        const auto pts = gauss_points_1d(n);
        const auto wts = gauss_weights_1d(n);
        std::vector<QuadraturePoint> rule;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < pts.size(); ++j)
                for (std::size_t k = 0; k < pts.size(); ++k)
                    rule.push_back({Vec3(pts[i], pts[j], pts[k]), wts[i] * wts[j] * wts[k]});
        return rule;
    };
    static const std::vector<QuadraturePoint> r8 = build(2);
    static const std::vector<QuadraturePoint> r27 = build(3);
    return kind == ElementKind::HEX8 ? r8 : r27;
}

const ShapeTable& ShapeTable::get(ElementKind kind) {
    static const auto build = [](ElementKind k) {
        ShapeTable t;
        t.kind = k;
        for (const auto& qp : quadrature(k)) {
            t.N.push_back(shape_values(k, qp.xi));
            t.dN.push_back(shape_gradients(k, qp.xi));
            t.w.push_back(qp.weight);
        }
        return t;
    };
    static const ShapeTable t8 = build(ElementKind::HEX8);
    static const ShapeTable t20 = build(ElementKind::HEX20);
    return kind == ElementKind::HEX8 ? t8 : t20;
}

} // namespace romforge::fe
