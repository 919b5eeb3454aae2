#include "romforge/fe/kernel.hpp"

#include <stdexcept>

namespace romforge::fe {

namespace {

struct QpGeometry {
    MatX G;     // material shape gradients, nn x 3
    Real dV;    // weight * detJ
};

QpGeometry qp_geometry(const ShapeTable& st, const MatX& X, std::size_t q) {
    const Mat3 J = (X.transpose() * st.dN[q]).eval(); // J_ij = dx_i/dxi_j
    const Real detJ = J.determinant();
    if (!(detJ > 0.0)) throw std::runtime_error("non-positive Jacobian in element");
    return {st.dN[q] * J.inverse(), st.w[q] * detJ};
}

Mat3 svk_stress(const Material& mat, const Mat3& E) {
    return mat.lambda() * E.trace() * Mat3::Identity() + 2.0 * mat.mu() * E;
}

Mat3 green_lagrange(const Mat3& H) { return 0.5 * (H + H.transpose() + H.transpose() * H); }

MatX force_full(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u) {
    const int nn = static_cast<int>(X.rows());
    MatX f = MatX::Zero(nn, 3);
    for (std::size_t q = 0; q < st.w.size(); ++q) {
        const auto [G, dV] = qp_geometry(st, X, q);
        const Mat3 H = u.transpose() * G;
        const Mat3 F = Mat3::Identity() + H;
        const Mat3 S = svk_stress(mat, green_lagrange(H));
        f.noalias() += dV * (G * (F * S).transpose());
    }
    return f;
}

MatX force_linear(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u) {
    const int nn = static_cast<int>(X.rows());
    MatX f = MatX::Zero(nn, 3);
    for (std::size_t q = 0; q < st.w.size(); ++q) {
        const auto [G, dV] = qp_geometry(st, X, q);
        const Mat3 H = u.transpose() * G;
        const Mat3 S = svk_stress(mat, 0.5 * (H + H.transpose()));
        f.noalias() += dV * (G * S.transpose());
    }
    return f;
}

// 6x6 isotropic tangent in Voigt order (11,22,33,12,23,13), engineering shear.
Eigen::Matrix<Real, 6, 6> voigt_moduli(const Material& mat) {
    Eigen::Matrix<Real, 6, 6> C = Eigen::Matrix<Real, 6, 6>::Zero();
    const Real l = mat.lambda(), m = mat.mu();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) C(i, j) = l;
        C(i, i) += 2.0 * m;
        C(i + 3, i + 3) = m;
    }
    return C;
}

MatX tangent_impl(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u, bool geometric) {
    const int nn = static_cast<int>(X.rows());
    MatX K = MatX::Zero(3 * nn, 3 * nn);
    const auto C = voigt_moduli(mat);
    for (std::size_t q = 0; q < st.w.size(); ++q) {
        const auto [G, dV] = qp_geometry(st, X, q);
        const Mat3 H = u.transpose() * G;
        const Mat3 F = geometric ? (Mat3::Identity() + H).eval() : Mat3::Identity().eval();
        // B such that delta E (Voigt) = B delta u; rows 0..5, cols 3nn.
        MatX B = MatX::Zero(6, 3 * nn);
        for (int a = 0; a < nn; ++a) {
            for (int j = 0; j < 3; ++j) {
                const int col = 3 * a + j;
                B(0, col) = F(j, 0) * G(a, 0);
                B(1, col) = F(j, 1) * G(a, 1);
                B(2, col) = F(j, 2) * G(a, 2);
                B(3, col) = F(j, 0) * G(a, 1) + F(j, 1) * G(a, 0);
                B(4, col) = F(j, 1) * G(a, 2) + F(j, 2) * G(a, 1);
                B(5, col) = F(j, 0) * G(a, 2) + F(j, 2) * G(a, 0);
            }
        }
        K.noalias() += dV * (B.transpose() * C * B);
        if (geometric) {
            const Mat3 S = svk_stress(mat, green_lagrange(H));
            const MatX GS = (G * S * G.transpose()).eval(); // nn x nn
            for (int a = 0; a < nn; ++a)
                for (int b = 0; b < nn; ++b)
                    for (int i = 0; i < 3; ++i) K(3 * a + i, 3 * b + i) += dV * GS(a, b);
        }
    }
    return K;
}

} // namespace

MatX element_internal_force(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u,
                            Kinematics kin) {
    switch (kin) {
    case Kinematics::Full:
        return force_full(st, mat, X, u);
    case Kinematics::Linear:
        return force_linear(st, mat, X, u);
    case Kinematics::CubicOnly:
        // Odd part in u removes the quadratic force while keeping linear+cubic.
        return 0.5 * (force_full(st, mat, X, u) - force_full(st, mat, X, (-u).eval()));
    }
    throw std::logic_error("unreachable");
}

MatX element_tangent(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u, Kinematics kin) {
    switch (kin) {
    case Kinematics::Full:
        return tangent_impl(st, mat, X, u, true);
    case Kinematics::Linear:
        return tangent_impl(st, mat, X, u, false);
    case Kinematics::CubicOnly:
        // Even part of the full tangent matches the odd part of the force.
        return 0.5 * (tangent_impl(st, mat, X, u, true) + tangent_impl(st, mat, X, (-u).eval(), true));
    }
    throw std::logic_error("unreachable");
}

MatX element_mass(const ShapeTable& st, const Material& mat, const MatX& X) {
    const int nn = static_cast<int>(X.rows());
    MatX Mn = MatX::Zero(nn, nn);
    for (std::size_t q = 0; q < st.w.size(); ++q) {
        const auto [G, dV] = qp_geometry(st, X, q);
        (void)G;
        Mn.noalias() += (mat.rho * dV) * (st.N[q] * st.N[q].transpose());
    }
    MatX M = MatX::Zero(3 * nn, 3 * nn);
    for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b)
            for (int i = 0; i < 3; ++i) M(3 * a + i, 3 * b + i) = Mn(a, b);
    return M;
}

Real element_volume(const ShapeTable& st, const MatX& X) {
    Real v = 0;
    for (std::size_t q = 0; q < st.w.size(); ++q) v += qp_geometry(st, X, q).dV;
    return v;
}

Real element_strain_energy(const ShapeTable& st, const Material& mat, const MatX& X, const MatX& u, Kinematics kin) {
    if (kin == Kinematics::CubicOnly)
        throw std::invalid_argument("per-element energy is defined for Full and Linear kinematics only");
    Real W = 0;
    for (std::size_t q = 0; q < st.w.size(); ++q) {
        const auto [G, dV] = qp_geometry(st, X, q);
        const Mat3 H = u.transpose() * G;
        const Mat3 E = kin == Kinematics::Linear ? (0.5 * (H + H.transpose())).eval() : green_lagrange(H);
        W += 0.5 * dV * (svk_stress(mat, E).cwiseProduct(E)).sum();
    }
    return W;
}

Mat3 element_strain(const ShapeTable& st, const MatX& X, const MatX& u, std::size_t qp) {
    const auto [G, dV] = qp_geometry(st, X, qp);
    (void)dV;
    return green_lagrange(u.transpose() * G);
}

Mat3 element_linear_strain(const ShapeTable& st, const MatX& X, const MatX& u, std::size_t qp) {
    const auto [G, dV] = qp_geometry(st, X, qp);
    (void)dV;
    const Mat3 H = u.transpose() * G;
    return 0.5 * (H + H.transpose());
}

} // namespace romforge::fe
