#include <doctest.h>

#include "romforge/fe/assembly.hpp"
#include "romforge/fe/generators.hpp"
#include "romforge/fe/kernel.hpp"
#include "romforge/fe/shape.hpp"
#include "romforge/oracle/fd_check.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace romforge;

namespace {

fe::Mesh one_element(fe::ElementKind kind) {
    return fe::generate_beam_mesh(0.9, 0.5, 0.4, 1, 1, 1, kind, false);
}

VecX random_vector(Index n, unsigned seed, Real scale) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<Real> dist(-scale, scale);
    VecX v(n);
    for (Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

} // namespace

TEST_SUITE("fe_kernel") {

TEST_CASE("shape functions partition unity and interpolate nodes") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<Real> dist(-1.0, 1.0);
    for (auto kind : {fe::ElementKind::HEX8, fe::ElementKind::HEX20}) {
        const auto& ref = fe::reference_nodes(kind);
        const int nn = fe::nodes_per_element(kind);
        REQUIRE(static_cast<int>(ref.size()) == nn);

        // Kronecker property at the reference nodes.
        for (int a = 0; a < nn; ++a) {
            const VecX N = fe::shape_values(kind, ref[static_cast<std::size_t>(a)]);
            for (int b = 0; b < nn; ++b)
                CHECK(std::abs(N[b] - (a == b ? 1.0 : 0.0)) < 1e-13);
        }

        // Partition of unity and gradient nullity at random interior points.
        for (int trial = 0; trial < 5; ++trial) {
            const Vec3 xi(dist(rng), dist(rng), dist(rng));
            const VecX N = fe::shape_values(kind, xi);
            CHECK(std::abs(N.sum() - 1.0) < 1e-13);
            const MatX dN = fe::shape_gradients(kind, xi);
            CHECK(dN.colwise().sum().cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("quadrature reproduces the exact box volume") {
    for (auto kind : {fe::ElementKind::HEX8, fe::ElementKind::HEX20}) {
        const fe::Mesh mesh = one_element(kind);
        const fe::Material mat;
        const fe::Assembler asmb(mesh, mat);
        CHECK(asmb.volume() == doctest::Approx(0.9 * 0.5 * 0.4).epsilon(1e-13));

        const auto& st = fe::ShapeTable::get(kind);
        CHECK(fe::element_volume(st, asmb.element_coords(0)) ==
              doctest::Approx(0.9 * 0.5 * 0.4).epsilon(1e-13));
    }
}

TEST_CASE("rigid translation produces no force under any kinematics") {
    for (auto kind : {fe::ElementKind::HEX8, fe::ElementKind::HEX20}) {
        const fe::Mesh mesh = one_element(kind);
        const fe::Material mat{70e9, 0.3, 2700};
        const fe::Assembler asmb(mesh, mat);

        VecX u(asmb.n_free());
        for (Index n = 0; n < mesh.node_count(); ++n) {
            u[asmb.dofs()(n, 0)] = 0.13;
            u[asmb.dofs()(n, 1)] = -0.21;
            u[asmb.dofs()(n, 2)] = 0.07;
        }
        const Real scale = mat.E * 0.4 * 0.5; // force scale E * area
        for (auto kin : {fe::Kinematics::Full, fe::Kinematics::Linear, fe::Kinematics::CubicOnly})
            CHECK(asmb.internal_force(u, kin).norm() < 1e-9 * scale);
    }
}

TEST_CASE("finite rotation is stress free only for the full kinematics") {
    const fe::Mesh mesh = one_element(fe::ElementKind::HEX20);
    const fe::Material mat{70e9, 0.3, 2700};
    const fe::Assembler asmb(mesh, mat);

    const Real a = 15.0 * M_PI / 180.0;
    Mat3 R;
    R << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;

    VecX u(asmb.n_free());
    for (Index n = 0; n < mesh.node_count(); ++n) {
        const Vec3 d = R * mesh.nodes[static_cast<std::size_t>(n)] - mesh.nodes[static_cast<std::size_t>(n)];
        for (int dir = 0; dir < 3; ++dir) u[asmb.dofs()(n, dir)] = d[dir];
    }

    const Real scale = (asmb.stiffness() * u).norm();
    CHECK(asmb.internal_force(u, fe::Kinematics::Full).norm() < 1e-10 * scale);
    CHECK(asmb.internal_force(u, fe::Kinematics::Linear).norm() > 1e-3 * scale);
}

TEST_CASE("mass matrix integrates the density over the volume") {
    for (auto kind : {fe::ElementKind::HEX8, fe::ElementKind::HEX20}) {
        const fe::Mesh mesh = one_element(kind);
        const fe::Material mat{210e9, 0.3, 7850};
        const fe::Assembler asmb(mesh, mat);
        const Real total = mat.rho * 0.9 * 0.5 * 0.4;
        for (int dir = 0; dir < 3; ++dir) {
            VecX e = VecX::Zero(asmb.n_free());
            for (Index n = 0; n < mesh.node_count(); ++n) e[asmb.dofs()(n, dir)] = 1.0;
            CHECK(e.dot(asmb.mass() * e) == doctest::Approx(total).epsilon(1e-12));
        }
    }
}

TEST_CASE("nonlinear force is an exact quadratic plus cubic polynomial") {
    const fe::Mesh mesh = one_element(fe::ElementKind::HEX20);
    const fe::Material mat{70e9, 0.3, 2700};
    const fe::Assembler asmb(mesh, mat);

    const VecX u = random_vector(asmb.n_free(), 11, 5e-3);
    const VecX g1 = asmb.nonlinear_force(u);
    const VecX gm = asmb.nonlinear_force(VecX(-u));
    const VecX g2 = 0.5 * (g1 + gm); // quadratic part at u
    const VecX g3 = 0.5 * (g1 - gm); // cubic part at u

    // If f_nl = A u u + B u u u then f_nl(3u) = 9 A u u + 27 B u u u.
    const VecX probe = asmb.nonlinear_force(VecX(3.0 * u));
    CHECK((probe - 9.0 * g2 - 27.0 * g3).norm() < 1e-10 * probe.norm());

    // The odd-kinematics force equals linear stiffness plus the cubic part.
    const VecX co = asmb.internal_force(u, fe::Kinematics::CubicOnly);
    CHECK((co - asmb.stiffness() * u - g3).norm() < 1e-10 * co.norm());
}

TEST_CASE("tangent matches a finite difference of the force") {
    fe::Mesh mesh = fe::generate_beam_mesh(0.6, 0.2, 0.15, 2, 1, 1, fe::ElementKind::HEX20, true);
    const fe::Material mat{210e9, 0.28, 7800};
    fe::Assembler asmb(mesh, mat);

    const VecX u = random_vector(asmb.n_free(), 23, 2e-3);
    const VecX v = random_vector(asmb.n_free(), 29, 1.0);
    for (auto kin : {fe::Kinematics::Full, fe::Kinematics::Linear, fe::Kinematics::CubicOnly})
        CHECK(oracle::tangent_directional_error(asmb, u, v, kin) < 1e-6);
}

TEST_CASE("internal force is the gradient of the strain energy") {
    fe::Mesh mesh = fe::generate_beam_mesh(0.6, 0.2, 0.15, 2, 1, 1, fe::ElementKind::HEX20, true);
    const fe::Material mat{210e9, 0.28, 7800};
    fe::Assembler asmb(mesh, mat);

    const VecX u = random_vector(asmb.n_free(), 31, 2e-3);
    const VecX v = random_vector(asmb.n_free(), 37, 1.0);
    for (auto kin : {fe::Kinematics::Full, fe::Kinematics::Linear, fe::Kinematics::CubicOnly})
        CHECK(oracle::force_potential_error(asmb, u, v, kin) < 1e-6);
}

TEST_CASE("strain energy reduces to the quadratic form for small motion") {
    const fe::Mesh mesh = one_element(fe::ElementKind::HEX20);
    const fe::Material mat{70e9, 0.3, 2700};
    const fe::Assembler asmb(mesh, mat);

    const VecX u = random_vector(asmb.n_free(), 41, 1.0);
    const Real eps = 1e-6;
    const Real W = asmb.strain_energy(VecX(eps * u), fe::Kinematics::Full);
    const Real Wq = 0.5 * eps * eps * u.dot(asmb.stiffness() * u);
    CHECK(W == doctest::Approx(Wq).epsilon(1e-4));

    // The odd-force potential is displacement-even.
    const VecX w = random_vector(asmb.n_free(), 43, 4e-3);
    const Real Wp = asmb.strain_energy(w, fe::Kinematics::CubicOnly);
    const Real Wm = asmb.strain_energy(VecX(-w), fe::Kinematics::CubicOnly);
    CHECK(Wp == doctest::Approx(Wm).epsilon(1e-12));

    const auto& st = fe::ShapeTable::get(fe::ElementKind::HEX20);
    const MatX X = asmb.element_coords(0);
    const MatX ue = asmb.element_displacements(0, w);
    CHECK_THROWS_AS((void)fe::element_strain_energy(st, mat, X, ue, fe::Kinematics::CubicOnly),
                    std::invalid_argument);
}

TEST_CASE("green-lagrange strain carries the quadratic gradient term") {
    const fe::Mesh mesh = one_element(fe::ElementKind::HEX20);
    const fe::Material mat;
    const fe::Assembler asmb(mesh, mat);
    const auto& st = fe::ShapeTable::get(fe::ElementKind::HEX20);
    const MatX X = asmb.element_coords(0);

    // A linear displacement field u = G X has constant gradient G, so the
    // strain at every quadrature point must equal sym(G) + G^T G / 2.
    Mat3 G;
    G << 2e-3, -1e-3, 5e-4, 3e-4, 1e-3, -2e-3, 7e-4, 2e-4, -8e-4;
    MatX ue(X.rows(), 3);
    for (Index a = 0; a < X.rows(); ++a) ue.row(a) = (G * X.row(a).transpose()).transpose();

    const Mat3 exact = 0.5 * (G + G.transpose() + G.transpose() * G);
    const Mat3 lin = 0.5 * (G + G.transpose());
    for (std::size_t q = 0; q < st.w.size(); ++q) {
        CHECK((fe::element_strain(st, X, ue, q) - exact).norm() < 1e-14);
        CHECK((fe::element_linear_strain(st, X, ue, q) - lin).norm() < 1e-14);
    }
}

} // TEST_SUITE
