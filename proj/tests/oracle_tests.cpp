#include <doctest.h>

#include "romforge/oracle/beam_theory.hpp"
#include "romforge/oracle/pure_bending.hpp"

#include <cmath>
#include <functional>

using namespace romforge;

namespace {

const oracle::BeamSection sec{1.0, 0.05, 0.001, 210e9, 7800};

Real simpson(const std::function<Real(Real)>& f, Real a, Real b, int n) {
    if (n % 2) ++n;
    const Real h = (b - a) / n;
    Real s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_SUITE("oracle") {

TEST_CASE("clamped-clamped roots satisfy the characteristic equation") {
    CHECK(oracle::clamped_clamped_root(1) == doctest::Approx(4.73004074).epsilon(1e-8));
    CHECK(oracle::clamped_clamped_root(2) == doctest::Approx(7.85320462).epsilon(1e-8));
    CHECK(oracle::clamped_clamped_root(3) == doctest::Approx(10.9956078).epsilon(1e-8));
    for (Index n = 1; n <= 5; ++n) {
        const Real x = oracle::clamped_clamped_root(n);
        CHECK(std::abs(std::cos(x) * std::cosh(x) - 1.0) < 1e-7 * std::cosh(x));
        // Roots interlace the (n + 1/2) pi asymptote.
        CHECK(std::abs(x - (n + 0.5) * M_PI) < 0.05);
    }
}

TEST_CASE("bending shapes satisfy clamped conditions and unit modal mass") {
    const Real scale = std::abs(oracle::bending_shape(sec, 1, 0.5));
    for (Index n = 1; n <= 3; ++n) {
        CHECK(std::abs(oracle::bending_shape(sec, n, 0.0)) < 1e-9 * scale);
        CHECK(std::abs(oracle::bending_shape(sec, n, sec.length)) < 1e-6 * scale);
        CHECK(std::abs(oracle::bending_shape_d1(sec, n, 0.0)) < 1e-9 * scale / sec.length);
        CHECK(std::abs(oracle::bending_shape_d1(sec, n, sec.length)) < 1e-5 * scale / sec.length);

        const Real mass = simpson(
            [&](Real x) {
                const Real p = oracle::bending_shape(sec, n, x);
                return sec.rho * sec.area() * p * p;
            },
            0.0, sec.length, 2000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    }

    // Distinct modes are orthogonal in the mass inner product.
    const Real cross = simpson(
        [&](Real x) {
            return sec.rho * sec.area() * oracle::bending_shape(sec, 1, x) * oracle::bending_shape(sec, 2, x);
        },
        0.0, sec.length, 2000);
    CHECK(std::abs(cross) < 1e-8);

    // The derivative is consistent with the shape.
    const Real h = 1e-6;
    for (const Real x : {0.21, 0.5, 0.83}) {
        const Real fd = (oracle::bending_shape(sec, 2, x + h) - oracle::bending_shape(sec, 2, x - h)) / (2 * h);
        CHECK(oracle::bending_shape_d1(sec, 2, x) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("axial modes carry the classical frequency and normalization") {
    for (Index k = 1; k <= 3; ++k) {
        const Real exact = k * M_PI / sec.length * std::sqrt(sec.E / sec.rho);
        CHECK(oracle::axial_omega(sec, k) == doctest::Approx(exact).epsilon(1e-12));

        const Real mass = simpson(
            [&](Real x) {
                const Real u = oracle::axial_shape(sec, k, x);
                return sec.rho * sec.area() * u * u;
            },
            0.0, sec.length, 2000);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

        CHECK(std::abs(oracle::axial_shape(sec, k, 0.0)) < 1e-12);
        CHECK(std::abs(oracle::axial_shape(sec, k, sec.length)) < 1e-9);

        const Real h = 1e-6, x = 0.37;
        const Real fd = (oracle::axial_shape(sec, k, x + h) - oracle::axial_shape(sec, k, x - h)) / (2 * h);
        CHECK(oracle::axial_shape_d1(sec, k, x) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("coupling integrals are symmetric and bound the quartic") {
    CHECK(oracle::coupling_integral(sec, 1, 2) == doctest::Approx(oracle::coupling_integral(sec, 2, 1)).epsilon(1e-10));
    const Real g11 = oracle::coupling_integral(sec, 1, 1);
    CHECK(g11 > 0);

    const Real g11_num = simpson(
        [&](Real x) {
            const Real d = oracle::bending_shape_d1(sec, 1, x);
            return d * d;
        },
        0.0, sec.length, 2000);
    CHECK(g11 == doctest::Approx(g11_num).epsilon(1e-7));

    // Cauchy-Schwarz: L int phi'^4 >= (int phi'^2)^2, so the bare cubic
    // always exceeds the membrane-condensed one.
    const Real quartic = oracle::quartic_integral(sec, 1);
    CHECK(quartic * sec.length >= g11 * g11);
    CHECK(oracle::bare_cubic_coefficient(sec, 1) ==
          doctest::Approx(0.5 * sec.E * sec.area() * quartic).epsilon(1e-12));
    CHECK(oracle::condensed_cubic_coefficient(sec, 1, 1) ==
          doctest::Approx(0.5 * sec.E * sec.area() / sec.length * g11 * g11).epsilon(1e-12));
    CHECK(oracle::bare_cubic_coefficient(sec, 1) > oracle::condensed_cubic_coefficient(sec, 1, 1));
}

TEST_CASE("membrane coupling vanishes for antisymmetric axial modes") {
    // Mode 1 bending is symmetric about midspan; only even-wavenumber axial
    // modes (antisymmetric slopes) can absorb its membrane stretch.
    const Real even = std::abs(oracle::axial_quadratic_coefficient(sec, 2, 1));
    REQUIRE(even > 0);
    CHECK(std::abs(oracle::axial_quadratic_coefficient(sec, 1, 1)) < 1e-8 * even);
    CHECK(std::abs(oracle::axial_quadratic_coefficient(sec, 3, 1)) < 1e-8 * even);

    // Hand quadrature of (EA/2) int u' phi'^2 dx for the surviving one.
    const Real num = simpson(
        [&](Real x) {
            const Real d = oracle::bending_shape_d1(sec, 1, x);
            return 0.5 * sec.E * sec.area() * oracle::axial_shape_d1(sec, 2, x) * d * d;
        },
        0.0, sec.length, 2000);
    CHECK(oracle::axial_quadratic_coefficient(sec, 2, 1) == doctest::Approx(num).epsilon(1e-7));
}

TEST_CASE("pure bending field derivatives are exact") {
    const Real kappa = 0.2;
    const Vec3 X(0.3, 0.1, -0.05);
    for (const Real nu : {0.3, 0.0}) {
        // Gradient against a finite difference of the displacement.
        const Mat3 H = oracle::pure_bending_gradient(X, kappa, nu);
        const Real h = 1e-6;
        for (int j = 0; j < 3; ++j) {
            Vec3 Xp = X, Xm = X;
            Xp[j] += h;
            Xm[j] -= h;
            const Vec3 fd =
                (oracle::pure_bending_displacement(Xp, kappa, nu) - oracle::pure_bending_displacement(Xm, kappa, nu)) /
                (2 * h);
            for (int i = 0; i < 3; ++i) CHECK(H(i, j) == doctest::Approx(fd[i]).epsilon(1e-6).scale(kappa));
        }

        // Green-Lagrange strain assembled from the gradient.
        const Mat3 E = 0.5 * (H + H.transpose() + H.transpose() * H);
        CHECK((oracle::pure_bending_strain(X, kappa, nu) - E).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((oracle::pure_bending_strain_linear(X, kappa, nu) - 0.5 * (H + H.transpose())).cwiseAbs().maxCoeff() <
              1e-14);

        // The quadratic split sums back to the full tensor.
        Mat3 sum = oracle::pure_bending_strain_linear(X, kappa, nu);
        for (int part = 1; part <= 3; ++part) sum += oracle::pure_bending_strain_quadratic(X, kappa, nu, part);
        CHECK((oracle::pure_bending_strain(X, kappa, nu) - sum).cwiseAbs().maxCoeff() < 1e-14);
    }

    // The Poisson-coupled quadratic part carries the whole nu dependence.
    CHECK(oracle::pure_bending_strain_quadratic(X, kappa, 0.0, 3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(oracle::pure_bending_strain_quadratic(X, kappa, 0.3, 3).cwiseAbs().maxCoeff() > 0.0);
    CHECK((oracle::pure_bending_strain_quadratic(X, kappa, 0.3, 2) -
           oracle::pure_bending_strain_quadratic(X, kappa, 0.0, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
}

} // TEST_SUITE
