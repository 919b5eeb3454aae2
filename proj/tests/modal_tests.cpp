#include <doctest.h>

#include "romforge/cases.hpp"
#include "romforge/fe/assembly.hpp"
#include "romforge/fe/generators.hpp"
#include "romforge/modal/modal.hpp"
#include "romforge/oracle/beam_theory.hpp"

#include <cmath>

using namespace romforge;

TEST_SUITE("modal") {

TEST_CASE("free element carries six rigid body modes") {
    const fe::Mesh mesh = fe::generate_beam_mesh(1.0, 1.0, 1.0, 1, 1, 1, fe::ElementKind::HEX20, false);
    const fe::Material mat{70e9, 0.3, 2700};
    const fe::Assembler asmb(mesh, mat);
    const auto modes = modal::solve_modes(asmb);

    REQUIRE(modes.count() == asmb.n_free());
    for (Index k = 0; k < 6; ++k) CHECK(modes.omega[k] < 1e-4 * modes.omega[6]);
    CHECK(modes.omega[6] > 1.0);

    // Mass orthonormality across the rigid/elastic boundary.
    const MatX G = modes.phi.transpose() * asmb.mass() * modes.phi;
    CHECK((G - MatX::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("slender beam frequencies match classical bending theory") {
    // Beam theory assumes free transverse contraction; compare at nu = 0
    // where the solid model matches that assumption exactly.
    const auto preset = cases::thin_beam(24, 0.0);
    const fe::Assembler asmb(preset.mesh, preset.material);
    modal::ModalOptions opts;
    opts.count = 4;
    const auto modes = modal::solve_modes(asmb, opts);

    const oracle::BeamSection sec{1.0, 0.05, 0.001, preset.material.E, preset.material.rho};
    CHECK(std::abs(modes.omega[0] / oracle::bending_omega(sec, 1) - 1.0) < 0.015);
    CHECK(std::abs(modes.omega[1] / oracle::bending_omega(sec, 2) - 1.0) < 0.015);

    // The frequency ratio cancels most of the residual model error.
    const Real r = oracle::bending_omega(sec, 2) / oracle::bending_omega(sec, 1);
    CHECK(std::abs(modes.omega[1] / modes.omega[0] / r - 1.0) < 0.01);

    CHECK(modes.frequencies_hz()[0] == doctest::Approx(modes.omega[0] / (2 * M_PI)));

    // A nonzero Poisson ratio stiffens the wide strip: the single quadratic
    // element across the width only partially relaxes the anticlastic
    // curvature, so omega lands strictly between the free-contraction beam
    // value and the cylindrical-bending plate bound 1/sqrt(1 - nu^2).
    const auto preset3 = cases::thin_beam(24, 0.3);
    const fe::Assembler asmb3(preset3.mesh, preset3.material);
    const auto modes3 = modal::solve_modes(asmb3, opts);
    const Real stiffen = modes3.omega[0] / modes.omega[0];
    CHECK(stiffen > 1.005);
    CHECK(stiffen < 1.0 / std::sqrt(1.0 - 0.09));
}

TEST_CASE("iterative partial solver agrees with the dense one") {
    const auto preset = cases::thick_beam(5, 2, 2);
    const fe::Assembler asmb(preset.mesh, preset.material);

    const auto dense = modal::solve_modes(asmb); // full spectrum, dense path

    modal::ModalOptions opts;
    opts.count = 8;
    opts.dense_threshold = 10; // force the iterative path
    const auto part = modal::solve_modes(asmb, opts);

    REQUIRE(part.count() == 8);
    for (Index k = 0; k < 8; ++k)
        CHECK(std::abs(part.omega[k] / dense.omega[k] - 1.0) < 1e-9);

    // Residual and normalization checks are basis-independent, so they hold
    // even inside frequency-degenerate clusters.
    const auto& K = asmb.stiffness();
    const auto& M = asmb.mass();
    for (Index k = 0; k < 8; ++k) {
        const VecX x = part.phi.col(k);
        const Real w2 = part.omega[k] * part.omega[k];
        CHECK((K * x - w2 * (M * x)).norm() < 1e-7 * (K * x).norm());
        CHECK(x.dot(M * x) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("classification separates bending from other families") {
    const auto preset = cases::thick_beam(5, 2, 2);
    const fe::Assembler asmb(preset.mesh, preset.material);
    auto modes = modal::solve_modes(asmb);
    const auto info = modal::classify_modes(asmb, modes, "midline", 2);

    REQUIRE(static_cast<Index>(info.size()) == modes.count());

    // The square section makes the first bending pair exactly degenerate;
    // the rotation must put the transverse member first.
    CHECK(modes.omega[1] == doctest::Approx(modes.omega[0]).epsilon(1e-9));
    CHECK(info[0].label == modal::ModeLabel::Bending);
    CHECK(info[0].transverse_ratio > 0.9);
    CHECK(info[1].label == modal::ModeLabel::NonBending);
    CHECK(info[1].transverse_ratio < 0.1);
    CHECK(modal::direction_mass_fraction(asmb, modes.phi.col(0), 2) > 0.9);
    CHECK(modal::direction_mass_fraction(asmb, modes.phi.col(1), 1) > 0.9);

    // Sign convention: the largest entry of every shape is positive.
    for (Index k = 0; k < 6; ++k) {
        Index imax = 0;
        modes.phi.col(k).cwiseAbs().maxCoeff(&imax);
        CHECK(modes.phi(imax, k) > 0.0);
    }

    // An axial mode exists below the truncation and is non-bending.
    bool found_axial = false;
    for (Index k = 0; k < modes.count(); ++k)
        if (modal::direction_mass_fraction(asmb, modes.phi.col(k), 0) > 0.9) {
            found_axial = true;
            CHECK(info[static_cast<std::size_t>(k)].label == modal::ModeLabel::NonBending);
            break;
        }
    CHECK(found_axial);
}

TEST_CASE("direction mass fractions partition the modal mass") {
    const auto preset = cases::thick_beam(5, 2, 2);
    const fe::Assembler asmb(preset.mesh, preset.material);
    modal::ModalOptions opts;
    opts.count = 6;
    const auto modes = modal::solve_modes(asmb, opts);
    for (Index k = 0; k < modes.count(); ++k) {
        Real sum = 0;
        for (int d = 0; d < 3; ++d) {
            const Real f = modal::direction_mass_fraction(asmb, modes.phi.col(k), d);
            sum += f * f;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
}

} // TEST_SUITE
