#include <doctest.h>

#include "romforge/rom/continuation.hpp"
#include "romforge/rom/hbm.hpp"
#include "romforge/rom/oscillator.hpp"
#include "romforge/rom/time_integration.hpp"
#include "romforge/step/coefficients.hpp"

#include <cmath>
#include <random>

using namespace romforge;

namespace {

VecX random_vector(Index n, unsigned seed, Real scale) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<Real> dist(-scale, scale);
    VecX v(n);
    for (Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

rom::OscillatorSystem two_dof_system() {
    rom::OscillatorSystem sys;
    sys.omega = (VecX(2) << 1.3, 2.1).finished();
    sys.zeta = (VecX(2) << 0.01, 0.02).finished();
    sys.forcing = (VecX(2) << 0.5, 0.0).finished();
    sys.quad.push_back({0, 0, 1, 0.3});
    sys.quad.push_back({1, 0, 0, 0.2});
    sys.cubic.push_back({0, 0, 0, 0, 0.8});
    sys.cubic.push_back({1, 0, 0, 1, 0.4});
    sys.vel.push_back({0, 0, 1, 1, 0.15});
    return sys;
}

} // namespace

TEST_SUITE("rom") {

TEST_CASE("harmonic basis analyzes what it synthesizes") {
    for (const Index H : {1, 3, 4}) {
        const rom::HarmonicBasis basis(H);
        CHECK(basis.nc == 2 * H + 1);
        CHECK(basis.nt >= 8 * H);
        CHECK((basis.nt & (basis.nt - 1)) == 0); // power of two

        const MatX round = basis.analyze * basis.synth;
        CHECK((round - MatX::Identity(basis.nc, basis.nc)).cwiseAbs().maxCoeff() < 1e-12);
    }

    // d/dtheta maps (ac_h, as_h) to (h as_h, -h ac_h).
    const rom::HarmonicBasis basis(3);
    VecX c = VecX::Zero(basis.nc);
    c[basis.slot_cos(3)] = 2.0;
    c[basis.slot_sin(3)] = -1.0;
    const VecX d = basis.dtheta * c;
    CHECK(d[basis.slot_cos(3)] == doctest::Approx(-3.0).epsilon(1e-14));
    CHECK(d[basis.slot_sin(3)] == doctest::Approx(-6.0).epsilon(1e-14));
    CHECK(std::abs(d[basis.slot_dc()]) < 1e-14);
}

TEST_CASE("balance residual of a pure cosine matches the hand expansion") {
    const Real w = 2.0, zeta = 0.03, gamma = 0.7, F = 0.4, Omega = 1.7, a = 0.35;
    const rom::HbmProblem hbm(rom::OscillatorSystem::duffing(w, zeta, gamma, F), 3);
    const auto& basis = hbm.basis();

    VecX U = VecX::Zero(hbm.n_unknowns());
    U[basis.slot_cos(1)] = a;
    const VecX r = hbm.residual(U, Omega);

    const Real scale = w * w * a;
    CHECK(std::abs(r[basis.slot_dc()]) < 1e-12 * scale);
    CHECK(r[basis.slot_cos(1)] ==
          doctest::Approx((w * w - Omega * Omega) * a + 0.75 * gamma * a * a * a - F).epsilon(1e-12));
    CHECK(r[basis.slot_sin(1)] == doctest::Approx(-2 * zeta * w * Omega * a).epsilon(1e-12));
    CHECK(std::abs(r[basis.slot_cos(2)]) < 1e-12 * scale);
    CHECK(r[basis.slot_cos(3)] == doctest::Approx(0.25 * gamma * a * a * a).epsilon(1e-12));
    CHECK(std::abs(r[basis.slot_sin(3)]) < 1e-12 * scale);
}

TEST_CASE("balance jacobians match finite differences") {
    const rom::HbmProblem hbm(two_dof_system(), 3);
    const Real Omega = 1.1;
    const VecX U = random_vector(hbm.n_unknowns(), 17, 0.4);

    const MatX J = hbm.jacobian_U(U, Omega);
    const Real ref = J.cwiseAbs().maxCoeff();
    for (Index j = 0; j < U.size(); ++j) {
        const Real d = 1e-6 * (1.0 + std::abs(U[j]));
        VecX up = U, dn = U;
        up[j] += d;
        dn[j] -= d;
        const VecX col = (hbm.residual(up, Omega) - hbm.residual(dn, Omega)) / (2 * d);
        CHECK((J.col(j) - col).cwiseAbs().maxCoeff() < 1e-6 * ref);
    }

    const VecX Jw = hbm.jacobian_Omega(U, Omega);
    const Real dw = 1e-6;
    const VecX fd = (hbm.residual(U, Omega + dw) - hbm.residual(U, Omega - dw)) / (2 * dw);
    CHECK((Jw - fd).cwiseAbs().maxCoeff() < 1e-6 * Jw.cwiseAbs().maxCoeff());
}

TEST_CASE("newton at fixed frequency recovers the linear response") {
    const rom::HbmProblem hbm(rom::OscillatorSystem::duffing(2.0, 0.01, 0.0, 2.5), 3);
    const Real Omega = 1.9;
    const VecX lin = hbm.linear_response(Omega);
    CHECK(hbm.residual(lin, Omega).cwiseAbs().maxCoeff() < 1e-10);

    const VecX sol = hbm.solve_fixed(Omega);
    CHECK((sol - lin).cwiseAbs().maxCoeff() < 1e-10 * lin.cwiseAbs().maxCoeff());

    // Sampled orbit peak agrees with the single-harmonic magnitude.
    const Real a1 = std::hypot(sol[hbm.basis().slot_cos(1)], sol[hbm.basis().slot_sin(1)]);
    const Real peak = hbm.amplitude(sol, VecX::Ones(1));
    CHECK(peak > 0.99 * a1);
    CHECK(peak <= a1 * (1 + 1e-12));
}

TEST_CASE("harmonic balance agrees with time marching") {
    // Hardening oscillator driven below resonance: single stable orbit.
    const auto sys = rom::OscillatorSystem::duffing(2.0, 0.05, 0.8, 0.5);
    const rom::HbmProblem hbm(sys, 7);
    const Real Omega = 1.8;
    const VecX U = hbm.solve_fixed(Omega);

    rom::SteadyStateOptions opt;
    const VecX T = rom::steady_state_fourier(sys, Omega, opt);

    const auto& b = hbm.basis();
    const Real a_hbm = std::hypot(U[b.slot_cos(1)], U[b.slot_sin(1)]);
    const Real a_rk = std::hypot(T[b.slot_cos(1)], T[b.slot_sin(1)]);
    CHECK(std::abs(a_rk / a_hbm - 1.0) < 1e-5);
    const Real a3_hbm = std::hypot(U[b.slot_cos(3)], U[b.slot_sin(3)]);
    const Real a3_rk = std::hypot(T[b.slot_cos(3)], T[b.slot_sin(3)]);
    CHECK(std::abs(a3_rk - a3_hbm) < 1e-5 * a_hbm);

    // A quadratic term bends the orbit off center; the constant harmonic
    // must match too.
    rom::OscillatorSystem asym = rom::OscillatorSystem::duffing(2.0, 0.05, 0.0, 0.3);
    asym.quad.push_back({0, 0, 0, 0.5});
    const rom::HbmProblem hbm2(asym, 7);
    const VecX U2 = hbm2.solve_fixed(1.5);
    const VecX T2 = rom::steady_state_fourier(asym, 1.5, opt);
    REQUIRE(std::abs(U2[b.slot_dc()]) > 1e-4);
    CHECK(std::abs(T2[b.slot_dc()] / U2[b.slot_dc()] - 1.0) < 1e-4);
    const Real c_hbm = std::hypot(U2[b.slot_cos(1)], U2[b.slot_sin(1)]);
    const Real c_rk = std::hypot(T2[b.slot_cos(1)], T2[b.slot_sin(1)]);
    CHECK(std::abs(c_rk / c_hbm - 1.0) < 1e-5);
}

TEST_CASE("time marching of a linear oscillator pins the phase convention") {
    const Real w = 2.0, zeta = 0.1, F = 1.0, Omega = 1.6;
    const auto sys = rom::OscillatorSystem::duffing(w, zeta, 0.0, F);
    const VecX T = rom::steady_state_fourier(sys, Omega, {});

    const Real dw2 = w * w - Omega * Omega;
    const Real cw = 2 * zeta * w * Omega;
    const Real D = dw2 * dw2 + cw * cw;
    const rom::HarmonicBasis b(7);
    CHECK(T[b.slot_cos(1)] == doctest::Approx(F * dw2 / D).epsilon(1e-6));
    CHECK(T[b.slot_sin(1)] == doctest::Approx(F * cw / D).epsilon(1e-6));
}

TEST_CASE("continuation reproduces the closed-form linear response curve") {
    const Real w = 2.0, zeta = 0.02, F = 0.1;
    const rom::HbmProblem hbm(rom::OscillatorSystem::duffing(w, zeta, 0.0, F), 3);

    rom::FrfOptions opt;
    opt.omega_min = 1.0;
    opt.omega_max = 3.0;
    opt.ds0 = 0.01;
    const auto branch = rom::continue_frf(hbm, VecX::Ones(1), opt);

    REQUIRE(branch.points.size() > 10);
    CHECK_FALSE(branch.traversed_fold);
    CHECK(branch.points.front().omega < 1.1);
    Real omega_max_seen = 0;
    for (const auto& pt : branch.points) {
        omega_max_seen = std::max(omega_max_seen, pt.omega);
        const Real dw2 = w * w - pt.omega * pt.omega;
        const Real exact = F / std::hypot(dw2, 2 * zeta * w * pt.omega);
        const Real a1 = std::hypot(pt.U[1], pt.U[2]);
        CHECK(std::abs(a1 / exact - 1.0) < 1e-8);
    }
    CHECK(omega_max_seen > 2.95);
}

TEST_CASE("hardening resonance folds and the branch escapes the window") {
    const rom::HbmProblem hbm(rom::OscillatorSystem::duffing(1.0, 0.02, 0.5, 0.02), 5);

    rom::FrfOptions opt;
    opt.omega_min = 0.85;
    opt.omega_max = 1.25;
    opt.ds0 = 0.005;
    const auto branch = rom::continue_frf(hbm, VecX::Ones(1), opt);

    REQUIRE(branch.points.size() > 10);
    CHECK(branch.traversed_fold);

    int reversals = 0;
    for (std::size_t i = 2; i < branch.points.size(); ++i) {
        const Real d0 = branch.points[i - 1].omega - branch.points[i - 2].omega;
        const Real d1 = branch.points[i].omega - branch.points[i - 1].omega;
        if (d0 * d1 < 0) ++reversals;
    }
    CHECK(reversals >= 2);

    Real amax = 0, wlast = 0;
    for (const auto& pt : branch.points) amax = std::max(amax, pt.amplitude);
    wlast = branch.points.back().omega;
    CHECK(amax > 0.35);       // fold sits well above the linear peak response
    CHECK(wlast > 1.25 - 0.01); // exits through the upper boundary
}

TEST_CASE("undamped backbone matches the harmonic balance closed form") {
    const Real w = 1.5, gamma = 0.4;
    const auto sys = rom::OscillatorSystem::duffing(w, 0.0, gamma, 0.0);

    // Single-harmonic truncation: Omega^2 = w^2 + (3/4) gamma a^2 exactly.
    const std::vector<Real> amps = {0.1, 0.3, 0.6};
    const auto curve1 = rom::trace_backbone(sys, 1, 0, amps, VecX::Ones(1));
    REQUIRE(curve1.size() == 3);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        CHECK(curve1[i].coeff == doctest::Approx(amps[i]).epsilon(1e-12));
        const Real exact = std::sqrt(w * w + 0.75 * gamma * amps[i] * amps[i]);
        CHECK(curve1[i].omega == doctest::Approx(exact).epsilon(1e-10));
        CHECK(curve1[i].amplitude == doctest::Approx(amps[i]).epsilon(1e-9));
    }

    // Converged truncation against the second-order frequency expansion. The
    // backbone is parametrized by the fundamental cosine coefficient a, for
    // which the expansion constant is -15/256; the familiar -21/256 belongs to
    // the peak-displacement parametrization (peak = a (1 + eps/32 + ...)).
    const Real eps = 0.05;                      // gamma a^2 / w^2
    const Real a = std::sqrt(eps * w * w / gamma);
    const auto curve = rom::trace_backbone(sys, 6, 0, {a}, VecX::Ones(1));
    const Real series = w * (1.0 + 3.0 / 8.0 * eps - 15.0 / 256.0 * eps * eps);
    CHECK(std::abs(curve[0].omega / series - 1.0) < 2e-5);

    // Interpolation between traced points stays monotone and bounded.
    const Real mid = rom::backbone_omega_at(curve1, 0.2);
    CHECK(mid > curve1[0].omega);
    CHECK(mid < curve1[1].omega);
    CHECK_THROWS_AS((void)rom::backbone_omega_at(curve1, 5.0), std::out_of_range);

    // Damped or forced systems are rejected.
    CHECK_THROWS_AS((void)rom::trace_backbone(rom::OscillatorSystem::duffing(w, 0.01, gamma, 0.0), 3, 0,
                                              amps, VecX::Ones(1)),
                    std::invalid_argument);
}

TEST_CASE("velocity-coupled backbone matches its single-harmonic balance") {
    reduce::NnmRom rom_coeffs;
    rom_coeffs.omega_p = 2.0;
    rom_coeffs.cubic = 0.7;
    rom_coeffs.velocity_sq = 0.3;
    const auto sys = rom::OscillatorSystem::from_nnm(rom_coeffs);

    const std::vector<Real> amps = {0.2, 0.5};
    const auto curve = rom::trace_backbone(sys, 1, 0, amps, VecX::Ones(1));
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const Real a2 = amps[i] * amps[i];
        // -W^2 a + w^2 a + (3/4) c a^3 + (1/4) v W^2 a^3 = 0.
        const Real exact = std::sqrt((rom_coeffs.omega_p * rom_coeffs.omega_p + 0.75 * rom_coeffs.cubic * a2) /
                                     (1.0 - 0.25 * rom_coeffs.velocity_sq * a2));
        CHECK(curve[i].omega == doctest::Approx(exact).epsilon(1e-10));
    }
}

TEST_CASE("oscillator assembly from coefficient tables") {
    step::CouplingCoefficients cc({0, 1}, {0, 1});
    cc.alpha(0, 0, 0) = 2.0;
    cc.alpha(0, 0, 1) = 3.0;
    cc.alpha(1, 0, 0) = 1.5;
    cc.beta(0, 0, 0, 0) = 4.0;
    cc.beta(1, 0, 1, 1) = -2.0;

    const VecX omega_all = (VecX(2) << 1.1, 2.2).finished();
    const VecX zeta = (VecX(2) << 0.01, 0.02).finished();
    const VecX forcing = (VecX(2) << 0.5, 0.0).finished();
    const auto sys = rom::OscillatorSystem::from_coefficients(cc, omega_all, {0, 1}, zeta, forcing);

    CHECK(sys.omega[0] == 1.1);
    CHECK(sys.omega[1] == 2.2);

    const VecX q = (VecX(2) << 0.3, -0.2).finished();
    const VecX qd = VecX::Zero(2);
    const VecX g = sys.g(q, qd);
    CHECK(g[0] == doctest::Approx(2.0 * 0.09 + 3.0 * 0.3 * -0.2 + 4.0 * 0.027).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(1.5 * 0.09 + -2.0 * 0.3 * 0.04).epsilon(1e-14));

    // Derivatives agree with finite differences.
    const VecX qd2 = (VecX(2) << 0.4, -0.1).finished();
    const auto sys2 = [&] {
        auto s = two_dof_system();
        return s;
    }();
    const MatX dq = sys2.dg_dq(q, qd2);
    const MatX dqd = sys2.dg_dqd(q, qd2);
    const Real d = 1e-7;
    for (Index j = 0; j < 2; ++j) {
        VecX qp = q, qm = q;
        qp[j] += d;
        qm[j] -= d;
        const VecX col = (sys2.g(qp, qd2) - sys2.g(qm, qd2)) / (2 * d);
        CHECK((dq.col(j) - col).cwiseAbs().maxCoeff() < 1e-6);
        VecX vp = qd2, vm = qd2;
        vp[j] += d;
        vm[j] -= d;
        const VecX colv = (sys2.g(q, vp) - sys2.g(q, vm)) / (2 * d);
        CHECK((dqd.col(j) - colv).cwiseAbs().maxCoeff() < 1e-6);
    }

    // An equation mode absent from the projection set is rejected.
    step::CouplingCoefficients partial({0, 1}, {0});
    partial.alpha(0, 0, 0) = 1.0;
    CHECK_THROWS_AS((void)rom::OscillatorSystem::from_coefficients(partial, omega_all, {0, 1}, zeta, forcing),
                    std::invalid_argument);

    // Manifold oscillator: velocity-squared coupling enters g.
    reduce::NnmRom nr;
    nr.omega_p = 2.0;
    nr.cubic = 0.7;
    nr.velocity_sq = 0.3;
    const auto msys = rom::OscillatorSystem::from_nnm(nr, 0.01, 0.2);
    const VecX q1 = (VecX(1) << 0.4).finished();
    const VecX v1 = (VecX(1) << 0.5).finished();
    CHECK(msys.g(q1, v1)[0] == doctest::Approx(0.7 * 0.064 + 0.3 * 0.4 * 0.25).epsilon(1e-14));
}

} // TEST_SUITE
