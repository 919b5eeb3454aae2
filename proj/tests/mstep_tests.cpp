#include <doctest.h>

#include "romforge/cases.hpp"
#include "romforge/fe/assembly.hpp"
#include "romforge/modal/modal.hpp"
#include "romforge/mstep/mstep.hpp"
#include "romforge/reduce/condense.hpp"
#include "romforge/step/step.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

using namespace romforge;

namespace {

struct Bundle {
    cases::Preset preset;
    std::unique_ptr<fe::Assembler> asmb;
    modal::ModeSet modes;
    std::vector<modal::ModeInfo> labels;
    step::ForceEval force;
    std::vector<Index> mid;
    std::vector<Index> lateral;
};

const Bundle& stocky() {
    static Bundle* b = [] {
        auto* x = new Bundle;
        x->preset = cases::thick_beam(5, 2, 2);
        x->asmb = std::make_unique<fe::Assembler>(x->preset.mesh, x->preset.material);
        x->modes = modal::solve_modes(*x->asmb);
        x->labels = modal::classify_modes(*x->asmb, x->modes, "midline", 2);
        x->force = step::make_force_eval(*x->asmb);
        x->mid = mstep::select_masters(*x->asmb, "midline", 2);
        x->lateral = mstep::select_masters(*x->asmb, "lateral_line", 2);
        return x;
    }();
    return *b;
}

Real lambda_for(const Bundle& b, Index p, Real ratio) {
    return step::step_lambda(b.modes.phi.col(p), b.preset.thickness, ratio);
}

} // namespace

TEST_SUITE("mstep") {

TEST_CASE("master selection picks unpinned transverse dofs on the set") {
    const Bundle& b = stocky();
    // 11 nodes on the midline, the two clamped ends excluded.
    CHECK(b.mid.size() == 9);
    CHECK(b.lateral.size() == 9);

    const auto& dof = b.asmb->dofs();
    const auto& nodes = b.preset.mesh.node_sets.at("midline");
    for (const Index m : b.mid) {
        const bool hit = std::any_of(nodes.begin(), nodes.end(), [&](Index n) { return dof(n, 2) == m; });
        CHECK(hit);
    }
    CHECK_THROWS_AS((void)mstep::select_masters(*b.asmb, "no_such_set", 2), std::invalid_argument);
}

TEST_CASE("constrained solve pins the masters and balances the rest") {
    const Bundle& b = stocky();
    const Real lam = lambda_for(b, 0, 0.3);
    const auto res = mstep::mstep_solve(*b.asmb, b.mid, b.modes.phi.col(0), lam);

    REQUIRE(res.u.size() == b.asmb->n_free());
    for (const Index m : b.mid)
        CHECK(res.u[m] == doctest::Approx(lam * b.modes.phi(m, 0)).epsilon(1e-12));

    // Internal force vanishes on every non-master dof (equilibrium), while
    // the masters carry the reaction.
    const VecX f = b.asmb->internal_force(res.u);
    VecX f_unpinned = f;
    Real f_masters = 0;
    for (const Index m : b.mid) {
        f_masters = std::max(f_masters, std::abs(f[m]));
        f_unpinned[m] = 0;
    }
    REQUIRE(f_masters > 0);
    CHECK(f_unpinned.cwiseAbs().maxCoeff() < 1e-6 * f_masters);
}

TEST_CASE("identified cubic matches static condensation") {
    const Bundle& b = stocky();
    const Real lam_p = lambda_for(b, 0, 0.25);
    const Real lam_r = lambda_for(b, 2, 0.25);

    const auto subset = step::step_subset(b.force, b.modes, {0, 2}, {lam_p, lam_r});
    const Real gamma_ppp = reduce::condensed_cubic(subset, b.modes, 0, 0, 0, 0);
    const Real gamma_cross = reduce::condensed_cubic(subset, b.modes, 1, 0, 0, 0);

    const auto got = mstep::mstep_gamma(*b.asmb, b.modes, 0, b.mid, lam_p, {2});
    CHECK(std::abs(got.gamma_ppp / gamma_ppp - 1.0) < 0.02);
    REQUIRE(got.gamma_k.size() == 1);
    CHECK(std::abs(got.gamma_k[0] - gamma_cross) < 0.02 * std::abs(gamma_ppp));
}

TEST_CASE("mixed coefficients close the two-mode equations") {
    const Bundle& b = stocky();
    const Real lam_p = lambda_for(b, 0, 0.25);
    const Real lam_r = lambda_for(b, 2, 0.25);

    const auto subset = step::step_subset(b.force, b.modes, {0, 2}, {lam_p, lam_r});
    const Real ref = std::abs(reduce::condensed_cubic(subset, b.modes, 0, 0, 0, 0));

    const auto mixed = mstep::mstep_gamma_mixed(*b.asmb, b.modes, 0, 2, b.mid, lam_p, lam_r, {0, 2});
    REQUIRE(mixed.size() == 2);
    for (const auto& mx : mixed) {
        const Index r_local = mx.k == 0 ? 0 : 1;
        const Real c_ppr = reduce::condensed_cubic(subset, b.modes, r_local, 0, 0, 1);
        const Real c_prr = reduce::condensed_cubic(subset, b.modes, r_local, 0, 1, 1);
        CHECK(std::abs(mx.gamma_ppr - c_ppr) < 0.03 * std::max(ref, std::abs(c_ppr)));
        CHECK(std::abs(mx.gamma_prr - c_prr) < 0.03 * std::max(ref, std::abs(c_prr)));
    }
}

TEST_CASE("quality indicators separate neutral-axis and surface masters") {
    const Bundle& b = stocky();
    const Real lam = lambda_for(b, 0, 0.3);

    const auto good = mstep::mstep_quality(*b.asmb, b.modes, 0, b.mid, lam, {2});
    CHECK(std::abs(good.e1_pp) < 1e-3);
    CHECK(good.e2 < 1e-3);
    CHECK(good.reliable);

    // Lateral-surface masters leave the section rotation unconstrained in
    // the wrong plane; both indicators must flag that.
    const auto bad = mstep::mstep_quality(*b.asmb, b.modes, 0, b.lateral, lam, {2});
    CHECK(std::abs(bad.e1_pp) > 1e-3);
    CHECK(bad.e2 > 1e-3);
    CHECK_FALSE(bad.reliable);
    CHECK(!bad.warnings.empty());
}

TEST_CASE("amplitude sweep brackets a validity band") {
    const Bundle& b = stocky();
    const Real lam = lambda_for(b, 0, 0.25);
    const auto subset = step::step_subset(b.force, b.modes, {0}, {lam});
    const Real gamma_ref = reduce::condensed_cubic(subset, b.modes, 0, 0, 0, 0);

    const auto sweep =
        mstep::amplitude_validity_sweep(*b.asmb, b.modes, 0, b.mid, {0.1, 0.3, 0.6}, b.preset.thickness,
                                        gamma_ref, 0.03);
    REQUIRE(sweep.amplitude.size() == 3);
    CHECK(sweep.amplitude[0] == doctest::Approx(0.1));
    CHECK(sweep.deviation[0] < 0.03);
    CHECK(sweep.deviation[1] < 0.03);
    CHECK(sweep.lo <= 0.1);
    CHECK(sweep.hi >= 0.3);
    for (Index i = 0; i < 3; ++i) CHECK(std::isfinite(sweep.gamma[i]));
}

} // TEST_SUITE
