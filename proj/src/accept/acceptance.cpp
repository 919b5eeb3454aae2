#include "romforge/accept/acceptance.hpp"

#include "romforge/cases.hpp"
#include "romforge/fe/assembly.hpp"
#include "romforge/fe/generators.hpp"
#include "romforge/fe/kernel.hpp"
#include "romforge/fe/shape.hpp"
#include "romforge/modal/modal.hpp"
#include "romforge/mstep/mstep.hpp"
#include "romforge/oracle/beam_theory.hpp"
#include "romforge/oracle/pure_bending.hpp"
#include "romforge/reduce/condense.hpp"
#include "romforge/reduce/nnm.hpp"
#include "romforge/reduce/smd.hpp"
#include "romforge/rom/continuation.hpp"
#include "romforge/rom/hbm.hpp"
#include "romforge/step/oracle_tensors.hpp"
#include "romforge/step/step.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace romforge::accept {
namespace {

std::string num(Real v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.4g", v);
    return b;
}

// Accumulates the sub-checks of one criterion; any failed sub-check fails
// the criterion and is marked in the detail string.
struct Gate {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
        if (!ok) {
            pass = false;
            detail += " <FAIL>";
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

// ============================================================================
// Shared heavy artifacts: a structure with its full (or truncated) spectrum,
// classification, force evaluator, and cached single-mode coefficient sets.
// Non-movable: the assembler references the preset stored inside.
// ============================================================================
struct StructureBundle {
    cases::Preset preset;
    std::unique_ptr<fe::Assembler> asmb;
    modal::ModeSet modes;
    std::vector<modal::ModeInfo> labels;
    step::ForceEval force;
    std::map<Index, step::CouplingCoefficients> singles;

    StructureBundle(cases::Preset pr, const std::string& midset) : preset(std::move(pr)) {
        asmb = std::make_unique<fe::Assembler>(preset.mesh, preset.material);
        modes = modal::solve_modes(*asmb);
        labels = modal::classify_modes(*asmb, modes, midset, 2);
        force = step::make_force_eval(*asmb);
    }
    StructureBundle(const StructureBundle&) = delete;
    StructureBundle& operator=(const StructureBundle&) = delete;

    // Single-mode coefficients of master p projected on the full mode set.
    const step::CouplingCoefficients& single(Index p) {
        auto it = singles.find(p);
        if (it == singles.end()) {
            const Real lam = step::step_lambda(modes.phi.col(p), preset.thickness, 0.05);
            it = singles.emplace(p, step::step_single(force, modes, p, lam)).first;
        }
        return it->second;
    }

    Real beta_ppp(Index p) {
        const auto& cc = single(p);
        return cc.beta(cc.projected_row(p), 0, 0, 0);
    }

    // First `count` modes that are bending-labeled and polarized along dir.
    std::vector<Index> bending_modes(int dir, Index count) {
        std::vector<Index> out;
        for (Index i = 0; i < modes.count() && static_cast<Index>(out.size()) < count; ++i)
            if (labels[static_cast<std::size_t>(i)].label == modal::ModeLabel::Bending &&
                modal::direction_mass_fraction(*asmb, modes.phi.col(i), dir) > 0.5)
                out.push_back(i);
        return out;
    }
};

// Everything the thick-beam criteria share: the three cubic-coefficient
// routes for the first bending mode, its correction spectrum, and the
// condensation convergence curve.
struct ThickData {
    StructureBundle b;
    Index p1 = 0;
    Real beta1 = 0;
    Real gamma_cond = 0;
    Real gamma_smd = 0;
    Real gamma_mstep = 0;
    VecX theta;
    reduce::CorrectionSpectrum spec;
    reduce::ConvergenceCurve conv;
    std::vector<Index> masters_mid;
    std::vector<Index> masters_lat;

    explicit ThickData(cases::Preset pr) : b(std::move(pr), "midline") {
        const auto bend = b.bending_modes(2, 1);
        if (bend.empty()) throw std::runtime_error("no transverse bending mode found");
        p1 = bend[0];

        const auto& cc = b.single(p1);
        beta1 = b.beta_ppp(p1);
        gamma_cond = reduce::condensed_cubic(cc, b.modes, 0, 0, 0, 0);
        spec = reduce::correction_spectrum(cc, b.modes, 0);
        conv = reduce::condensation_convergence(cc, b.modes, 0, reduce::SlaveOrdering::DescendingFactor);

        const auto solveK = reduce::make_stiffness_solver(*b.asmb);
        const VecX phi = b.modes.phi.col(p1);
        const Real h = b.preset.thickness;
        theta = reduce::smd_same(b.force, solveK, phi, step::step_lambda(phi, h, 0.05));
        gamma_smd = reduce::smd_condensed_cubic(b.force, phi, theta, step::step_lambda(phi, h, 0.01));

        masters_mid = mstep::select_masters(*b.asmb, "midline", 2);
        masters_lat = mstep::select_masters(*b.asmb, "lateral_line", 2);
        gamma_mstep = mstep::mstep_gamma(*b.asmb, b.modes, p1, masters_mid, master_lambda(masters_mid, 0.5)).gamma_ppp;
    }

    // Amplitude so that the largest prescribed master displacement is
    // ratio * thickness.
    Real master_lambda(const std::vector<Index>& masters, Real ratio) const {
        Real mmax = 0;
        for (Index m : masters) mmax = std::max(mmax, std::abs(b.modes.phi(m, p1)));
        if (mmax <= 0) throw std::runtime_error("master set does not move in the driven mode");
        return ratio * b.preset.thickness / mmax;
    }
};

// Plate criteria share the spectra of the first two bending masters and the
// three coefficient routes for the second one.
struct PlateData {
    StructureBundle b;
    Index p_axi = 0;
    Index p_dia = 1; ///< one-nodal-diameter mode, the second bending mode
    Real gamma_cond = 0;
    Real gamma_smd = 0;
    Real gamma_mstep = 0;
    reduce::CorrectionSpectrum spec_axi;
    reduce::CorrectionSpectrum spec_dia;

    explicit PlateData(cases::Preset pr) : b(std::move(pr), "midsurface") {
        const auto bend = b.bending_modes(2, 2);
        if (bend.size() < 2) throw std::runtime_error("fewer than two plate bending modes found");
        p_axi = bend[0];
        p_dia = bend[1];

        const auto& cc_axi = b.single(p_axi);
        const auto& cc_dia = b.single(p_dia);
        spec_axi = reduce::correction_spectrum(cc_axi, b.modes, 0);
        spec_dia = reduce::correction_spectrum(cc_dia, b.modes, 0);
        gamma_cond = reduce::condensed_cubic(cc_dia, b.modes, 0, 0, 0, 0);

        const auto solveK = reduce::make_stiffness_solver(*b.asmb);
        const VecX phi = b.modes.phi.col(p_dia);
        const Real h = b.preset.thickness;
        const VecX theta = reduce::smd_same(b.force, solveK, phi, step::step_lambda(phi, h, 0.05));
        gamma_smd = reduce::smd_condensed_cubic(b.force, phi, theta, step::step_lambda(phi, h, 0.01));

        const auto masters = mstep::select_masters(*b.asmb, "midsurface", 2);
        Real mmax = 0;
        for (Index m : masters) mmax = std::max(mmax, std::abs(phi[m]));
        gamma_mstep = mstep::mstep_gamma(*b.asmb, b.modes, p_dia, masters, 0.5 * h / mmax).gamma_ppp;
    }
};

struct Context {
    Level level = Level::Full;
    std::ostream* os = nullptr;
    std::unique_ptr<ThickData> thick_;
    std::unique_ptr<ThickData> thick_nu0_;
    std::unique_ptr<PlateData> plate_;

    Index thick_nx() const { return level == Level::Full ? 15 : 9; }

    ThickData& thick() {
        if (!thick_) {
            *os << "# building stocky-beam bundle (full spectrum, three coefficient routes)\n" << std::flush;
            thick_ = std::make_unique<ThickData>(cases::thick_beam(thick_nx(), 2, 2, 0.3));
        }
        return *thick_;
    }
    ThickData& thick_nu0() {
        if (!thick_nu0_) {
            *os << "# building stocky-beam bundle at zero Poisson ratio\n" << std::flush;
            thick_nu0_ = std::make_unique<ThickData>(cases::thick_beam(thick_nx(), 2, 2, 0.0));
        }
        return *thick_nu0_;
    }
    PlateData& plate() {
        if (!plate_) {
            *os << "# building plate bundle (full spectrum, three coefficient routes)\n" << std::flush;
            plate_ = std::make_unique<PlateData>(level == Level::Full ? cases::circular_plate(4, 3, 2)
                                                                      : cases::circular_plate(3, 2, 2));
        }
        return *plate_;
    }
};

Real rel_diff(Real a, Real b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// ============================================================================
// 1. Projection-based coefficients against the exact tensor oracle.
// ============================================================================
void criterion_step_oracle(Context&, Gate& g) {
    const auto t0 = std::chrono::steady_clock::now();
    const fe::Material mat{70e9, 0.3, 2700.0};
    Real worst_alpha = 0, worst_beta = 0;

    const fe::Mesh meshes[2] = {
        fe::generate_beam_mesh(0.1, 0.05, 0.02, 1, 1, 1, fe::ElementKind::HEX8, false),
        fe::generate_beam_mesh(0.2, 0.06, 0.03, 2, 1, 1, fe::ElementKind::HEX20, false),
    };
    for (const auto& mesh : meshes) {
        fe::Assembler asmb(mesh, mat);
        auto modes = modal::solve_modes(asmb);
        const auto f = step::make_force_eval(asmb);

        // Excite the first four elastic modes; rigid modes stay in the
        // projection set.
        std::vector<Index> ex;
        const Real wmax = modes.omega[modes.count() - 1];
        for (Index i = 0; i < modes.count() && ex.size() < 4; ++i)
            if (modes.omega[i] > 1e-6 * wmax) ex.push_back(i);

        MatX basis(modes.phi.rows(), static_cast<Index>(ex.size()));
        std::vector<Real> lam(ex.size());
        for (std::size_t c = 0; c < ex.size(); ++c) {
            basis.col(static_cast<Index>(c)) = modes.phi.col(ex[c]);
            lam[c] = step::step_lambda(modes.phi.col(ex[c]), 0.02, 0.05);
        }
        const step::NonlinearTensors tensors(f, basis);
        const auto oracle = tensors.project(modes);

        Real alpha_scale = 0, beta_scale = 0;
        for (Index k = 0; k < modes.count(); ++k)
            for (std::size_t i = 0; i < ex.size(); ++i)
                for (std::size_t j = i; j < ex.size(); ++j) {
                    const Index li = static_cast<Index>(i), lj = static_cast<Index>(j);
                    alpha_scale = std::max(alpha_scale, std::abs(oracle.alpha(k, li, lj)));
                    for (std::size_t l = j; l < ex.size(); ++l)
                        beta_scale = std::max(beta_scale, std::abs(oracle.beta(k, li, lj, static_cast<Index>(l))));
                }

        // Single-mode extraction, every excited mode.
        for (std::size_t i = 0; i < ex.size(); ++i) {
            const auto cc = step::step_single(f, modes, ex[i], lam[i]);
            const Index li = static_cast<Index>(i);
            for (Index k = 0; k < modes.count(); ++k) {
                const Index kr = cc.projected_row(k);
                worst_alpha = std::max(worst_alpha, std::abs(cc.alpha(kr, 0, 0) - oracle.alpha(k, li, li)) / alpha_scale);
                worst_beta = std::max(worst_beta, std::abs(cc.beta(kr, 0, 0, 0) - oracle.beta(k, li, li, li)) / beta_scale);
            }
        }
        // Pair extraction, every excited pair and every monomial.
        for (std::size_t i = 0; i < ex.size(); ++i)
            for (std::size_t j = i + 1; j < ex.size(); ++j) {
                const auto cc = step::step_pair(f, modes, ex[i], ex[j], lam[i], lam[j]);
                const Index gi = static_cast<Index>(i), gj = static_cast<Index>(j);
                for (Index k = 0; k < modes.count(); ++k) {
                    const Index kr = cc.projected_row(k);
                    const Index pairs[3][2] = {{0, 0}, {0, 1}, {1, 1}};
                    for (const auto& pq : pairs) {
                        const Index oi = pq[0] == 0 ? gi : gj, oj = pq[1] == 0 ? gi : gj;
                        worst_alpha = std::max(worst_alpha,
                                               std::abs(cc.alpha(kr, pq[0], pq[1]) - oracle.alpha(k, oi, oj)) / alpha_scale);
                    }
                    const Index triples[4][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}};
                    for (const auto& tq : triples) {
                        const Index oi = tq[0] == 0 ? gi : gj, oj = tq[1] == 0 ? gi : gj, ol = tq[2] == 0 ? gi : gj;
                        worst_beta = std::max(worst_beta,
                                              std::abs(cc.beta(kr, tq[0], tq[1], tq[2]) - oracle.beta(k, oi, oj, ol)) / beta_scale);
                    }
                }
            }
    }
    const Real secs = std::chrono::duration<Real>(std::chrono::steady_clock::now() - t0).count();
    g.check(worst_alpha <= 1e-9, "quadratic rel err " + num(worst_alpha) + " (tol 1e-9)");
    g.check(worst_beta <= 1e-9, "cubic rel err " + num(worst_beta) + " (tol 1e-9)");
    g.check(secs < 10.0, "runtime " + num(secs) + " s (limit 10)");
}

// ============================================================================
// 2. + 3. Slender-beam cubic coefficient: factor-two law against beam theory
//         at nu = 0 and the Poisson-ratio scaling of the 3D value.
// ============================================================================
struct ThinBeamStudy {
    std::vector<Real> nus;
    std::vector<Real> beta1; ///< first-bending cubic, per nu
    Real beta2_nu0 = 0;      ///< second-bending cubic at nu = 0
};

ThinBeamStudy thin_beam_study(Context& ctx) {
    ThinBeamStudy out;
    out.nus = {0.0, 0.1, 0.2, 0.3, 0.4};
    const Index nx = ctx.level == Level::Full ? 40 : 24;
    for (const Real nu : out.nus) {
        *ctx.os << "# slender beam at nu = " << nu << "\n" << std::flush;
        auto pr = cases::thin_beam(nx, nu);
        fe::Assembler asmb(pr.mesh, pr.material);
        modal::ModalOptions mo;
        mo.count = 8;
        auto modes = modal::solve_modes(asmb, mo);
        const auto f = step::make_force_eval(asmb);

        std::vector<Index> bend;
        for (Index i = 0; i < modes.count() && bend.size() < 2; ++i)
            if (modal::direction_mass_fraction(asmb, modes.phi.col(i), 2) > 0.7) bend.push_back(i);
        if (bend.size() < 2) throw std::runtime_error("slender beam: transverse modes not found");

        std::vector<Real> betas;
        for (const Index p : bend) {
            const Real lam = step::step_lambda(modes.phi.col(p), pr.thickness, 0.05);
            const auto cc = step::step_single(f, modes, p, lam);
            betas.push_back(cc.beta(cc.projected_row(p), 0, 0, 0));
        }
        out.beta1.push_back(betas[0]);
        if (nu == 0.0) out.beta2_nu0 = betas[1];
    }
    return out;
}

void criterion_factor_two(const ThinBeamStudy& st, Gate& g) {
    const oracle::BeamSection sec{1.0, 0.05, 0.001, 210e9, 7800.0};
    const Real r1 = st.beta1[0] / oracle::bare_cubic_coefficient(sec, 1);
    const Real r2 = st.beta2_nu0 / oracle::bare_cubic_coefficient(sec, 2);
    g.check(std::abs(r1 - 2.0) <= 0.05, "mode 1 solid/theory ratio " + num(r1) + " (2.00 +- 0.05)");
    g.check(std::abs(r2 - 2.0) <= 0.05, "mode 2 solid/theory ratio " + num(r2) + " (2.00 +- 0.05)");
}

void criterion_poisson_scaling(const ThinBeamStudy& st, Gate& g) {
    Real worst = 0;
    std::string ratios;
    for (std::size_t i = 1; i < st.nus.size(); ++i) {
        const Real nu = st.nus[i];
        const Real measured = st.beta1[i] / st.beta1[0];
        const Real predicted = 1.0 / ((1.0 + nu) * (1.0 - 2.0 * nu));
        worst = std::max(worst, std::abs(measured / predicted - 1.0));
        if (!ratios.empty()) ratios += " ";
        ratios += num(measured) + "/" + num(predicted);
    }
    g.check(worst <= 0.01, "max deviation from 1/((1+nu)(1-2nu)) scaling " + num(worst) + " (tol 0.01)");
    g.note("measured/predicted: " + ratios);
}

// ============================================================================
// 4. Three routes to the same condensed cubic coefficient.
// ============================================================================
void criterion_three_way(Context& ctx, Gate& g) {
    auto& td = ctx.thick();
    const Real d_cs = rel_diff(td.gamma_cond, td.gamma_smd);
    const Real d_cm = rel_diff(td.gamma_cond, td.gamma_mstep);
    const Real d_sm = rel_diff(td.gamma_smd, td.gamma_mstep);
    g.note("condensed " + num(td.gamma_cond) + ", manifold " + num(td.gamma_smd) + ", constrained " + num(td.gamma_mstep));
    g.check(d_cs <= 5e-4, "condensed vs manifold " + num(d_cs) + " (tol 5e-4)");
    g.check(d_cm <= 5e-3, "condensed vs constrained " + num(d_cm) + " (tol 5e-3)");
    g.check(d_sm <= 5e-3, "manifold vs constrained " + num(d_sm) + " (tol 5e-3)");
    if (ctx.level == Level::Full && td.b.asmb->n_free() == 1287) {
        const Real ref = 2.979e8;
        g.check(std::abs(td.gamma_cond / ref - 1.0) <= 0.02,
                "absolute value vs reference " + num(td.gamma_cond) + " / " + num(ref) + " (tol 2%)");
    } else {
        g.note("absolute reference check skipped (non-reference discretization)");
    }
}

// ============================================================================
// 5. Overestimation of the bare coefficient and condensation convergence.
// ============================================================================
void criterion_overestimation(Context& ctx, Gate& g) {
    auto& td = ctx.thick();
    const Real ratio = td.beta1 / td.gamma_cond;
    g.check(std::abs(ratio - 5.5) <= 0.3, "bare/condensed ratio " + num(ratio) + " (5.5 +- 0.3)");
    if (ctx.level == Level::Full && td.b.asmb->n_free() == 1287) {
        // Retained-mode counts include the master.
        const Index m1 = td.conv.count_to_1e2 >= 0 ? td.conv.count_to_1e2 + 1 : -1;
        const Index m2 = td.conv.count_to_1e3 >= 0 ? td.conv.count_to_1e3 + 1 : -1;
        g.check(m1 > 0 && std::abs(static_cast<Real>(m1) / 44.0 - 1.0) <= 0.2,
                "modes to 1% " + std::to_string(m1) + " (44 +- 20%)");
        g.check(m2 > 0 && std::abs(static_cast<Real>(m2) / 68.0 - 1.0) <= 0.2,
                "modes to 0.1% " + std::to_string(m2) + " (68 +- 20%)");
    } else {
        g.note("mode-count check skipped (non-reference discretization)");
    }
}

// ============================================================================
// 6. Fraction of slaves above threshold, and the axial selection rule.
// ============================================================================
void criterion_relevant_fractions(Context& ctx, Gate& g) {
    auto& td = ctx.thick();
    auto count_relevant = [](const reduce::CorrectionSpectrum& sp) {
        Index c = 0;
        for (const bool r : sp.relevant) c += r ? 1 : 0;
        return c;
    };
    const Real frac03 = static_cast<Real>(count_relevant(td.spec)) / static_cast<Real>(td.b.modes.count());
    g.check(std::abs(frac03 - 0.20) <= 0.05, "relevant fraction at nu=0.3: " + num(frac03) + " (0.20 +- 0.05)");

    auto& t0 = ctx.thick_nu0();
    const Real frac00 = static_cast<Real>(count_relevant(t0.spec)) / static_cast<Real>(t0.b.modes.count());
    g.check(frac00 <= 0.10, "relevant fraction at nu=0: " + num(frac00) + " (0.05 + 5pp ceiling)");

    // Axial modes with an odd half-wave count are symmetric about midspan
    // and cannot couple to the squared bending shape: their normalized
    // correction factors must vanish identically.
    const Real c_rod = std::sqrt(td.b.preset.material.E / td.b.preset.material.rho);
    std::map<Index, std::size_t> spectrum_pos;
    for (std::size_t i = 0; i < td.spec.s.size(); ++i) spectrum_pos[td.spec.s[i]] = i;
    Real worst_odd = 0;
    Index n_odd = 0;
    for (Index s = 0; s < td.b.modes.count(); ++s) {
        if (modal::direction_mass_fraction(*td.b.asmb, td.b.modes.phi.col(s), 0) < 0.9) continue;
        const Real kf = td.b.modes.omega[s] / (M_PI * c_rod);
        const Index k = static_cast<Index>(std::lround(kf));
        if (k < 1 || k > 9 || std::abs(kf - static_cast<Real>(k)) > 0.2 || k % 2 == 0) continue;
        const auto it = spectrum_pos.find(s);
        if (it == spectrum_pos.end()) continue;
        ++n_odd;
        worst_odd = std::max(worst_odd, std::abs(td.spec.normalized[static_cast<Index>(it->second)]));
    }
    g.check(n_odd >= 3, "odd axial modes identified: " + std::to_string(n_odd) + " (need >= 3)");
    g.check(worst_odd < 1e-15, "max odd-axial normalized factor " + num(worst_odd) + " (tol 1e-15)");
}

// ============================================================================
// 7. Modal-derivative field equals its slave-mode expansion; top participants.
// ============================================================================
void criterion_smd_decomposition(Context& ctx, Gate& g) {
    auto& td = ctx.thick();
    const auto& cc = td.b.single(td.p1);
    const VecX recon = reduce::smd_modal_reconstruction(td.b.modes, cc.alpha_column(0, 0));
    const Real rel = (td.theta - recon).norm() / td.theta.norm();
    g.check(rel <= 1e-8, "field vs modal expansion " + num(rel) + " (tol 1e-8)");

    if (ctx.level == Level::Full && td.b.asmb->n_free() == 1287) {
        VecX part = reduce::smd_participations(*td.b.asmb, td.b.modes, td.theta);
        part[td.p1] = 0;
        std::vector<Index> order(static_cast<std::size_t>(part.size()));
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
        std::sort(order.begin(), order.end(),
                  [&](Index a, Index b) { return std::abs(part[a]) > std::abs(part[b]); });
        std::vector<Index> top(order.begin(), order.begin() + 4);

        const std::vector<Index> expected = {329, 327, 33, 166}; // zero-based
        std::vector<bool> used(4, false);
        bool all_matched = true;
        for (const Index e : expected) {
            bool found = false;
            for (std::size_t c = 0; c < top.size(); ++c) {
                if (used[c]) continue;
                const bool same = top[c] == e;
                const bool degenerate =
                    std::abs(td.b.modes.omega[top[c]] - td.b.modes.omega[e]) <= 1e-6 * td.b.modes.omega[e];
                if (same || degenerate) {
                    used[c] = true;
                    found = true;
                    break;
                }
            }
            all_matched = all_matched && found;
        }
        std::string ids;
        for (const Index t : top) ids += std::to_string(t + 1) + " ";
        g.check(all_matched, "top participations at modes " + ids + "(expected {330 328 34 167} up to degeneracy)");
    } else {
        g.note("participant identity check skipped (non-reference discretization)");
    }
}

// ============================================================================
// 8. Quadratic-manifold restriction reproduces full static condensation.
// ============================================================================
void criterion_manifold_limit(Context& ctx, Gate& g) {
    auto& td = ctx.thick();
    const Real beam = rel_diff(td.gamma_smd, td.gamma_cond);
    g.check(beam <= 1e-6, "beam manifold vs condensation " + num(beam) + " (tol 1e-6)");
    auto& pd = ctx.plate();
    const Real plate = rel_diff(pd.gamma_smd, pd.gamma_cond);
    g.check(plate <= 1e-6, "plate manifold vs condensation " + num(plate) + " (tol 1e-6)");
}

// ============================================================================
// 9. Invariant-manifold oscillator approaches static condensation as the
//    slave frequency rises, with a second-order gap.
// ============================================================================
void criterion_nnm_gap_scaling(Context&, Gate& g) {
    const Real omega_p = 3.0, beta = 2.0, factor = 0.8;
    auto error_at = [&](Real ratio) {
        const Real ws = ratio * omega_p;
        const reduce::NnmSlave slave{std::sqrt(factor / 2.0) * ws, ws};
        const Real gamma = reduce::condensed_from_spectrum(beta, {slave});
        const auto rom = reduce::nnm_from_spectrum(omega_p, beta, {slave});
        return std::abs(rom.cubic - gamma) / std::abs(gamma);
    };
    const Real e10 = error_at(10.0), e100 = error_at(100.0);
    const Real exponent = std::log(e10 / e100) / std::log(10.0);
    g.note("cubic-term gap " + num(e10) + " at ratio 10, " + num(e100) + " at ratio 100");
    g.check(std::abs(exponent - 2.0) <= 0.1, "gap decay exponent " + num(exponent) + " (2.0 +- 0.1)");
}

// ============================================================================
// 10. Master-set quality indicators and amplitude validity ranges.
// ============================================================================
void criterion_master_quality(Context& ctx, Gate& g) {
    auto& td = ctx.thick();
    const auto q_mid = mstep::mstep_quality(*td.b.asmb, td.b.modes, td.p1, td.masters_mid,
                                            td.master_lambda(td.masters_mid, 0.5));
    Real mmax_lat = 0;
    for (const Index m : td.masters_lat) mmax_lat = std::max(mmax_lat, std::abs(td.b.modes.phi(m, td.p1)));
    const Real lam_lat = 0.5 * td.b.preset.thickness / mmax_lat;
    const auto q_lat = mstep::mstep_quality(*td.b.asmb, td.b.modes, td.p1, td.masters_lat, lam_lat);

    g.check(std::abs(q_mid.e1_pp) <= 1e-3, "neutral-line e1 " + num(std::abs(q_mid.e1_pp)) + " (<= 1e-3)");
    g.check(q_mid.e2 <= 1e-4, "neutral-line e2 " + num(q_mid.e2) + " (<= 1e-4)");
    g.check(std::abs(q_lat.e1_pp) >= 1e-2, "lateral-line e1 " + num(std::abs(q_lat.e1_pp)) + " (>= 1e-2)");
    g.check(q_lat.e2 >= 1e-2, "lateral-line e2 " + num(q_lat.e2) + " (>= 1e-2)");

    // Validity ranges of the identified cubic coefficient, first three
    // transverse bending modes, 3% deviation from the condensation value.
    const auto bend = td.b.bending_modes(2, 3);
    if (bend.size() < 3) throw std::runtime_error("fewer than three transverse bending modes");
    const std::vector<Real> grid = {0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0, 1.5};
    std::vector<Real> spans;
    bool first_contains_half = false;
    std::string span_note;
    for (std::size_t bi = 0; bi < bend.size(); ++bi) {
        const Index p = bend[bi];
        const auto& cc = td.b.single(p);
        const Real gamma_ref = reduce::condensed_cubic(cc, td.b.modes, 0, 0, 0, 0);
        const auto sweep = mstep::amplitude_validity_sweep(*td.b.asmb, td.b.modes, p, td.masters_mid, grid,
                                                           td.b.preset.thickness, gamma_ref, 0.03);
        spans.push_back(sweep.hi - sweep.lo);
        if (bi == 0) first_contains_half = sweep.lo <= 0.5 && 0.5 <= sweep.hi;
        if (!span_note.empty()) span_note += ", ";
        span_note += "[" + num(sweep.lo) + "," + num(sweep.hi) + "]";
    }
    g.check(first_contains_half, "mode 1 validity band contains half-thickness amplitude (" + span_note + ")");
    g.check(spans[0] > spans[1] && spans[1] > spans[2], "validity spans shrink with mode order");
}

// ============================================================================
// 11. Exact quadratic displacement field: discrete strain vs closed form.
// ============================================================================
void criterion_strain_oracle(Context&, Gate& g) {
    const Real kappa = 0.1;
    for (const Real nu : {0.3, 0.0}) {
        const auto mesh = fe::generate_beam_mesh(0.8, 0.3, 0.2, 1, 1, 1, fe::ElementKind::HEX20, false);
        const fe::Material mat{210e9, nu, 7800.0};
        const fe::Assembler asmb(mesh, mat);

        VecX u = VecX::Zero(asmb.n_free());
        for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
            const Vec3 d = oracle::pure_bending_displacement(mesh.nodes[n], kappa, nu);
            for (int dir = 0; dir < 3; ++dir) u[asmb.dofs()(static_cast<Index>(n), dir)] = d[dir];
        }

        const auto& st = fe::ShapeTable::get(fe::ElementKind::HEX20);
        const MatX X = asmb.element_coords(0);
        const MatX ue = asmb.element_displacements(0, u);
        Real worst = 0, worst_g3 = 0;
        for (std::size_t q = 0; q < st.N.size(); ++q) {
            const Vec3 Xq = X.transpose() * st.N[q];
            const Mat3 E_fe = fe::element_strain(st, X, ue, q);
            const Mat3 E_or = oracle::pure_bending_strain(Xq, kappa, nu);
            worst = std::max(worst, ((E_fe - E_or).cwiseAbs().maxCoeff()) / (kappa * kappa));
            if (nu == 0.0)
                worst_g3 = std::max(worst_g3,
                                    oracle::pure_bending_strain_quadratic(Xq, kappa, nu, 3).cwiseAbs().maxCoeff());
        }
        g.check(worst <= 1e-12, "nu=" + num(nu) + " strain mismatch " + num(worst) + " (tol 1e-12)");
        if (nu == 0.0) g.check(worst_g3 == 0.0, "third quadratic part vanishes at nu=0 (max " + num(worst_g3) + ")");
    }
}

// ============================================================================
// 12. Harmonic balance: linear limit, backbone perturbation, fold traversal,
//     and the under-condensed ROM ordering.
// ============================================================================
void criterion_hbm(Context& ctx, Gate& g) {
    // (a) Linear FRF peak amplitude.
    {
        const Real w = 2 * M_PI * 3.0, zeta = 0.01, F = 2.5;
        const rom::HbmProblem hbm(rom::OscillatorSystem::duffing(w, zeta, 0.0, F), 3);
        const Real Wpk = w * std::sqrt(1.0 - 2.0 * zeta * zeta);
        const VecX U = hbm.solve_fixed(Wpk);
        const auto& b = hbm.basis();
        const Real a1 = std::hypot(U[b.slot_cos(1)], U[b.slot_sin(1)]);
        const Real exact = F / (2.0 * zeta * w * w * std::sqrt(1.0 - zeta * zeta));
        const Real err = std::abs(a1 / exact - 1.0);
        g.check(err <= 1e-6, "linear peak amplitude error " + num(err) + " (tol 1e-6)");
    }
    // (b) Duffing backbone against first-order perturbation.
    {
        const Real w = 1.0, gamma = 1.0;
        const auto sys = rom::OscillatorSystem::duffing(w, 0.0, gamma, 0.0);
        const Real astar = std::sqrt(0.01 * 8.0 * w * w / (3.0 * gamma));
        const std::vector<Real> amps = {0.6 * astar, 0.8 * astar, astar};
        const auto curve = rom::trace_backbone(sys, 5, 0, amps, VecX::Ones(1));
        Real worst = 0;
        for (const auto& ptb : curve) {
            const Real shift_pert = 3.0 * gamma * ptb.coeff * ptb.coeff / (8.0 * w);
            worst = std::max(worst, std::abs((ptb.omega - w) - shift_pert) / shift_pert);
        }
        g.check(worst <= 0.01, "backbone vs perturbation shift " + num(worst) + " (tol 0.01)");
    }
    // (c) Hardening fold pair traversal.
    {
        const Real w = 1.0, zeta = 0.02, gamma = 0.5, F = 0.02;
        const rom::HbmProblem hbm(rom::OscillatorSystem::duffing(w, zeta, gamma, F), 5);
        rom::FrfOptions opt;
        opt.omega_min = 0.85;
        opt.omega_max = 1.25;
        opt.ds0 = 0.005;
        const auto branch = rom::continue_frf(hbm, VecX::Ones(1), opt);
        Index reversals = 0;
        for (std::size_t i = 2; i < branch.points.size(); ++i) {
            const Real d1 = branch.points[i].omega - branch.points[i - 1].omega;
            const Real d0 = branch.points[i - 1].omega - branch.points[i - 2].omega;
            if (d1 * d0 < 0) ++reversals;
        }
        const bool exited = !branch.points.empty() && branch.points.back().omega >= opt.omega_max;
        g.check(branch.traversed_fold && reversals >= 2, "fold pair traversed (" + std::to_string(reversals) + " turning points)");
        g.check(exited, "branch exits the window after the folds");
    }
    // (d) Under-condensed ROM is stiffer than the converged one.
    {
        auto& td = ctx.thick();
        if (static_cast<Index>(td.conv.gamma.size()) <= 9) throw std::runtime_error("convergence curve too short");
        const Real gamma_part = td.conv.gamma[8]; // master plus eight slaves
        const Real gamma_full = td.conv.gamma_full;
        const Real w1 = td.b.modes.omega[td.p1], zeta = 0.002;
        const Real apk = std::sqrt(0.08 * 8.0 * w1 * w1 / (3.0 * gamma_full));
        const Real F = apk * 2.0 * zeta * w1 * w1;
        rom::FrfOptions opt;
        opt.omega_min = 0.985 * w1;
        opt.omega_max = 1.13 * w1;
        opt.ds0 = 0.004;
        const auto upper_curve = [&](Real gam) {
            const rom::HbmProblem hbm(rom::OscillatorSystem::duffing(w1, zeta, gam, F), 3);
            const auto branch = rom::continue_frf(hbm, VecX::Ones(1), opt);
            std::size_t imax = 0;
            for (std::size_t i = 0; i < branch.points.size(); ++i)
                if (branch.points[i].amplitude > branch.points[imax].amplitude) imax = i;
            std::vector<std::pair<Real, Real>> aw; // amplitude -> omega, strictly increasing
            Real last = -1;
            for (std::size_t i = 0; i <= imax; ++i) {
                if (branch.points[i].amplitude > last) {
                    aw.emplace_back(branch.points[i].amplitude, branch.points[i].omega);
                    last = branch.points[i].amplitude;
                }
            }
            return aw;
        };
        const auto part = upper_curve(gamma_part);
        const auto full = upper_curve(gamma_full);
        if (part.size() < 4 || full.size() < 4) throw std::runtime_error("upper branch too short");
        const auto omega_at = [](const std::vector<std::pair<Real, Real>>& c, Real a) {
            for (std::size_t i = 1; i < c.size(); ++i)
                if (c[i].first >= a) {
                    const Real t = (a - c[i - 1].first) / (c[i].first - c[i - 1].first);
                    return c[i - 1].second + t * (c[i].second - c[i - 1].second);
                }
            return c.back().second;
        };
        const Real acap = 0.95 * std::min(part.back().first, full.back().first);
        Real min_gap = 1e300;
        for (const Real fr : {0.35, 0.5, 0.65, 0.8, 0.9})
            min_gap = std::min(min_gap, omega_at(part, fr * acap) - omega_at(full, fr * acap));
        g.note("partial cubic " + num(gamma_part) + " vs converged " + num(gamma_full));
        g.check(min_gap > 0, "under-condensed branch stays stiffer (min gap " + num(min_gap) + " rad/s)");
    }
}

// ============================================================================
// 13. Plate: cross-method agreement and the structure of the coupled sets.
// ============================================================================
void criterion_plate(Context& ctx, Gate& g) {
    auto& pd = ctx.plate();
    const Real d_cs = rel_diff(pd.gamma_cond, pd.gamma_smd);
    const Real d_cm = rel_diff(pd.gamma_cond, pd.gamma_mstep);
    const Real d_sm = rel_diff(pd.gamma_smd, pd.gamma_mstep);
    g.note("condensed " + num(pd.gamma_cond) + ", manifold " + num(pd.gamma_smd) + ", constrained " + num(pd.gamma_mstep));
    g.check(d_cs <= 5e-3 && d_cm <= 5e-3 && d_sm <= 5e-3,
            "three-way agreement " + num(std::max({d_cs, d_cm, d_sm})) + " (tol 5e-3)");

    // Top coupled modes of the one-nodal-diameter master: at most two pure
    // in-plane modes, the rest thickness-dominated.
    std::vector<Index> order(pd.spec_dia.s.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return pd.spec_dia.factor[a] > pd.spec_dia.factor[b]; });
    Index n_inplane = 0, n_thickness = 0;
    std::string kinds;
    for (std::size_t i = 0; i < 9 && i < order.size(); ++i) {
        const Index s = pd.spec_dia.s[static_cast<std::size_t>(order[i])];
        const Real zf = modal::direction_mass_fraction(*pd.b.asmb, pd.b.modes.phi.col(s), 2);
        if (zf <= 0.25) ++n_inplane;
        if (zf >= 0.5) ++n_thickness;
        kinds += num(zf) + " ";
    }
    g.check(n_inplane <= 2, "in-plane modes among top 9: " + std::to_string(n_inplane) + " (<= 2)");
    g.check(n_thickness >= 7, "thickness-dominated among top 9: " + std::to_string(n_thickness) + " (>= 7)");
    g.note("transverse fractions: " + kinds);

    // Coupled-set overlap between the axisymmetric and one-diameter masters.
    auto relevant_set = [](const reduce::CorrectionSpectrum& sp) {
        std::vector<Index> out;
        for (std::size_t i = 0; i < sp.relevant.size(); ++i)
            if (sp.relevant[i]) out.push_back(sp.s[i]);
        std::sort(out.begin(), out.end());
        return out;
    };
    const auto sa = relevant_set(pd.spec_axi), sd = relevant_set(pd.spec_dia);
    std::vector<Index> inter;
    std::set_intersection(sa.begin(), sa.end(), sd.begin(), sd.end(), std::back_inserter(inter));
    const Real overlap = static_cast<Real>(inter.size()) /
                         std::max<Real>(1.0, static_cast<Real>(std::max(sa.size(), sd.size())));
    g.check(overlap >= 0.90, "coupled-set overlap " + num(overlap) + " (>= 0.90, sizes " +
                                 std::to_string(sa.size()) + "/" + std::to_string(sd.size()) + ")");
}

} // namespace

int AcceptanceReport::failures() const {
    int n = 0;
    for (const auto& r : results) n += r.pass ? 0 : 1;
    return n;
}

Level level_from_string(const std::string& name) {
    if (name == "quick") return Level::Quick;
    if (name == "full") return Level::Full;
    throw std::invalid_argument("unknown acceptance level: " + name);
}

AcceptanceReport run_acceptance(Level level, std::ostream& os) {
    AcceptanceReport report;
    report.level = level;
    Context ctx;
    ctx.level = level;
    ctx.os = &os;

    os << "acceptance level: " << (level == Level::Full ? "full" : "quick") << "\n" << std::flush;

    auto run = [&](int id, const std::string& name, const std::function<void(Gate&)>& fn) {
        Gate g;
        try {
            fn(g);
        } catch (const std::exception& e) {
            g.pass = false;
            g.note(std::string("exception: ") + e.what());
        }
        char head[8];
        std::snprintf(head, sizeof head, "%02d", id);
        os << (g.pass ? "[PASS] " : "[FAIL] ") << head << " " << name << " | " << g.detail << "\n" << std::flush;
        report.results.push_back({id, name, g.pass, g.detail});
    };

    run(1, "step-matches-force-tensor-oracle", [&](Gate& g) { criterion_step_oracle(ctx, g); });

    // The slender-beam study feeds criteria 2 and 3.
    std::unique_ptr<ThinBeamStudy> thin;
    std::string thin_error;
    try {
        thin = std::make_unique<ThinBeamStudy>(thin_beam_study(ctx));
    } catch (const std::exception& e) {
        thin_error = e.what();
    }
    run(2, "bending-cubic-factor-two-vs-beam-theory", [&](Gate& g) {
        if (!thin) throw std::runtime_error(thin_error);
        criterion_factor_two(*thin, g);
    });
    run(3, "poisson-ratio-scaling-of-cubic", [&](Gate& g) {
        if (!thin) throw std::runtime_error(thin_error);
        criterion_poisson_scaling(*thin, g);
    });

    run(4, "condensation-manifold-constrained-agree", [&](Gate& g) { criterion_three_way(ctx, g); });
    run(5, "bare-vs-condensed-overestimation", [&](Gate& g) { criterion_overestimation(ctx, g); });
    run(6, "relevant-slave-fractions", [&](Gate& g) { criterion_relevant_fractions(ctx, g); });
    run(7, "modal-derivative-decomposition", [&](Gate& g) { criterion_smd_decomposition(ctx, g); });
    run(8, "manifold-vs-condensation-limit", [&](Gate& g) { criterion_manifold_limit(ctx, g); });
    run(9, "oscillator-rom-frequency-gap-scaling", [&](Gate& g) { criterion_nnm_gap_scaling(ctx, g); });
    run(10, "constrained-master-quality", [&](Gate& g) { criterion_master_quality(ctx, g); });
    run(11, "quadratic-strain-field-oracle", [&](Gate& g) { criterion_strain_oracle(ctx, g); });
    run(12, "harmonic-balance-pipeline", [&](Gate& g) { criterion_hbm(ctx, g); });
    run(13, "plate-cross-method-and-coupled-sets", [&](Gate& g) { criterion_plate(ctx, g); });

    os << "acceptance: " << (static_cast<int>(report.results.size()) - report.failures()) << "/"
       << report.results.size() << " criteria passed\n"
       << std::flush;
    return report;
}

} // namespace romforge::accept
