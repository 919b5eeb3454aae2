#include "romforge/mstep/mstep.hpp"

#include "romforge/step/step.hpp"

#include <cmath>
#include <stdexcept>

namespace romforge::mstep {

std::vector<Index> select_masters(const Assembler& asmb, const std::string& node_set, int transverse_dir) {
    const auto it = asmb.mesh().node_sets.find(node_set);
    if (it == asmb.mesh().node_sets.end()) throw std::invalid_argument("unknown node set: " + node_set);
    std::vector<Index> masters;
    for (const Index n : it->second) {
        const Index g = asmb.dofs()(n, transverse_dir);
        if (g >= 0) masters.push_back(g);
    }
    if (masters.empty()) throw std::invalid_argument("master set is empty after removing pinned dofs");
    return masters;
}

namespace {

std::vector<std::pair<Index, Real>> pin_to_shape(const std::vector<Index>& masters, const VecX& shape) {
    std::vector<std::pair<Index, Real>> prescribed;
    prescribed.reserve(masters.size());
    for (const Index g : masters) prescribed.emplace_back(g, shape[g]);
    return prescribed;
}

} // namespace

fe::StaticResult mstep_solve(const Assembler& asmb, const std::vector<Index>& masters, const VecX& phi_p,
                             Real lambda) {
    const VecX shape = lambda * phi_p;
    return fe::static_solve(asmb, pin_to_shape(masters, shape));
}

MstepGamma mstep_gamma(const Assembler& asmb, const ModeSet& modes, Index p, const std::vector<Index>& masters,
                       Real lambda, const std::vector<Index>& cross_modes) {
    const fe::StaticResult plus = mstep_solve(asmb, masters, modes.phi.col(p), lambda);
    const fe::StaticResult minus = mstep_solve(asmb, masters, modes.phi.col(p), -lambda);
    const VecX df = asmb.internal_force(plus.u) - asmb.internal_force(minus.u);
    const Real l3 = 2 * lambda * lambda * lambda;

    MstepGamma out;
    out.lambda = lambda;
    out.gamma_ppp = modes.phi.col(p).dot(df) / l3 - modes.omega[p] * modes.omega[p] / (lambda * lambda);
    out.gamma_k.resize(static_cast<Index>(cross_modes.size()));
    for (std::size_t a = 0; a < cross_modes.size(); ++a)
        out.gamma_k[static_cast<Index>(a)] = modes.phi.col(cross_modes[a]).dot(df) / l3;
    return out;
}

std::vector<MstepGammaMixed> mstep_gamma_mixed(const Assembler& asmb, const ModeSet& modes, Index p, Index r,
                                               const std::vector<Index>& masters, Real lambda_p, Real lambda_r,
                                               const std::vector<Index>& equations) {
    if (p == r) throw std::invalid_argument("mixed extraction needs two distinct modes");
    const auto solve_combo = [&](Real sp, Real sr) {
        const VecX shape = sp * lambda_p * modes.phi.col(p) + sr * lambda_r * modes.phi.col(r);
        return fe::static_solve(asmb, pin_to_shape(masters, shape)).u;
    };
    const VecX fpp = asmb.internal_force(solve_combo(+1, +1));
    const VecX fmm = asmb.internal_force(solve_combo(-1, -1));
    const VecX fpm = asmb.internal_force(solve_combo(+1, -1));
    const VecX fmp = asmb.internal_force(solve_combo(-1, +1));

    const MstepGamma single_p = mstep_gamma(asmb, modes, p, masters, lambda_p, {equations});
    const MstepGamma single_r = mstep_gamma(asmb, modes, r, masters, lambda_r, {equations});

    std::vector<MstepGammaMixed> out;
    out.reserve(equations.size());
    for (std::size_t a = 0; a < equations.size(); ++a) {
        const Index k = equations[a];
        const VecX& phi_k = modes.phi.col(k);
        const Real w2 = modes.omega[k] * modes.omega[k];
        const Real s1 = phi_k.dot(fpp) - phi_k.dot(fmm);
        const Real s2 = phi_k.dot(fpm) - phi_k.dot(fmp);
        // Single-mode cubics of equation k, with the self term reconstructed
        // from gamma_ppp (the driven-mode formula already removed the linear
        // part, so add it back where the signed sums still carry it).
        const Real g_ppp_k = (k == p) ? single_p.gamma_ppp : single_p.gamma_k[static_cast<Index>(a)];
        const Real g_rrr_k = (k == r) ? single_r.gamma_ppp : single_r.gamma_k[static_cast<Index>(a)];
        MstepGammaMixed m;
        m.k = k;
        const Real lin_r = (k == r) ? w2 * lambda_r : 0.0;
        const Real lin_p = (k == p) ? w2 * lambda_p : 0.0;
        m.gamma_ppr = ((s1 - s2) / 4 - lin_r - g_rrr_k * lambda_r * lambda_r * lambda_r) /
                      (lambda_p * lambda_p * lambda_r);
        m.gamma_prr = ((s1 + s2) / 4 - lin_p - g_ppp_k * lambda_p * lambda_p * lambda_p) /
                      (lambda_p * lambda_r * lambda_r);
        out.push_back(m);
    }
    return out;
}

MstepQuality mstep_quality(const Assembler& asmb, const ModeSet& modes, Index p,
                           const std::vector<Index>& masters, Real lambda,
                           const std::vector<Index>& cross_modes) {
    MstepQuality q;
    const fe::StaticResult sol = mstep_solve(asmb, masters, modes.phi.col(p), lambda);
    const VecX Kx = asmb.stiffness() * sol.u;
    const Real denom = lambda * modes.omega[p] * modes.omega[p];
    q.e1_pp = modes.phi.col(p).dot(Kx) / denom - 1.0;
    q.e1_k.resize(static_cast<Index>(cross_modes.size()));
    for (std::size_t a = 0; a < cross_modes.size(); ++a)
        q.e1_k[static_cast<Index>(a)] = modes.phi.col(cross_modes[a]).dot(Kx) / denom;

    // Linear constrained solve under the same masters.
    fe::StaticOptions lin;
    lin.kinematics = fe::Kinematics::Linear;
    const VecX shape = lambda * modes.phi.col(p);
    const fe::StaticResult linear = fe::static_solve(asmb, pin_to_shape(masters, shape), nullptr, lin);
    q.e2 = (linear.u - shape).norm() / shape.norm();

    Real worst_e1 = std::abs(q.e1_pp);
    for (Index a = 0; a < q.e1_k.size(); ++a) worst_e1 = std::max(worst_e1, std::abs(q.e1_k[a]));
    if (worst_e1 > 1e-3)
        q.warnings.push_back("master set unreliable: linear-consistency error above 1e-3");
    if (q.e2 > 1e-3)
        q.warnings.push_back("master set unreliable: linear constrained shape deviates above 1e-3");
    q.reliable = q.warnings.empty();
    return q;
}

ValiditySweep amplitude_validity_sweep(const Assembler& asmb, const ModeSet& modes, Index p,
                                       const std::vector<Index>& masters, const std::vector<Real>& amp_ratios,
                                       Real thickness, Real gamma_ref, Real tol) {
    if (gamma_ref == 0) throw std::invalid_argument("zero reference coefficient");
    ValiditySweep out;
    const Index n = static_cast<Index>(amp_ratios.size());
    out.amplitude.resize(n);
    out.gamma.resize(n);
    out.deviation.resize(n);
    for (Index a = 0; a < n; ++a) {
        const Real ratio = amp_ratios[static_cast<std::size_t>(a)];
        const Real lambda = step::step_lambda(modes.phi.col(p), thickness, ratio);
        const MstepGamma g = mstep_gamma(asmb, modes, p, masters, lambda);
        out.amplitude[a] = ratio;
        out.gamma[a] = g.gamma_ppp;
        out.deviation[a] = std::abs(g.gamma_ppp / gamma_ref - 1.0);
    }
    // Longest contiguous in-tolerance band; [lo, hi] in amplitude-ratio units.
    Index best_lo = -1, best_hi = -1;
    Index cur_lo = -1;
    for (Index a = 0; a <= n; ++a) {
        const bool ok = a < n && out.deviation[a] <= tol;
        if (ok && cur_lo < 0) cur_lo = a;
        if (!ok && cur_lo >= 0) {
            if (best_lo < 0 || (a - 1 - cur_lo) > (best_hi - best_lo)) {
                best_lo = cur_lo;
                best_hi = a - 1;
            }
            cur_lo = -1;
        }
    }
    if (best_lo >= 0) {
        out.lo = out.amplitude[best_lo];
        out.hi = out.amplitude[best_hi];
    }
    return out;
}

} // namespace romforge::mstep
