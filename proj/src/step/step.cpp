#include "romforge/step/step.hpp"

#include <cmath>
#include <stdexcept>

namespace romforge::step {

namespace {

std::vector<Index> all_modes(const ModeSet& modes) {
    std::vector<Index> out(static_cast<std::size_t>(modes.count()));
    for (Index i = 0; i < modes.count(); ++i) out[static_cast<std::size_t>(i)] = i;
    return out;
}

/// Projects a force vector on every mode: modes are mass-normalized, so the
/// modal mass in the denominators is identically one.
VecX project(const ModeSet& modes, const VecX& f) { return modes.phi.transpose() * f; }

} // namespace

ForceEval make_force_eval(const Assembler& asmb, fe::Kinematics kin) {
    asmb.stiffness(); // cache before capture so evaluations share one K0
    return [&asmb, kin](const VecX& u) { return asmb.nonlinear_force(u, kin); };
}

Real step_lambda(const VecX& phi, Real thickness, Real ratio) {
    const Real m = phi.lpNorm<Eigen::Infinity>();
    if (m <= 0) throw std::invalid_argument("zero mode shape");
    return ratio * thickness / m;
}

CouplingCoefficients step_single(const ForceEval& f_nl, const ModeSet& modes, Index p, Real lambda) {
    const VecX x = lambda * modes.phi.col(p);
    const VecX fp = f_nl(x), fm = f_nl(-x);
    const VecX even = project(modes, fp + fm); // 2 lambda^2 alpha
    const VecX odd = project(modes, fp - fm);  // 2 lambda^3 beta

    CouplingCoefficients cc({p}, all_modes(modes));
    for (Index k = 0; k < modes.count(); ++k) {
        cc.alpha(k, 0, 0) = even[k] / (2 * lambda * lambda);
        cc.beta(k, 0, 0, 0) = odd[k] / (2 * lambda * lambda * lambda);
    }
    return cc;
}

CouplingCoefficients step_pair(const ForceEval& f_nl, const ModeSet& modes, Index p, Index r, Real lambda_p,
                               Real lambda_r) {
    if (p == r) throw std::invalid_argument("step_pair needs two distinct modes");
    if (p > r) std::swap(p, r);
    const VecX xp = lambda_p * modes.phi.col(p);
    const VecX xr = lambda_r * modes.phi.col(r);

    const VecX fpp = f_nl(xp), fpm = f_nl(-xp);
    const VecX frp = f_nl(xr), frm = f_nl(-xr);
    const VecX fsp = f_nl(xp + xr), fsm = f_nl(-xp - xr);
    const VecX fdp = f_nl(xp - xr), fdm = f_nl(xr - xp);

    const VecX even_p = project(modes, fpp + fpm);
    const VecX even_r = project(modes, frp + frm);
    const VecX even_s = project(modes, fsp + fsm);
    const VecX odd_p = project(modes, fpp - fpm) / 2;  // lp^3 Bppp
    const VecX odd_r = project(modes, frp - frm) / 2;  // lr^3 Brrr
    const VecX odd_s = project(modes, fsp - fsm) / 2;  // sum over all cubics
    const VecX odd_d = project(modes, fdp - fdm) / 2;  // alternating signs in r

    CouplingCoefficients cc({p, r}, all_modes(modes));
    const Real lp = lambda_p, lr = lambda_r;
    for (Index k = 0; k < modes.count(); ++k) {
        cc.alpha(k, 0, 0) = even_p[k] / (2 * lp * lp);
        cc.alpha(k, 1, 1) = even_r[k] / (2 * lr * lr);
        cc.alpha(k, 0, 1) = (even_s[k] - even_p[k] - even_r[k]) / (2 * lp * lr);
        cc.beta(k, 0, 0, 0) = odd_p[k] / (lp * lp * lp);
        cc.beta(k, 1, 1, 1) = odd_r[k] / (lr * lr * lr);
        // odd_s = lp^3 Bppp + 3 lp^2 lr Bppr + 3 lp lr^2 Bprr + lr^3 Brrr
        // odd_d = lp^3 Bppp - 3 lp^2 lr Bppr + 3 lp lr^2 Bprr - lr^3 Brrr
        // Upper-triangular betas carry the monomial multiplicity (3 here).
        cc.beta(k, 0, 0, 1) = ((odd_s[k] - odd_d[k]) / 2 - odd_r[k]) / (lp * lp * lr);
        cc.beta(k, 0, 1, 1) = ((odd_s[k] + odd_d[k]) / 2 - odd_p[k]) / (lp * lr * lr);
    }
    return cc;
}

CouplingCoefficients step_subset(const ForceEval& f_nl, const ModeSet& modes, const std::vector<Index>& subset,
                                 const std::vector<Real>& lambdas) {
    const Index n = static_cast<Index>(subset.size());
    if (lambdas.size() != subset.size()) throw std::invalid_argument("one lambda per subset mode required");
    for (Index a = 1; a < n; ++a)
        if (subset[static_cast<std::size_t>(a - 1)] >= subset[static_cast<std::size_t>(a)])
            throw std::invalid_argument("subset must be strictly increasing");

    CouplingCoefficients cc(subset, all_modes(modes));

    // Cached odd parts of the single shapes for the triple inclusion-exclusion.
    std::vector<VecX> odd_single(static_cast<std::size_t>(n));
    const auto shape = [&](Index a) {
        return (lambdas[static_cast<std::size_t>(a)] * modes.phi.col(subset[static_cast<std::size_t>(a)])).eval();
    };

    for (Index a = 0; a < n; ++a) {
        const VecX x = shape(a);
        const VecX fp = f_nl(x), fm = f_nl(-x);
        odd_single[static_cast<std::size_t>(a)] = (fp - fm) / 2;
        const Real l = lambdas[static_cast<std::size_t>(a)];
        const VecX even = project(modes, fp + fm);
        const VecX odd = project(modes, fp - fm);
        for (Index k = 0; k < modes.count(); ++k) {
            cc.alpha(k, a, a) = even[k] / (2 * l * l);
            cc.beta(k, a, a, a) = odd[k] / (2 * l * l * l);
        }
    }

    std::vector<VecX> odd_pair_sum(static_cast<std::size_t>(n * n)); // odd part at x_a + x_b, a < b
    for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b) {
            const VecX xa = shape(a), xb = shape(b);
            const VecX fsp = f_nl(xa + xb), fsm = f_nl(-xa - xb);
            const VecX fdp = f_nl(xa - xb), fdm = f_nl(xb - xa);
            odd_pair_sum[static_cast<std::size_t>(a * n + b)] = (fsp - fsm) / 2;
            const Real la = lambdas[static_cast<std::size_t>(a)], lb = lambdas[static_cast<std::size_t>(b)];
            const VecX even_s = project(modes, fsp + fsm);
            const VecX odd_s = project(modes, (fsp - fsm) / 2);
            const VecX odd_d = project(modes, (fdp - fdm) / 2);
            const VecX odd_a = project(modes, odd_single[static_cast<std::size_t>(a)]);
            const VecX odd_b = project(modes, odd_single[static_cast<std::size_t>(b)]);
            for (Index k = 0; k < modes.count(); ++k) {
                const Real even_aa = 2 * la * la * cc.alpha(k, a, a);
                const Real even_bb = 2 * lb * lb * cc.alpha(k, b, b);
                cc.alpha(k, a, b) = (even_s[k] - even_aa - even_bb) / (2 * la * lb);
                cc.beta(k, a, a, b) = ((odd_s[k] - odd_d[k]) / 2 - odd_b[k]) / (la * la * lb);
                cc.beta(k, a, b, b) = ((odd_s[k] + odd_d[k]) / 2 - odd_a[k]) / (la * lb * lb);
            }
        }

    for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b)
            for (Index c = b + 1; c < n; ++c) {
                const VecX x = (shape(a) + shape(b) + shape(c)).eval();
                const VecX odd_t = (f_nl(x) - f_nl((-x).eval())) / 2;
                // 6 B_abc = odd(a+b+c) - odd(a+b) - odd(a+c) - odd(b+c)
                //           + odd(a) + odd(b) + odd(c)
                const VecX comb = odd_t - odd_pair_sum[static_cast<std::size_t>(a * n + b)] -
                                  odd_pair_sum[static_cast<std::size_t>(a * n + c)] -
                                  odd_pair_sum[static_cast<std::size_t>(b * n + c)] +
                                  odd_single[static_cast<std::size_t>(a)] + odd_single[static_cast<std::size_t>(b)] +
                                  odd_single[static_cast<std::size_t>(c)];
                const VecX proj = project(modes, comb);
                const Real den = lambdas[static_cast<std::size_t>(a)] * lambdas[static_cast<std::size_t>(b)] *
                                 lambdas[static_cast<std::size_t>(c)];
                for (Index k = 0; k < modes.count(); ++k) cc.beta(k, a, b, c) = proj[k] / den;
            }
    return cc;
}

std::vector<SweepPoint> amplitude_sweep(const ForceEval& f_nl, const ModeSet& modes, Index p,
                                        const std::vector<Real>& lambdas) {
    std::vector<SweepPoint> out;
    out.reserve(lambdas.size());
    for (const Real l : lambdas) {
        const CouplingCoefficients cc = step_single(f_nl, modes, p, l);
        // The self-projection of a symmetric mode vanishes by parity, so the
        // stable quadratic observable is the dominant projection instead.
        Real adom = 0;
        for (Index k = 0; k < modes.count(); ++k)
            if (std::abs(cc.alpha(k, 0, 0)) > std::abs(adom)) adom = cc.alpha(k, 0, 0);
        out.push_back({l, adom, cc.beta(p, 0, 0, 0)});
    }
    return out;
}

} // namespace romforge::step
