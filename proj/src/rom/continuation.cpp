#include "romforge/rom/continuation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace romforge::rom {

namespace {

struct Corrected {
    VecX U;
    Real omega;
    int iterations;
    bool ok;
};

/// Bordered Newton: R(U, omega) = 0 plus the arclength plane
/// t . (y - y_pred) = 0 in scaled coordinates y = [U/su; omega/sw].
Corrected correct(const HbmProblem& hbm, const VecX& U0, Real omega0, const VecX& tU, Real tw, const VecX& Upred,
                  Real wpred, Real su, Real sw, Real tol, int max_iter, Real fscale) {
    const Index nu = hbm.n_unknowns();
    VecX U = U0;
    Real omega = omega0;
    MatX A(nu + 1, nu + 1);
    VecX rhs(nu + 1);
    for (int it = 1; it <= max_iter; ++it) {
        const VecX R = hbm.residual(U, omega);
        const Real g = (tU.cwiseProduct(U - Upred)).sum() / su + tw * (omega - wpred) / sw;
        if (!std::isfinite(R.norm()))
            return {U, omega, it, false};
        if (R.norm() <= tol * fscale && std::abs(g) <= 1e-12)
            return {U, omega, it, true};
        A.topLeftCorner(nu, nu) = hbm.jacobian_U(U, omega);
        A.topRightCorner(nu, 1) = hbm.jacobian_Omega(U, omega);
        A.bottomLeftCorner(1, nu) = (tU / su).transpose();
        A(nu, nu) = tw / sw;
        rhs.head(nu) = -R;
        rhs[nu] = -g;
        const VecX d = A.partialPivLu().solve(rhs);
        if (!d.allFinite())
            return {U, omega, it, false};
        U += d.head(nu);
        omega += d[nu];
    }
    return {U, omega, max_iter, false};
}

} // namespace

FrfBranch continue_frf(const HbmProblem& hbm, const VecX& probe_weights, const FrfOptions& opt) {
    if (!(opt.omega_max > opt.omega_min))
        throw std::invalid_argument("frf continuation: empty frequency window");
    const auto& sys = hbm.system();
    const Real fscale =
        std::max(sys.forcing.cwiseAbs().maxCoeff(), sys.omega.maxCoeff() * sys.omega.maxCoeff() * 1e-16);

    FrfBranch branch;
    auto push = [&](const VecX& U, Real omega) {
        branch.points.push_back({omega, U, hbm.amplitude(U, probe_weights)});
    };

    const Real w0 = opt.forward ? opt.omega_min : opt.omega_max;
    const Real dw0 = (opt.forward ? 1.0 : -1.0) * 1e-3 * (opt.omega_max - opt.omega_min);
    VecX Ua = hbm.solve_fixed(w0);
    VecX Ub = hbm.solve_fixed(w0 + dw0, Ua);
    push(Ua, w0);
    push(Ub, w0 + dw0);

    Real ds = opt.ds0;
    VecX Uprev = Ua, Ucur = Ub;
    Real wprev = w0, wcur = w0 + dw0;
    const Real margin = 1e-9 * (opt.omega_max - opt.omega_min);

    for (int step = 0; step < opt.max_steps; ++step) {
        // Scales follow the branch so the tangent stays balanced near folds.
        const Real su = std::max(Ucur.cwiseAbs().maxCoeff(), 1e-30);
        const Real sw = std::max(std::abs(wcur), 1e-30);
        VecX tU = (Ucur - Uprev) / su;
        Real tw = (wcur - wprev) / sw;
        const Real tn = std::sqrt(tU.squaredNorm() + tw * tw);
        if (tn <= 0)
            break;
        tU /= tn;
        tw /= tn;

        bool accepted = false;
        for (int attempt = 0; attempt < 10 && !accepted; ++attempt) {
            const VecX Upred = Ucur + ds * su * tU;
            const Real wpred = wcur + ds * sw * tw;
            const Corrected c =
                correct(hbm, Upred, wpred, tU, tw, Upred, wpred, su, sw, opt.newton_tol, opt.newton_max, fscale);
            if (c.ok) {
                if ((c.omega - wcur) * (wcur - wprev) < 0)
                    branch.traversed_fold = true;
                Uprev = Ucur;
                wprev = wcur;
                Ucur = c.U;
                wcur = c.omega;
                push(Ucur, wcur);
                accepted = true;
                if (c.iterations <= 4)
                    ds = std::min(ds * 1.4, opt.ds_max);
                else if (c.iterations >= opt.newton_max - 2)
                    ds = std::max(ds * 0.6, opt.ds_min);
            } else {
                ds *= 0.4;
                if (ds < opt.ds_min)
                    return branch;
            }
        }
        if (!accepted)
            return branch;
        if (wcur < opt.omega_min - margin || wcur > opt.omega_max + margin)
            break;
    }
    return branch;
}

namespace {

/// Embedding of the cosine-plus-constant subspace into the full coefficient
/// layout: per dof, slots [a0, ac_1 .. ac_H].
struct CosineSpace {
    Index n, H, nc, ncc;
    explicit CosineSpace(const HbmProblem& hbm)
        : n(hbm.system().n()), H(hbm.basis().H), nc(hbm.basis().nc), ncc(hbm.basis().H + 1) {}

    VecX embed(const VecX& Uc) const {
        VecX U = VecX::Zero(n * nc);
        for (Index k = 0; k < n; ++k) {
            U[k * nc] = Uc[k * ncc];
            for (Index h = 1; h <= H; ++h)
                U[k * nc + 2 * h - 1] = Uc[k * ncc + h];
        }
        return U;
    }
    VecX restrict_rows(const VecX& R) const {
        VecX r(n * ncc);
        for (Index k = 0; k < n; ++k) {
            r[k * ncc] = R[k * nc];
            for (Index h = 1; h <= H; ++h)
                r[k * ncc + h] = R[k * nc + 2 * h - 1];
        }
        return r;
    }
    MatX restrict_matrix(const MatX& J) const {
        MatX out(n * ncc, n * ncc);
        for (Index k = 0; k < n; ++k)
            for (Index m = 0; m < n; ++m) {
                for (Index a = 0; a < ncc; ++a)
                    for (Index b = 0; b < ncc; ++b) {
                        const Index ra = a == 0 ? 0 : 2 * a - 1;
                        const Index cb = b == 0 ? 0 : 2 * b - 1;
                        out(k * ncc + a, m * ncc + b) = J(k * nc + ra, m * nc + cb);
                    }
            }
        return out;
    }
};

} // namespace

std::vector<BackbonePoint> trace_backbone(const OscillatorSystem& sys, Index harmonics, Index master,
                                          const std::vector<Real>& amplitudes, const VecX& probe_weights) {
    if (sys.zeta.cwiseAbs().maxCoeff() != 0 || sys.forcing.cwiseAbs().maxCoeff() != 0)
        throw std::invalid_argument("backbone requires an unforced, undamped system");
    if (amplitudes.empty())
        return {};

    const HbmProblem hbm(sys, harmonics);
    const CosineSpace cs(hbm);
    const Index nun = cs.n * cs.ncc; // cosine unknowns; omega is one more
    const Index master_slot = master * cs.ncc + 1;

    std::vector<BackbonePoint> curve;
    VecX Uc = VecX::Zero(nun);
    Real omega = sys.omega[master];

    // Secant extrapolation in the amplitude parameter between grid points.
    VecX Uc_prev;
    Real omega_prev = 0, a_prev = 0, a_cur = 0;
    bool have_two = false;

    for (std::size_t ia = 0; ia < amplitudes.size(); ++ia) {
        const Real a = amplitudes[ia];
        VecX Ug = Uc;
        Real wg = omega;
        if (have_two && a_cur != a_prev) {
            const Real f = (a - a_cur) / (a_cur - a_prev);
            Ug = Uc + (Uc - Uc_prev) * f;
            wg = omega + (omega - omega_prev) * f;
        }
        Ug[master_slot] = a;

        // Newton on [cosine residual rows; master coefficient - a].
        MatX A(nun + 1, nun + 1);
        VecX rhs(nun + 1);
        bool ok = false;
        const Real fscale = std::max(sys.omega[master] * sys.omega[master] * std::abs(a), 1e-300);
        for (int it = 0; it < 60; ++it) {
            const VecX Ufull = cs.embed(Ug);
            const VecX R = cs.restrict_rows(hbm.residual(Ufull, wg));
            const Real gk = Ug[master_slot] - a;
            if (R.norm() <= 1e-12 * fscale && std::abs(gk) <= 1e-14 * std::abs(a)) {
                ok = true;
                break;
            }
            A.topLeftCorner(nun, nun) = cs.restrict_matrix(hbm.jacobian_U(Ufull, wg));
            A.topRightCorner(nun, 1) = cs.restrict_rows(hbm.jacobian_Omega(Ufull, wg));
            A.bottomRows(1).setZero();
            A(nun, master_slot) = 1.0;
            rhs.head(nun) = -R;
            rhs[nun] = -gk;
            const VecX d = A.partialPivLu().solve(rhs);
            if (!d.allFinite())
                break;
            Ug += d.head(nun);
            wg += d[nun];
        }
        if (!ok)
            throw std::runtime_error("backbone: Newton failed at amplitude " + std::to_string(a));

        if (!curve.empty()) {
            Uc_prev = Uc;
            omega_prev = omega;
            a_prev = a_cur;
            have_two = true;
        }
        Uc = Ug;
        omega = wg;
        a_cur = a;

        const VecX Ufull = cs.embed(Uc);
        curve.push_back({a, omega, Ufull, hbm.amplitude(Ufull, probe_weights)});
    }
    return curve;
}

Real backbone_omega_at(const std::vector<BackbonePoint>& curve, Real amplitude) {
    if (curve.size() < 2)
        throw std::invalid_argument("backbone interpolation needs at least two points");
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const Real a0 = curve[i - 1].amplitude, a1 = curve[i].amplitude;
        if ((amplitude >= a0 && amplitude <= a1) || (amplitude <= a0 && amplitude >= a1)) {
            const Real f = a1 == a0 ? 0.0 : (amplitude - a0) / (a1 - a0);
            return curve[i - 1].omega + f * (curve[i].omega - curve[i - 1].omega);
        }
    }
    throw std::out_of_range("backbone interpolation: amplitude outside curve range");
}

} // namespace romforge::rom
