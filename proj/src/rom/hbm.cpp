#include "romforge/rom/hbm.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace romforge::rom {

namespace {

Index alias_free_samples(Index H) {
    Index nt = 8;
    while (nt < 8 * H)
        nt *= 2;
    return nt;
}

} // namespace

HarmonicBasis::HarmonicBasis(Index harmonics) : H(harmonics), nc(2 * harmonics + 1), nt(alias_free_samples(harmonics)) {
    if (H < 1)
        throw std::invalid_argument("harmonic basis needs H >= 1");
    synth = MatX::Zero(nt, nc);
    analyze = MatX::Zero(nc, nt);
    dtheta = MatX::Zero(nc, nc);
    for (Index i = 0; i < nt; ++i) {
        const Real theta = 2.0 * std::numbers::pi * static_cast<Real>(i) / static_cast<Real>(nt);
        synth(i, 0) = 1.0;
        analyze(0, i) = 1.0 / static_cast<Real>(nt);
        for (Index h = 1; h <= H; ++h) {
            const Real c = std::cos(h * theta);
            const Real s = std::sin(h * theta);
            synth(i, slot_cos(h)) = c;
            synth(i, slot_sin(h)) = s;
            analyze(slot_cos(h), i) = 2.0 * c / static_cast<Real>(nt);
            analyze(slot_sin(h), i) = 2.0 * s / static_cast<Real>(nt);
        }
    }
    // d/dtheta (ac cos + as sin) = h as cos - h ac sin.
    for (Index h = 1; h <= H; ++h) {
        dtheta(slot_cos(h), slot_sin(h)) = static_cast<Real>(h);
        dtheta(slot_sin(h), slot_cos(h)) = -static_cast<Real>(h);
    }
}

HbmProblem::HbmProblem(OscillatorSystem sys, Index harmonics) : sys_(std::move(sys)), basis_(harmonics) {}

VecX HbmProblem::dof_samples(const VecX& U, Index k) const {
    return basis_.synth * U.segment(k * basis_.nc, basis_.nc);
}

VecX HbmProblem::residual(const VecX& U, Real Omega) const {
    const Index n = sys_.n();
    const Index nc = basis_.nc;
    const Index nt = basis_.nt;

    // Time samples of each dof and its velocity.
    MatX q(nt, n), qd(nt, n);
    for (Index k = 0; k < n; ++k) {
        const VecX coeffs = U.segment(k * nc, nc);
        q.col(k) = basis_.synth * coeffs;
        qd.col(k) = Omega * (basis_.synth * (basis_.dtheta * coeffs));
    }

    // Nonlinear force samples.
    MatX gs = MatX::Zero(nt, n);
    for (const auto& t : sys_.quad)
        gs.col(t.k) += t.c * q.col(t.i).cwiseProduct(q.col(t.j));
    for (const auto& t : sys_.cubic)
        gs.col(t.k) += t.c * q.col(t.i).cwiseProduct(q.col(t.j)).cwiseProduct(q.col(t.l));
    for (const auto& t : sys_.vel)
        gs.col(t.k) += t.c * q.col(t.i).cwiseProduct(qd.col(t.j)).cwiseProduct(qd.col(t.l));

    VecX R(n * nc);
    for (Index k = 0; k < n; ++k) {
        const VecX coeffs = U.segment(k * nc, nc);
        const VecX gharm = basis_.analyze * gs.col(k);
        const Real wk2 = sys_.omega[k] * sys_.omega[k];
        const Real damp = 2.0 * sys_.zeta[k] * sys_.omega[k];
        VecX r(nc);
        r[0] = wk2 * coeffs[0] + gharm[0];
        for (Index h = 1; h <= basis_.H; ++h) {
            const Real ac = coeffs[basis_.slot_cos(h)];
            const Real as = coeffs[basis_.slot_sin(h)];
            const Real hw = static_cast<Real>(h) * Omega;
            r[basis_.slot_cos(h)] = (wk2 - hw * hw) * ac + damp * hw * as + gharm[basis_.slot_cos(h)];
            r[basis_.slot_sin(h)] = (wk2 - hw * hw) * as - damp * hw * ac + gharm[basis_.slot_sin(h)];
        }
        r[basis_.slot_cos(1)] -= sys_.forcing[k];
        R.segment(k * nc, nc) = r;
    }
    return R;
}

MatX HbmProblem::jacobian_U(const VecX& U, Real Omega) const {
    const Index n = sys_.n();
    const Index nc = basis_.nc;
    const Index nt = basis_.nt;

    MatX q(nt, n), qd(nt, n);
    for (Index k = 0; k < n; ++k) {
        const VecX coeffs = U.segment(k * nc, nc);
        q.col(k) = basis_.synth * coeffs;
        qd.col(k) = Omega * (basis_.synth * (basis_.dtheta * coeffs));
    }

    // Sample-wise partials dg_k/dq_m and dg_k/dqd_m, stored per (k, m) pair.
    MatX J = MatX::Zero(n * nc, n * nc);
    const MatX synth_d = basis_.synth * basis_.dtheta; // samples of d/dtheta

    // Accumulate per (k, m): diag(w) chain rule through the time grid.
    std::vector<VecX> dq(static_cast<std::size_t>(n * n), VecX()),
        dqd(static_cast<std::size_t>(n * n), VecX());
    auto at = [n](Index k, Index m) { return static_cast<std::size_t>(k * n + m); };
    auto addq = [&](Index k, Index m, const VecX& w) {
        auto& slot = dq[at(k, m)];
        if (slot.size() == 0)
            slot = w;
        else
            slot += w;
    };
    auto addqd = [&](Index k, Index m, const VecX& w) {
        auto& slot = dqd[at(k, m)];
        if (slot.size() == 0)
            slot = w;
        else
            slot += w;
    };

    for (const auto& t : sys_.quad) {
        addq(t.k, t.i, t.c * q.col(t.j));
        addq(t.k, t.j, t.c * q.col(t.i));
    }
    for (const auto& t : sys_.cubic) {
        addq(t.k, t.i, t.c * q.col(t.j).cwiseProduct(q.col(t.l)));
        addq(t.k, t.j, t.c * q.col(t.i).cwiseProduct(q.col(t.l)));
        addq(t.k, t.l, t.c * q.col(t.i).cwiseProduct(q.col(t.j)));
    }
    for (const auto& t : sys_.vel) {
        addq(t.k, t.i, t.c * qd.col(t.j).cwiseProduct(qd.col(t.l)));
        addqd(t.k, t.j, t.c * q.col(t.i).cwiseProduct(qd.col(t.l)));
        addqd(t.k, t.l, t.c * q.col(t.i).cwiseProduct(qd.col(t.j)));
    }

    for (Index k = 0; k < n; ++k)
        for (Index m = 0; m < n; ++m) {
            MatX block = MatX::Zero(nc, nc);
            const auto& wq = dq[at(k, m)];
            if (wq.size() != 0)
                block += basis_.analyze * wq.asDiagonal() * basis_.synth;
            const auto& wv = dqd[at(k, m)];
            if (wv.size() != 0)
                block += Omega * (basis_.analyze * wv.asDiagonal() * synth_d);
            J.block(k * nc, m * nc, nc, nc) = block;
        }

    for (Index k = 0; k < n; ++k) {
        const Real wk2 = sys_.omega[k] * sys_.omega[k];
        const Real damp = 2.0 * sys_.zeta[k] * sys_.omega[k];
        J(k * nc, k * nc) += wk2;
        for (Index h = 1; h <= basis_.H; ++h) {
            const Real hw = static_cast<Real>(h) * Omega;
            const Index rc = k * nc + basis_.slot_cos(h);
            const Index rs = k * nc + basis_.slot_sin(h);
            J(rc, rc) += wk2 - hw * hw;
            J(rc, rs) += damp * hw;
            J(rs, rs) += wk2 - hw * hw;
            J(rs, rc) -= damp * hw;
        }
    }
    return J;
}

VecX HbmProblem::jacobian_Omega(const VecX& U, Real Omega) const {
    const Index n = sys_.n();
    const Index nc = basis_.nc;
    const Index nt = basis_.nt;

    MatX q(nt, n), qd(nt, n), qd_dOmega(nt, n);
    for (Index k = 0; k < n; ++k) {
        const VecX coeffs = U.segment(k * nc, nc);
        q.col(k) = basis_.synth * coeffs;
        qd_dOmega.col(k) = basis_.synth * (basis_.dtheta * coeffs); // dqd/dOmega
        qd.col(k) = Omega * qd_dOmega.col(k);
    }

    // d g / d Omega enters only through qd = Omega * dq/dtheta.
    MatX gs = MatX::Zero(nt, n);
    for (const auto& t : sys_.vel) {
        gs.col(t.k) += t.c * q.col(t.i).cwiseProduct(qd_dOmega.col(t.j)).cwiseProduct(qd.col(t.l));
        gs.col(t.k) += t.c * q.col(t.i).cwiseProduct(qd.col(t.j)).cwiseProduct(qd_dOmega.col(t.l));
    }

    VecX dR(n * nc);
    for (Index k = 0; k < n; ++k) {
        const VecX coeffs = U.segment(k * nc, nc);
        const VecX gharm = basis_.analyze * gs.col(k);
        const Real damp = 2.0 * sys_.zeta[k] * sys_.omega[k];
        VecX r = gharm;
        for (Index h = 1; h <= basis_.H; ++h) {
            const Real ac = coeffs[basis_.slot_cos(h)];
            const Real as = coeffs[basis_.slot_sin(h)];
            const Real hr = static_cast<Real>(h);
            r[basis_.slot_cos(h)] += -2.0 * hr * hr * Omega * ac + damp * hr * as;
            r[basis_.slot_sin(h)] += -2.0 * hr * hr * Omega * as - damp * hr * ac;
        }
        dR.segment(k * nc, nc) = r;
    }
    return dR;
}

VecX HbmProblem::linear_response(Real Omega) const {
    const Index n = sys_.n();
    const Index nc = basis_.nc;
    VecX U = VecX::Zero(n * nc);
    for (Index k = 0; k < n; ++k) {
        const Real wk2 = sys_.omega[k] * sys_.omega[k];
        const Real damp = 2.0 * sys_.zeta[k] * sys_.omega[k];
        const Real a = wk2 - Omega * Omega;
        const Real b = damp * Omega;
        const Real det = a * a + b * b;
        if (det <= 0)
            continue;
        // (a  b; -b  a) [ac; as] = [F; 0]
        U[k * nc + basis_.slot_cos(1)] = sys_.forcing[k] * a / det;
        U[k * nc + basis_.slot_sin(1)] = sys_.forcing[k] * b / det;
    }
    return U;
}

VecX HbmProblem::solve_fixed(Real Omega, const VecX& U0, Real tol, int max_iter) const {
    VecX U = U0.size() == n_unknowns() ? U0 : linear_response(Omega);
    const Real fscale = std::max(sys_.forcing.cwiseAbs().maxCoeff(),
                                 sys_.omega.cwiseAbs().maxCoeff() * sys_.omega.cwiseAbs().maxCoeff() * 1e-16);
    for (int it = 0; it < max_iter; ++it) {
        const VecX R = residual(U, Omega);
        const Real rn = R.norm();
        if (!std::isfinite(rn))
            throw std::runtime_error("harmonic balance: residual diverged");
        if (rn <= tol * fscale)
            return U;
        const MatX J = jacobian_U(U, Omega);
        const VecX dU = J.partialPivLu().solve(-R);
        U += dU;
    }
    const Real rn = residual(U, Omega).norm();
    if (rn <= 1e2 * tol * fscale)
        return U;
    throw std::runtime_error("harmonic balance: Newton did not converge");
}

Real HbmProblem::amplitude(const VecX& U, const VecX& weights, Index refine) const {
    const Index n = sys_.n();
    const Index nc = basis_.nc;
    const Index nfine = basis_.nt * std::max<Index>(refine, 1);
    Real peak = 0;
    for (Index i = 0; i < nfine; ++i) {
        const Real theta = 2.0 * std::numbers::pi * static_cast<Real>(i) / static_cast<Real>(nfine);
        Real v = 0;
        for (Index k = 0; k < n; ++k) {
            const VecX coeffs = U.segment(k * nc, nc);
            Real qk = coeffs[0];
            for (Index h = 1; h <= basis_.H; ++h)
                qk += coeffs[basis_.slot_cos(h)] * std::cos(h * theta) + coeffs[basis_.slot_sin(h)] * std::sin(h * theta);
            v += weights[k] * qk;
        }
        peak = std::max(peak, std::abs(v));
    }
    return peak;
}

} // namespace romforge::rom
