#include "romforge/fe/static_solve.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <stdexcept>

namespace romforge::fe {

namespace {

Real sparse_inf_norm(const SpMat& A) {
    Real m = 0;
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m;
}

struct Partition {
    std::vector<Index> to_unknown; // free dof -> unknown index or -1
    std::vector<Index> unknowns;   // unknown index -> free dof
};

Partition make_partition(Index n_free, const std::vector<std::pair<Index, Real>>& prescribed) {
    Partition p;
    p.to_unknown.assign(static_cast<std::size_t>(n_free), 0);
    for (const auto& [dof, val] : prescribed) {
        (void)val;
        if (dof < 0 || dof >= n_free) throw std::invalid_argument("prescribed dof out of range");
        p.to_unknown[static_cast<std::size_t>(dof)] = -1;
    }
    for (Index i = 0; i < n_free; ++i)
        if (p.to_unknown[static_cast<std::size_t>(i)] == 0) {
            p.to_unknown[static_cast<std::size_t>(i)] = static_cast<Index>(p.unknowns.size());
            p.unknowns.push_back(i);
        }
    return p;
}

SpMat reduce_matrix(const SpMat& A, const Partition& p) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(A.nonZeros()));
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            const Index r = p.to_unknown[static_cast<std::size_t>(it.row())];
            const Index c = p.to_unknown[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
        }
    SpMat R(static_cast<Index>(p.unknowns.size()), static_cast<Index>(p.unknowns.size()));
    R.setFromTriplets(trips.begin(), trips.end());
    return R;
}

bool newton(const Assembler& asmb, const VecX* f_ext, const StaticOptions& opts, const Partition& part,
            Real floor_tol, VecX& u, int& iters, Real& res) {
    const auto residual_unknown = [&](const VecX& r_full) {
        VecX r(static_cast<Index>(part.unknowns.size()));
        for (std::size_t i = 0; i < part.unknowns.size(); ++i) {
            const Index g = part.unknowns[i];
            r[static_cast<Index>(i)] = r_full[g] - (f_ext ? (*f_ext)[g] : 0.0);
        }
        return r;
    };

    VecX r = residual_unknown(asmb.internal_force(u, opts.kinematics));
    const Real r0 = r.norm();
    const Real tol = std::max(opts.rel_tol * r0, floor_tol);
    res = r0;
    for (iters = 0; iters < opts.max_iterations; ++iters) {
        if (res <= tol) return true;
        if (!std::isfinite(res) || res > 1e6 * (r0 + floor_tol)) return false;
        const SpMat Kt = reduce_matrix(asmb.tangent(u, opts.kinematics), part);
        Eigen::SimplicialLDLT<SpMat> ldlt(Kt);
        if (ldlt.info() != Eigen::Success) return false;
        const VecX du = ldlt.solve(-r);
        for (std::size_t i = 0; i < part.unknowns.size(); ++i) u[part.unknowns[i]] += du[static_cast<Index>(i)];
        r = residual_unknown(asmb.internal_force(u, opts.kinematics));
        res = r.norm();
    }
    return res <= tol;
}

} // namespace

StaticResult static_solve(const Assembler& asmb, const std::vector<std::pair<Index, Real>>& prescribed,
                          const VecX* f_ext, const StaticOptions& opts) {
    const Partition part = make_partition(asmb.n_free(), prescribed);

    Real char_u = 0;
    for (const auto& [dof, val] : prescribed) {
        (void)dof;
        char_u = std::max(char_u, std::abs(val));
    }
    const Real floor_tol = 1e-14 * sparse_inf_norm(asmb.stiffness()) * std::max(char_u, 1e-30);

    const auto apply_prescribed = [&](VecX& u, Real scale) {
        for (const auto& [dof, val] : prescribed) u[dof] = scale * val;
    };

    VecX u = VecX::Zero(asmb.n_free());
    apply_prescribed(u, 1.0);
    int iters = 0;
    Real res = 0;
    bool ok = part.unknowns.empty() || newton(asmb, f_ext, opts, part, floor_tol, u, iters, res);

    if (!ok) {
        // Progressive ramp of the prescribed values for amplitudes outside the
        // direct Newton basin; each stage warm-starts the next.
        u.setZero();
        int total_iters = 0;
        ok = true;
        const int stages = 8;
        for (int s = 1; s <= stages && ok; ++s) {
            const Real scale = static_cast<Real>(s) / stages;
            apply_prescribed(u, scale);
            VecX f_scaled;
            const VecX* fp = nullptr;
            if (f_ext) {
                f_scaled = scale * (*f_ext);
                fp = &f_scaled;
            }
            int it = 0;
            ok = newton(asmb, fp, opts, part, floor_tol, u, it, res);
            total_iters += it;
        }
        iters = total_iters;
        if (!ok) throw std::runtime_error("static solve failed to converge");
    }

    StaticResult out;
    out.u = u;
    out.iterations = iters;
    out.residual = res;
    const VecX f_full = asmb.internal_force(u, opts.kinematics);
    out.reactions.resize(static_cast<Index>(prescribed.size()));
    for (std::size_t i = 0; i < prescribed.size(); ++i) {
        const Index g = prescribed[i].first;
        out.reactions[static_cast<Index>(i)] = f_full[g] - (f_ext ? (*f_ext)[g] : 0.0);
    }
    return out;
}

} // namespace romforge::fe
