#include "romforge/modal/modal.hpp"

#include <Eigen/SparseCholesky>
#include <lapacke.h>

#include <cmath>
#include <stdexcept>

namespace romforge::modal {

namespace {

constexpr Real kTwoPi = 6.28318530717958647692;

ModeSet dense_modes(const SpMat& K, const SpMat& M, Index count) {
    const Index n = K.rows();
    MatX A = MatX(K), B = MatX(M);
    VecX w(n);
    const lapack_int info = LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'V', 'L', static_cast<lapack_int>(n),
                                           A.data(), static_cast<lapack_int>(n), B.data(),
                                           static_cast<lapack_int>(n), w.data());
    if (info != 0) throw std::runtime_error("dense eigensolve failed, info=" + std::to_string(info));
    const Index m = count < 0 ? n : std::min(count, n);
    ModeSet out;
    out.omega.resize(m);
    out.phi = A.leftCols(m); // dsygvd returns Z with Z^T M Z = I
    for (Index i = 0; i < m; ++i) out.omega[i] = std::sqrt(std::max(w[i], 0.0));
    return out;
}

/// Shift-invert Lanczos in the M inner product on Op = (K - sigma M)^{-1} M.
/// Full reorthogonalization; basis grows until the requested pairs converge.
ModeSet lanczos_modes(const SpMat& K, const SpMat& M, Index count, Real residual_tol) {
    const Index n = K.rows();
    Real k_scale = 0, m_scale = 0;
    for (Index i = 0; i < n; ++i) {
        k_scale = std::max(k_scale, std::abs(K.coeff(i, i)));
        m_scale = std::max(m_scale, std::abs(M.coeff(i, i)));
    }
    // Negative shift keeps K - sigma M positive definite even for free meshes.
    const Real sigma = -1e-6 * k_scale / std::max(m_scale, 1e-300);

    const SpMat Kshift = (K - sigma * M).eval();
    Eigen::SimplicialLDLT<SpMat> ldlt(Kshift);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("factorization failed in Lanczos");

    const Index max_basis = std::min<Index>(n, std::max<Index>(3 * count + 30, 60));
    MatX V(n, max_basis);
    MatX MV(n, max_basis); // cached M v_j columns
    VecX alpha = VecX::Zero(max_basis), beta = VecX::Zero(max_basis);

    // Deterministic start vector.
    VecX v = VecX::Ones(n);
    for (Index i = 0; i < n; ++i) v[i] += 0.5 * std::sin(static_cast<Real>(i + 1));
    VecX Mv = M * v;
    v /= std::sqrt(v.dot(Mv));
    V.col(0) = v;
    MV.col(0) = M * v;

    Index built = 0;
    for (Index j = 0; j < max_basis; ++j) {
        VecX w = ldlt.solve(MV.col(j));
        alpha[j] = w.dot(MV.col(j));
        // Full reorthogonalization against the whole basis, twice for safety.
        for (int pass = 0; pass < 2; ++pass) {
            const VecX proj = MV.leftCols(j + 1).transpose() * w;
            w.noalias() -= V.leftCols(j + 1) * proj;
        }
        const VecX Mw = M * w;
        const Real b = std::sqrt(std::max(w.dot(Mw), 0.0));
        built = j + 1;
        if (j + 1 < max_basis) {
            if (b < 1e-14) break; // invariant subspace reached
            beta[j] = b;
            V.col(j + 1) = w / b;
            MV.col(j + 1) = Mw / b;
        }
    }

    // Ritz pairs from the tridiagonal matrix.
    MatX T = MatX::Zero(built, built);
    for (Index i = 0; i < built; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < built) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<MatX> es(T);
    if (es.info() != Eigen::Success) throw std::runtime_error("tridiagonal eigensolve failed");

    // Largest theta of the shift-inverted operator = smallest omega^2.
    const Index m = std::min(count, built);
    ModeSet out;
    out.omega.resize(m);
    out.phi.resize(n, m);
    for (Index i = 0; i < m; ++i) {
        const Index k = built - 1 - i; // eigenvalues ascending -> take from the top
        const Real theta = es.eigenvalues()[k];
        if (theta <= 0) throw std::runtime_error("Lanczos did not converge: nonpositive Ritz value");
        const Real lam = sigma + 1.0 / theta;
        VecX x = V.leftCols(built) * es.eigenvectors().col(k);
        const VecX Mx = M * x;
        x /= std::sqrt(x.dot(Mx));
        const Real res = (K * x - lam * (M * x)).norm();
        const Real ref = (K * x).norm();
        if (res > residual_tol * std::max(ref, 1e-300))
            throw std::runtime_error("Lanczos Ritz pair not converged; increase basis");
        out.omega[i] = std::sqrt(std::max(lam, 0.0));
        out.phi.col(i) = x;
    }
    return out;
}

} // namespace

VecX ModeSet::frequencies_hz() const { return omega / kTwoPi; }

ModeSet solve_modes(const Assembler& asmb, const ModalOptions& opts) {
    const SpMat& K = asmb.stiffness();
    const SpMat& M = asmb.mass();
    const Index n = K.rows();
    if (n == 0) throw std::invalid_argument("empty system");
    if (opts.count < 0 || n <= opts.dense_threshold) return dense_modes(K, M, opts.count);
    return lanczos_modes(K, M, std::min(opts.count, n), opts.residual_tol);
}

namespace {

/// Midset restriction of one shape: (transverse-part norm, full norm).
std::pair<Real, Real> midset_norms(const fe::DofMap& dof, const std::vector<Index>& nodes, const VecX& phi,
                                   int tdir) {
    Real t2 = 0, f2 = 0;
    for (const Index n : nodes)
        for (int d = 0; d < 3; ++d) {
            const Index g = dof(n, d);
            if (g < 0) continue;
            const Real v = phi[g] * phi[g];
            f2 += v;
            if (d == tdir) t2 += v;
        }
    return {std::sqrt(t2), std::sqrt(f2)};
}

void fix_sign(VecX phi, MatX& all, Index col) {
    Index imax = 0;
    Real vmax = 0;
    for (Index i = 0; i < phi.size(); ++i)
        if (std::abs(phi[i]) > vmax) {
            vmax = std::abs(phi[i]);
            imax = i;
        }
    if (phi[imax] < 0) all.col(col) = -phi;
    else all.col(col) = phi;
}

} // namespace

std::vector<ModeInfo> classify_modes(const Assembler& asmb, ModeSet& modes, const std::string& midset,
                                     int transverse_dir, Real bending_threshold) {
    const auto it = asmb.mesh().node_sets.find(midset);
    if (it == asmb.mesh().node_sets.end()) throw std::invalid_argument("unknown node set: " + midset);
    const auto& nodes = it->second;
    const fe::DofMap& dof = asmb.dofs();
    const Index m = modes.count();

    // Rotate exactly degenerate clusters to a deterministic orientation.
    Index lo = 0;
    while (lo < m) {
        Index hi = lo + 1;
        const Real floor_w = 1e-9 * (modes.omega[m - 1] + 1e-300);
        while (hi < m && std::abs(modes.omega[hi] - modes.omega[hi - 1]) <= 1e-6 * std::max(modes.omega[hi], floor_w))
            ++hi;
        const Index c = hi - lo;
        if (c > 1) {
            // Gram matrix of the transverse midset restrictions.
            MatX R(static_cast<Index>(nodes.size()), c);
            for (Index k = 0; k < c; ++k)
                for (std::size_t a = 0; a < nodes.size(); ++a) {
                    const Index g = dof(nodes[a], transverse_dir);
                    R(static_cast<Index>(a), k) = g >= 0 ? modes.phi(g, lo + k) : 0.0;
                }
            const MatX G = R.transpose() * R;
            Eigen::SelfAdjointEigenSolver<MatX> es(G);
            MatX U = es.eigenvectors();
            // Ascending eigenvalues: reverse so the first member carries the
            // largest transverse content.
            U = U.rowwise().reverse().eval();
            modes.phi.middleCols(lo, c) = (modes.phi.middleCols(lo, c) * U).eval();
        }
        lo = hi;
    }

    std::vector<ModeInfo> info;
    info.reserve(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) {
        fix_sign(modes.phi.col(k), modes.phi, k);
        const auto [t, f] = midset_norms(dof, nodes, modes.phi.col(k), transverse_dir);
        const Real ratio = f > 0 ? t / f : 0.0;
        info.push_back({ratio >= bending_threshold ? ModeLabel::Bending : ModeLabel::NonBending, ratio});
    }
    return info;
}

Real direction_mass_fraction(const Assembler& asmb, const VecX& phi, int dir) {
    VecX masked = VecX::Zero(phi.size());
    const fe::DofMap& dof = asmb.dofs();
    for (Index n = 0; n < asmb.mesh().node_count(); ++n) {
        const Index g = dof(n, dir);
        if (g >= 0) masked[g] = phi[g];
    }
    const Real num = masked.dot(asmb.mass() * masked);
    const Real den = phi.dot(asmb.mass() * phi);
    return std::sqrt(std::max(num, 0.0) / std::max(den, 1e-300));
}

} // namespace romforge::modal
