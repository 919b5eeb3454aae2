#include "romforge/reduce/condense.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

namespace romforge::reduce {

namespace {

/// Symmetric contraction a(k; i, j) recovered from the upper-triangular
/// monomial coefficient: alpha(k; i, j) = (2 - delta_ij) a(k; i, j).
Real a_sym(const CouplingCoefficients& cc, Index k, Index i, Index j) {
    return cc.alpha(k, i, j) / (i == j ? 1.0 : 2.0);
}

/// Correction factor C(r, s; i, j, k) / omega_s^2 for one slave mode s
/// (projection index) and excited locals i <= j <= k, equation r.
/// alpha(.; x, s) terms use the potential symmetry a(r; x, s) = a(s; x, r),
/// so everything reduces to coefficients of the excited subset projected on
/// s. The four monomial patterns carry their multiplicities.
Real correction_term(const CouplingCoefficients& cc, Index r, Index i, Index j, Index k, Index s, Real omega_s) {
    const Real w2 = omega_s * omega_s;
    if (w2 <= 0) return 0.0;
    // alpha(r; x, s) = 2 a(s; x, r) for a slave s distinct from the excited x.
    const auto alpha_xs_r = [&](Index x) { return 2.0 * a_sym(cc, s, x, r); };
    Real num = 0;
    if (i == j && j == k) {
        num = alpha_xs_r(i) * cc.alpha(s, i, i);
    } else if (i == j) { // i = j < k
        num = alpha_xs_r(i) * cc.alpha(s, i, k) + alpha_xs_r(k) * cc.alpha(s, i, i);
    } else if (j == k) { // i < j = k
        num = alpha_xs_r(i) * cc.alpha(s, k, k) + alpha_xs_r(k) * cc.alpha(s, i, k);
    } else { // i < j < k
        num = alpha_xs_r(i) * cc.alpha(s, j, k) + alpha_xs_r(j) * cc.alpha(s, i, k) +
              alpha_xs_r(k) * cc.alpha(s, i, j);
    }
    return num / w2;
}

/// Every projected mode outside the excited subset, in projection order.
std::vector<Index> non_excited_slaves(const CouplingCoefficients& cc) {
    std::vector<Index> out;
    out.reserve(cc.projected().size());
    for (const Index s : cc.projected()) {
        bool retained = false;
        for (const Index e : cc.excited()) retained = retained || e == s;
        if (!retained) out.push_back(s);
    }
    return out;
}

} // namespace

CorrectionSpectrum correction_spectrum(const CouplingCoefficients& cc, const ModeSet& modes, Index p_local,
                                       Real threshold) {
    CorrectionSpectrum out;
    out.p = cc.excited()[static_cast<std::size_t>(p_local)];
    out.beta_ref = cc.beta(out.p, p_local, p_local, p_local);
    out.s = non_excited_slaves(cc);
    const Index m = static_cast<Index>(out.s.size());
    out.omega.resize(m);
    out.factor.resize(m);
    out.normalized.resize(m);
    out.relevant.resize(static_cast<std::size_t>(m));
    for (Index a = 0; a < m; ++a) {
        const Index s = out.s[static_cast<std::size_t>(a)];
        out.omega[a] = modes.omega[s];
        out.factor[a] = correction_term(cc, p_local, p_local, p_local, p_local, s, modes.omega[s]);
        out.normalized[a] = out.beta_ref != 0 ? out.factor[a] / out.beta_ref : 0.0;
        out.relevant[static_cast<std::size_t>(a)] = std::abs(out.normalized[a]) > threshold;
    }
    return out;
}

Real condensed_cubic(const CouplingCoefficients& cc, const ModeSet& modes, Index r, Index i, Index j, Index k) {
    return condensed_cubic_subset(cc, modes, r, i, j, k, non_excited_slaves(cc));
}

Real condensed_cubic_subset(const CouplingCoefficients& cc, const ModeSet& modes, Index r, Index i, Index j,
                            Index k, const std::vector<Index>& slaves) {
    std::array<Index, 3> t{i, j, k};
    std::sort(t.begin(), t.end());
    const Index gr = cc.excited()[static_cast<std::size_t>(r)];
    Real gamma = cc.beta(gr, t[0], t[1], t[2]);
    for (const Index s : slaves) gamma -= correction_term(cc, r, t[0], t[1], t[2], s, modes.omega[s]);
    return gamma;
}

ConvergenceCurve condensation_convergence(const CouplingCoefficients& cc, const ModeSet& modes, Index p_local,
                                          SlaveOrdering ordering) {
    const CorrectionSpectrum spec = correction_spectrum(cc, modes, p_local);
    const Index m = static_cast<Index>(spec.s.size());

    std::vector<Index> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    if (ordering == SlaveOrdering::DescendingFactor)
        std::stable_sort(perm.begin(), perm.end(), [&](Index a, Index b) {
            return std::abs(spec.factor[a]) > std::abs(spec.factor[b]);
        });
    // AscendingFrequency: slaves are already frequency-ascending.

    ConvergenceCurve out;
    out.gamma.resize(m + 1);
    out.gamma[0] = spec.beta_ref;
    for (Index a = 0; a < m; ++a) {
        out.order.push_back(spec.s[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)])]);
        out.gamma[a + 1] = out.gamma[a] - spec.factor[perm[static_cast<std::size_t>(a)]];
    }
    out.gamma_full = out.gamma[m];
    const Real ref = std::abs(out.gamma_full);
    for (Index a = 0; a <= m; ++a) {
        const Real err = std::abs(out.gamma[a] - out.gamma_full);
        if (out.count_to_1e2 < 0 && err <= 1e-2 * ref) out.count_to_1e2 = a;
        if (out.count_to_1e3 < 0 && err <= 1e-3 * ref) out.count_to_1e3 = a;
    }
    return out;
}

} // namespace romforge::reduce
