#pragma once

#include "romforge/modal/modal.hpp"
#include "romforge/step/coefficients.hpp"

#include <vector>

namespace romforge::reduce {

using modal::ModeSet;
using step::CouplingCoefficients;

/// Per-slave-mode correction factor for the cubic q_p^3 term of mode p:
/// C_s = alpha(p; p, s) alpha(s; p, p) / omega_s^2 = 2 alpha(s; p, p)^2 /
/// omega_s^2, which is nonnegative, so static condensation can only soften
/// the single-mode cubic coefficient.
struct CorrectionSpectrum {
    Index p;                    ///< excited mode (global id)
    Real beta_ref;              ///< beta(p; p, p, p), the normalizer
    std::vector<Index> s;       ///< slave candidates (global ids, every projected mode outside the excited subset)
    VecX omega;                 ///< slave frequencies [rad/s]
    VecX factor;                ///< C_s
    VecX normalized;            ///< C_s / beta_ref
    std::vector<bool> relevant; ///< normalized factor above threshold
};

/// Spectrum over every projected mode outside the excited subset. Retained
/// masters never condense; genuinely transverse slaves decouple by parity,
/// so no further filtering is applied. `cc` must hold single-mode
/// coefficients of p projected on every mode of `modes`.
CorrectionSpectrum correction_spectrum(const CouplingCoefficients& cc, const ModeSet& modes, Index p_local = 0,
                                       Real threshold = 1e-15);

/// Statically condensed cubic coefficient Gamma(r; i, j, k) = beta(r; i, j,
/// k) - sum_s C(r, s; i, j, k), slaves s over every projected mode outside
/// the excited subset. `cc` must hold the coefficients of an excited subset
/// (including i, j, k, r) projected on every mode. Indices are local to the
/// excited subset.
Real condensed_cubic(const CouplingCoefficients& cc, const ModeSet& modes, Index r, Index i, Index j, Index k);

/// Same contraction restricted to an explicit slave list (global mode ids).
Real condensed_cubic_subset(const CouplingCoefficients& cc, const ModeSet& modes, Index r, Index i, Index j,
                            Index k, const std::vector<Index>& slaves);

enum class SlaveOrdering { AscendingFrequency, DescendingFactor };

struct ConvergenceCurve {
    std::vector<Index> order;  ///< slave ids in inclusion order
    VecX gamma;                ///< cumulative Gamma after m slaves (m = 0..N)
    Real gamma_full;           ///< all slaves included
    Index count_to_1e2 = -1;   ///< slaves needed for 1% of the full value
    Index count_to_1e3 = -1;   ///< slaves needed for 0.1%
};

/// Convergence of Gamma(p; p, p, p) with slave count under a given ordering.
ConvergenceCurve condensation_convergence(const CouplingCoefficients& cc, const ModeSet& modes, Index p_local,
                                          SlaveOrdering ordering);

} // namespace romforge::reduce
