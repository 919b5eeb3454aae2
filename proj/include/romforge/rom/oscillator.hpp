#pragma once

#include "romforge/reduce/nnm.hpp"
#include "romforge/step/coefficients.hpp"
#include "romforge/types.hpp"

#include <vector>

namespace romforge::rom {

/// Modal oscillator network
///   q_k'' + 2 zeta_k omega_k q_k' + omega_k^2 q_k
///     + sum quad(k; i <= j) q_i q_j
///     + sum cubic(k; i <= j <= l) q_i q_j q_l
///     + sum vel(k; i, j <= l) q_i q_j' q_l'
///   = forcing_k cos(Omega t).
struct OscillatorSystem {
    struct QuadTerm {
        Index k, i, j;
        Real c;
    };
    struct CubicTerm {
        Index k, i, j, l;
        Real c;
    };
    struct VelTerm {
        Index k, i, j, l; ///< c q_i q_j' q_l'
        Real c;
    };

    VecX omega;
    VecX zeta;
    VecX forcing;
    std::vector<QuadTerm> quad;
    std::vector<CubicTerm> cubic;
    std::vector<VelTerm> vel;

    Index n() const { return omega.size(); }

    /// Nonlinear force g(q, qdot) (everything beyond the linear oscillator).
    VecX g(const VecX& q, const VecX& qd) const;
    MatX dg_dq(const VecX& q, const VecX& qd) const;
    MatX dg_dqd(const VecX& q, const VecX& qd) const;

    /// Single-dof Duffing oscillator.
    static OscillatorSystem duffing(Real omega, Real zeta, Real gamma, Real forcing);
    /// Single-dof invariant-manifold oscillator with the q qdot^2 term.
    static OscillatorSystem from_nnm(const reduce::NnmRom& rom, Real zeta = 0, Real forcing = 0);
    /// Multi-mode system from coupling coefficients restricted to a subset of
    /// the excited basis (local indices); equations = the same subset.
    static OscillatorSystem from_coefficients(const step::CouplingCoefficients& cc, const VecX& omega_all,
                                              const std::vector<Index>& subset_local, const VecX& zeta,
                                              const VecX& forcing);
};

} // namespace romforge::rom
