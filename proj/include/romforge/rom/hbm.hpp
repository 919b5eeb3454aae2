#pragma once

#include "romforge/rom/oscillator.hpp"
#include "romforge/types.hpp"

namespace romforge::rom {

/// Truncated Fourier basis for periodic responses. Per dof the coefficient
/// layout is [a0, ac_1, as_1, ..., ac_H, as_H] (nc = 2H + 1 slots) and the
/// stacked unknown vector is dof-major: U[k * nc + slot].
struct HarmonicBasis {
    explicit HarmonicBasis(Index harmonics);

    Index H;  ///< retained harmonics
    Index nc; ///< coefficients per dof, 2H + 1
    Index nt; ///< alias-free sample count, 2^ceil(log2(8H))

    MatX synth;   ///< nt x nc, samples = synth * coeffs
    MatX dtheta;  ///< nc x nc, coeffs of d/dtheta
    MatX analyze; ///< nc x nt, coeffs = analyze * samples

    Index slot_dc() const { return 0; }
    Index slot_cos(Index h) const { return 2 * h - 1; }
    Index slot_sin(Index h) const { return 2 * h; }
};

/// Harmonic-balance residual of an oscillator network. Nonlinear terms are
/// handled by alternating to the time domain on an alias-free grid, so the
/// retained-harmonic residual of polynomial nonlinearities is exact.
class HbmProblem {
public:
    HbmProblem(OscillatorSystem sys, Index harmonics);

    const OscillatorSystem& system() const { return sys_; }
    const HarmonicBasis& basis() const { return basis_; }
    Index n_unknowns() const { return sys_.n() * basis_.nc; }

    VecX residual(const VecX& U, Real Omega) const;
    MatX jacobian_U(const VecX& U, Real Omega) const;
    VecX jacobian_Omega(const VecX& U, Real Omega) const;

    /// Harmonic coefficients of the linear forced response at Omega.
    VecX linear_response(Real Omega) const;

    /// Newton solve at fixed Omega from the given start (linear response if
    /// U0 is empty). Throws on divergence.
    VecX solve_fixed(Real Omega, const VecX& U0 = VecX(), Real tol = 1e-10, int max_iter = 40) const;

    /// max over one period of |w . q(t)| evaluated on a refined grid.
    Real amplitude(const VecX& U, const VecX& weights, Index refine = 4) const;

    /// Time samples q_k(theta_i) for one dof (nt values).
    VecX dof_samples(const VecX& U, Index k) const;

private:
    OscillatorSystem sys_;
    HarmonicBasis basis_;
};

} // namespace romforge::rom
