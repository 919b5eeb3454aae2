#pragma once

#include "romforge/rom/hbm.hpp"
#include "romforge/rom/oscillator.hpp"
#include "romforge/types.hpp"

namespace romforge::rom {

struct SteadyStateOptions {
    Index periods = 300;          ///< transient settle time
    Index steps_per_period = 1024;
    Index harmonics = 7;          ///< Fourier truncation of the sampled orbit
};

/// Fixed-step RK4 integration of q'' + 2 zeta w q' + w^2 q + g(q, q') =
/// F cos(Omega t) from rest, followed by Fourier analysis of the last
/// period. Returns harmonic coefficients in the layout of HarmonicBasis
/// (dof-major, [a0, ac_h, as_h]). Used as an independent check on the
/// harmonic-balance solution away from fold instabilities.
VecX steady_state_fourier(const OscillatorSystem& sys, Real Omega, const SteadyStateOptions& opt);

} // namespace romforge::rom
