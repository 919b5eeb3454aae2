#pragma once

#include "romforge/modal/modal.hpp"
#include "romforge/step/coefficients.hpp"

#include <vector>

namespace romforge::reduce {

/// Single-mode invariant-manifold oscillator
///   q'' + omega_p^2 q + cubic q^3 + velocity_sq q q'^2 = 0.
/// Slaves enter through frequency-dependent factors instead of the static
/// 1/omega_s^2 weights; as omega_s / omega_p grows the cubic coefficient
/// approaches the statically condensed one and the velocity term vanishes.
struct NnmRom {
    Real omega_p = 0;
    Real cubic = 0;
    Real velocity_sq = 0;
};

struct NnmSlave {
    Real alpha_pp; ///< alpha(s; p, p)
    Real omega;    ///< slave frequency [rad/s]
};

/// Builds the oscillator from a slave spectrum. Assumes the elastic-potential
/// symmetry alpha(p; p, s) = 2 alpha(s; p, p). Throws when a coupled slave
/// (|C_s| > 1e-12 |beta|) is within the 2:1 resonance guard
/// |omega_s^2 - 4 omega_p^2| < 1e-3 omega_s^2, where the time-independent
/// manifold parametrization breaks down; decoupled modes in the band are
/// skipped.
NnmRom nnm_from_spectrum(Real omega_p, Real beta_ppp, const std::vector<NnmSlave>& slaves);

/// Same from single-mode coefficients; slaves are every projected mode
/// outside the excited subset.
NnmRom nnm_rom(const step::CouplingCoefficients& cc, const modal::ModeSet& modes, Index p_local = 0);

/// Statically condensed cubic from the same slave data, for limit checks.
Real condensed_from_spectrum(Real beta_ppp, const std::vector<NnmSlave>& slaves);

} // namespace romforge::reduce
