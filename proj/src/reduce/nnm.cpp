#include "romforge/reduce/nnm.hpp"

#include <cmath>
#include <stdexcept>

namespace romforge::reduce {

NnmRom nnm_from_spectrum(Real omega_p, Real beta_ppp, const std::vector<NnmSlave>& slaves) {
    NnmRom rom;
    rom.omega_p = omega_p;
    rom.cubic = beta_ppp;
    rom.velocity_sq = 0;
    const Real wp2 = omega_p * omega_p;
    for (const auto& s : slaves) {
        const Real ws2 = s.omega * s.omega;
        if (ws2 <= 0) continue;
        // alpha(p; p, s) alpha(s; p, p) / omega_s^2 = 2 alpha(s; p, p)^2 / omega_s^2
        const Real c = 2 * s.alpha_pp * s.alpha_pp / ws2;
        const Real denom = ws2 - 4 * wp2;
        if (std::abs(denom) < 1e-3 * ws2) {
            // Decoupled modes inside the guard band are harmless.
            if (std::abs(c) <= 1e-12 * std::abs(beta_ppp)) continue;
            throw std::runtime_error("2:1 internal resonance between master and a coupled slave; "
                                     "single-mode manifold invalid");
        }
        rom.cubic -= c * (ws2 - 2 * wp2) / denom;
        rom.velocity_sq += c * 2 / denom;
    }
    return rom;
}

Real condensed_from_spectrum(Real beta_ppp, const std::vector<NnmSlave>& slaves) {
    Real gamma = beta_ppp;
    for (const auto& s : slaves) {
        const Real ws2 = s.omega * s.omega;
        if (ws2 <= 0) continue;
        gamma -= 2 * s.alpha_pp * s.alpha_pp / ws2;
    }
    return gamma;
}

NnmRom nnm_rom(const step::CouplingCoefficients& cc, const modal::ModeSet& modes, Index p_local) {
    const Index p = cc.excited()[static_cast<std::size_t>(p_local)];
    std::vector<NnmSlave> slaves;
    for (const Index s : cc.projected()) {
        bool retained = false;
        for (const Index e : cc.excited()) retained = retained || e == s;
        if (!retained) slaves.push_back({cc.alpha(s, p_local, p_local), modes.omega[s]});
    }
    return nnm_from_spectrum(modes.omega[p], cc.beta(p, p_local, p_local, p_local), slaves);
}

} // namespace romforge::reduce
