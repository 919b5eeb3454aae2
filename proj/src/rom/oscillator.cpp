#include "romforge/rom/oscillator.hpp"

#include <stdexcept>

namespace romforge::rom {

VecX OscillatorSystem::g(const VecX& q, const VecX& qd) const {
    VecX out = VecX::Zero(n());
    for (const auto& t : quad)
        out[t.k] += t.c * q[t.i] * q[t.j];
    for (const auto& t : cubic)
        out[t.k] += t.c * q[t.i] * q[t.j] * q[t.l];
    for (const auto& t : vel)
        out[t.k] += t.c * q[t.i] * qd[t.j] * qd[t.l];
    return out;
}

MatX OscillatorSystem::dg_dq(const VecX& q, const VecX& qd) const {
    MatX out = MatX::Zero(n(), n());
    for (const auto& t : quad) {
        out(t.k, t.i) += t.c * q[t.j];
        out(t.k, t.j) += t.c * q[t.i];
    }
    for (const auto& t : cubic) {
        out(t.k, t.i) += t.c * q[t.j] * q[t.l];
        out(t.k, t.j) += t.c * q[t.i] * q[t.l];
        out(t.k, t.l) += t.c * q[t.i] * q[t.j];
    }
    for (const auto& t : vel)
        out(t.k, t.i) += t.c * qd[t.j] * qd[t.l];
    return out;
}

MatX OscillatorSystem::dg_dqd(const VecX& q, const VecX& qd) const {
    MatX out = MatX::Zero(n(), n());
    for (const auto& t : vel) {
        out(t.k, t.j) += t.c * q[t.i] * qd[t.l];
        out(t.k, t.l) += t.c * q[t.i] * qd[t.j];
    }
    return out;
}

OscillatorSystem OscillatorSystem::duffing(Real omega, Real zeta, Real gamma, Real forcing) {
    OscillatorSystem sys;
    sys.omega = VecX::Constant(1, omega);
    sys.zeta = VecX::Constant(1, zeta);
    sys.forcing = VecX::Constant(1, forcing);
    sys.cubic.push_back({0, 0, 0, 0, gamma});
    return sys;
}

OscillatorSystem OscillatorSystem::from_nnm(const reduce::NnmRom& rom, Real zeta, Real forcing) {
    OscillatorSystem sys;
    sys.omega = VecX::Constant(1, rom.omega_p);
    sys.zeta = VecX::Constant(1, zeta);
    sys.forcing = VecX::Constant(1, forcing);
    if (rom.cubic != 0)
        sys.cubic.push_back({0, 0, 0, 0, rom.cubic});
    if (rom.velocity_sq != 0)
        sys.vel.push_back({0, 0, 0, 0, rom.velocity_sq});
    return sys;
}

OscillatorSystem OscillatorSystem::from_coefficients(const step::CouplingCoefficients& cc, const VecX& omega_all,
                                                     const std::vector<Index>& subset_local, const VecX& zeta,
                                                     const VecX& forcing) {
    const Index m = static_cast<Index>(subset_local.size());
    if (zeta.size() != m || forcing.size() != m)
        throw std::invalid_argument("oscillator subset: zeta/forcing size mismatch");

    // Map excited-basis local index -> position within the subset.
    std::vector<Index> pos(static_cast<std::size_t>(cc.excited().size()), -1);
    for (Index a = 0; a < m; ++a) {
        const Index loc = subset_local[static_cast<std::size_t>(a)];
        if (loc < 0 || loc >= static_cast<Index>(cc.excited().size()))
            throw std::invalid_argument("oscillator subset: index out of range");
        pos[static_cast<std::size_t>(loc)] = a;
    }

    OscillatorSystem sys;
    sys.omega.resize(m);
    for (Index a = 0; a < m; ++a) {
        const Index mode = cc.excited()[static_cast<std::size_t>(subset_local[static_cast<std::size_t>(a)])];
        sys.omega[a] = omega_all[mode];
    }
    sys.zeta = zeta;
    sys.forcing = forcing;

    const auto in_subset = [&](Index loc) { return pos[static_cast<std::size_t>(loc)] >= 0; };
    const Index ne = static_cast<Index>(cc.excited().size());
    for (Index k = 0; k < ne; ++k) {
        if (!in_subset(k))
            continue;
        const Index krow = cc.projected_row(cc.excited()[static_cast<std::size_t>(k)]);
        if (krow < 0)
            throw std::invalid_argument("oscillator subset: equation mode missing from projection set");
        const Index ka = pos[static_cast<std::size_t>(k)];
        for (Index i = 0; i < ne; ++i) {
            if (!in_subset(i))
                continue;
            for (Index j = i; j < ne; ++j) {
                if (!in_subset(j) || !cc.has_alpha(krow, i, j))
                    continue;
                const Real c = cc.alpha(krow, i, j);
                if (c != 0)
                    sys.quad.push_back({ka, pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)], c});
            }
        }
        for (Index i = 0; i < ne; ++i) {
            if (!in_subset(i))
                continue;
            for (Index j = i; j < ne; ++j) {
                if (!in_subset(j))
                    continue;
                for (Index l = j; l < ne; ++l) {
                    if (!in_subset(l) || !cc.has_beta(krow, i, j, l))
                        continue;
                    const Real c = cc.beta(krow, i, j, l);
                    if (c != 0)
                        sys.cubic.push_back({ka, pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)],
                                             pos[static_cast<std::size_t>(l)], c});
                }
            }
        }
    }
    return sys;
}

} // namespace romforge::rom
