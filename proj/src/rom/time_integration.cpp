#include "romforge/rom/time_integration.hpp"

#include <cmath>
#include <numbers>

namespace romforge::rom {

namespace {

struct State {
    VecX q, qd;
};

State deriv(const OscillatorSystem& sys, Real t, Real Omega, const State& s) {
    VecX acc = sys.forcing * std::cos(Omega * t) - sys.g(s.q, s.qd);
    acc -= (sys.omega.array().square() * s.q.array()).matrix();
    acc -= (2.0 * sys.zeta.array() * sys.omega.array() * s.qd.array()).matrix();
    return {s.qd, acc};
}

State axpy(const State& s, Real h, const State& d) { return {s.q + h * d.q, s.qd + h * d.qd}; }

State rk4_step(const OscillatorSystem& sys, Real t, Real h, Real Omega, const State& s) {
    const State k1 = deriv(sys, t, Omega, s);
    const State k2 = deriv(sys, t + 0.5 * h, Omega, axpy(s, 0.5 * h, k1));
    const State k3 = deriv(sys, t + 0.5 * h, Omega, axpy(s, 0.5 * h, k2));
    const State k4 = deriv(sys, t + h, Omega, axpy(s, h, k3));
    State out = s;
    out.q += (h / 6.0) * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    out.qd += (h / 6.0) * (k1.qd + 2.0 * k2.qd + 2.0 * k3.qd + k4.qd);
    return out;
}

} // namespace

VecX steady_state_fourier(const OscillatorSystem& sys, Real Omega, const SteadyStateOptions& opt) {
    const Index n = sys.n();
    const Real T = 2.0 * std::numbers::pi / Omega;
    const Real h = T / static_cast<Real>(opt.steps_per_period);

    State s{VecX::Zero(n), VecX::Zero(n)};
    // Track time as (period count, step count) to keep the forcing phase
    // exact over long runs.
    for (Index p = 0; p < opt.periods - 1; ++p)
        for (Index i = 0; i < opt.steps_per_period; ++i)
            s = rk4_step(sys, static_cast<Real>(p) * T + static_cast<Real>(i) * h, h, Omega, s);

    // Record the final period, sample i at phase 2 pi i / steps.
    MatX samples(opt.steps_per_period, n);
    const Real t0 = static_cast<Real>(opt.periods - 1) * T;
    for (Index i = 0; i < opt.steps_per_period; ++i) {
        samples.row(i) = s.q.transpose();
        s = rk4_step(sys, t0 + static_cast<Real>(i) * h, h, Omega, s);
    }

    const Index H = opt.harmonics;
    const Index nc = 2 * H + 1;
    VecX U = VecX::Zero(n * nc);
    const Real nt = static_cast<Real>(opt.steps_per_period);
    for (Index k = 0; k < n; ++k) {
        U[k * nc] = samples.col(k).mean();
        for (Index hh = 1; hh <= H; ++hh) {
            Real ac = 0, as = 0;
            for (Index i = 0; i < opt.steps_per_period; ++i) {
                const Real theta = 2.0 * std::numbers::pi * static_cast<Real>(i) / nt;
                ac += samples(i, k) * std::cos(hh * theta);
                as += samples(i, k) * std::sin(hh * theta);
            }
            U[k * nc + 2 * hh - 1] = 2.0 * ac / nt;
            U[k * nc + 2 * hh] = 2.0 * as / nt;
        }
    }
    return U;
}

} // namespace romforge::rom
