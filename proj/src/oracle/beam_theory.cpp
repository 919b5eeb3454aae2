#include "romforge/oracle/beam_theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace romforge::oracle {

namespace {

// 10-point Gauss-Legendre rule on [-1, 1].
constexpr int kGlPoints = 10;
constexpr Real kGlX[kGlPoints] = {-0.9739065285171717, -0.8650633666889845, -0.6794095682990244,
                                  -0.4333953941292472, -0.1488743389816312, 0.1488743389816312,
                                  0.4333953941292472,  0.6794095682990244,  0.8650633666889845,
                                  0.9739065285171717};
constexpr Real kGlW[kGlPoints] = {0.0666713443086881, 0.1494513491505806, 0.2190863625159820, 0.2692667193099963,
                                  0.2955242247147529, 0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                  0.1494513491505806, 0.0666713443086881};

/// Composite Gauss-Legendre integration of f over [0, L].
template <typename F>
Real integrate(F&& f, Real L, Index panels) {
    Real sum = 0;
    const Real h = L / static_cast<Real>(panels);
    for (Index p = 0; p < panels; ++p) {
        const Real a = static_cast<Real>(p) * h;
        for (int q = 0; q < kGlPoints; ++q)
            sum += kGlW[q] * f(a + 0.5 * h * (kGlX[q] + 1.0));
    }
    return sum * 0.5 * h;
}

Index panels_for(Index n) { return 32 + 16 * n; }

/// Mass-normalized clamped-clamped bending shape, norm computed once.
struct BendingShape {
    Real lambda, sigma, L, scale;

    BendingShape(const BeamSection& s, Index n) : L(s.length) {
        lambda = clamped_clamped_root(n);
        sigma = (std::cosh(lambda) - std::cos(lambda)) / (std::sinh(lambda) - std::sin(lambda));
        scale = 1.0;
        const Real m = s.rho * s.area() * integrate([&](Real x) { const Real v = value(x); return v * v; }, L,
                                                    panels_for(n));
        scale = 1.0 / std::sqrt(m);
    }

    Real value(Real x) const {
        const Real xi = lambda * x / L;
        return scale * (std::cosh(xi) - std::cos(xi) - sigma * (std::sinh(xi) - std::sin(xi)));
    }
    Real d1(Real x) const {
        const Real xi = lambda * x / L;
        return scale * lambda / L * (std::sinh(xi) + std::sin(xi) - sigma * (std::cosh(xi) - std::cos(xi)));
    }
};

} // namespace

Real clamped_clamped_root(Index n) {
    if (n < 1)
        throw std::invalid_argument("mode index must be >= 1");
    // Roots approach (n + 1/2) pi quickly; polish with Newton.
    Real x = (static_cast<Real>(n) + 0.5) * std::numbers::pi;
    for (int it = 0; it < 60; ++it) {
        const Real f = std::cos(x) * std::cosh(x) - 1.0;
        const Real df = std::cos(x) * std::sinh(x) - std::sin(x) * std::cosh(x);
        const Real dx = f / df;
        x -= dx;
        if (std::abs(dx) < 1e-15 * x)
            break;
    }
    return x;
}

Real bending_omega(const BeamSection& s, Index n) {
    const Real kL = clamped_clamped_root(n);
    return kL * kL / (s.length * s.length) * std::sqrt(s.E * s.inertia() / (s.rho * s.area()));
}

Real bending_shape(const BeamSection& s, Index n, Real x) { return BendingShape(s, n).value(x); }

Real bending_shape_d1(const BeamSection& s, Index n, Real x) { return BendingShape(s, n).d1(x); }

Real axial_omega(const BeamSection& s, Index k) {
    return static_cast<Real>(k) * std::numbers::pi / s.length * std::sqrt(s.E / s.rho);
}

Real axial_shape(const BeamSection& s, Index k, Real x) {
    return std::sqrt(2.0 / (s.rho * s.area() * s.length)) *
           std::sin(static_cast<Real>(k) * std::numbers::pi * x / s.length);
}

Real axial_shape_d1(const BeamSection& s, Index k, Real x) {
    const Real kpl = static_cast<Real>(k) * std::numbers::pi / s.length;
    return std::sqrt(2.0 / (s.rho * s.area() * s.length)) * kpl * std::cos(kpl * x);
}

Real coupling_integral(const BeamSection& s, Index i, Index j) {
    const BendingShape si(s, i), sj(s, j);
    return integrate([&](Real x) { return si.d1(x) * sj.d1(x); }, s.length, panels_for(std::max(i, j)));
}

Real quartic_integral(const BeamSection& s, Index p) {
    const BendingShape sp(s, p);
    return integrate([&](Real x) { const Real v = sp.d1(x); return v * v * v * v; }, s.length, panels_for(p));
}

Real axial_quadratic_coefficient(const BeamSection& s, Index axial, Index p) {
    const BendingShape sp(s, p);
    return 0.5 * s.E * s.area() *
           integrate(
               [&](Real x) {
                   const Real d = sp.d1(x);
                   return axial_shape_d1(s, axial, x) * d * d;
               },
               s.length, panels_for(std::max<Index>(axial, p)));
}

Real bare_cubic_coefficient(const BeamSection& s, Index p) { return 0.5 * s.E * s.area() * quartic_integral(s, p); }

Real condensed_cubic_coefficient(const BeamSection& s, Index r, Index p) {
    return s.E * s.area() / (2.0 * s.length) * coupling_integral(s, p, p) * coupling_integral(s, r, p);
}

} // namespace romforge::oracle
