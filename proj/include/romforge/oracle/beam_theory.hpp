#pragma once

#include "romforge/types.hpp"

namespace romforge::oracle {

/// Doubly clamped rectangular-section beam in classical bending theory with
/// membrane stretching coupling. Bending deflects in the thickness
/// direction; shapes are mass-normalized (unit modal mass with rho A
/// line density), so coefficients are directly comparable to those from
/// mass-normalized 3D modes.
struct BeamSection {
    Real length;
    Real width;
    Real thickness;
    Real E;
    Real rho;

    Real area() const { return width * thickness; }
    Real inertia() const { return width * thickness * thickness * thickness / 12.0; }
};

/// n-th positive root of cos(x) cosh(x) = 1 (clamped-clamped bending).
Real clamped_clamped_root(Index n);

/// Bending angular frequency (kL)_n^2 / L^2 sqrt(EI / rho A).
Real bending_omega(const BeamSection& s, Index n);

/// Mass-normalized bending shape and first derivative at x in [0, L].
Real bending_shape(const BeamSection& s, Index n, Real x);
Real bending_shape_d1(const BeamSection& s, Index n, Real x);

/// Clamped-clamped membrane (axial) mode k: angular frequency k pi / L
/// sqrt(E / rho) and mass-normalized shape sqrt(2 / (rho A L)) sin(k pi x/L).
Real axial_omega(const BeamSection& s, Index k);
Real axial_shape(const BeamSection& s, Index k, Real x);
Real axial_shape_d1(const BeamSection& s, Index k, Real x);

/// Geometric coupling integral g_ij = int phi_i' phi_j' dx.
Real coupling_integral(const BeamSection& s, Index i, Index j);

/// int (phi_p')^4 dx, the quartic stretching integral of mode p.
Real quartic_integral(const BeamSection& s, Index p);

/// Quadratic coefficient alpha_pp^s of axial mode s driven by bending mode
/// p squared: (EA/2) int u_s' (phi_p')^2 dx.
Real axial_quadratic_coefficient(const BeamSection& s, Index axial, Index p);

/// Bare cubic coefficient with membrane motion blocked:
/// beta_ppp^p = (EA/2) int (phi_p')^4 dx.
Real bare_cubic_coefficient(const BeamSection& s, Index p);

/// Cubic coefficient of the membrane-condensed model, equation r, monomial
/// q_p^3: (EA / 2L) g_pp g_rp.
Real condensed_cubic_coefficient(const BeamSection& s, Index r, Index p);

} // namespace romforge::oracle
