#pragma once

#include "romforge/fe/assembly.hpp"
#include "romforge/modal/modal.hpp"
#include "romforge/step/step.hpp"

#include <functional>

namespace romforge::reduce {

using modal::ModeSet;
using step::ForceEval;

/// Linear solve against the reference stiffness, x = K^{-1} b.
using StiffnessSolver = std::function<VecX(const VecX&)>;

/// Factorizes K once; the returned closure shares the factorization.
StiffnessSolver make_stiffness_solver(const fe::Assembler& asmb);

/// Same-mode quadratic manifold coefficient
///   theta_pp = -K^{-1} (f_nl(l phi_p) + f_nl(-l phi_p)) / l^2.
/// Exactly independent of l for a quadratic+cubic polynomial force.
VecX smd_same(const ForceEval& f_nl, const StiffnessSolver& solveK, const VecX& phi_p, Real lambda);

/// Cross coefficient theta_pr from the six-evaluation combination
///   -K^{-1} (f(l(p+r)) + f(-l(p+r)) - f(lp) - f(-lp) - f(lr) - f(-lr)) / (2 l^2).
VecX smd_cross(const ForceEval& f_nl, const StiffnessSolver& solveK, const VecX& phi_p, const VecX& phi_r,
               Real lambda);

/// Quadratic-manifold lift x(q) = q phi_p + q^2/2 theta_pp.
VecX manifold_displacement(const VecX& phi_p, const VecX& theta_pp, Real q);

/// Cubic coefficient of the single-mode oscillator on the quadratic manifold:
///   Gamma = phi_p . (f_nl(x(l)) - f_nl(x(-l))) / (2 l^3).
/// Carries an O(l^2) bias from the quartic term of the manifold restriction,
/// so evaluate at a small amplitude (default h/100 scale) when comparing
/// against static condensation.
Real smd_condensed_cubic(const ForceEval& f_nl, const VecX& phi_p, const VecX& theta_pp, Real lambda);

/// Modal reconstruction of theta_pp over a mode set:
///   theta_pp = -2 sum_s phi_s alpha(s; p, p) / omega_s^2,
/// the spectral expansion of -K^{-1} 2 A(phi_p, phi_p). Equals the direct
/// K^{-1} form exactly when the set spans the full space.
VecX smd_modal_reconstruction(const ModeSet& modes, const VecX& alpha_pp_column);

/// Modal participation of each mode in theta (coefficients of phi_s).
VecX smd_participations(const fe::Assembler& asmb, const ModeSet& modes, const VecX& theta);

} // namespace romforge::reduce
