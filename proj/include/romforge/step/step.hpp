#pragma once

#include "romforge/fe/assembly.hpp"
#include "romforge/modal/modal.hpp"
#include "romforge/step/coefficients.hpp"

#include <functional>
#include <vector>

namespace romforge::step {

using fe::Assembler;
using modal::ModeSet;

/// Nonlinear force evaluator on free dofs; by construction an exact
/// polynomial with quadratic and cubic terms only.
using ForceEval = std::function<VecX(const VecX&)>;

ForceEval make_force_eval(const Assembler& asmb, fe::Kinematics kin = fe::Kinematics::Full);

/// Scaling so that max |lambda phi| equals ratio * thickness.
Real step_lambda(const VecX& phi, Real thickness, Real ratio = 0.05);

/// Quadratic and cubic coefficients of one mode from static force evaluations
/// at +/- lambda phi_p, projected on every mode of the set.
CouplingCoefficients step_single(const ForceEval& f_nl, const ModeSet& modes, Index p, Real lambda);

/// Coefficients of a mode pair p < r (all monomials in q_p, q_r) from signed
/// combinations of the two shapes; 8 force evaluations.
CouplingCoefficients step_pair(const ForceEval& f_nl, const ModeSet& modes, Index p, Index r, Real lambda_p,
                               Real lambda_r);

/// Coefficients of an arbitrary mode subset: all pairs plus the distinct
/// triples via inclusion-exclusion of odd force parts.
CouplingCoefficients step_subset(const ForceEval& f_nl, const ModeSet& modes, const std::vector<Index>& subset,
                                 const std::vector<Real>& lambdas);

struct SweepPoint {
    Real lambda;
    Real alpha_dom; ///< largest-magnitude projection of the quadratic term
    Real beta_ppp;
};

/// Identified single-mode coefficients across amplitudes; constant to
/// round-off for a polynomial force, so deviations measure conditioning.
std::vector<SweepPoint> amplitude_sweep(const ForceEval& f_nl, const ModeSet& modes, Index p,
                                        const std::vector<Real>& lambdas);

} // namespace romforge::step
