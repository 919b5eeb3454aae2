#pragma once

#include "romforge/rom/hbm.hpp"
#include "romforge/types.hpp"

#include <vector>

namespace romforge::rom {

struct FrfPoint {
    Real omega;
    VecX U;
    Real amplitude;
};

struct FrfBranch {
    std::vector<FrfPoint> points;
    bool traversed_fold = false;
};

struct FrfOptions {
    Real omega_min = 0;
    Real omega_max = 0;
    bool forward = true;   ///< sweep direction from the entry boundary
    Real ds0 = 0.01;       ///< initial arclength step in scaled coordinates
    Real ds_min = 1e-7;
    Real ds_max = 0.1;
    int max_steps = 4000;
    Real newton_tol = 1e-10;
    int newton_max = 12;
};

/// Forced-response curve by pseudo-arclength continuation with a secant
/// predictor. The branch follows folds (turning points in omega) instead of
/// jumping, and stops when omega leaves [omega_min, omega_max].
FrfBranch continue_frf(const HbmProblem& hbm, const VecX& probe_weights, const FrfOptions& opt);

struct BackbonePoint {
    Real coeff;     ///< master fundamental cosine amplitude (the parameter)
    Real omega;     ///< frequency of the free periodic orbit
    VecX U;         ///< full harmonic coefficients (sines are zero)
    Real amplitude; ///< probe peak over one period
};

/// Undamped, unforced backbone: frequency of the periodic orbit versus
/// amplitude. Works in the cosine-plus-constant subspace, which is invariant
/// for polynomial stiffness and q qdot^2 terms, with the amplitude of the
/// master fundamental as the parameter. Requires zeta = 0 and forcing = 0.
std::vector<BackbonePoint> trace_backbone(const OscillatorSystem& sys, Index harmonics, Index master,
                                          const std::vector<Real>& amplitudes, const VecX& probe_weights);

/// Omega on a backbone at a requested amplitude, by monotone linear
/// interpolation in the curve's amplitude column. Throws if out of range.
Real backbone_omega_at(const std::vector<BackbonePoint>& curve, Real amplitude);

} // namespace romforge::rom
