#pragma once

#include "romforge/fe/static_solve.hpp"
#include "romforge/modal/modal.hpp"

#include <string>
#include <vector>

namespace romforge::mstep {

using fe::Assembler;
using modal::ModeSet;

/// Master dofs: the transverse components on a named node set, excluding
/// pinned dofs. On quadratic meshes the midside nodes that lie on the set are
/// masters too.
std::vector<Index> select_masters(const Assembler& asmb, const std::string& node_set, int transverse_dir);

/// Equilibrium with the master dofs pinned to lambda * phi_p (signed) and no
/// external force; every other dof relaxes to the nonlinear equilibrium.
fe::StaticResult mstep_solve(const Assembler& asmb, const std::vector<Index>& masters, const VecX& phi_p,
                             Real lambda);

struct MstepGamma {
    Real lambda = 0;
    Real gamma_ppp = 0; ///< cubic coefficient on the driven mode
    VecX gamma_k;       ///< cross coefficients on requested modes
};

/// Single-mode cubic coefficients from the +/- lambda pair of constrained
/// solves (the antisymmetrization removes quadratic contamination):
///   Gamma(k; p, p, p) = phi_k . (f(x+) - f(x-)) / (2 lambda^3),
/// with the linear term omega_p^2 / lambda^2 removed on k = p.
MstepGamma mstep_gamma(const Assembler& asmb, const ModeSet& modes, Index p, const std::vector<Index>& masters,
                       Real lambda, const std::vector<Index>& cross_modes = {});

struct MstepGammaMixed {
    Real gamma_ppr = 0; ///< coefficient of q_p^2 q_r
    Real gamma_prr = 0; ///< coefficient of q_p q_r^2
    Index k = 0;        ///< equation the coefficients act in
};

/// Mixed cubic coefficients from the four signed two-mode constrained solves
/// plus the two single-mode pairs (same signed-combination algebra as the
/// force-projection pair extraction).
std::vector<MstepGammaMixed> mstep_gamma_mixed(const Assembler& asmb, const ModeSet& modes, Index p, Index r,
                                               const std::vector<Index>& masters, Real lambda_p, Real lambda_r,
                                               const std::vector<Index>& equations);

struct MstepQuality {
    Real e1_pp = 0;  ///< driven-mode linear-consistency error
    VecX e1_k;       ///< cross-mode linear contamination, aligned with cross_modes
    Real e2 = 0;     ///< linear constrained solve distance to lambda phi_p
    bool reliable = true;
    std::vector<std::string> warnings;
};

/// Non-intrusive error measures of a master set at one amplitude:
///   e1(k) = phi_k . (K x) / (lambda omega_p^2) - delta_kp,
/// with x the converged nonlinear solution (K x is the reaction vector of a
/// linear computation with x fully prescribed), and
///   e2 = |x_l - lambda phi_p| / |lambda phi_p|
/// with x_l the linear constrained solve under the same masters.
/// |e1| or e2 above 1e-3 flags the master set unreliable.
MstepQuality mstep_quality(const Assembler& asmb, const ModeSet& modes, Index p,
                           const std::vector<Index>& masters, Real lambda,
                           const std::vector<Index>& cross_modes = {});

struct ValiditySweep {
    VecX amplitude;  ///< max |lambda phi_p| in thickness units
    VecX gamma;      ///< identified cubic coefficient per amplitude
    VecX deviation;  ///< |gamma / gamma_ref - 1|
    Real lo = 0, hi = 0; ///< maximal contiguous band with deviation <= tol
};

/// Sweeps the identified coefficient over prescribed amplitudes and reports
/// the contiguous validity band around the nominal operating point.
ValiditySweep amplitude_validity_sweep(const Assembler& asmb, const ModeSet& modes, Index p,
                                       const std::vector<Index>& masters, const std::vector<Real>& amp_ratios,
                                       Real thickness, Real gamma_ref, Real tol = 0.03);

} // namespace romforge::mstep
