#include "romforge/reduce/smd.hpp"

#include <Eigen/SparseCholesky>

#include <memory>
#include <stdexcept>

namespace romforge::reduce {

StiffnessSolver make_stiffness_solver(const fe::Assembler& asmb) {
    auto ldlt = std::make_shared<Eigen::SimplicialLDLT<SpMat>>();
    ldlt->compute(asmb.stiffness());
    if (ldlt->info() != Eigen::Success) throw std::runtime_error("stiffness factorization failed");
    return [ldlt](const VecX& b) { return VecX(ldlt->solve(b)); };
}

VecX smd_same(const ForceEval& f_nl, const StiffnessSolver& solveK, const VecX& phi_p, Real lambda) {
    const VecX x = lambda * phi_p;
    const VecX rhs = (f_nl(x) + f_nl((-x).eval())) / (lambda * lambda);
    return -solveK(rhs);
}

VecX smd_cross(const ForceEval& f_nl, const StiffnessSolver& solveK, const VecX& phi_p, const VecX& phi_r,
               Real lambda) {
    const VecX xp = lambda * phi_p, xr = lambda * phi_r, xs = xp + xr;
    const VecX rhs = (f_nl(xs) + f_nl((-xs).eval()) - f_nl(xp) - f_nl((-xp).eval()) - f_nl(xr) -
                      f_nl((-xr).eval())) /
                     (2 * lambda * lambda);
    return -solveK(rhs);
}

VecX manifold_displacement(const VecX& phi_p, const VecX& theta_pp, Real q) {
    return q * phi_p + 0.5 * q * q * theta_pp;
}

Real smd_condensed_cubic(const ForceEval& f_nl, const VecX& phi_p, const VecX& theta_pp, Real lambda) {
    const VecX xp = manifold_displacement(phi_p, theta_pp, lambda);
    const VecX xm = manifold_displacement(phi_p, theta_pp, -lambda);
    return phi_p.dot(f_nl(xp) - f_nl(xm)) / (2 * lambda * lambda * lambda);
}

VecX smd_modal_reconstruction(const ModeSet& modes, const VecX& alpha_pp_column) {
    if (alpha_pp_column.size() != modes.count()) throw std::invalid_argument("one alpha per mode required");
    VecX theta = VecX::Zero(modes.phi.rows());
    for (Index s = 0; s < modes.count(); ++s) {
        const Real w2 = modes.omega[s] * modes.omega[s];
        if (w2 <= 0) continue;
        theta.noalias() -= (2 * alpha_pp_column[s] / w2) * modes.phi.col(s);
    }
    return theta;
}

VecX smd_participations(const fe::Assembler& asmb, const ModeSet& modes, const VecX& theta) {
    return modes.phi.transpose() * (asmb.mass() * theta);
}

} // namespace romforge::reduce
