#include "romforge/oracle/fd_check.hpp"

#include <algorithm>
#include <cmath>

namespace romforge::oracle {

namespace {

Real perturbation(const VecX& u, const VecX& v, Real step) {
    const Real uscale = std::max(u.cwiseAbs().maxCoeff(), Real(1e-3));
    return step * uscale / std::max(v.cwiseAbs().maxCoeff(), Real(1e-30));
}

} // namespace

Real tangent_directional_error(fe::Assembler& asmb, const VecX& u, const VecX& v, fe::Kinematics kin, Real step) {
    const Real h = perturbation(u, v, step);
    const VecX df = (asmb.internal_force(u + h * v, kin) - asmb.internal_force(u - h * v, kin)) / (2.0 * h);
    const VecX Kv = asmb.tangent(u, kin) * v;
    const Real scale = std::max(Kv.norm(), df.norm());
    return scale > 0 ? (Kv - df).norm() / scale : 0.0;
}

Real force_potential_error(fe::Assembler& asmb, const VecX& u, const VecX& v, fe::Kinematics kin, Real step) {
    const Real h = perturbation(u, v, step);
    const Real dW = (asmb.strain_energy(u + h * v, kin) - asmb.strain_energy(u - h * v, kin)) / (2.0 * h);
    const Real fv = asmb.internal_force(u, kin).dot(v);
    const Real scale = std::max(std::abs(fv), std::abs(dW));
    return scale > 0 ? std::abs(fv - dW) / scale : 0.0;
}

} // namespace romforge::oracle
