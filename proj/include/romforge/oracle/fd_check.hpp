#pragma once

#include "romforge/fe/assembly.hpp"
#include "romforge/types.hpp"

namespace romforge::oracle {

/// Relative error of the assembled tangent along direction v against a
/// central difference of the internal force: ||K(u) v - df|| / ||K(u) v||.
/// `step` scales the absolute perturbation (relative to |u| and |v| scales).
Real tangent_directional_error(fe::Assembler& asmb, const VecX& u, const VecX& v, fe::Kinematics kin,
                               Real step = 1e-6);

/// Relative error of the directional derivative of the strain energy:
/// |f(u) . v - dW| / scale, central-differenced. Confirms the internal force
/// is the gradient of a potential (required for coefficient symmetries).
Real force_potential_error(fe::Assembler& asmb, const VecX& u, const VecX& v, fe::Kinematics kin, Real step = 1e-6);

} // namespace romforge::oracle
