#pragma once

#include "romforge/fe/assembly.hpp"

#include <vector>

namespace romforge::fe {

struct StaticOptions {
    Real rel_tol = 1e-10;   ///< residual drop relative to the initial residual
    int max_iterations = 30;
    Kinematics kinematics = Kinematics::Full;
};

struct StaticResult {
    VecX u;         ///< free-dof solution
    VecX reactions; ///< internal force at the prescribed dofs, input order
    int iterations = 0;
    Real residual = 0; ///< final residual norm on the unknown dofs
};

/// Full-Newton equilibrium solve with a subset of free dofs pinned to given
/// values and an optional external force on the rest. Throws on divergence.
StaticResult static_solve(const Assembler& asmb, const std::vector<std::pair<Index, Real>>& prescribed,
                          const VecX* f_ext = nullptr, const StaticOptions& opts = {});

} // namespace romforge::fe
