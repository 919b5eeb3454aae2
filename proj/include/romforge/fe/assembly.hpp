#pragma once

#include "romforge/fe/kernel.hpp"
#include "romforge/fe/mesh.hpp"

#include <optional>

namespace romforge::fe {

/// Global operators on the free dofs of a mesh (Dirichlet dofs eliminated).
/// Element loops run in parallel into per-element buffers and are merged in
/// element order, so assembled results are bitwise reproducible.
class Assembler {
public:
    Assembler(const Mesh& mesh, const Material& mat);

    const Mesh& mesh() const { return *mesh_; }
    const Material& material() const { return mat_; }
    const DofMap& dofs() const { return dof_; }
    Index n_free() const { return dof_.n_free; }

    /// Linear stiffness (tangent at zero displacement). Cached after first use.
    const SpMat& stiffness() const;
    /// Consistent mass matrix. Cached after first use.
    const SpMat& mass() const;

    VecX internal_force(const VecX& u_free, Kinematics kin = Kinematics::Full) const;
    SpMat tangent(const VecX& u_free, Kinematics kin = Kinematics::Full) const;

    /// Nonlinear part of the internal force: f_int(u) - K0 u. For the SVK
    /// kernel this is an exact polynomial with quadratic and cubic terms only.
    VecX nonlinear_force(const VecX& u_free, Kinematics kin = Kinematics::Full) const;

    Real volume() const;

    /// Potential of internal_force under the same kinematics. For CubicOnly
    /// that is the displacement-even part of the full strain energy.
    Real strain_energy(const VecX& u_free, Kinematics kin = Kinematics::Full) const;

    /// Element reference coordinates as an (nn x 3) block.
    MatX element_coords(Index e) const;
    /// Element displacements (nn x 3) gathered from a free-dof vector.
    MatX element_displacements(Index e, const VecX& u_free) const;

private:
    SpMat assemble_matrix(const VecX* u_free, Kinematics kin, bool mass) const;

    const Mesh* mesh_;
    Material mat_;
    DofMap dof_;
    const ShapeTable* st_;
    mutable std::optional<SpMat> K0_;
    mutable std::optional<SpMat> M_;
};

} // namespace romforge::fe
