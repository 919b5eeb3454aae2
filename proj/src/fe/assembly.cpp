#include "romforge/fe/assembly.hpp"

#include "romforge/util/parallel.hpp"

namespace romforge::fe {

Assembler::Assembler(const Mesh& mesh, const Material& mat)
    : mesh_(&mesh), mat_(mat), dof_(mesh), st_(&ShapeTable::get(mesh.kind)) {}

MatX Assembler::element_coords(Index e) const {
    const auto& conn = mesh_->elements[static_cast<std::size_t>(e)];
    MatX X(conn.size(), 3);
    for (std::size_t a = 0; a < conn.size(); ++a) X.row(static_cast<Index>(a)) = mesh_->nodes[static_cast<std::size_t>(conn[a])];
    return X;
}

MatX Assembler::element_displacements(Index e, const VecX& u_free) const {
    const auto& conn = mesh_->elements[static_cast<std::size_t>(e)];
    MatX u = MatX::Zero(static_cast<Index>(conn.size()), 3);
    for (std::size_t a = 0; a < conn.size(); ++a)
        for (int d = 0; d < 3; ++d) {
            const Index g = dof_(conn[a], d);
            if (g >= 0) u(static_cast<Index>(a), d) = u_free[g];
        }
    return u;
}

VecX Assembler::internal_force(const VecX& u_free, Kinematics kin) const {
    const std::size_t ne = mesh_->elements.size();
    std::vector<MatX> ef(ne);
    util::parallel_for(ne, [&](std::size_t e) {
        const MatX X = element_coords(static_cast<Index>(e));
        const MatX u = element_displacements(static_cast<Index>(e), u_free);
        ef[e] = element_internal_force(*st_, mat_, X, u, kin);
    });
    VecX f = VecX::Zero(dof_.n_free);
    for (std::size_t e = 0; e < ne; ++e) {
        const auto& conn = mesh_->elements[e];
        for (std::size_t a = 0; a < conn.size(); ++a)
            for (int d = 0; d < 3; ++d) {
                const Index g = dof_(conn[a], d);
                if (g >= 0) f[g] += ef[e](static_cast<Index>(a), d);
            }
    }
    return f;
}

SpMat Assembler::assemble_matrix(const VecX* u_free, Kinematics kin, bool mass) const {
    const std::size_t ne = mesh_->elements.size();
    std::vector<MatX> em(ne);
    util::parallel_for(ne, [&](std::size_t e) {
        const MatX X = element_coords(static_cast<Index>(e));
        if (mass) {
            em[e] = element_mass(*st_, mat_, X);
        } else {
            const MatX u = u_free ? element_displacements(static_cast<Index>(e), *u_free)
                                  : MatX::Zero(X.rows(), 3);
            em[e] = element_tangent(*st_, mat_, X, u, kin);
        }
    });
    std::vector<Triplet> trips;
    std::size_t nn = mesh_->elements.empty() ? 0 : mesh_->elements[0].size();
    trips.reserve(ne * nn * nn * 9);
    for (std::size_t e = 0; e < ne; ++e) {
        const auto& conn = mesh_->elements[e];
        for (std::size_t a = 0; a < conn.size(); ++a)
            for (int i = 0; i < 3; ++i) {
                const Index ga = dof_(conn[a], i);
                if (ga < 0) continue;
                for (std::size_t b = 0; b < conn.size(); ++b)
                    for (int j = 0; j < 3; ++j) {
                        const Index gb = dof_(conn[b], j);
                        if (gb < 0) continue;
                        trips.emplace_back(ga, gb, em[e](static_cast<Index>(3 * a) + i, static_cast<Index>(3 * b) + j));
                    }
            }
    }
    SpMat A(dof_.n_free, dof_.n_free);
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

const SpMat& Assembler::stiffness() const {
    if (!K0_) K0_ = assemble_matrix(nullptr, Kinematics::Linear, false);
    return *K0_;
}

const SpMat& Assembler::mass() const {
    if (!M_) M_ = assemble_matrix(nullptr, Kinematics::Linear, true);
    return *M_;
}

SpMat Assembler::tangent(const VecX& u_free, Kinematics kin) const {
    return assemble_matrix(&u_free, kin, false);
}

VecX Assembler::nonlinear_force(const VecX& u_free, Kinematics kin) const {
    return internal_force(u_free, kin) - stiffness() * u_free;
}

Real Assembler::volume() const {
    Real v = 0;
    for (Index e = 0; e < mesh_->element_count(); ++e) v += element_volume(*st_, element_coords(e));
    return v;
}

Real Assembler::strain_energy(const VecX& u_free, Kinematics kin) const {
    const auto sum_elements = [&](const VecX& u, Kinematics k) {
        Real W = 0;
        for (Index e = 0; e < mesh_->element_count(); ++e)
            W += element_strain_energy(*st_, mat_, element_coords(e), element_displacements(e, u), k);
        return W;
    };
    if (kin != Kinematics::CubicOnly)
        return sum_elements(u_free, kin);
    return 0.5 * (sum_elements(u_free, Kinematics::Full) + sum_elements((-u_free).eval(), Kinematics::Full));
}

} // namespace romforge::fe
