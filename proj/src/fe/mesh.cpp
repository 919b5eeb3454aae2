#include "romforge/fe/mesh.hpp"

#include <stdexcept>

namespace romforge::fe {

DofMap::DofMap(const Mesh& mesh) {
    const Index n = mesh.node_count();
    index.assign(static_cast<std::size_t>(3 * n), 0);
    for (const auto& [node, dir] : mesh.dirichlet) {
        if (node < 0 || node >= n || dir < 0 || dir > 2)
            throw std::invalid_argument("dirichlet entry out of range");
        index[static_cast<std::size_t>(3 * node + dir)] = -1;
    }
    n_free = 0;
    for (auto& slot : index)
        if (slot == 0)
            slot = n_free++;
        else
            slot = -1;
}

VecX DofMap::expand(const Mesh& mesh, const VecX& u_free) const {
    VecX full = VecX::Zero(3 * mesh.node_count());
    for (Index i = 0; i < static_cast<Index>(index.size()); ++i)
        if (index[static_cast<std::size_t>(i)] >= 0) full[i] = u_free[index[static_cast<std::size_t>(i)]];
    return full;
}

VecX DofMap::restrict_free(const VecX& u_full) const {
    VecX out = VecX::Zero(n_free);
    for (Index i = 0; i < static_cast<Index>(index.size()); ++i)
        if (index[static_cast<std::size_t>(i)] >= 0) out[index[static_cast<std::size_t>(i)]] = u_full[i];
    return out;
}

} // namespace romforge::fe
