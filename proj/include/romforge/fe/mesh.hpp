#pragma once

#include "romforge/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace romforge::fe {

enum class ElementKind { HEX8, HEX20 };

inline int nodes_per_element(ElementKind k) { return k == ElementKind::HEX8 ? 8 : 20; }

/// Hexahedral mesh with named node sets and homogeneous Dirichlet pins.
///
/// HEX20 node ordering (serendipity, reference cube [-1,1]^3):
///   0-7   corners, bottom face (zeta=-1) counter-clockwise then top face:
///         0:(-1,-1,-1) 1:(+1,-1,-1) 2:(+1,+1,-1) 3:(-1,+1,-1)
///         4:(-1,-1,+1) 5:(+1,-1,+1) 6:(+1,+1,+1) 7:(-1,+1,+1)
///   8-11  bottom edge midsides: (0,1) (1,2) (2,3) (3,0)
///   12-15 top edge midsides:    (4,5) (5,6) (6,7) (7,4)
///   16-19 vertical edge midsides: (0,4) (1,5) (2,6) (3,7)
struct Mesh {
    ElementKind kind = ElementKind::HEX8;
    std::vector<Vec3> nodes;
    std::vector<std::vector<Index>> elements;
    std::map<std::string, std::vector<Index>> node_sets;
    std::vector<std::pair<Index, int>> dirichlet; ///< (node, direction) pinned to zero

    Index node_count() const { return static_cast<Index>(nodes.size()); }
    Index element_count() const { return static_cast<Index>(elements.size()); }
};

/// Maps (node, direction) to a free-dof index; Dirichlet dofs map to -1.
struct DofMap {
    std::vector<Index> index; ///< 3*node + dir -> free dof or -1
    Index n_free = 0;

    explicit DofMap(const Mesh& mesh);

    Index operator()(Index node, int dir) const { return index[static_cast<std::size_t>(3 * node + dir)]; }

    /// Scatter a free-dof vector into a full 3N nodal vector (pins get zero).
    VecX expand(const Mesh& mesh, const VecX& u_free) const;
    /// Gather a full 3N nodal vector into free-dof layout.
    VecX restrict_free(const VecX& u_full) const;
};

} // namespace romforge::fe
