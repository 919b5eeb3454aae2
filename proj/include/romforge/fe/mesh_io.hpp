#pragma once

#include "romforge/fe/mesh.hpp"

#include <string>

namespace romforge::fe {

/// Mesh JSON schema:
///   kind      : "HEX8" | "HEX20"
///   nodes     : [[x, y, z], ...]
///   elements  : [[n0, ..., n7|n19], ...]   (ordering documented in mesh.hpp)
///   node_sets : {"name": [node, ...], ...}
///   dirichlet : [[node, dir], ...]
std::string mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const std::string& text);

void save_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

} // namespace romforge::fe
