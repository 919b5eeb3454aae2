#include "romforge/fe/mesh_io.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace romforge::fe {

using nlohmann::json;

std::string mesh_to_json(const Mesh& mesh) {
    json j;
    j["kind"] = mesh.kind == ElementKind::HEX8 ? "HEX8" : "HEX20";
    auto& jn = j["nodes"] = json::array();
    for (const auto& p : mesh.nodes) jn.push_back({p.x(), p.y(), p.z()});
    j["elements"] = mesh.elements;
    j["node_sets"] = json::object();
    for (const auto& [name, nodes] : mesh.node_sets) j["node_sets"][name] = nodes;
    auto& jd = j["dirichlet"] = json::array();
    for (const auto& [node, dir] : mesh.dirichlet) jd.push_back({node, dir});
    return j.dump(1);
}

Mesh mesh_from_json(const std::string& text) {
    const json j = json::parse(text);
    Mesh mesh;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "HEX8")
        mesh.kind = ElementKind::HEX8;
    else if (kind == "HEX20")
        mesh.kind = ElementKind::HEX20;
    else
        throw std::invalid_argument("unknown element kind: " + kind);

    for (const auto& row : j.at("nodes")) {
        if (row.size() != 3) throw std::invalid_argument("node row must have 3 coordinates");
        mesh.nodes.emplace_back(row[0].get<Real>(), row[1].get<Real>(), row[2].get<Real>());
    }
    const std::size_t nn = static_cast<std::size_t>(nodes_per_element(mesh.kind));
    for (const auto& row : j.at("elements")) {
        const auto conn = row.get<std::vector<Index>>();
        if (conn.size() != nn) throw std::invalid_argument("element has wrong node count for kind");
        for (const Index n : conn)
            if (n < 0 || n >= mesh.node_count()) throw std::invalid_argument("element node out of range");
        mesh.elements.push_back(conn);
    }
    if (j.contains("node_sets"))
        for (const auto& [name, nodes] : j.at("node_sets").items()) {
            const auto list = nodes.get<std::vector<Index>>();
            for (const Index n : list)
                if (n < 0 || n >= mesh.node_count()) throw std::invalid_argument("node set entry out of range");
            mesh.node_sets[name] = list;
        }
    if (j.contains("dirichlet"))
        for (const auto& row : j.at("dirichlet")) {
            if (row.size() != 2) throw std::invalid_argument("dirichlet row must be [node, dir]");
            mesh.dirichlet.emplace_back(row[0].get<Index>(), row[1].get<int>());
        }
    return mesh;
}

void save_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << mesh_to_json(mesh);
}

Mesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return mesh_from_json(text);
}

} // namespace romforge::fe
