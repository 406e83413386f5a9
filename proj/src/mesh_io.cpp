#include <cstdio>
#include <fstream>
#include <unordered_map>

#include "meshsizer/errors.hpp"
#include "meshsizer/io.hpp"

namespace meshsizer {

namespace {

json edges_json(const HybridMesh& mesh, BoundaryTag tag) {
    json arr = json::array();
    for (const auto& be : mesh.boundary)
        if (be.tag == tag) arr.push_back({be.a, be.b});
    return arr;
}

}  // namespace

json mesh_to_json(const HybridMesh& mesh) {
    json j;
    j["nodes"] = json::array();
    for (const auto& p : mesh.nodes) j["nodes"].push_back({p.x, p.y});
    j["triangles"] = mesh.triangles;
    j["quads"] = mesh.quads;
    j["boundary"]["wall"] = edges_json(mesh, BoundaryTag::wall);
    j["boundary"]["farfield"] = edges_json(mesh, BoundaryTag::farfield);
    j["wall_columns"] = mesh.wall_columns;
    return j;
}

HybridMesh mesh_from_json(const json& j) {
    HybridMesh mesh;
    try {
        for (const auto& p : j.at("nodes")) mesh.nodes.push_back({p.at(0), p.at(1)});
        if (j.contains("triangles"))
            mesh.triangles = j["triangles"].get<std::vector<std::array<int, 3>>>();
        if (j.contains("quads")) mesh.quads = j["quads"].get<std::vector<std::array<int, 4>>>();
        const auto& b = j.at("boundary");
        for (const auto& e : b.value("wall", json::array()))
            mesh.boundary.push_back({e.at(0), e.at(1), BoundaryTag::wall});
        for (const auto& e : b.value("farfield", json::array()))
            mesh.boundary.push_back({e.at(0), e.at(1), BoundaryTag::farfield});
        if (j.contains("wall_columns"))
            mesh.wall_columns = j["wall_columns"].get<std::vector<std::vector<int>>>();
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed mesh JSON: ") + ex.what());
    }
    if (mesh.wall_columns.empty() && !mesh.quads.empty())
        mesh.wall_columns = reconstruct_wall_columns(mesh);
    canonicalize_boundary(mesh);
    validate_mesh(mesh);
    return mesh;
}

json field_to_json(const NodalField& field) {
    return json{{"name", field.name}, {"values", field.values}};
}

NodalField field_from_json(const json& j) {
    try {
        NodalField f(j.at("name"), j.at("values").get<std::vector<double>>());
        for (double v : f.values)
            if (!std::isfinite(v)) throw IoError("field '" + f.name + "' has a non-finite value");
        return f;
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed field JSON: ") + ex.what());
    }
}

json spacing_to_json(const SpacingField& spacing, const json& provenance) {
    json j{{"delta_min", spacing.delta_min},
           {"delta_max", spacing.delta_max},
           {"values", spacing.values}};
    if (!provenance.empty()) j["provenance"] = provenance;
    return j;
}

SpacingField spacing_from_json(const json& j, json* provenance) {
    try {
        SpacingField s;
        s.delta_min = j.at("delta_min");
        s.delta_max = j.at("delta_max");
        s.values = j.at("values").get<std::vector<double>>();
        if (provenance) *provenance = j.value("provenance", json::object());
        if (!(s.delta_min > 0.0) || !(s.delta_min <= s.delta_max))
            throw IoError("spacing clamp bounds must satisfy 0 < delta_min <= delta_max");
        for (double v : s.values)
            if (!(v >= s.delta_min && v <= s.delta_max))
                throw IoError("spacing value " + std::to_string(v) + " outside [" +
                              std::to_string(s.delta_min) + ", " + std::to_string(s.delta_max) +
                              "]");
        return s;
    } catch (const json::exception& ex) {
        throw IoError(std::string("malformed spacing JSON: ") + ex.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw IoError("cannot parse " + path + ": " + ex.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot write file: " + tmp);
        out << j.dump() << "\n";
        if (!out) throw IoError("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("cannot move " + tmp + " to " + path);
}

std::string json_hash(const json& j) {
    const std::string s = j.dump();
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

HybridMesh load_mesh(const std::string& path) { return mesh_from_json(read_json_file(path)); }

void save_mesh(const HybridMesh& mesh, const std::string& path) {
    HybridMesh canonical = mesh;
    canonicalize_boundary(canonical);
    write_json_file(mesh_to_json(canonical), path);
}

NodalField load_field(const std::string& path) { return field_from_json(read_json_file(path)); }

void save_field(const NodalField& field, const std::string& path) {
    write_json_file(field_to_json(field), path);
}

SpacingField load_spacing(const std::string& path, json* provenance) {
    return spacing_from_json(read_json_file(path), provenance);
}

void save_spacing(const SpacingField& spacing, const std::string& path, const json& provenance) {
    write_json_file(spacing_to_json(spacing, provenance), path);
}

}  // namespace meshsizer
