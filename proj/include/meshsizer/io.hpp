#pragma once

#include <string>

#include <json.hpp>

#include "meshsizer/mesh.hpp"

namespace meshsizer {

using json = nlohmann::json;

json mesh_to_json(const HybridMesh& mesh);
HybridMesh mesh_from_json(const json& j);

json field_to_json(const NodalField& field);
NodalField field_from_json(const json& j);

json spacing_to_json(const SpacingField& spacing, const json& provenance = json::object());
/// Returns the spacing; *provenance receives the file's provenance block when non-null.
SpacingField spacing_from_json(const json& j, json* provenance = nullptr);

SpacingField load_spacing(const std::string& path, json* provenance = nullptr);
void save_spacing(const SpacingField& spacing, const std::string& path,
                  const json& provenance = json::object());

json read_json_file(const std::string& path);
/// Writes canonical compact JSON (sorted keys) atomically via a temp file.
void write_json_file(const json& j, const std::string& path);

/// FNV-1a hash of the canonical dump, as fixed-width hex. Used for
/// provenance blocks; stable across runs and platforms.
std::string json_hash(const json& j);

}  // namespace meshsizer
