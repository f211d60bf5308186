#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "macro/actuation.hpp"
#include "macro/beam_fem.hpp"
#include "macro/strain_metrics.hpp"
#include "macro/tiling.hpp"

namespace macro {

nlohmann::json mesh_to_json(const Mesh& mesh);
/// Throws ValidationError on missing fields or an invalid mesh.
Mesh mesh_from_json(const nlohmann::json& doc);

/// Canonical text form; parse then re-serialize reproduces it byte for byte.
std::string mesh_to_string(const Mesh& mesh);
Mesh mesh_from_string(const std::string& text);

nlohmann::json mode_to_json(const ActuationMode& mode);
ActuationMode mode_from_json(const nlohmann::json& doc);

/// Displacements and deformed positions of the mesh vertices only.
nlohmann::json solve_to_json(const SolveResult& result, std::size_t vertex_count);

/// Values rounded to 9 significant digits.
nlohmann::json strain_to_json(const StrainSummary& s);
double round9(double v);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace macro
