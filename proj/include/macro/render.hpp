#pragma once

#include <string>
#include <vector>

#include "macro/actuation.hpp"
#include "macro/beam_fem.hpp"
#include "macro/experiments.hpp"
#include "macro/tiling.hpp"

namespace macro {

struct MeshSvgOptions {
    double px_per_mm = 1.0;
    double off_stroke = 1.0;  // px; ON edges are drawn 3x wider
    bool overlay = true;      // deformed drawn over the undeformed mesh, else beside it
};

/// Undeformed mesh with ON edges thick; the deformed vertex positions of
/// `solve` are added when given. Throws ValidationError if `mode` does not
/// fit the mesh.
std::string render_mesh_svg(const Mesh& mesh, const ActuationMode& mode, const SolveResult* solve = nullptr,
                            const MeshSvgOptions& options = {});
/// Same with an explicit ON edge set; an empty set draws every edge thin.
std::string render_mesh_svg(const Mesh& mesh, const std::vector<std::size_t>& on_edges,
                            const SolveResult* solve = nullptr, const MeshSvgOptions& options = {});

struct SvgDocument {
    std::string name;  // file stem suffix, e.g. "ratios"
    std::string content;
};

/// Energy reports: mean bars with per-mode scatter. Heatmap reports: a
/// topology x case grid. Everything else: grouped ratio bars per row.
/// Throws ValidationError on an empty report.
std::vector<SvgDocument> render_charts(const ExperimentReport& report);

} // namespace macro
