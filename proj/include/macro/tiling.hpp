#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "macro/geometry.hpp"

namespace macro {

/// The eleven uniform tilings of the plane, named by their polygon content.
enum class TopologyId { S, T, H, THTH, SHD, SO2, TSHS, TD2, T2STS, T3S2, T4H };

inline constexpr std::array<TopologyId, 11> kAllTopologies{
    TopologyId::S,    TopologyId::T,    TopologyId::H,     TopologyId::THTH,
    TopologyId::SHD,  TopologyId::SO2,  TopologyId::TSHS,  TopologyId::TD2,
    TopologyId::T2STS, TopologyId::T3S2, TopologyId::T4H,
};

std::string_view to_string(TopologyId id);

/// Accepts the short names ("SO2", "T4H", ...); case-sensitive.
TopologyId parse_topology(std::string_view name);

/// Vertex configuration, e.g. "3.6.3.6" for THTH.
std::string_view vertex_configuration(TopologyId id);

/// Degree of an interior vertex of the infinite tiling.
int nodal_connectivity(TopologyId id);

/// Number of distinct edge directions (mod 180 degrees) in the tiling.
int orientation_count(TopologyId id);

/// True when the tiling has at least one triangular face.
bool contains_triangles(TopologyId id);

/// Periodic patch of whole faces with unit edge length. Translating it by
/// integer combinations of the lattice vectors tiles the plane (shared
/// boundary nodes and edges coincide).
struct UnitCell {
    Vec2 lattice_a;
    Vec2 lattice_b;
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 2>> edges;
};

const UnitCell& unit_cell(TopologyId id);

struct MeshSpec {
    TopologyId topology = TopologyId::T;
    int nx = 1;
    int ny = 1;
    double edge_length = 50.0;  // mm
    double arm_fraction = 0.1;  // share of each edge end taken by a flexure arm

    void validate() const;
};

struct MeshEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    int orientation_class = 0;

    bool operator==(const MeshEdge&) const = default;
};

struct Mesh {
    TopologyId topology = TopologyId::T;
    double edge_length = 0.0;
    std::vector<Vec2> nodes;
    std::vector<MeshEdge> edges;
    std::vector<double> orientation_angles;  // degrees in [0, 180), ascending

    std::size_t class_count() const { return orientation_angles.size(); }
    bool operator==(const Mesh&) const = default;
};

Mesh generate_mesh(const MeshSpec& spec);

struct OrientationClass {
    double angle_deg = 0.0;
    std::size_t edge_count = 0;
};

std::vector<OrientationClass> orientation_classes(const Mesh& mesh);

std::vector<int> node_degrees(const Mesh& mesh);
bool is_connected(const Mesh& mesh);

/// Throws ValidationError naming the first violated mesh invariant.
void validate_mesh(const Mesh& mesh);

struct BoundingBox {
    Vec2 min;
    Vec2 max;
    double width() const { return max.x - min.x; }
    double height() const { return max.y - min.y; }
};

BoundingBox bounding_box(const std::vector<Vec2>& points);

/// Bounding box of generate_mesh(spec) without building the mesh.
BoundingBox mesh_bounding_box(const MeshSpec& spec);

} // namespace macro
