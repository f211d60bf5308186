#include "macro/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>

#include "macro/error.hpp"

namespace macro {

namespace {

struct TopologyInfo {
    std::string_view name;
    std::string_view configuration;
    int connectivity;
    int orientations;
    bool triangles;
};

// Indexed by TopologyId.
constexpr std::array<TopologyInfo, 11> kInfo{{
    {"S", "4.4.4.4", 4, 2, false},
    {"T", "3.3.3.3.3.3", 6, 3, true},
    {"H", "6.6.6", 3, 3, false},
    {"THTH", "3.6.3.6", 4, 3, true},
    {"SHD", "4.6.12", 3, 6, false},
    {"SO2", "4.8.8", 3, 4, false},
    {"TSHS", "3.4.6.4", 4, 6, true},
    {"TD2", "3.12.12", 3, 6, true},
    {"T2STS", "3.3.4.3.4", 5, 6, true},
    {"T3S2", "3.3.3.4.4", 5, 4, true},
    {"T4H", "3.3.3.3.6", 5, 3, true},
}};

const TopologyInfo& info(TopologyId id) { return kInfo[static_cast<std::size_t>(id)]; }

// Node merge tolerance in unit-edge coordinates.
constexpr double kMergeTol = 1e-6;
// Orientation classes are identified on a 1e-6 degree grid.
constexpr double kAngleQuantum = 1e-6;

class PointIndex {
public:
    explicit PointIndex(double tol) : tol_(tol) {}

    /// Index of an existing point within tolerance, or inserts `p` as `next`.
    std::size_t find_or_insert(Vec2 p, std::size_t next)
    {
        const auto kx = static_cast<std::int64_t>(std::floor(p.x / tol_));
        const auto ky = static_cast<std::int64_t>(std::floor(p.y / tol_));
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = buckets_.find(key(kx + dx, ky + dy));
                if (it == buckets_.end()) continue;
                for (const auto& [q, idx] : it->second) {
                    if (std::fabs(q.x - p.x) <= tol_ && std::fabs(q.y - p.y) <= tol_) return idx;
                }
            }
        }
        buckets_[key(kx, ky)].emplace_back(p, next);
        return next;
    }

private:
    static std::uint64_t key(std::int64_t a, std::int64_t b)
    {
        return (static_cast<std::uint64_t>(a) * 0x9E3779B97F4A7C15ULL) ^ static_cast<std::uint64_t>(b);
    }

    double tol_;
    std::unordered_map<std::uint64_t, std::vector<std::pair<Vec2, std::size_t>>> buckets_;
};

// Row stagger that keeps the mesh outline close to a rectangle when the first
// lattice vector is horizontal.
int row_shift(const UnitCell& cell, int row)
{
    if (cell.lattice_a.y != 0.0) return 0;
    return -static_cast<int>(std::floor(row * cell.lattice_b.x / cell.lattice_a.x + 0.5));
}

Vec2 cell_offset(const UnitCell& cell, int i, int j)
{
    const double ia = static_cast<double>(i + row_shift(cell, j));
    const double jb = static_cast<double>(j);
    return cell.lattice_a * ia + cell.lattice_b * jb;
}

double quantized_angle(Vec2 d)
{
    double a = std::round(undirected_angle_deg(d) / kAngleQuantum) * kAngleQuantum;
    if (a >= 180.0) a -= 180.0;
    return a;
}

BoundingBox unit_bounding_box(const MeshSpec& spec)
{
    const UnitCell& cell = unit_cell(spec.topology);
    const BoundingBox cb = bounding_box(cell.nodes);
    BoundingBox box{{INFINITY, INFINITY}, {-INFINITY, -INFINITY}};
    for (int j = 0; j < spec.ny; ++j) {
        for (int i : {0, spec.nx - 1}) {
            const Vec2 o = cell_offset(cell, i, j);
            box.min.x = std::min(box.min.x, cb.min.x + o.x);
            box.min.y = std::min(box.min.y, cb.min.y + o.y);
            box.max.x = std::max(box.max.x, cb.max.x + o.x);
            box.max.y = std::max(box.max.y, cb.max.y + o.y);
        }
    }
    return box;
}

} // namespace

std::string_view to_string(TopologyId id) { return info(id).name; }

TopologyId parse_topology(std::string_view name)
{
    for (TopologyId id : kAllTopologies) {
        if (info(id).name == name) return id;
    }
    throw ValidationError("unknown topology '" + std::string(name) + "'");
}

std::string_view vertex_configuration(TopologyId id) { return info(id).configuration; }
int nodal_connectivity(TopologyId id) { return info(id).connectivity; }
int orientation_count(TopologyId id) { return info(id).orientations; }
bool contains_triangles(TopologyId id) { return info(id).triangles; }

void MeshSpec::validate() const
{
    if (nx < 1) throw ValidationError("nx must be >= 1");
    if (ny < 1) throw ValidationError("ny must be >= 1");
    if (!(edge_length > 0.0) || !std::isfinite(edge_length))
        throw ValidationError("edge_length must be positive");
    if (!(arm_fraction > 0.0 && arm_fraction < 0.5))
        throw ValidationError("arm_fraction must lie in (0, 0.5)");
}

Mesh generate_mesh(const MeshSpec& spec)
{
    spec.validate();
    const UnitCell& cell = unit_cell(spec.topology);

    std::vector<Vec2> unit_nodes;
    std::vector<std::array<std::size_t, 2>> unit_edges;
    std::set<std::pair<std::size_t, std::size_t>> seen_edges;
    PointIndex index(kMergeTol);

    std::vector<std::size_t> local(cell.nodes.size());
    for (int j = 0; j < spec.ny; ++j) {
        for (int i = 0; i < spec.nx; ++i) {
            const Vec2 o = cell_offset(cell, i, j);
            for (std::size_t k = 0; k < cell.nodes.size(); ++k) {
                const Vec2 p = cell.nodes[k] + o;
                const std::size_t idx = index.find_or_insert(p, unit_nodes.size());
                if (idx == unit_nodes.size()) unit_nodes.push_back(p);
                local[k] = idx;
            }
            for (const auto& e : cell.edges) {
                const std::size_t a = local[static_cast<std::size_t>(e[0])];
                const std::size_t b = local[static_cast<std::size_t>(e[1])];
                if (seen_edges.emplace(std::min(a, b), std::max(a, b)).second) unit_edges.push_back({a, b});
            }
        }
    }

    std::vector<double> angles;
    angles.reserve(unit_edges.size());
    for (const auto& e : unit_edges) angles.push_back(quantized_angle(unit_nodes[e[1]] - unit_nodes[e[0]]));

    Mesh mesh;
    mesh.topology = spec.topology;
    mesh.edge_length = spec.edge_length;
    mesh.orientation_angles = angles;
    std::sort(mesh.orientation_angles.begin(), mesh.orientation_angles.end());
    mesh.orientation_angles.erase(std::unique(mesh.orientation_angles.begin(), mesh.orientation_angles.end()),
                                  mesh.orientation_angles.end());

    // Shift to the origin in unit coordinates, then scale, so that doubling
    // the edge length doubles every coordinate exactly.
    const BoundingBox box = bounding_box(unit_nodes);
    mesh.nodes.reserve(unit_nodes.size());
    for (const Vec2& p : unit_nodes) mesh.nodes.push_back((p - box.min) * spec.edge_length);

    mesh.edges.reserve(unit_edges.size());
    for (std::size_t k = 0; k < unit_edges.size(); ++k) {
        const auto it = std::lower_bound(mesh.orientation_angles.begin(), mesh.orientation_angles.end(), angles[k]);
        mesh.edges.push_back({unit_edges[k][0], unit_edges[k][1],
                              static_cast<int>(it - mesh.orientation_angles.begin())});
    }
    return mesh;
}

std::vector<OrientationClass> orientation_classes(const Mesh& mesh)
{
    std::vector<OrientationClass> out;
    out.reserve(mesh.orientation_angles.size());
    for (double a : mesh.orientation_angles) out.push_back({a, 0});
    for (const MeshEdge& e : mesh.edges) ++out[static_cast<std::size_t>(e.orientation_class)].edge_count;
    return out;
}

std::vector<int> node_degrees(const Mesh& mesh)
{
    std::vector<int> deg(mesh.nodes.size(), 0);
    for (const MeshEdge& e : mesh.edges) {
        ++deg[e.a];
        ++deg[e.b];
    }
    return deg;
}

bool is_connected(const Mesh& mesh)
{
    if (mesh.nodes.empty()) return false;
    std::vector<std::vector<std::size_t>> adj(mesh.nodes.size());
    for (const MeshEdge& e : mesh.edges) {
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    std::vector<char> visited(mesh.nodes.size(), 0);
    std::queue<std::size_t> q;
    q.push(0);
    visited[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        const std::size_t u = q.front();
        q.pop();
        for (std::size_t v : adj[u]) {
            if (!visited[v]) {
                visited[v] = 1;
                ++count;
                q.push(v);
            }
        }
    }
    return count == mesh.nodes.size();
}

void validate_mesh(const Mesh& mesh)
{
    if (!(mesh.edge_length > 0.0)) throw ValidationError("mesh edge_length must be positive");
    if (mesh.nodes.empty()) throw ValidationError("mesh has no nodes");
    if (mesh.edges.empty()) throw ValidationError("mesh has no edges");

    const std::size_t p = mesh.orientation_angles.size();
    if (static_cast<int>(p) != orientation_count(mesh.topology))
        throw ValidationError("orientation_angles count " + std::to_string(p) + " does not match topology " +
                              std::string(to_string(mesh.topology)));
    for (std::size_t k = 0; k < p; ++k) {
        const double a = mesh.orientation_angles[k];
        if (!(a >= 0.0 && a < 180.0)) throw ValidationError("orientation angle outside [0, 180)");
        if (k > 0 && !(a > mesh.orientation_angles[k - 1]))
            throw ValidationError("orientation_angles must be strictly ascending");
    }

    PointIndex index(1e-6 * mesh.edge_length);
    for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
        if (index.find_or_insert(mesh.nodes[k], k) != k)
            throw ValidationError("duplicate node " + std::to_string(k));
    }

    for (std::size_t k = 0; k < mesh.edges.size(); ++k) {
        const MeshEdge& e = mesh.edges[k];
        if (e.a >= mesh.nodes.size() || e.b >= mesh.nodes.size() || e.a == e.b)
            throw ValidationError("edge " + std::to_string(k) + " has invalid node indices");
        if (e.orientation_class < 0 || static_cast<std::size_t>(e.orientation_class) >= p)
            throw ValidationError("edge " + std::to_string(k) + " has invalid orientation class");
        const Vec2 d = mesh.nodes[e.b] - mesh.nodes[e.a];
        if (std::fabs(norm(d) - mesh.edge_length) > 1e-9 * mesh.edge_length)
            throw ValidationError("edge " + std::to_string(k) + " length differs from edge_length");
        const double cls = mesh.orientation_angles[static_cast<std::size_t>(e.orientation_class)];
        if (angle_gap_deg(undirected_angle_deg(d), cls) > 1e-6)
            throw ValidationError("edge " + std::to_string(k) + " direction differs from its class angle");
    }

    if (!is_connected(mesh)) throw ValidationError("mesh graph is not connected");
}

BoundingBox bounding_box(const std::vector<Vec2>& points)
{
    BoundingBox box{{INFINITY, INFINITY}, {-INFINITY, -INFINITY}};
    for (const Vec2& p : points) {
        box.min.x = std::min(box.min.x, p.x);
        box.min.y = std::min(box.min.y, p.y);
        box.max.x = std::max(box.max.x, p.x);
        box.max.y = std::max(box.max.y, p.y);
    }
    return box;
}

BoundingBox mesh_bounding_box(const MeshSpec& spec)
{
    spec.validate();
    const BoundingBox u = unit_bounding_box(spec);
    return {{0.0, 0.0}, (u.max - u.min) * spec.edge_length};
}

} // namespace macro
