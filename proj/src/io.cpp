#include "macro/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "macro/error.hpp"

namespace macro {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* name)
{
    if (!doc.is_object() || !doc.contains(name)) throw ValidationError(std::string("missing field '") + name + "'");
    return doc.at(name);
}

template <typename T>
T get(const json& doc, const char* name)
{
    try {
        return field(doc, name).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("field '") + name + "' has the wrong type");
    }
}

} // namespace

json mesh_to_json(const Mesh& mesh)
{
    json nodes = json::array();
    for (const Vec2& p : mesh.nodes) nodes.push_back({p.x, p.y});
    json edges = json::array();
    for (const MeshEdge& e : mesh.edges) edges.push_back({e.a, e.b, e.orientation_class});
    return {{"topology", std::string(to_string(mesh.topology))},
            {"edge_length", mesh.edge_length},
            {"orientation_angles", mesh.orientation_angles},
            {"nodes", nodes},
            {"edges", edges}};
}

Mesh mesh_from_json(const json& doc)
{
    Mesh mesh;
    mesh.topology = parse_topology(get<std::string>(doc, "topology"));
    mesh.edge_length = get<double>(doc, "edge_length");
    mesh.orientation_angles = get<std::vector<double>>(doc, "orientation_angles");
    for (const auto& p : get<std::vector<std::array<double, 2>>>(doc, "nodes")) mesh.nodes.push_back({p[0], p[1]});
    for (const auto& e : get<std::vector<std::array<long long, 3>>>(doc, "edges")) {
        const auto n = static_cast<long long>(mesh.nodes.size());
        if (e[0] < 0 || e[1] < 0 || e[0] >= n || e[1] >= n) throw ValidationError("edges: node index out of range");
        if (e[2] < 0 || e[2] >= static_cast<long long>(mesh.orientation_angles.size()))
            throw ValidationError("edges: orientation class out of range");
        mesh.edges.push_back({static_cast<std::size_t>(e[0]), static_cast<std::size_t>(e[1]), static_cast<int>(e[2])});
    }
    validate_mesh(mesh);
    return mesh;
}

std::string mesh_to_string(const Mesh& mesh) { return mesh_to_json(mesh).dump(1) + "\n"; }

Mesh mesh_from_string(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("mesh file is not valid JSON: ") + e.what());
    }
    return mesh_from_json(doc);
}

json mode_to_json(const ActuationMode& mode)
{
    json out{{"kind", to_string(mode.kind)}};
    switch (mode.kind) {
    case ModeKind::oriented: out["bits"] = mode.bits_string(); break;
    case ModeKind::random:
        out["fraction"] = mode.fraction;
        out["seed"] = mode.seed;
        out["on_edges"] = mode.on_edges;
        break;
    case ModeKind::all: break;
    }
    return out;
}

ActuationMode mode_from_json(const json& doc)
{
    const ModeKind kind = parse_mode_kind(get<std::string>(doc, "kind"));
    if (kind == ModeKind::all) return ActuationMode::all_on();
    if (kind == ModeKind::oriented) {
        const std::string bits = get<std::string>(doc, "bits");
        if (bits.empty() || bits.size() > 63 || bits.find_first_not_of("01") != std::string::npos)
            throw ValidationError("bits must be a binary string");
        return ActuationMode::oriented(std::stoull(bits, nullptr, 2), static_cast<int>(bits.size()));
    }
    ActuationMode m;
    m.kind = ModeKind::random;
    m.fraction = get<double>(doc, "fraction");
    m.seed = get<std::uint64_t>(doc, "seed");
    m.on_edges = get<std::vector<std::size_t>>(doc, "on_edges");
    return m;
}

json solve_to_json(const SolveResult& result, std::size_t vertex_count)
{
    json disp = json::array();
    for (std::size_t k = 0; k < vertex_count; ++k) {
        const auto d = result.displacement(k);
        disp.push_back({d[0], d[1], d[2]});
    }
    json pos = json::array();
    for (const Vec2& p : result.vertex_positions_deformed) pos.push_back({p.x, p.y});
    return {{"displacements", disp},
            {"vertex_positions_deformed", pos},
            {"strain_energy", result.strain_energy},
            {"residual_norm", result.residual_norm}};
}

double round9(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

json strain_to_json(const StrainSummary& s)
{
    return {{"eps_x", round9(s.eps_x)},         {"eps_y", round9(s.eps_y)},
            {"shear_alpha", round9(s.shear_alpha)}, {"ratio_x", round9(s.ratio_x)},
            {"ratio_y", round9(s.ratio_y)},     {"ratio_shear", round9(s.ratio_shear)}};
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

} // namespace macro
