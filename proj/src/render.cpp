#include "macro/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "macro/error.hpp"

namespace macro {

namespace {

std::string num(double v, const char* f = "%.3f")
{
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string label(double v) { return num(v, "%.4g"); }

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string header(double w, double h)
{
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n<rect width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" fill=\"white\"/>\n";
}

void text(std::ostringstream& out, double x, double y, const std::string& s, const char* anchor = "middle",
          int size = 11)
{
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\" font-size=\"" << size
        << "\" text-anchor=\"" << anchor << "\">" << escape(s) << "</text>\n";
}

void line(std::ostringstream& out, double x1, double y1, double x2, double y2, const char* colour, double width)
{
    out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
        << "\" stroke=\"" << colour << "\" stroke-width=\"" << num(width) << "\" stroke-linecap=\"round\"/>\n";
}

void rect(std::ostringstream& out, double x, double y, double w, double h, const std::string& fill)
{
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
        << "\" fill=\"" << fill << "\"/>\n";
}

const char* kSeries[3] = {"#1f77b4", "#ff7f0e", "#2ca02c"};

std::string row_name(const ReportRow& r)
{
    switch (r.mode.kind) {
    case ModeKind::oriented: return r.mode.bits_string();
    case ModeKind::random: return label(r.mode.fraction) + "/" + std::to_string(r.mode.seed);
    case ModeKind::all: return "all";
    }
    return "";
}

// Grouped bars: ratio_x, ratio_y, ratio_shear per row.
SvgDocument ratio_chart(const ExperimentReport& report)
{
    const double group = 48.0, left = 60.0, top = 40.0, plot_h = 260.0;
    const double width = left + 20.0 + group * static_cast<double>(report.rows.size());
    const double height = top + plot_h + 90.0;

    double lo = -1.0, hi = 1.0;
    for (const ReportRow& r : report.rows)
        for (double v : {r.parallelogram.ratio_x, r.parallelogram.ratio_y, r.parallelogram.ratio_shear}) {
            lo = std::min(lo, std::floor(v * 2.0) / 2.0);
            hi = std::max(hi, std::ceil(v * 2.0) / 2.0);
        }
    const auto y_of = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

    std::ostringstream out;
    out << header(width, height);
    text(out, width / 2, 20, report.experiment + ": strain ratio per mode");
    for (double t = lo; t <= hi + 1e-9; t += 0.5) {
        line(out, left, y_of(t), width - 20, y_of(t), "#dddddd", 0.5);
        text(out, left - 6, y_of(t) + 4, label(t), "end", 10);
    }
    line(out, left, y_of(0.0), width - 20, y_of(0.0), "black", 1.0);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const ReportRow& r = report.rows[i];
        const double x0 = left + group * static_cast<double>(i) + 6.0;
        const double vals[3] = {r.parallelogram.ratio_x, r.parallelogram.ratio_y, r.parallelogram.ratio_shear};
        for (int s = 0; s < 3; ++s) {
            const double y0 = y_of(0.0), y1 = y_of(vals[s]);
            rect(out, x0 + 12.0 * s, std::min(y0, y1), 11.0, std::fabs(y1 - y0), kSeries[s]);
        }
        const double cx = x0 + 18.0;
        out << "<text x=\"" << num(cx) << "\" y=\"" << num(top + plot_h + 14)
            << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"end\" transform=\"rotate(-60 " << num(cx)
            << " " << num(top + plot_h + 14) << ")\">"
            << escape(row_name(r) + (r.label == "superposed" ? "*" : "")) << "</text>\n";
    }
    const char* names[3] = {"ratio_x", "ratio_y", "ratio_shear"};
    for (int s = 0; s < 3; ++s) {
        rect(out, left + 90.0 * s, height - 16, 10, 10, kSeries[s]);
        text(out, left + 90.0 * s + 14, height - 7, names[s], "start", 10);
    }
    out << "</svg>\n";
    return {"ratios", out.str()};
}

struct EnergyGroup {
    std::string name;
    std::vector<double> energies;
    double mean() const
    {
        double s = 0.0;
        for (double e : energies) s += e;
        return energies.empty() ? 0.0 : s / static_cast<double>(energies.size());
    }
};

std::vector<EnergyGroup> energy_groups(const ExperimentReport& report, const std::string& experiment)
{
    std::vector<EnergyGroup> groups;
    for (const ReportRow& r : report.rows) {
        if (r.experiment != experiment || !r.strain_energy) continue;
        const std::string name(to_string(r.topology));
        if (groups.empty() || groups.back().name != name) groups.push_back({name, {}});
        groups.back().energies.push_back(*r.strain_energy);
    }
    return groups;
}

SvgDocument energy_chart(const ExperimentReport& report)
{
    const std::vector<EnergyGroup> groups = energy_groups(report, report.rows.front().experiment);
    const double slot = 56.0, left = 70.0, top = 40.0, plot_h = 260.0;
    const double width = left + 20.0 + slot * static_cast<double>(groups.size());
    const double height = top + plot_h + 50.0;
    double hi = 0.0;
    for (const EnergyGroup& g : groups)
        for (double e : g.energies) hi = std::max(hi, e);
    if (!(hi > 0.0)) hi = 1.0;
    const auto y_of = [&](double v) { return top + plot_h * (1.0 - v / hi); };

    std::ostringstream out;
    out << header(width, height);
    text(out, width / 2, 20, report.experiment + ": mean strain energy per mode (N mm)");
    for (int t = 0; t <= 4; ++t) {
        const double v = hi * t / 4.0;
        line(out, left, y_of(v), width - 20, y_of(v), "#dddddd", 0.5);
        text(out, left - 6, y_of(v) + 4, label(v), "end", 10);
    }
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const EnergyGroup& g = groups[i];
        const double x0 = left + slot * static_cast<double>(i) + 8.0;
        const double m = g.mean();
        rect(out, x0, y_of(m), slot - 16.0, y_of(0.0) - y_of(m), "#9ecae1");
        for (std::size_t k = 0; k < g.energies.size(); ++k) {
            const double jitter = g.energies.size() > 1 ? (static_cast<double>(k) / (g.energies.size() - 1) - 0.5) : 0.0;
            out << "<circle cx=\"" << num(x0 + (slot - 16.0) * (0.5 + 0.6 * jitter)) << "\" cy=\""
                << num(y_of(g.energies[k])) << "\" r=\"2\" fill=\"#08519c\"/>\n";
        }
        text(out, x0 + (slot - 16.0) / 2, y_of(m) - 4, label(m), "middle", 9);
        text(out, x0 + (slot - 16.0) / 2, top + plot_h + 16, g.name);
    }
    line(out, left, y_of(0.0), width - 20, y_of(0.0), "black", 1.0);
    out << "</svg>\n";
    return {"energy", out.str()};
}

SvgDocument heatmap_chart(const ExperimentReport& report)
{
    std::vector<std::string> cases;
    std::map<std::string, std::map<std::string, double>> cell;
    std::vector<std::string> topologies;
    for (const ReportRow& r : report.rows) {
        if (std::find(cases.begin(), cases.end(), r.experiment) == cases.end()) cases.push_back(r.experiment);
    }
    for (const std::string& c : cases) {
        for (const EnergyGroup& g : energy_groups(report, c)) {
            cell[g.name][c] = g.mean();
            if (std::find(topologies.begin(), topologies.end(), g.name) == topologies.end())
                topologies.push_back(g.name);
        }
    }
    std::vector<std::string> case_names;
    const auto& jc = report.config.contains("cases") ? report.config["cases"] : nlohmann::json::array();
    for (std::size_t c = 0; c < cases.size(); ++c) {
        if (c < jc.size()) case_names.push_back(label(jc[c][0].get<double>()) + "/" + label(jc[c][1].get<double>()));
        else case_names.push_back(cases[c]);
    }

    double hi = 0.0;
    for (const auto& [t, m] : cell)
        for (const auto& [c, v] : m) hi = std::max(hi, v);
    if (!(hi > 0.0)) hi = 1.0;

    const double cw = 90.0, ch = 28.0, left = 70.0, top = 60.0;
    const double width = left + cw * static_cast<double>(cases.size()) + 20.0;
    const double height = top + ch * static_cast<double>(topologies.size()) + 20.0;
    std::ostringstream out;
    out << header(width, height);
    text(out, width / 2, 20, "mean strain energy (N mm), actuator/arm width (mm)");
    for (std::size_t c = 0; c < cases.size(); ++c)
        text(out, left + cw * (static_cast<double>(c) + 0.5), top - 8, case_names[c]);
    for (std::size_t t = 0; t < topologies.size(); ++t) {
        const double y = top + ch * static_cast<double>(t);
        text(out, left - 6, y + ch / 2 + 4, topologies[t], "end");
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const double v = cell[topologies[t]][cases[c]];
            const double s = std::sqrt(std::clamp(v / hi, 0.0, 1.0));
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - s)));
            char fill[16];
            std::snprintf(fill, sizeof fill, "#ff%02x%02x", shade, shade);
            rect(out, left + cw * static_cast<double>(c), y, cw - 2.0, ch - 2.0, fill);
            text(out, left + cw * (static_cast<double>(c) + 0.5), y + ch / 2 + 3, label(v), "middle", 10);
        }
    }
    out << "</svg>\n";
    return {"heatmap", out.str()};
}

} // namespace

std::string render_mesh_svg(const Mesh& mesh, const ActuationMode& mode, const SolveResult* solve,
                            const MeshSvgOptions& options)
{
    return render_mesh_svg(mesh, edges_for_mode(mesh, mode), solve, options);
}

std::string render_mesh_svg(const Mesh& mesh, const std::vector<std::size_t>& on_edges, const SolveResult* solve,
                            const MeshSvgOptions& options)
{
    if (!(options.px_per_mm > 0.0) || !(options.off_stroke > 0.0))
        throw ValidationError("px_per_mm and off_stroke must be positive");
    std::vector<char> on(mesh.edges.size(), 0);
    for (std::size_t e : on_edges) {
        if (e >= mesh.edges.size()) throw ValidationError("on_edges: edge index out of range");
        on[e] = 1;
    }
    if (solve && solve->vertex_positions_deformed.size() != mesh.nodes.size())
        throw ValidationError("solve result does not belong to this mesh");

    std::vector<Vec2> all = mesh.nodes;
    if (solve) all.insert(all.end(), solve->vertex_positions_deformed.begin(), solve->vertex_positions_deformed.end());
    const BoundingBox box = bounding_box(all);
    const double margin = 10.0;
    const double k = options.px_per_mm;
    const double panel_w = box.width() * k + 2 * margin;
    const double shift = (solve && !options.overlay) ? panel_w : 0.0;
    const double width = panel_w + shift;
    const double height = box.height() * k + 2 * margin;
    const auto X = [&](double x) { return margin + (x - box.min.x) * k; };
    const auto Y = [&](double y) { return margin + (box.max.y - y) * k; };

    std::ostringstream out;
    out << header(width, height);
    const auto draw = [&](const std::vector<Vec2>& pts, double dx, const char* colour, const char* id) {
        out << "<g id=\"" << id << "\">\n";
        for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
            const Vec2 a = pts[mesh.edges[e].a];
            const Vec2 b = pts[mesh.edges[e].b];
            line(out, X(a.x) + dx, Y(a.y), X(b.x) + dx, Y(b.y), colour,
                 on[e] ? 3.0 * options.off_stroke : options.off_stroke);
        }
        out << "</g>\n";
    };
    draw(mesh.nodes, 0.0, solve ? "#999999" : "black", "undeformed");
    if (solve) draw(solve->vertex_positions_deformed, shift, "#c0392b", "deformed");
    out << "</svg>\n";
    return out.str();
}

std::vector<SvgDocument> render_charts(const ExperimentReport& report)
{
    if (report.rows.empty()) throw ValidationError("report has no rows to chart");
    if (report.experiment == "heatmap") return {heatmap_chart(report)};
    if (report.experiment == "energy") return {energy_chart(report)};
    return {ratio_chart(report)};
}

} // namespace macro
