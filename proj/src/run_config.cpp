#include "macro/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "macro/error.hpp"
#include "macro/io.hpp"
#include "macro/render.hpp"

namespace macro {

using nlohmann::json;

namespace {

template <typename T>
T read_key(const json& doc, const std::string& key)
{
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config key '" + key + "' has the wrong type");
    }
}

bool per_topology(const std::string& experiment) { return experiment != "energy" && experiment != "heatmap"; }

} // namespace

const std::vector<std::string>& experiment_kinds()
{
    static const std::vector<std::string> kinds{"mode_sweep", "random_sweep", "superposition",
                                                "size_invariance", "energy", "heatmap"};
    return kinds;
}

RunConfig RunConfig::from_json(const json& doc)
{
    if (!doc.is_object()) throw ValidationError("config must be a JSON object");
    RunConfig c;
    for (const auto& [key, value] : doc.items()) {
        if (key == "experiment") c.experiment = read_key<std::string>(doc, key);
        else if (key == "topologies") {
            c.topologies.clear();
            for (const std::string& name : read_key<std::vector<std::string>>(doc, key))
                c.topologies.push_back(parse_topology(name));
        } else if (key == "nx") c.nx = read_key<int>(doc, key);
        else if (key == "ny") c.ny = read_key<int>(doc, key);
        else if (key == "edge_length") c.edge_length = read_key<double>(doc, key);
        else if (key == "arm_fraction") c.arm_fraction = read_key<double>(doc, key);
        else if (key == "eps_a") c.eps_a = read_key<double>(doc, key);
        else if (key == "youngs_modulus") c.youngs_modulus = read_key<double>(doc, key);
        else if (key == "poissons_ratio") c.poissons_ratio = read_key<double>(doc, key);
        else if (key == "actuator_width") c.actuator_width = read_key<double>(doc, key);
        else if (key == "arm_width") c.arm_width = read_key<double>(doc, key);
        else if (key == "depth") c.depth = read_key<double>(doc, key);
        else if (key == "refinement") c.refinement = read_key<int>(doc, key);
        else if (key == "fractions") c.fractions = read_key<std::vector<double>>(doc, key);
        else if (key == "replicates") c.replicates = read_key<int>(doc, key);
        else if (key == "seed") c.seed = read_key<std::uint64_t>(doc, key);
        else if (key == "sizes") {
            c.sizes.clear();
            for (const auto& s : read_key<std::vector<std::array<int, 2>>>(doc, key)) c.sizes.emplace_back(s[0], s[1]);
        } else if (key == "target_width") c.target_width = read_key<double>(doc, key);
        else if (key == "target_height") c.target_height = read_key<double>(doc, key);
        else if (key == "cases") {
            c.cases.clear();
            for (const auto& s : read_key<std::vector<std::array<double, 2>>>(doc, key)) c.cases.push_back({s[0], s[1]});
        } else if (key == "timing") c.timing = read_key<bool>(doc, key);
        else if (key == "outdir") c.outdir = read_key<std::string>(doc, key);
        else throw ValidationError("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

json RunConfig::to_json() const
{
    json names = json::array();
    for (TopologyId t : topologies) names.push_back(std::string(to_string(t)));
    json jsizes = json::array();
    for (const auto& [x, y] : sizes) jsizes.push_back({x, y});
    json jcases = json::array();
    for (const StiffnessCase& s : cases) jcases.push_back({s.actuator_width, s.arm_width});
    return {{"experiment", experiment},
            {"topologies", names},
            {"nx", nx},
            {"ny", ny},
            {"edge_length", edge_length},
            {"arm_fraction", arm_fraction},
            {"eps_a", eps_a},
            {"youngs_modulus", youngs_modulus},
            {"poissons_ratio", poissons_ratio},
            {"actuator_width", actuator_width},
            {"arm_width", arm_width},
            {"depth", depth},
            {"refinement", refinement},
            {"fractions", fractions},
            {"replicates", replicates},
            {"seed", seed},
            {"sizes", jsizes},
            {"target_width", target_width},
            {"target_height", target_height},
            {"cases", jcases},
            {"timing", timing}};
}

void RunConfig::validate() const
{
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), experiment) == kinds.end())
        throw ValidationError("experiment: unknown kind '" + experiment + "'");
    if (topologies.empty()) throw ValidationError("topologies must not be empty");
    if (!(eps_a != 0.0 && std::isfinite(eps_a))) throw ValidationError("eps_a must be nonzero and finite");
    if (replicates < 1) throw ValidationError("replicates must be >= 1");
    if (fractions.empty()) throw ValidationError("fractions must not be empty");
    for (double f : fractions)
        if (!(f > 0.0 && f <= 1.0)) throw ValidationError("fractions must lie in (0, 1]");
    if (!(target_width > 0.0) || !(target_height > 0.0))
        throw ValidationError("target_width and target_height must be positive");
    if (cases.empty()) throw ValidationError("cases must not be empty");
    for (const StiffnessCase& s : cases)
        if (!(s.actuator_width > 0.0 && s.arm_width > 0.0)) throw ValidationError("cases: widths must be positive");
    std::set<std::pair<int, int>> distinct(sizes.begin(), sizes.end());
    if (experiment == "size_invariance" && distinct.size() < 2)
        throw ValidationError("sizes must hold at least two distinct sizes");
    for (const auto& [x, y] : sizes)
        if (x < 1 || y < 1) throw ValidationError("sizes: nx and ny must be >= 1");
    mesh_spec(topologies.front()).validate();
    fem_params().validate();
}

MeshSpec RunConfig::mesh_spec(TopologyId topology) const
{
    MeshSpec s;
    s.topology = topology;
    s.nx = nx;
    s.ny = ny;
    s.edge_length = edge_length;
    s.arm_fraction = arm_fraction;
    return s;
}

FemParams RunConfig::fem_params() const
{
    FemParams f;
    f.material = {youngs_modulus, poissons_ratio};
    f.actuator = {actuator_width, depth};
    f.arm = {arm_width, depth};
    f.arm_fraction = arm_fraction;
    f.eps_a = eps_a;
    f.refinement = refinement;
    return f;
}

std::vector<ExperimentReport> run_experiment(const RunConfig& config)
{
    config.validate();
    const FemParams fem = config.fem_params();
    std::vector<ExperimentReport> reports;

    if (!per_topology(config.experiment)) {
        const MeshSpec base = config.mesh_spec(config.topologies.front());
        ExperimentReport r =
            config.experiment == "energy"
                ? run_energy_comparison(config.topologies, config.target_width, config.target_height, base, fem).report
                : run_stiffness_heatmap(config.topologies, config.cases, config.target_width, config.target_height,
                                        base, fem)
                      .report;
        r.config = config.to_json();
        reports.push_back(std::move(r));
        return reports;
    }

    for (TopologyId t : config.topologies) {
        const MeshSpec spec = config.mesh_spec(t);
        ExperimentReport r;
        if (config.experiment == "mode_sweep") r = run_mode_sweep(spec, fem);
        else if (config.experiment == "random_sweep")
            r = run_random_sweep(spec, fem, config.fractions, config.replicates, config.seed);
        else if (config.experiment == "superposition") r = run_superposition_check(spec, fem).report;
        else r = run_size_invariance_check(spec, config.sizes, fem).report;
        RunConfig single = config;
        single.topologies = {t};
        r.config = single.to_json();
        reports.push_back(std::move(r));
    }
    return reports;
}

std::string report_stem(const ExperimentReport& report)
{
    const std::string topo = report.topologies.size() == 1 ? std::string(to_string(report.topologies.front())) : "all";
    return report.experiment + "_" + topo;
}

WrittenFiles write_report(const ExperimentReport& report, const std::filesystem::path& outdir, bool timing)
{
    WrittenFiles files;
    const std::string stem = report_stem(report);
    files.csv = outdir / (stem + ".csv");
    files.echo = outdir / (stem + ".config_echo.json");

    // Render before writing anything so a failure leaves no partial output set.
    const std::vector<SvgDocument> charts = render_charts(report);
    json echo{{"config", report.config}, {"summary", report.summary}};

    write_file_atomic(files.csv, to_csv(report, timing));
    for (std::size_t k = 0; k < charts.size(); ++k) {
        const std::string name = k == 0 ? stem + ".svg" : stem + "_" + charts[k].name + ".svg";
        files.svgs.push_back(outdir / name);
        write_file_atomic(files.svgs.back(), charts[k].content);
    }
    write_file_atomic(files.echo, echo.dump(2) + "\n");
    return files;
}

} // namespace macro
