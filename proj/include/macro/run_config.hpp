#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "macro/beam_fem.hpp"
#include "macro/experiments.hpp"
#include "macro/tiling.hpp"

namespace macro {

/// Everything needed to re-run an experiment. Serialized as a flat JSON
/// object whose keys match the CSV column names where they overlap.
struct RunConfig {
    std::string experiment = "mode_sweep";
    std::vector<TopologyId> topologies{TopologyId::T};
    int nx = 6;
    int ny = 6;
    double edge_length = 50.0;
    double arm_fraction = 0.1;
    double eps_a = -0.05;
    double youngs_modulus = 2000.0;
    double poissons_ratio = 0.3;
    double actuator_width = 5.0;
    double arm_width = 1.0;
    double depth = 5.0;
    int refinement = 1;
    std::vector<double> fractions{0.2, 0.4, 0.6, 0.8, 1.0};
    int replicates = 5;
    std::uint64_t seed = 1;
    std::vector<std::pair<int, int>> sizes{{6, 6}, {12, 12}};
    double target_width = 1000.0;
    double target_height = 1000.0;
    std::vector<StiffnessCase> cases = default_stiffness_cases();
    bool timing = false;
    std::string outdir = "out";  // not echoed

    /// Throws ValidationError naming the offending key.
    static RunConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;

    void validate() const;

    MeshSpec mesh_spec(TopologyId topology) const;
    FemParams fem_params() const;
};

/// Experiment kinds accepted in RunConfig::experiment.
const std::vector<std::string>& experiment_kinds();

/// Runs the configured experiment. Per-topology experiments give one report
/// per topology; energy and heatmap give a single report. Each report's
/// config is the echo that reproduces it.
std::vector<ExperimentReport> run_experiment(const RunConfig& config);

struct WrittenFiles {
    std::filesystem::path csv;
    std::filesystem::path echo;
    std::vector<std::filesystem::path> svgs;
};

/// `<outdir>/<experiment>_<topology>.csv`, `.svg` and `.config_echo.json`;
/// the topology part is "all" for reports spanning several topologies.
WrittenFiles write_report(const ExperimentReport& report, const std::filesystem::path& outdir, bool timing);

std::string report_stem(const ExperimentReport& report);

} // namespace macro
