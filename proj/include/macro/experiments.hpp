#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "macro/actuation.hpp"
#include "macro/beam_fem.hpp"
#include "macro/strain_metrics.hpp"
#include "macro/tiling.hpp"

namespace macro {

/// One result line. `label` is the mode_kind column: the ActuationMode kind,
/// or "superposed" for rows predicted from single-class rows.
struct ReportRow {
    std::string experiment;
    TopologyId topology = TopologyId::T;
    int nx = 0;
    int ny = 0;
    ActuationMode mode;
    std::string label;
    double eps_a = 0.0;
    StrainSummary parallelogram;
    StrainSummary affine;
    std::optional<double> strain_energy;  // N mm; empty for predicted rows
    std::size_t n_nodes = 0;
    std::size_t n_edges = 0;
    double solve_ms = 0.0;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<TopologyId> topologies;
    nlohmann::json config;   // configuration echo
    nlohmann::json summary;  // experiment-specific aggregates
    std::vector<ReportRow> rows;
};

/// CSV header, in column order.
const std::vector<std::string>& csv_columns();

/// Writes the rows as CSV. solve_ms is emitted as 0 unless `timing` is set so
/// that reruns of the same configuration are byte-identical.
std::string to_csv(const ExperimentReport& report, bool timing = false);

struct ModeStrain {
    StrainSummary parallelogram;
    StrainSummary affine;
};

/// Bulk strain of a solved mode in the small-displacement limit: the vertex
/// displacements are rescaled to a tiny amplitude before both measures are
/// taken, so the ratios are exactly linear in the actuator strain like the
/// model itself. `outline` is the undeformed minimal parallelogram.
ModeStrain small_strain(const Mesh& mesh, const Parallelogram& outline, const SolveResult& solve, double eps_a);

/// Worker count for row-parallel sweeps: MACRO_SIM_THREADS if set and
/// positive, otherwise the hardware concurrency.
unsigned worker_count();

/// Solver, mesh and undeformed outline shared by every row of a sweep.
class MeshStudy {
public:
    MeshStudy(const MeshSpec& spec, const FemParams& fem);

    const Mesh& mesh() const { return mesh_; }
    const MeshSpec& spec() const { return spec_; }
    const FemParams& fem() const { return fem_; }
    const ActuationSolver& solver() const { return solver_; }

    /// Solves one mode and extracts both strain measures.
    ReportRow evaluate(const std::string& experiment, const ActuationMode& mode) const;
    /// Same, returning the raw solve as well.
    ReportRow evaluate(const std::string& experiment, const ActuationMode& mode, SolveResult& solve) const;

    /// Evaluates `modes` concurrently; result order follows `modes`.
    std::vector<ReportRow> evaluate_all(const std::string& experiment, const std::vector<ActuationMode>& modes) const;

private:
    MeshSpec spec_;
    FemParams fem_;
    Mesh mesh_;
    ActuationSolver solver_;
    Parallelogram outline_;
};

/// FEA parameters with the spec's arm fraction applied.
FemParams fem_for(const MeshSpec& spec, FemParams fem);

/// One row per oriented mode (ascending mode_id) followed by the all-ON row.
ExperimentReport run_mode_sweep(const MeshSpec& spec, const FemParams& fem);

/// fractions x replicates rows; replicate r uses seed + r.
ExperimentReport run_random_sweep(const MeshSpec& spec, const FemParams& fem, const std::vector<double>& fractions,
                                  int replicates, std::uint64_t seed);

struct SuperpositionEntry {
    std::uint64_t bits = 0;
    StrainSummary fea;
    StrainSummary predicted;
    StrainSummary fea_affine;
    StrainSummary predicted_affine;
    double max_ratio_error = 0.0;           // parallelogram ratios, absolute
    double displacement_error = 0.0;        // ||u - sum u_i|| / ||u||
};

struct SuperpositionReport {
    ExperimentReport report;
    std::vector<SuperpositionEntry> entries;  // every oriented mode, ascending bits
    double max_ratio_error = 0.0;
    double max_displacement_error = 0.0;
};

/// FEA rows for every oriented mode plus "superposed" rows predicted from
/// the single-class modes.
SuperpositionReport run_superposition_check(const MeshSpec& spec, const FemParams& fem);

struct SizeInvarianceEntry {
    ActuationMode mode;
    double max_delta = 0.0;  // max over components and size pairs, parallelogram ratios
};

struct SizeInvarianceReport {
    ExperimentReport report;
    std::vector<SizeInvarianceEntry> entries;  // oriented modes then all-ON
    double max_oriented_delta = 0.0;
};

SizeInvarianceReport run_size_invariance_check(const MeshSpec& base, const std::vector<std::pair<int, int>>& sizes,
                                               const FemParams& fem);

/// Repetitions whose bounding box is nearest to width x height (mm).
std::pair<int, int> size_for_bounding_box(TopologyId topology, double edge_length, double width, double height);

struct TopologyEnergy {
    TopologyId topology = TopologyId::T;
    int nx = 0;
    int ny = 0;
    double bbox_width = 0.0;
    double bbox_height = 0.0;
    std::vector<double> mode_energies;  // ascending mode_id
    double mean = 0.0;
    double mean_per_area = 0.0;  // N mm per mm^2 of bounding box
};

struct EnergyReport {
    ExperimentReport report;
    std::vector<TopologyEnergy> topologies;

    const TopologyEnergy& at(TopologyId id) const;
};

EnergyReport run_energy_comparison(const std::vector<TopologyId>& topologies, double target_width,
                                   double target_height, const MeshSpec& base, const FemParams& fem);

struct StiffnessCase {
    double actuator_width = 5.0;  // mm
    double arm_width = 1.0;       // mm
};

/// (5, 1), (5, 5), (1, 1), (1, 5): the first is the default sections.
std::vector<StiffnessCase> default_stiffness_cases();

struct HeatmapReport {
    ExperimentReport report;
    std::vector<TopologyId> topologies;
    std::vector<StiffnessCase> cases;
    std::vector<std::vector<double>> mean_energy;  // [topology][case]
};

HeatmapReport run_stiffness_heatmap(const std::vector<TopologyId>& topologies, const std::vector<StiffnessCase>& cases,
                                    double target_width, double target_height, const MeshSpec& base,
                                    const FemParams& fem);

} // namespace macro
