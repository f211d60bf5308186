#include "macro/experiments.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "macro/error.hpp"

namespace macro {

namespace {

std::string fmt9(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Runs fn(i) for i in [0, n) on up to worker_count() threads and rethrows
// the first failure.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn)
{
    const std::size_t workers = std::min<std::size_t>(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::string describe(const ActuationMode& mode)
{
    switch (mode.kind) {
    case ModeKind::oriented: return "oriented mode " + mode.bits_string();
    case ModeKind::random: return "random mode (fraction " + fmt9(mode.fraction) + ", seed " + std::to_string(mode.seed) + ")";
    case ModeKind::all: return "all-ON mode";
    }
    return "mode";
}

std::vector<ActuationMode> sweep_modes(const Mesh& mesh)
{
    std::vector<ActuationMode> modes = enumerate_oriented_modes(static_cast<int>(mesh.class_count()));
    modes.push_back(ActuationMode::all_on());
    return modes;
}

double max_component_gap(const StrainSummary& a, const StrainSummary& b)
{
    return std::max({std::fabs(a.ratio_x - b.ratio_x), std::fabs(a.ratio_y - b.ratio_y),
                     std::fabs(a.ratio_shear - b.ratio_shear)});
}

nlohmann::json base_config(const std::string& experiment, const MeshSpec& spec, const FemParams& fem)
{
    return {
        {"experiment", experiment},
        {"topologies", nlohmann::json::array({std::string(to_string(spec.topology))})},
        {"nx", spec.nx},
        {"ny", spec.ny},
        {"edge_length", spec.edge_length},
        {"arm_fraction", spec.arm_fraction},
        {"eps_a", fem.eps_a},
        {"youngs_modulus", fem.material.youngs_modulus},
        {"poissons_ratio", fem.material.poissons_ratio},
        {"actuator_width", fem.actuator.in_plane_width},
        {"arm_width", fem.arm.in_plane_width},
        {"depth", fem.actuator.out_of_plane_depth},
        {"refinement", fem.refinement},
    };
}

nlohmann::json summary_json(const StrainSummary& s)
{
    return {{"eps_x", s.eps_x},     {"eps_y", s.eps_y},     {"shear_alpha", s.shear_alpha},
            {"ratio_x", s.ratio_x}, {"ratio_y", s.ratio_y}, {"ratio_shear", s.ratio_shear}};
}

} // namespace

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols{
        "experiment", "topology",           "nx",        "ny",          "mode_kind",
        "mode_bits",  "fraction",           "seed",      "eps_a",       "ratio_x",
        "ratio_y",    "ratio_shear",        "ratio_x_affine", "ratio_y_affine", "ratio_shear_affine",
        "strain_energy_Nmm", "n_nodes",     "n_edges",   "solve_ms",
    };
    return cols;
}

std::string to_csv(const ExperimentReport& report, bool timing)
{
    std::ostringstream out;
    const auto& cols = csv_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
    out << '\n';
    for (const ReportRow& r : report.rows) {
        const bool random = r.mode.kind == ModeKind::random;
        out << r.experiment << ',' << to_string(r.topology) << ',' << r.nx << ',' << r.ny << ',' << r.label << ','
            << r.mode.bits_string() << ',' << (random ? fmt9(r.mode.fraction) : "") << ','
            << (random ? std::to_string(r.mode.seed) : "") << ',' << fmt9(r.eps_a) << ','
            << fmt9(r.parallelogram.ratio_x) << ',' << fmt9(r.parallelogram.ratio_y) << ','
            << fmt9(r.parallelogram.ratio_shear) << ',' << fmt9(r.affine.ratio_x) << ',' << fmt9(r.affine.ratio_y)
            << ',' << fmt9(r.affine.ratio_shear) << ',' << (r.strain_energy ? fmt9(*r.strain_energy) : "") << ','
            << r.n_nodes << ',' << r.n_edges << ',' << (timing ? fmt9(r.solve_ms) : "0") << '\n';
    }
    return out.str();
}

ModeStrain small_strain(const Mesh& mesh, const Parallelogram& outline, const SolveResult& solve, double eps_a)
{
    // Probe amplitude: F - 1 is about 1e-6, far above round-off on mm-scale
    // coordinates and far below any geometric nonlinearity of the extraction.
    constexpr double kProbe = 1e-6;
    if (eps_a == 0.0) throw ValidationError("eps_a must be nonzero");
    const double scale = kProbe / eps_a;
    std::vector<Vec2> probe(mesh.nodes.size());
    for (std::size_t v = 0; v < mesh.nodes.size(); ++v) {
        const auto d = solve.displacement(v);
        probe[v] = mesh.nodes[v] + Vec2{d[0], d[1]} * scale;
    }
    const auto rescale = [eps_a](const StrainSummary& s) {
        return StrainSummary::from_strains(s.ratio_x * eps_a, s.ratio_y * eps_a, s.ratio_shear * eps_a, eps_a);
    };
    const Parallelogram deformed = min_enclosing_parallelogram(probe);
    return {rescale(strain_from_parallelograms(outline, deformed, kProbe)),
            rescale(affine_fit_strain(mesh.nodes, probe, kProbe))};
}

unsigned worker_count()
{
    if (const char* env = std::getenv("MACRO_SIM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

FemParams fem_for(const MeshSpec& spec, FemParams fem)
{
    fem.arm_fraction = spec.arm_fraction;
    return fem;
}

MeshStudy::MeshStudy(const MeshSpec& spec, const FemParams& fem)
    : spec_(spec), fem_(fem_for(spec, fem)), mesh_(generate_mesh(spec)), solver_(FeModel(mesh_, fem_)),
      outline_(min_enclosing_parallelogram(mesh_.nodes))
{
}

ReportRow MeshStudy::evaluate(const std::string& experiment, const ActuationMode& mode) const
{
    SolveResult solve;
    return evaluate(experiment, mode, solve);
}

ReportRow MeshStudy::evaluate(const std::string& experiment, const ActuationMode& mode, SolveResult& solve) const
{
    ReportRow row;
    row.experiment = experiment;
    row.topology = mesh_.topology;
    row.nx = spec_.nx;
    row.ny = spec_.ny;
    row.mode = mode;
    row.label = to_string(mode.kind);
    row.eps_a = fem_.eps_a;
    row.n_nodes = mesh_.nodes.size();
    row.n_edges = mesh_.edges.size();
    try {
        const auto t0 = std::chrono::steady_clock::now();
        solve = solver_.solve(mesh_, mode);
        row.solve_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        const ModeStrain strain = small_strain(mesh_, outline_, solve, fem_.eps_a);
        row.parallelogram = strain.parallelogram;
        row.affine = strain.affine;
        row.strain_energy = solve.strain_energy;
    } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + " [" + std::string(to_string(mesh_.topology)) + ", " +
                          describe(mode) + "]");
    } catch (const DegenerateInputError& e) {
        throw DegenerateInputError(std::string(e.what()) + " [" + std::string(to_string(mesh_.topology)) + ", " +
                                   describe(mode) + "]");
    }
    return row;
}

std::vector<ReportRow> MeshStudy::evaluate_all(const std::string& experiment,
                                               const std::vector<ActuationMode>& modes) const
{
    std::vector<ReportRow> rows(modes.size());
    parallel_for(modes.size(), [&](std::size_t i) { rows[i] = evaluate(experiment, modes[i]); });
    return rows;
}

ExperimentReport run_mode_sweep(const MeshSpec& spec, const FemParams& fem)
{
    const MeshStudy study(spec, fem);
    ExperimentReport report;
    report.experiment = "mode_sweep";
    report.topologies = {spec.topology};
    report.config = base_config(report.experiment, spec, fem);
    report.rows = study.evaluate_all(report.experiment, sweep_modes(study.mesh()));
    report.summary = {{"modes", report.rows.size() - 1}};
    return report;
}

ExperimentReport run_random_sweep(const MeshSpec& spec, const FemParams& fem, const std::vector<double>& fractions,
                                  int replicates, std::uint64_t seed)
{
    if (replicates < 1) throw ValidationError("replicates must be >= 1");
    if (fractions.empty()) throw ValidationError("fractions must not be empty");
    const MeshStudy study(spec, fem);

    std::vector<ActuationMode> modes;
    for (double f : fractions) {
        for (int r = 0; r < replicates; ++r) modes.push_back(random_mode(study.mesh(), f, seed + static_cast<std::uint64_t>(r)));
    }

    ExperimentReport report;
    report.experiment = "random_sweep";
    report.topologies = {spec.topology};
    report.config = base_config(report.experiment, spec, fem);
    report.config["fractions"] = fractions;
    report.config["replicates"] = replicates;
    report.config["seed"] = seed;
    report.rows = study.evaluate_all(report.experiment, modes);
    report.summary = {{"rows", report.rows.size()}};
    return report;
}

SuperpositionReport run_superposition_check(const MeshSpec& spec, const FemParams& fem)
{
    const MeshStudy study(spec, fem);
    const int p = static_cast<int>(study.mesh().class_count());
    const std::string name = "superposition";

    const std::vector<ActuationMode> singles = spanning_set(p);
    std::vector<ReportRow> base_rows(singles.size());
    std::vector<Eigen::VectorXd> base_u(singles.size());
    parallel_for(singles.size(), [&](std::size_t i) {
        SolveResult s;
        base_rows[i] = study.evaluate(name, singles[i], s);
        base_u[i] = std::move(s.u);
    });
    std::map<int, StrainSummary> base;
    std::map<int, StrainSummary> base_affine;
    for (int i = 0; i < p; ++i) {
        base[i] = base_rows[static_cast<std::size_t>(i)].parallelogram;
        base_affine[i] = base_rows[static_cast<std::size_t>(i)].affine;
    }

    const std::vector<ActuationMode> modes = enumerate_oriented_modes(p);
    std::vector<ReportRow> fea(modes.size());
    std::vector<SuperpositionEntry> entries(modes.size());
    parallel_for(modes.size(), [&](std::size_t m) {
        const ActuationMode& mode = modes[m];
        SolveResult s;
        fea[m] = study.evaluate(name, mode, s);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(s.u.size());
        for (int i = 0; i < p; ++i) {
            if (mode.bits & (std::uint64_t{1} << i)) sum += base_u[static_cast<std::size_t>(i)];
        }
        SuperpositionEntry& e = entries[m];
        e.bits = mode.bits;
        e.fea = fea[m].parallelogram;
        e.fea_affine = fea[m].affine;
        e.predicted = superpose_strains(base, mode);
        e.predicted_affine = superpose_strains(base_affine, mode);
        e.max_ratio_error = max_component_gap(e.fea, e.predicted);
        const double un = s.u.norm();
        e.displacement_error = un > 0.0 ? (s.u - sum).norm() / un : (s.u - sum).norm();
    });

    SuperpositionReport out;
    out.report.experiment = name;
    out.report.topologies = {spec.topology};
    out.report.config = base_config(name, spec, fem);
    nlohmann::json jentries = nlohmann::json::array();
    for (std::size_t m = 0; m < modes.size(); ++m) {
        out.report.rows.push_back(fea[m]);
        const SuperpositionEntry& e = entries[m];
        if (std::popcount(e.bits) > 1) {
            ReportRow pred = fea[m];
            pred.label = "superposed";
            pred.parallelogram = e.predicted;
            pred.affine = e.predicted_affine;
            pred.strain_energy.reset();
            pred.solve_ms = 0.0;
            out.report.rows.push_back(pred);
        }
        out.max_ratio_error = std::max(out.max_ratio_error, e.max_ratio_error);
        out.max_displacement_error = std::max(out.max_displacement_error, e.displacement_error);
        jentries.push_back({{"mode_bits", modes[m].bits_string()},
                            {"fea", summary_json(e.fea)},
                            {"predicted", summary_json(e.predicted)},
                            {"max_ratio_error", e.max_ratio_error},
                            {"displacement_error", e.displacement_error}});
    }
    out.entries = std::move(entries);
    out.report.summary = {{"max_ratio_error", out.max_ratio_error},
                          {"max_displacement_error", out.max_displacement_error},
                          {"modes", jentries}};
    return out;
}

SizeInvarianceReport run_size_invariance_check(const MeshSpec& base, const std::vector<std::pair<int, int>>& sizes,
                                               const FemParams& fem)
{
    if (sizes.size() < 2) throw ValidationError("size invariance needs at least two sizes");
    for (std::size_t i = 0; i < sizes.size(); ++i)
        for (std::size_t j = i + 1; j < sizes.size(); ++j)
            if (sizes[i] == sizes[j]) throw ValidationError("size invariance sizes must be distinct");

    const std::string name = "size_invariance";
    std::vector<std::vector<ReportRow>> per_size;
    SizeInvarianceReport out;
    for (const auto& [nx, ny] : sizes) {
        MeshSpec spec = base;
        spec.nx = nx;
        spec.ny = ny;
        const MeshStudy study(spec, fem);
        per_size.push_back(study.evaluate_all(name, sweep_modes(study.mesh())));
        for (const ReportRow& r : per_size.back()) out.report.rows.push_back(r);
    }

    nlohmann::json jentries = nlohmann::json::array();
    for (std::size_t m = 0; m < per_size[0].size(); ++m) {
        SizeInvarianceEntry e;
        e.mode = per_size[0][m].mode;
        for (std::size_t i = 0; i < per_size.size(); ++i)
            for (std::size_t j = i + 1; j < per_size.size(); ++j)
                e.max_delta = std::max(e.max_delta, max_component_gap(per_size[i][m].parallelogram,
                                                                       per_size[j][m].parallelogram));
        if (e.mode.kind == ModeKind::oriented) out.max_oriented_delta = std::max(out.max_oriented_delta, e.max_delta);
        jentries.push_back({{"mode_kind", to_string(e.mode.kind)},
                            {"mode_bits", e.mode.bits_string()},
                            {"max_delta", e.max_delta}});
        out.entries.push_back(e);
    }

    out.report.experiment = name;
    out.report.topologies = {base.topology};
    out.report.config = base_config(name, base, fem);
    nlohmann::json jsizes = nlohmann::json::array();
    for (const auto& [nx, ny] : sizes) jsizes.push_back({nx, ny});
    out.report.config["sizes"] = jsizes;
    out.report.summary = {{"max_oriented_delta", out.max_oriented_delta}, {"modes", jentries}};
    return out;
}

std::pair<int, int> size_for_bounding_box(TopologyId topology, double edge_length, double width, double height)
{
    if (!(width > 0.0 && height > 0.0)) throw ValidationError("target bounding box must be positive");
    MeshSpec spec;
    spec.topology = topology;
    spec.edge_length = edge_length;

    const UnitCell& cell = unit_cell(topology);
    const double step = edge_length * std::min({std::fabs(cell.lattice_a.x) + std::fabs(cell.lattice_a.y),
                                                std::fabs(cell.lattice_b.x) + std::fabs(cell.lattice_b.y)});
    const int limit = std::clamp(static_cast<int>(std::max(width, height) / (0.5 * step)) + 3, 3, 2000);

    std::pair<int, int> best{1, 1};
    double best_gap = INFINITY;
    for (int ny = 1; ny <= limit; ++ny) {
        for (int nx = 1; nx <= limit; ++nx) {
            spec.nx = nx;
            spec.ny = ny;
            const BoundingBox box = mesh_bounding_box(spec);
            const double gap = std::fabs(box.width() - width) + std::fabs(box.height() - height);
            if (gap < best_gap - 1e-9) {
                best_gap = gap;
                best = {nx, ny};
            }
            if (box.width() > width + step * 4) break;
        }
    }
    return best;
}

const TopologyEnergy& EnergyReport::at(TopologyId id) const
{
    for (const TopologyEnergy& t : topologies)
        if (t.topology == id) return t;
    throw ValidationError("topology " + std::string(to_string(id)) + " not in energy report");
}

namespace {

EnergyReport energy_comparison(const std::string& name, const std::vector<TopologyId>& topologies,
                               double target_width, double target_height, const MeshSpec& base, const FemParams& fem)
{
    if (topologies.empty()) throw ValidationError("energy comparison needs at least one topology");
    EnergyReport out;
    out.report.experiment = name;
    out.report.topologies = topologies;
    nlohmann::json jtop = nlohmann::json::array();
    for (TopologyId t : topologies) {
        MeshSpec spec = base;
        spec.topology = t;
        std::tie(spec.nx, spec.ny) = size_for_bounding_box(t, base.edge_length, target_width, target_height);
        const MeshStudy study(spec, fem);
        const std::vector<ReportRow> rows =
            study.evaluate_all(name, enumerate_oriented_modes(static_cast<int>(study.mesh().class_count())));

        TopologyEnergy e;
        e.topology = t;
        e.nx = spec.nx;
        e.ny = spec.ny;
        const BoundingBox box = bounding_box(study.mesh().nodes);
        e.bbox_width = box.width();
        e.bbox_height = box.height();
        double sum = 0.0;
        for (const ReportRow& r : rows) {
            e.mode_energies.push_back(*r.strain_energy);
            sum += *r.strain_energy;
            out.report.rows.push_back(r);
        }
        e.mean = sum / static_cast<double>(rows.size());
        e.mean_per_area = e.mean / (e.bbox_width * e.bbox_height);
        jtop.push_back({{"topology", std::string(to_string(t))},
                        {"nx", e.nx},
                        {"ny", e.ny},
                        {"bbox_width", e.bbox_width},
                        {"bbox_height", e.bbox_height},
                        {"mean_energy_Nmm", e.mean},
                        {"mean_energy_per_area", e.mean_per_area},
                        {"mode_energies_Nmm", e.mode_energies}});
        out.topologies.push_back(std::move(e));
    }
    out.report.config = base_config(name, base, fem);
    nlohmann::json names = nlohmann::json::array();
    for (TopologyId t : topologies) names.push_back(std::string(to_string(t)));
    out.report.config["topologies"] = names;
    out.report.config["target_width"] = target_width;
    out.report.config["target_height"] = target_height;
    out.report.config.erase("nx");
    out.report.config.erase("ny");
    out.report.summary = {{"topologies", jtop}};
    return out;
}

} // namespace

EnergyReport run_energy_comparison(const std::vector<TopologyId>& topologies, double target_width,
                                   double target_height, const MeshSpec& base, const FemParams& fem)
{
    return energy_comparison("energy", topologies, target_width, target_height, base, fem);
}

std::vector<StiffnessCase> default_stiffness_cases() { return {{5.0, 1.0}, {5.0, 5.0}, {1.0, 1.0}, {1.0, 5.0}}; }

HeatmapReport run_stiffness_heatmap(const std::vector<TopologyId>& topologies, const std::vector<StiffnessCase>& cases,
                                    double target_width, double target_height, const MeshSpec& base,
                                    const FemParams& fem)
{
    if (cases.empty()) throw ValidationError("heatmap needs at least one stiffness case");
    HeatmapReport out;
    out.topologies = topologies;
    out.cases = cases;
    out.mean_energy.assign(topologies.size(), std::vector<double>(cases.size(), 0.0));
    out.report.experiment = "heatmap";
    out.report.topologies = topologies;

    nlohmann::json jcases = nlohmann::json::array();
    for (std::size_t c = 0; c < cases.size(); ++c) {
        if (!(cases[c].actuator_width > 0.0 && cases[c].arm_width > 0.0))
            throw ValidationError("stiffness case widths must be positive");
        FemParams f = fem;
        f.actuator.in_plane_width = cases[c].actuator_width;
        f.arm.in_plane_width = cases[c].arm_width;
        const EnergyReport e = energy_comparison("heatmap_case" + std::to_string(c + 1), topologies, target_width,
                                                 target_height, base, f);
        for (std::size_t t = 0; t < topologies.size(); ++t) out.mean_energy[t][c] = e.topologies[t].mean;
        for (const ReportRow& r : e.report.rows) out.report.rows.push_back(r);
        jcases.push_back({cases[c].actuator_width, cases[c].arm_width});
        if (c == 0) out.report.config = e.report.config;
    }
    out.report.config["experiment"] = "heatmap";
    out.report.config["cases"] = jcases;
    out.report.config.erase("actuator_width");
    out.report.config.erase("arm_width");

    nlohmann::json matrix = nlohmann::json::array();
    for (std::size_t t = 0; t < topologies.size(); ++t) {
        matrix.push_back({{"topology", std::string(to_string(topologies[t]))}, {"mean_energy_Nmm", out.mean_energy[t]}});
    }
    out.report.summary = {{"cases", jcases}, {"matrix", matrix}};
    return out;
}

} // namespace macro
