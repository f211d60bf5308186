// Command-line front end for mesh generation, actuation solves and experiment sweeps.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "macro/error.hpp"
#include "macro/experiments.hpp"
#include "macro/io.hpp"
#include "macro/render.hpp"
#include "macro/run_config.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Flags shared by every experiment subcommand. Only flags actually given
// override values from --config.
struct CommonFlags {
    std::string config_path;
    std::vector<std::string> topologies;
    int nx = 0, ny = 0, refinement = 0;
    double edge_length = 0, arm_fraction = 0, eps_a = 0, youngs = 0, poisson = 0;
    double actuator_width = 0, arm_width = 0, depth = 0;
    std::string outdir;
    bool timing = false;

    std::vector<std::pair<CLI::Option*, std::string>> opts;

    void add(CLI::App* app, bool multi_topology)
    {
        app->add_option("--config", config_path, "JSON config file or config echo");
        if (multi_topology)
            opts.emplace_back(app->add_option("--topology,--topologies", topologies, "Topology names")->delimiter(','),
                              "topologies");
        else
            opts.emplace_back(app->add_option("--topology", topologies, "Topology name")->expected(1), "topologies");
        opts.emplace_back(app->add_option("--nx", nx, "Repetitions along the first lattice vector"), "nx");
        opts.emplace_back(app->add_option("--ny", ny, "Repetitions along the second lattice vector"), "ny");
        opts.emplace_back(app->add_option("--edge-length", edge_length, "Edge length (mm)"), "edge_length");
        opts.emplace_back(app->add_option("--arm-fraction", arm_fraction, "Flexure arm share of each edge end"),
                          "arm_fraction");
        opts.emplace_back(app->add_option("--eps-a", eps_a, "Actuator strain"), "eps_a");
        opts.emplace_back(app->add_option("--youngs-modulus", youngs, "Young's modulus (MPa)"), "youngs_modulus");
        opts.emplace_back(app->add_option("--poissons-ratio", poisson, "Poisson's ratio"), "poissons_ratio");
        opts.emplace_back(app->add_option("--actuator-width", actuator_width, "Actuator in-plane width (mm)"),
                          "actuator_width");
        opts.emplace_back(app->add_option("--arm-width", arm_width, "Flexure arm in-plane width (mm)"), "arm_width");
        opts.emplace_back(app->add_option("--depth", depth, "Out-of-plane depth (mm)"), "depth");
        opts.emplace_back(app->add_option("--refinement", refinement, "Elements per beam segment"), "refinement");
        opts.emplace_back(app->add_option("--outdir,-o", outdir, "Output directory"), "outdir");
        opts.emplace_back(app->add_flag("--timing", timing, "Write measured solve_ms instead of 0"), "timing");
    }

    json overrides() const
    {
        json o = json::object();
        for (const auto& [opt, key] : opts) {
            if (opt->count() == 0) continue;
            if (key == "topologies") o[key] = topologies;
            else if (key == "nx") o[key] = nx;
            else if (key == "ny") o[key] = ny;
            else if (key == "edge_length") o[key] = edge_length;
            else if (key == "arm_fraction") o[key] = arm_fraction;
            else if (key == "eps_a") o[key] = eps_a;
            else if (key == "youngs_modulus") o[key] = youngs;
            else if (key == "poissons_ratio") o[key] = poisson;
            else if (key == "actuator_width") o[key] = actuator_width;
            else if (key == "arm_width") o[key] = arm_width;
            else if (key == "depth") o[key] = depth;
            else if (key == "refinement") o[key] = refinement;
            else if (key == "outdir") o[key] = outdir;
            else if (key == "timing") o[key] = timing;
        }
        return o;
    }

    macro::RunConfig build(const std::string& experiment, json extra) const
    {
        json doc = json::object();
        if (!config_path.empty()) {
            json file;
            try {
                file = json::parse(macro::read_text_file(config_path));
            } catch (const json::parse_error& e) {
                throw macro::ValidationError("config: not valid JSON: " + std::string(e.what()));
            }
            // A config echo wraps the configuration next to the summary.
            doc = (file.is_object() && file.contains("config") && file["config"].is_object()) ? file["config"] : file;
        }
        doc.update(overrides());
        doc.update(extra);
        doc["experiment"] = experiment;
        return macro::RunConfig::from_json(doc);
    }
};

int run_experiments(const macro::RunConfig& config)
{
    for (const macro::ExperimentReport& report : macro::run_experiment(config)) {
        const macro::WrittenFiles files = macro::write_report(report, config.outdir, config.timing);
        std::cout << files.csv.string() << '\n';
        for (const auto& svg : files.svgs) std::cout << svg.string() << '\n';
        std::cout << files.echo.string() << '\n';
    }
    return 0;
}

std::pair<int, int> parse_size(const std::string& s)
{
    const auto x = s.find('x');
    try {
        if (x == std::string::npos) throw std::invalid_argument(s);
        std::size_t p1 = 0, p2 = 0;
        const int a = std::stoi(s.substr(0, x), &p1);
        const int b = std::stoi(s.substr(x + 1), &p2);
        if (p1 != x || p2 != s.size() - x - 1) throw std::invalid_argument(s);
        return {a, b};
    } catch (const std::exception&) {
        throw macro::ValidationError("sizes: expected NXxNY, got '" + s + "'");
    }
}

std::pair<double, double> parse_case(const std::string& s)
{
    const auto c = s.find(':');
    try {
        if (c == std::string::npos) throw std::invalid_argument(s);
        return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
    } catch (const std::exception&) {
        throw macro::ValidationError("cases: expected ACTUATOR:ARM, got '" + s + "'");
    }
}

struct ModeFlags {
    std::string bits;
    std::optional<double> random;
    std::uint64_t seed = 1;
    bool none = false;

    void add(CLI::App* app)
    {
        auto* b = app->add_option("--bits", bits, "Oriented mode as a binary string, class 0 last");
        auto* r = app->add_option("--random", random, "Random mode: fraction of edges ON");
        app->add_option("--seed", seed, "Random mode seed");
        auto* n = app->add_flag("--none", none, "No edge ON (render only)");
        b->excludes(r)->excludes(n);
        r->excludes(n);
    }

    macro::ActuationMode mode(const macro::Mesh& mesh) const
    {
        if (random) return macro::random_mode(mesh, *random, seed);
        if (!bits.empty()) return macro::mode_from_json({{"kind", "oriented"}, {"bits", bits}});
        return macro::ActuationMode::all_on();
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Actuated lattice mesh simulator"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Write a mesh file");
    std::string gen_topology = "T", gen_output;
    macro::MeshSpec gen_spec;
    gen->add_option("--topology", gen_topology, "Topology name")->required();
    gen->add_option("--nx", gen_spec.nx, "Repetitions along the first lattice vector")->capture_default_str();
    gen->add_option("--ny", gen_spec.ny, "Repetitions along the second lattice vector")->capture_default_str();
    gen->add_option("--edge-length", gen_spec.edge_length, "Edge length (mm)")->capture_default_str();
    gen->add_option("--output,-o", gen_output, "Mesh file (default mesh_<topology>.json)");

    // solve
    auto* solve = app.add_subcommand("solve", "Solve one actuation mode");
    CommonFlags solve_flags;
    solve_flags.add(solve, false);
    std::string solve_mesh;
    ModeFlags solve_mode;
    solve->add_option("--mesh", solve_mesh, "Mesh file from generate");
    solve_mode.add(solve);

    // modes
    auto* modes = app.add_subcommand("modes", "List oriented modes, or sweep them");
    CommonFlags modes_flags;
    modes_flags.add(modes, true);
    bool modes_sweep = false;
    std::vector<std::string> modes_sizes;
    modes->add_flag("--sweep", modes_sweep, "Solve every oriented mode and write a report");
    modes->add_option("--sizes", modes_sizes, "Size invariance check over NXxNY sizes")->delimiter(',');

    // sweep-random
    auto* rnd = app.add_subcommand("sweep-random", "Random actuation sweep");
    CommonFlags rnd_flags;
    rnd_flags.add(rnd, true);
    std::vector<double> rnd_fractions;
    int rnd_replicates = 0;
    std::uint64_t rnd_seed = 0;
    auto* rnd_f = rnd->add_option("--fractions", rnd_fractions, "Fractions of edges ON")->delimiter(',');
    auto* rnd_r = rnd->add_option("--replicates", rnd_replicates, "Replicates per fraction");
    auto* rnd_s = rnd->add_option("--seed", rnd_seed, "Base seed; replicate r uses seed + r");

    // superpose
    auto* sup = app.add_subcommand("superpose", "Superposition check against single-class modes");
    CommonFlags sup_flags;
    sup_flags.add(sup, true);

    // energy
    auto* energy = app.add_subcommand("energy", "Mean actuation energy per topology at a matched bounding box");
    CommonFlags energy_flags;
    energy_flags.add(energy, true);
    double energy_w = 0, energy_h = 0;
    auto* energy_wo = energy->add_option("--width", energy_w, "Target bounding box width (mm)");
    auto* energy_ho = energy->add_option("--height", energy_h, "Target bounding box height (mm)");

    // heatmap
    auto* heat = app.add_subcommand("heatmap", "Mean energy per topology and stiffness case");
    CommonFlags heat_flags;
    heat_flags.add(heat, true);
    double heat_w = 0, heat_h = 0;
    std::vector<std::string> heat_cases;
    auto* heat_wo = heat->add_option("--width", heat_w, "Target bounding box width (mm)");
    auto* heat_ho = heat->add_option("--height", heat_h, "Target bounding box height (mm)");
    auto* heat_co = heat->add_option("--cases", heat_cases, "ACTUATOR:ARM widths (mm)")->delimiter(',');

    // render
    auto* render = app.add_subcommand("render", "Draw a mesh and optionally its deformed shape");
    std::string render_mesh, render_output;
    ModeFlags render_mode;
    bool render_deformed = false, render_side = false;
    double render_scale = 1.0;
    render->add_option("--mesh", render_mesh, "Mesh file from generate")->required();
    render->add_option("--output,-o", render_output, "SVG file (default <mesh>.svg)");
    render->add_flag("--deformed", render_deformed, "Solve the mode and draw the deformed shape");
    render->add_flag("--side-by-side", render_side, "Draw the deformed shape beside the mesh");
    render->add_option("--px-per-mm", render_scale, "Drawing scale")->capture_default_str();
    render_mode.add(render);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        if (*gen) {
            gen_spec.topology = macro::parse_topology(gen_topology);
            const macro::Mesh mesh = macro::generate_mesh(gen_spec);
            const fs::path out = gen_output.empty() ? fs::path("mesh_" + gen_topology + ".json") : fs::path(gen_output);
            macro::write_file_atomic(out, macro::mesh_to_string(mesh));
            std::cout << out.string() << ": " << mesh.nodes.size() << " nodes, " << mesh.edges.size() << " edges, "
                      << mesh.class_count() << " orientation classes\n";
            return 0;
        }

        if (*solve) {
            const macro::RunConfig cfg = solve_flags.build("mode_sweep", json::object());
            macro::Mesh mesh;
            macro::MeshSpec spec = cfg.mesh_spec(cfg.topologies.front());
            if (!solve_mesh.empty()) {
                mesh = macro::mesh_from_string(macro::read_text_file(solve_mesh));
                spec.topology = mesh.topology;
                spec.edge_length = mesh.edge_length;
            } else {
                mesh = macro::generate_mesh(spec);
            }
            const macro::ActuationMode mode = solve_mode.mode(mesh);
            const macro::FemParams fem = macro::fem_for(spec, cfg.fem_params());
            const macro::ActuationSolver solver(macro::FeModel(mesh, fem));
            const macro::SolveResult result = solver.solve(mesh, mode);
            const macro::Parallelogram p0 = macro::min_enclosing_parallelogram(mesh.nodes);
            const macro::ModeStrain strain = macro::small_strain(mesh, p0, result, fem.eps_a);
            const macro::StrainSummary& par = strain.parallelogram;
            const macro::StrainSummary& aff = strain.affine;

            json doc = macro::solve_to_json(result, mesh.nodes.size());
            doc["mode"] = macro::mode_to_json(mode);
            doc["strain"] = macro::strain_to_json(par);
            doc["strain_affine"] = macro::strain_to_json(aff);
            const std::string stem = "solve_" + std::string(macro::to_string(mesh.topology));
            const fs::path dir = cfg.outdir;
            macro::write_file_atomic(dir / (stem + ".json"), doc.dump(1) + "\n");
            macro::write_file_atomic(dir / (stem + ".svg"), macro::render_mesh_svg(mesh, mode, &result));
            std::printf("ratio_x %.9g ratio_y %.9g ratio_shear %.9g strain_energy_Nmm %.9g\n", par.ratio_x,
                        par.ratio_y, par.ratio_shear, result.strain_energy);
            std::cout << (dir / (stem + ".json")).string() << '\n' << (dir / (stem + ".svg")).string() << '\n';
            return 0;
        }

        if (*modes) {
            if (!modes_sizes.empty()) {
                json sizes = json::array();
                for (const std::string& s : modes_sizes) {
                    const auto [x, y] = parse_size(s);
                    sizes.push_back({x, y});
                }
                return run_experiments(modes_flags.build("size_invariance", {{"sizes", sizes}}));
            }
            const macro::RunConfig cfg = modes_flags.build("mode_sweep", json::object());
            if (modes_sweep) return run_experiments(cfg);
            for (macro::TopologyId t : cfg.topologies) {
                const macro::Mesh mesh = macro::generate_mesh(cfg.mesh_spec(t));
                const auto list = macro::enumerate_oriented_modes(static_cast<int>(mesh.class_count()));
                std::cout << macro::to_string(t) << ": " << mesh.class_count() << " orientation classes (";
                for (std::size_t k = 0; k < mesh.orientation_angles.size(); ++k)
                    std::cout << (k ? ", " : "") << mesh.orientation_angles[k];
                std::cout << " deg), " << list.size() << " oriented modes\n";
                for (const auto& m : list) std::cout << "  " << m.mode_id() << ' ' << m.bits_string() << '\n';
            }
            return 0;
        }

        if (*rnd) {
            json extra = json::object();
            if (rnd_f->count()) extra["fractions"] = rnd_fractions;
            if (rnd_r->count()) extra["replicates"] = rnd_replicates;
            if (rnd_s->count()) extra["seed"] = rnd_seed;
            return run_experiments(rnd_flags.build("random_sweep", extra));
        }

        if (*sup) return run_experiments(sup_flags.build("superposition", json::object()));

        if (*energy) {
            json extra = json::object();
            if (energy_wo->count()) extra["target_width"] = energy_w;
            if (energy_ho->count()) extra["target_height"] = energy_h;
            json all = json::array();
            for (macro::TopologyId t : macro::kAllTopologies) all.push_back(std::string(macro::to_string(t)));
            if (energy_flags.config_path.empty() && energy_flags.topologies.empty()) extra["topologies"] = all;
            return run_experiments(energy_flags.build("energy", extra));
        }

        if (*heat) {
            json extra = json::object();
            if (heat_wo->count()) extra["target_width"] = heat_w;
            if (heat_ho->count()) extra["target_height"] = heat_h;
            if (heat_co->count()) {
                json cases = json::array();
                for (const std::string& s : heat_cases) {
                    const auto [a, b] = parse_case(s);
                    cases.push_back({a, b});
                }
                extra["cases"] = cases;
            }
            json all = json::array();
            for (macro::TopologyId t : macro::kAllTopologies) all.push_back(std::string(macro::to_string(t)));
            if (heat_flags.config_path.empty() && heat_flags.topologies.empty()) extra["topologies"] = all;
            return run_experiments(heat_flags.build("heatmap", extra));
        }

        if (*render) {
            const macro::Mesh mesh = macro::mesh_from_string(macro::read_text_file(render_mesh));
            macro::MeshSvgOptions opts;
            opts.px_per_mm = render_scale;
            opts.overlay = !render_side;
            fs::path out = render_output.empty() ? fs::path(render_mesh).replace_extension(".svg") : fs::path(render_output);
            if (render_mode.none) {
                macro::write_file_atomic(out, macro::render_mesh_svg(mesh, std::vector<std::size_t>{}, nullptr, opts));
            } else {
                const macro::ActuationMode mode = render_mode.mode(mesh);
                std::optional<macro::SolveResult> result;
                if (render_deformed) {
                    macro::FemParams fem;
                    const macro::ActuationSolver solver(macro::FeModel(mesh, fem));
                    result = solver.solve(mesh, mode);
                }
                macro::write_file_atomic(out,
                                         macro::render_mesh_svg(mesh, mode, result ? &*result : nullptr, opts));
            }
            std::cout << out.string() << '\n';
            return 0;
        }
    } catch (const macro::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const macro::DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const macro::SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
