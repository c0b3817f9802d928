#include "springlink/commands.hpp"

#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "springlink/config.hpp"
#include "springlink/csv_io.hpp"
#include "springlink/design_space.hpp"
#include "springlink/prototype.hpp"

#ifdef SPRINGLINK_USE_OPENMP
#include <omp.h>
#endif

namespace springlink::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::size_t> samples;
    std::optional<std::string> direction;
    std::optional<double> threshold;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool config_required) {
    auto* config = cmd->add_option("--config", opt.config, "Run configuration (JSON)");
    if (config_required) config->required();
    cmd->add_option("--out", opt.out, "Output file")->required();
    cmd->add_option("--samples", opt.samples, "Crank-angle samples per revolution")
        ->check(CLI::Range(std::size_t{16}, std::size_t{1} << 24));
    cmd->add_option("--direction", opt.direction, "Crank travel direction: cw or ccw");
    cmd->add_option("--threshold", opt.threshold, "Feasibility threshold on the ratio");
    cmd->add_option("--threads", opt.threads, "Worker threads for grid evaluation")
        ->check(CLI::PositiveNumber);
}

RunConfig load_with_overrides(const CommonOptions& opt) {
    RunConfig cfg = load_config(opt.config);
    if (opt.samples) cfg.samples = *opt.samples;
    if (opt.direction) cfg.direction = parse_direction(*opt.direction);
    if (opt.threshold) cfg.threshold = *opt.threshold;
    return cfg;
}

void apply_threads(const CommonOptions& opt) {
#ifdef SPRINGLINK_USE_OPENMP
    if (opt.threads) omp_set_num_threads(*opt.threads);
#else
    (void)opt;
#endif
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
    fs::path p = out;
    p.replace_extension(suffix);
    return p;
}

json intervals_json(const std::vector<AngleInterval>& arcs) {
    json list = json::array();
    for (const auto& arc : arcs) list.push_back({arc.start, arc.end});
    return list;
}

json summary_json(const PipelineResult& r, const RunConfig& cfg) {
    json s;
    s["T_min"] = r.torque.min_total;
    s["theta_at_min"] = r.torque.theta_at_min;
    s["T_kin_max"] = r.torque.kinematic_max;
    s["ratio"] = r.torque.ratio;
    s["theta_s"] = r.unfavorable.largest_width;
    s["T_load"] = r.unfavorable.load_torque;
    s["feasible"] = r.feasible(cfg.threshold);
    s["condition1"] = r.feasibility.condition1;
    s["condition2"] = r.feasibility.condition2;
    s["transition_points"] = r.feasibility.transition_count;
    s["release_intervals"] = intervals_json(r.feasibility.release_intervals);
    s["unfavorable_intervals"] = intervals_json(r.unfavorable.intervals);
    s["singular_thetas"] = r.singular_thetas;
    s["K_s"] = r.spring.stiffness;
    s["l0"] = r.spring.relaxed_length;
    s["grounding"] = {r.spring.grounding.x, r.spring.grounding.y};
    s["l_min"] = r.lengths.l_min;
    s["l_max"] = r.lengths.l_max;
    s["direction"] = to_string(cfg.direction);
    s["samples"] = cfg.samples;
    s["threshold"] = cfg.threshold;
    s["failures"] = r.failures;
    return s;
}

int cmd_analyze(const CommonOptions& opt, std::ostream& out) {
    const RunConfig cfg = load_with_overrides(opt);
    const auto result = design_pipeline(to_pipeline_input(cfg));
    io::write_file_atomic(opt.out, io::to_csv(io::torque_table(result.torque)));
    const auto summary = summary_json(result, cfg).dump(2) + "\n";
    io::write_file_atomic(sibling(opt.out, ".summary.json"), summary);
    out << summary;
    return kExitOk;
}

AttachmentSweep sweep_spec(const RunConfig& cfg) {
    AttachmentSweep spec;
    spec.geometry = cfg.geometry;
    spec.branch = cfg.branch;
    spec.load = cfg.load;
    spec.load_fraction = cfg.load_fraction;
    spec.direction = cfg.direction;
    spec.samples = cfg.samples;
    spec.threshold = cfg.threshold;
    spec.clearance = cfg.clearance;
    spec.baseline = cfg.baseline;
    return spec;
}

int cmd_sweep(const CommonOptions& opt, const std::string& l_axis, const std::string& beta_axis,
              std::ostream& out) {
    const RunConfig cfg = load_with_overrides(opt);
    require_valid(cfg.geometry);
    AttachmentSweep spec = sweep_spec(cfg);
    spec.l_over_a = io::parse_axis(l_axis, "l_over_a");
    spec.beta = io::parse_axis(beta_axis, "beta_rad");
    apply_threads(opt);
    const auto grid = sweep_attachment(spec);
    io::write_file_atomic(opt.out, io::to_csv(io::sweep_table(grid)));
    std::size_t feasible = 0;
    for (auto f : grid.feasible) feasible += f;
    out << "wrote " << grid.ratio.size() << " cells (" << feasible << " feasible) to " << opt.out
        << "\n";
    return kExitOk;
}

int cmd_family(const CommonOptions& opt, const std::string& ratios, const std::string& l_axis,
               const std::string& beta_axis, const std::string& grid_out, std::ostream& out) {
    const RunConfig cfg = load_with_overrides(opt);
    if (cfg.geometry.kind != MechanismKind::SliderCrank) {
        throw ConfigError("family: needs a slider-crank config");
    }
    AttachmentSweep spec = sweep_spec(cfg);
    spec.l_over_a = io::parse_axis(l_axis, "l_over_a");
    spec.beta = io::parse_axis(beta_axis, "beta_rad");
    const auto list = io::parse_list(ratios);
    for (double r : list) {
        if (!(r > 0.0)) throw ConfigError("family: every b/a must be positive");
    }
    apply_threads(opt);
    const auto family = sweep_family(list, spec);
    io::write_file_atomic(opt.out, io::to_csv(io::family_summary_table(family)));
    if (!grid_out.empty()) io::write_file_atomic(grid_out, io::to_csv(io::family_grid_table(family)));
    for (const auto& m : family) {
        out << "b/a=" << m.b_over_a << " feasible_cells=" << m.feasible_cells
            << " beta_extent=" << m.beta_extent << " best_ratio=" << m.best_ratio << "\n";
    }
    return kExitOk;
}

int cmd_solution_space(const CommonOptions& opt, double c_over_a, const std::string& b_axis,
                       const std::string& d_axis, std::size_t sub_l, std::size_t sub_beta,
                       std::ostream& out) {
    SolutionSpaceSpec spec;
    spec.c_over_a = c_over_a;
    if (!opt.config.empty()) {
        const RunConfig cfg = load_config(opt.config);
        spec.branch = cfg.branch;
        spec.load_fraction = cfg.load_fraction;
        spec.threshold = cfg.threshold;
        spec.baseline = cfg.baseline;
    }
    if (opt.samples) spec.samples = *opt.samples;
    if (opt.threshold) spec.threshold = *opt.threshold;
    if (opt.direction) spec.strategy.directions = {parse_direction(*opt.direction)};
    spec.b_over_a = io::parse_axis(b_axis, "b_over_a");
    spec.d_over_a = io::parse_axis(d_axis, "d_over_a");
    if (sub_l < 2 || sub_beta < 1) throw ConfigError("solution-space: sub-sweep too coarse");
    spec.strategy.l_count = sub_l;
    spec.strategy.beta_count = sub_beta;
    apply_threads(opt);
    const auto space = rocker_solution_space(spec);
    io::write_file_atomic(opt.out, io::to_csv(io::solution_space_table(space)));
    const auto boundary_path = sibling(opt.out, ".boundary.csv");
    io::write_file_atomic(boundary_path, io::to_csv(io::boundary_table(space)));
    std::size_t ok = 0;
    std::size_t feasible = 0;
    for (std::size_t k = 0; k < space.feasible.size(); ++k) {
        ok += space.grashof_ok[k];
        feasible += space.feasible[k];
    }
    out << "c/a=" << c_over_a << " grashof_ok=" << ok << " feasible=" << feasible
        << " boundary=" << boundary_path.string() << "\n";
    return kExitOk;
}

int cmd_prototype(const CommonOptions& opt, const std::string& measured_path, std::ostream& out) {
    const RunConfig cfg = load_with_overrides(opt);
    const auto result = predict_prototype(cfg);
    const auto& p = result.torque;
    io::CsvTable table;
    table.header = {"theta_rad", "theta_deg", "P_input",      "T_kin",
                    "T_spring",  "T_total",   "spring_length"};
    if (cfg.crank_pin_radius) table.header.push_back("rope_force");
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
        std::vector<std::string> row{io::format_number(p.theta[i]),
                                     io::format_number(p.theta[i] * 180.0 / kPi),
                                     io::format_number(p.input[i]),
                                     io::format_number(p.kinematic[i]),
                                     io::format_number(p.spring[i]),
                                     io::format_number(p.total[i]),
                                     io::format_number(p.length[i])};
        if (cfg.crank_pin_radius) row.push_back(io::format_number(p.total[i] / *cfg.crank_pin_radius));
        table.rows.push_back(std::move(row));
    }
    json summary = summary_json(result, cfg);
    if (!measured_path.empty()) {
        const auto comparison = compare_measured(p, read_measured_series(measured_path));
        json c;
        c["compared"] = comparison.compared;
        c["rms_difference"] = comparison.rms_difference;
        c["mean_offset"] = comparison.mean_offset;
        io::write_file_atomic(sibling(opt.out, ".comparison.json"), c.dump(2) + "\n");
        summary["comparison"] = c;
    }
    io::write_file_atomic(opt.out, io::to_csv(table));
    const auto text = summary.dump(2) + "\n";
    io::write_file_atomic(sibling(opt.out, ".summary.json"), text);
    out << text;
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spring-augmented four-bar analysis and synthesis", "springlink"};
    app.require_subcommand(1);

    CommonOptions analyze_opt, sweep_opt, family_opt, space_opt, proto_opt;
    auto* analyze = app.add_subcommand("analyze", "Torque profile and summary for one design");
    add_common(analyze, analyze_opt, true);

    std::string l_axis = "0:8:81";
    std::string beta_axis = "0:3.141592653589793:81";
    auto* sweep = app.add_subcommand("sweep", "Attachment (l/a, beta) sweep");
    add_common(sweep, sweep_opt, true);
    sweep->add_option("--l-over-a", l_axis, "Extension axis min:max:count");
    sweep->add_option("--beta", beta_axis, "Attachment angle axis min:max:count");

    std::string ratios = "2,4,6,8";
    std::string family_l = "0:8:81";
    std::string family_beta = "0:3.141592653589793:81";
    std::string grid_out;
    auto* family = app.add_subcommand("family", "Attachment sweeps across coupler ratios b/a");
    add_common(family, family_opt, true);
    family->add_option("--b-over-a", ratios, "Comma-separated coupler ratios");
    family->add_option("--l-over-a", family_l, "Extension axis min:max:count");
    family->add_option("--beta", family_beta, "Attachment angle axis min:max:count");
    family->add_option("--grid-out", grid_out, "Also write every grid cell here");

    double c_over_a = 0.0;
    std::string b_axis = "1:10:19";
    std::string d_axis = "1:10:19";
    std::size_t sub_l = 17;
    std::size_t sub_beta = 17;
    auto* space = app.add_subcommand("solution-space", "Crank-rocker (b/a, d/a) solution space");
    add_common(space, space_opt, false);
    space->add_option("--c-over-a", c_over_a, "Rocker-to-crank ratio")->required();
    space->add_option("--b-over-a", b_axis, "Coupler axis min:max:count");
    space->add_option("--d-over-a", d_axis, "Ground axis min:max:count");
    space->add_option("--sub-l", sub_l, "Attachment sub-sweep points in l/a");
    space->add_option("--sub-beta", sub_beta, "Attachment sub-sweep points in beta");

    std::string measured;
    auto* proto = app.add_subcommand("prototype", "Spring-actuated slider-crank prediction");
    add_common(proto, proto_opt, true);
    proto->add_option("--measured", measured, "Measured angle/torque series to compare");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_opt, out);
        if (sweep->parsed()) return cmd_sweep(sweep_opt, l_axis, beta_axis, out);
        if (family->parsed()) {
            return cmd_family(family_opt, ratios, family_l, family_beta, grid_out, out);
        }
        if (space->parsed()) {
            return cmd_solution_space(space_opt, c_over_a, b_axis, d_axis, sub_l, sub_beta, out);
        }
        if (proto->parsed()) return cmd_prototype(proto_opt, measured, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace springlink::cli
