// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: subcommands, result tables and run manifests.
#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamopt/analysis.hpp"
#include "beamopt/config_io.hpp"
#include "beamopt/parallel.hpp"
#include "beamopt/scenario.hpp"
#include "beamopt/solver.hpp"

namespace beamopt::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitInfeasible = 3,
};

/// Column-major-agnostic result table; cells are JSON scalars so CSV and
/// JSON share one formatting path.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;

    void add(std::vector<Json> row) { rows.push_back(std::move(row)); }
};

/// Shortest round-trip text for a double; "nan"/"inf" for non-finite.
inline std::string format_number(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

inline Json num(double x)
{
    if (!std::isfinite(x)) {
        return format_number(x);
    }
    return x;
}

inline std::string csv_cell(const Json& v)
{
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_float()) {
        return format_number(v.get<double>());
    }
    if (v.is_null()) {
        return "";
    }
    return v.dump();
}

inline void write_csv(std::ostream& out, const Table& t)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        out << (i ? "," : "") << t.columns[i];
    }
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_cell(row[i]);
        }
        out << '\n';
    }
}

inline Json table_json(const Table& t)
{
    Json arr = Json::array();
    for (const auto& row : t.rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            obj[t.columns[i]] = row[i];
        }
        arr.push_back(std::move(obj));
    }
    return arr;
}

struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t master_seed = 0;
    std::string tool_version = kToolVersion;
    double wall_time_s = 0.0;
    int worker_count = 1;
};

inline Json to_json(const RunManifest& m)
{
    return Json{{"command", m.command},         {"config_digest", m.config_digest},
                {"master_seed", m.master_seed}, {"tool_version", m.tool_version},
                {"wall_time_s", m.wall_time_s}, {"worker_count", m.worker_count}};
}

/// Parses "a..b" (inclusive integer range) or a comma list.
inline std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const int a = std::stoi(text.substr(0, dots));
        const int b = std::stoi(text.substr(dots + 2));
        if (b < a) {
            throw ConfigError("range", "empty range " + text);
        }
        for (int i = a; i <= b; ++i) {
            out.push_back(i);
        }
        return out;
    }
    for (const auto& part : CLI::detail::split(text, ',')) {
        out.push_back(std::stoi(part));
    }
    return out;
}

inline std::vector<double> parse_double_list(const std::string& text)
{
    std::vector<double> out;
    for (const auto& part : CLI::detail::split(text, ',')) {
        out.push_back(std::stod(part));
    }
    return out;
}

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> iterations;
    std::optional<int> threads;
    std::optional<double> eps_feas;
    std::string out;
    std::string format = "csv";
    bool strict = false;
    bool quiet = false;
};

inline void add_common(CLI::App* app, CommonOptions& o)
{
    app->add_option("--config", o.config_path, "Scenario JSON file");
    app->add_option("--seed", o.seed, "Master seed");
    app->add_option("--iterations", o.iterations, "Monte Carlo iterations per solve");
    app->add_option("--threads", o.threads, "Worker threads (default: BEAMOPT_THREADS or hardware)");
    app->add_option("--eps-feas", o.eps_feas, "Tolerated fraction of infeasible iterations");
    app->add_option("--out", o.out, "Output path (stdout when omitted)");
    app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json", "both"}));
    app->add_flag("--strict", o.strict, "Exit with status 3 when the result is infeasible");
    app->add_flag("--quiet", o.quiet, "Suppress progress messages");
}

inline ScenarioConfig resolve_config(const CommonOptions& o)
{
    ScenarioConfig c;
    if (!o.config_path.empty()) {
        c = load_config(o.config_path);
    }
    if (o.seed) {
        c.master_seed = *o.seed;
    }
    if (o.iterations) {
        c.mc_iterations = *o.iterations;
    }
    if (o.eps_feas) {
        c.eps_feas = *o.eps_feas;
    }
    validate(c);
    return c;
}

inline int worker_count(const CommonOptions& o)
{
    if (o.threads && *o.threads > 0) {
        return *o.threads;
    }
    return default_worker_count();
}

inline std::string stem_of(const std::string& path)
{
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path;
    }
    return path.substr(0, dot);
}

/// Writes `t` as requested. With no --out the table goes to stdout and no
/// manifest is written.
inline void emit(const CommonOptions& o, const Table& t, const RunManifest& m, const std::string& suffix = "")
{
    const bool csv = o.format == "csv" || o.format == "both";
    const bool json = o.format == "json" || o.format == "both";
    if (o.out.empty()) {
        if (csv) {
            write_csv(std::cout, t);
        }
        if (json) {
            std::cout << table_json(t).dump(2) << '\n';
        }
        return;
    }
    const std::string stem = stem_of(o.out) + suffix;
    auto open = [](const std::string& path) {
        std::ofstream f(path);
        if (!f) {
            throw std::runtime_error("cannot write " + path);
        }
        return f;
    };
    if (csv) {
        const std::string path = (suffix.empty() && o.format == "csv") ? o.out : stem + ".csv";
        auto f = open(path);
        write_csv(f, t);
    }
    if (json) {
        const std::string path = (suffix.empty() && o.format == "json") ? o.out : stem + ".json";
        auto f = open(path);
        f << table_json(t).dump(2) << '\n';
    }
    if (suffix.empty()) {
        auto f = open(o.out + ".manifest.json");
        f << to_json(m).dump(2) << '\n';
    }
}

inline std::vector<std::string> solve_columns()
{
    return {"num_ues",     "ue_speed_mps",      "t_ss_ms",      "n_ss",           "max_tx_power_dbm",
            "snr_threshold_db", "misdetection_prob", "n_star", "p_t_star_dbm", "p_t_star_w",
            "e_c_mj",      "e_c_mj_at_mean",    "p_c_mw",       "p_c_mw_at_mean", "feasible_fraction",
            "feasible",    "iterations_used"};
}

inline std::vector<Json> solve_row(const ScenarioConfig& c, const SolveResult& r)
{
    return {c.num_ues,
            num(c.ue_speed_mps),
            num(c.t_ss_s * 1e3),
            c.n_ss,
            num(c.max_tx_power_dbm),
            num(c.snr_threshold_db),
            num(c.misdetection_prob),
            num(r.n_star),
            num(r.p_t_star_dbm),
            num(r.p_t_star_w),
            num(r.e_c_j_mean * 1e3),
            num(r.e_c_j_at_mean * 1e3),
            num(r.p_c_w_mean * 1e3),
            num(r.p_c_w_at_mean * 1e3),
            num(r.feasible_fraction),
            r.feasible,
            r.iterations_used};
}

/// Per-run scalar overrides shared by solve and sweep.
struct ScenarioOverrides {
    std::string k, v, t_ss, n_ss, p_md, p_t, tau;
};

inline void add_overrides(CLI::App* app, ScenarioOverrides& s, bool lists)
{
    const std::string kind = lists ? " (comma list)" : "";
    app->add_option("--k", s.k, "Number of UEs" + kind);
    app->add_option("--v", s.v, "UE speed in m/s" + kind);
    app->add_option("--t-ss", s.t_ss, "Burst period in seconds" + kind);
    app->add_option("--n-ss", s.n_ss, "SSBs per burst" + kind);
    app->add_option("--p-md", s.p_md, "Misdetection probability" + kind);
    app->add_option("--p-t", s.p_t, "Maximum transmit power in dBm" + kind);
    app->add_option("--tau", s.tau, "SNR threshold in dB" + kind);
}

/// Cartesian product of the override lists applied to `base`.
inline std::vector<ScenarioConfig> expand(const ScenarioConfig& base, const ScenarioOverrides& s)
{
    std::vector<ScenarioConfig> out{base};
    auto cross_d = [&out](const std::string& text, auto setter) {
        if (text.empty()) {
            return;
        }
        std::vector<ScenarioConfig> next;
        for (const auto& c : out) {
            for (double x : parse_double_list(text)) {
                ScenarioConfig d = c;
                setter(d, x);
                next.push_back(d);
            }
        }
        out = std::move(next);
    };
    cross_d(s.k, [](ScenarioConfig& c, double x) { c.num_ues = static_cast<int>(x); });
    cross_d(s.n_ss, [](ScenarioConfig& c, double x) { c.n_ss = static_cast<int>(x); });
    cross_d(s.p_md, [](ScenarioConfig& c, double x) { c.misdetection_prob = x; });
    cross_d(s.p_t, [](ScenarioConfig& c, double x) { c.max_tx_power_dbm = x; });
    cross_d(s.tau, [](ScenarioConfig& c, double x) { c.snr_threshold_db = x; });
    cross_d(s.v, [](ScenarioConfig& c, double x) { c.ue_speed_mps = x; });
    cross_d(s.t_ss, [](ScenarioConfig& c, double x) { c.t_ss_s = x; });
    for (const auto& c : out) {
        validate(c);
    }
    return out;
}

inline void progress(const CommonOptions& o, const std::string& msg)
{
    if (!o.quiet) {
        std::cerr << "[beamopt] " << msg << '\n';
    }
}

inline double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline int run_solve_like(const std::string& command, const CommonOptions& o, const ScenarioOverrides& s)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig base = resolve_config(o);
    const auto configs = expand(base, s);
    SolveOptions so;
    so.workers = worker_count(o);
    Table t{solve_columns(), {}};
    bool any_infeasible = false;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        progress(o, command + " " + std::to_string(i + 1) + "/" + std::to_string(configs.size()));
        const SolveResult r = solve(make_problem(configs[i]), so);
        any_infeasible = any_infeasible || !r.feasible;
        t.add(solve_row(configs[i], r));
    }
    emit(o, t, {command, config_digest(base), base.master_seed, kToolVersion, seconds_since(t0), so.workers});
    return (o.strict && any_infeasible) ? kExitInfeasible : kExitOk;
}

struct OffsetArgs {
    std::string n_gnb = "1..64";
    std::string v = "2,4";
    std::string t_ss = "20e-3,40e-3,80e-3";
    std::string n_ss = "8";
    std::int64_t samples = 100000;
};

inline int run_offset(const CommonOptions& o, const OffsetArgs& a)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig base = resolve_config(o);
    Table t{{"n_gnb", "n_ss", "t_ss_ms", "v_mps", "theta_bar_rad", "theta_bar_i_rad", "theta_bar_v_rad",
             "theta_bar_mc_rad", "theta_bar_mc_se_rad", "theta_bar_i_mc_rad", "theta_bar_v_mc_rad",
             "theta_bar_mc_all_beams_rad"},
            {}};
    for (int n_ss : parse_int_list(a.n_ss)) {
        for (double t_ss : parse_double_list(a.t_ss)) {
            for (double v : parse_double_list(a.v)) {
                progress(o, "offset n_ss=" + std::to_string(n_ss) + " t_ss=" + format_number(t_ss) +
                                " v=" + format_number(v));
                for (int n : parse_int_list(a.n_gnb)) {
                    const auto an = analytic_theta_bar(n, n_ss, t_ss, v, base.cell_radius_m, base.numerology);
                    const auto mc = mc_theta_bar(n, n_ss, t_ss, v, base, a.samples);
                    t.add({n, n_ss, num(t_ss * 1e3), num(v), num(an.theta_bar), num(an.theta_bar_i),
                           num(an.theta_bar_v), num(mc.interior.theta_bar), num(mc.interior_std_error),
                           num(mc.interior.theta_bar_i), num(mc.interior.theta_bar_v), num(mc.all.theta_bar)});
                }
            }
        }
    }
    emit(o, t, {"offset", config_digest(base), base.master_seed, kToolVersion, seconds_since(t0), 1});
    return kExitOk;
}

struct GridArgs {
    std::string k;
    std::string v = "5";
    std::string n_ss = "8,16,32,64";
    std::string t_ss = "5e-3,10e-3,20e-3,40e-3,80e-3,160e-3";
    std::string p_md;
    bool exhaustive = false;
    double d_min_m = 10.0;
};

inline FeasibilityAxes make_axes(const ScenarioConfig& base, const GridArgs& g)
{
    FeasibilityAxes ax;
    ax.n_ss = parse_int_list(g.n_ss);
    ax.t_ss_s = parse_double_list(g.t_ss);
    ax.v_mps = parse_double_list(g.v);
    ax.num_ues = g.k.empty() ? std::vector<int>{base.num_ues} : parse_int_list(g.k);
    ax.misdetection_prob = g.p_md.empty() ? std::vector<double>{base.misdetection_prob} : parse_double_list(g.p_md);
    for (int n : ax.n_ss) {
        if (!is_valid_burst_size(n)) {
            throw ConfigError("n_ss", "must be one of 8, 16, 32, 64");
        }
    }
    for (double t : ax.t_ss_s) {
        try {
            canonical_burst_period(t);
        } catch (const std::invalid_argument&) {
            throw ConfigError("t_ss_s", "must be one of 5e-3, 10e-3, 20e-3, 40e-3, 80e-3, 160e-3");
        }
    }
    for (int k : ax.num_ues) {
        if (k < 1) {
            throw ConfigError("num_ues", "must be a positive integer");
        }
    }
    for (double p : ax.misdetection_prob) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("misdetection_prob", "must lie in [0, 1]");
        }
    }
    return ax;
}

inline FeasibilityGrid run_grid(const CommonOptions& o, const ScenarioConfig& base, const GridArgs& g)
{
    SweepOptions so;
    so.solve.workers = worker_count(o);
    so.exhaustive = g.exhaustive;
    so.overlay_d_min_m = g.d_min_m;
    so.progress = [&o](const std::string& m) { progress(o, m); };
    return sweep_feasibility(base, make_axes(base, g), so);
}

inline const char* status_name(CellStatus s)
{
    switch (s) {
    case CellStatus::Solved:
        return "solved";
    case CellStatus::InferredFeasible:
        return "inferred_feasible";
    case CellStatus::InferredInfeasible:
        return "inferred_infeasible";
    }
    return "?";
}

inline int run_feasibility(const CommonOptions& o, const GridArgs& g)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig base = resolve_config(o);
    const FeasibilityGrid grid = run_grid(o, base, g);

    Table slices{{"n_ss", "num_ues", "misdetection_prob", "max_feasible_vt_m", "n_star", "analytic_bound_m"}, {}};
    for (const auto& s : grid.slices) {
        slices.add({s.n_ss, s.num_ues, num(s.misdetection_prob),
                    s.max_feasible_vt_m ? Json(num(*s.max_feasible_vt_m)) : Json("NF"), num(s.n_star),
                    num(s.analytic_bound_m)});
    }
    Table cells{{"n_ss", "num_ues", "misdetection_prob", "ue_speed_mps", "t_ss_ms", "vt_m", "feasible", "status",
                 "n_star", "p_t_star_dbm", "feasible_fraction"},
                {}};
    for (const auto& c : grid.cells) {
        const bool solved = c.result.has_value();
        cells.add({c.n_ss, c.num_ues, num(c.misdetection_prob), num(c.v_mps), num(c.t_ss_s * 1e3), num(c.vt_m()),
                   c.feasible, status_name(c.status), solved ? num(c.result->n_star) : Json(nullptr),
                   solved ? num(c.result->p_t_star_dbm) : Json(nullptr),
                   solved ? num(c.result->feasible_fraction) : Json(nullptr)});
    }
    const RunManifest m{"feasibility", config_digest(base), base.master_seed, kToolVersion, seconds_since(t0),
                        worker_count(o)};
    emit(o, slices, m);
    if (!o.out.empty()) {
        emit(o, cells, m, ".cells");
    }
    return kExitOk;
}

inline int run_recommend(const CommonOptions& o, GridArgs g)
{
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig base = resolve_config(o);
    const FeasibilityGrid grid = run_grid(o, base, g);
    Table t{{"num_ues", "misdetection_prob", "ue_speed_mps", "n_ss", "t_ss_ms"}, {}};
    bool any_missing = false;
    for (int k : grid.axes.num_ues) {
        for (double p : grid.axes.misdetection_prob) {
            for (double v : grid.axes.v_mps) {
                const Recommendation r = recommend_config(grid, k, p, v);
                if (r.found) {
                    t.add({k, num(p), num(v), r.n_ss, num(r.t_ss_s * 1e3)});
                } else {
                    any_missing = true;
                    t.add({k, num(p), num(v), "NO-RECOMMENDATION", "NO-RECOMMENDATION"});
                }
            }
        }
    }
    emit(o, t, {"recommend", config_digest(base), base.master_seed, kToolVersion, seconds_since(t0), worker_count(o)});
    return (o.strict && any_missing) ? kExitInfeasible : kExitOk;
}

inline int print_default_config(const std::string& out)
{
    const std::string text = to_json(ScenarioConfig{}).dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        f << text;
    }
    return kExitOk;
}

inline int run(int argc, char** argv)
{
    CLI::App app{"Beam-management energy optimiser for UAV-mounted RedCap gNBs"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(0, 1);
    bool print_defaults = false;
    app.add_flag("--print-default-config", print_defaults, "Print the default scenario as JSON");

    CommonOptions solve_o, sweep_o, offset_o, feas_o, rec_o;
    ScenarioOverrides solve_s, sweep_s;
    OffsetArgs offset_a;
    GridArgs feas_g, rec_g;
    std::string defaults_out;

    auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario");
    add_common(solve_cmd, solve_o);
    add_overrides(solve_cmd, solve_s, false);

    auto* sweep_cmd = app.add_subcommand("sweep", "Solve the Cartesian product of parameter lists");
    add_common(sweep_cmd, sweep_o);
    add_overrides(sweep_cmd, sweep_s, true);

    auto* offset_cmd = app.add_subcommand("offset", "Average angular offset, analytic and Monte Carlo");
    add_common(offset_cmd, offset_o);
    offset_cmd->add_option("--n-gnb", offset_a.n_gnb, "Array sizes: a..b or comma list");
    offset_cmd->add_option("--v", offset_a.v, "UE speeds in m/s (comma list)");
    offset_cmd->add_option("--t-ss", offset_a.t_ss, "Burst periods in seconds (comma list)");
    offset_cmd->add_option("--n-ss", offset_a.n_ss, "SSBs per burst (comma list)");
    offset_cmd->add_option("--samples", offset_a.samples, "Monte Carlo samples per point");

    auto add_grid = [](CLI::App* cmd, GridArgs& g) {
        cmd->add_option("--k", g.k, "Numbers of UEs (comma list)");
        cmd->add_option("--v", g.v, "UE speeds in m/s (comma list)");
        cmd->add_option("--n-ss", g.n_ss, "SSBs per burst (comma list)");
        cmd->add_option("--t-ss", g.t_ss, "Burst periods in seconds (comma list)");
        cmd->add_option("--p-md", g.p_md, "Misdetection probabilities (comma list)");
        cmd->add_flag("--exhaustive", g.exhaustive, "Solve every cell instead of bisecting on v*T_SS");
        cmd->add_option("--d-min", g.d_min_m, "d_min in meters for the analytic bound");
    };
    auto* feas_cmd = app.add_subcommand("feasibility", "Feasibility regions over (N_SS, T_SS, v, K, P_MD)");
    add_common(feas_cmd, feas_o);
    add_grid(feas_cmd, feas_g);

    auto* rec_cmd = app.add_subcommand("recommend", "Lowest feasible N_SS, then highest T_SS");
    add_common(rec_cmd, rec_o);
    add_grid(rec_cmd, rec_g);

    auto* defaults_cmd = app.add_subcommand("print-default-config", "Print the default scenario as JSON");
    defaults_cmd->add_option("--out", defaults_out, "Output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (print_defaults || *defaults_cmd) {
            return print_default_config(defaults_out);
        }
        if (*solve_cmd) {
            return run_solve_like("solve", solve_o, solve_s);
        }
        if (*sweep_cmd) {
            return run_solve_like("sweep", sweep_o, sweep_s);
        }
        if (*offset_cmd) {
            return run_offset(offset_o, offset_a);
        }
        if (*feas_cmd) {
            return run_feasibility(feas_o, feas_g);
        }
        if (*rec_cmd) {
            return run_recommend(rec_o, rec_g);
        }
        std::cout << app.help();
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::out_of_range& e) {
        std::cerr << "out of range: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace beamopt::cli
