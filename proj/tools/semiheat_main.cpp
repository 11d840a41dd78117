// Command-line surface: constants | evolve | scan | check.
//
// Exit codes: 0 success, 1 precondition or hypothesis failure, 2 acceptance
// failure, 3 I/O failure.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "semiheat/acceptance.hpp"
#include "semiheat/config.hpp"
#include "semiheat/dynamics.hpp"
#include "semiheat/experiments.hpp"
#include "semiheat/io.hpp"

namespace {

using namespace semiheat;

struct CliOverrides {
    std::optional<int> dim;
    std::optional<double> p, lambda, dt, horizon, rmax;
    std::optional<int> nodes, sample_every;
    std::optional<std::string> init, frame;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o, std::string& config_path) {
    cmd->add_option("--config", config_path, "config file (sections [problem] [grid] [stepping] [experiment])");
    cmd->add_option("--dim", o.dim, "spatial dimension N");
    cmd->add_option("--p", o.p, "nonlinearity exponent p > 1");
    cmd->add_option("--lambda", o.lambda, "barrier fraction in (0,1)");
    cmd->add_option("--init", o.init, "initial data kind:A:width, e.g. gaussian:0.1:2");
    cmd->add_option("--frame", o.frame, "integration frame, u or v");
    cmd->add_option("--dt", o.dt, "time step");
    cmd->add_option("--horizon", o.horizon, "integration horizon (s or t)");
    cmd->add_option("--rmax", o.rmax, "truncation radius");
    cmd->add_option("--nodes", o.nodes, "grid intervals");
    cmd->add_option("--sample-every", o.sample_every, "steps between diagnostic samples");
}

RunConfig resolve(const std::string& config_path, const CliOverrides& o) {
    RunConfig cfg = load_config_file(config_path);
    if (o.dim) cfg.dim = *o.dim;
    if (o.p) cfg.p = *o.p;
    if (o.lambda) cfg.lambda = *o.lambda;
    if (o.init) cfg.init = parse_init_spec(*o.init);
    if (o.frame) {
        if (*o.frame == "u")
            cfg.frame = Frame::UFrame;
        else if (*o.frame == "v")
            cfg.frame = Frame::VFrame;
        else
            throw std::invalid_argument("--frame must be u or v");
    }
    if (o.dt) cfg.dt = *o.dt;
    if (o.horizon) cfg.horizon = *o.horizon;
    if (o.rmax) cfg.r_max = *o.rmax;
    if (o.nodes) cfg.nodes = *o.nodes;
    if (o.sample_every) cfg.sample_every = *o.sample_every;
    if (cfg.dt_min > cfg.dt) cfg.dt_min = cfg.dt;
    return cfg;
}

std::vector<double> parse_range(const std::string& text, const std::string& flag) {
    // lo:hi:n inclusive
    double lo = 0, hi = 0;
    int n = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1)
        throw std::invalid_argument(flag + ": expected lo:hi:n, got '" + text + "'");
    std::vector<double> out;
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
    return out;
}

int scan_workers() {
    if (const char* env = std::getenv("SEMIHEAT_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

int run_constants(const RunConfig& cfg, const std::string& out_json) {
    const std::string text = constants_json(cfg.problem());
    if (out_json.empty())
        std::cout << text;
    else
        write_file(out_json, text);
    return 0;
}

int run_evolve(RunConfig cfg, const std::string& out_csv, const std::string& out_json) {
    if (!out_csv.empty()) cfg.out_csv = out_csv;
    if (!out_json.empty()) cfg.out_json = out_json;
    if (cfg.out_csv.empty()) cfg.out_csv = "trajectory.csv";
    if (cfg.out_json.empty()) cfg.out_json = "summary.json";

    const ExperimentSetup setup = cfg.setup();
    const RadialGrid grid = build_grid(cfg.dim, cfg.nodes, cfg.r_max);
    auto [u0, wang] = make_initial_data(grid, cfg.init, setup.params);
    if (wang.verdict == WangReport::Verdict::Fail)
        std::cerr << "note: " << wang.detail << " (barrier-dependent claims not in force)\n";
    const Trajectory traj = evolve(grid, setup.params, u0, setup.controls, setup.extra_q);

    write_file(cfg.out_csv, trajectory_csv(traj));
    write_file(cfg.out_json, run_summary_json(traj, cfg));
    std::cout << to_string(traj.outcome.status) << ": " << traj.outcome.reason << "\n"
              << "wrote " << cfg.out_csv << " and " << cfg.out_json << "\n";
    return 0;
}

int run_scan(RunConfig cfg, const std::string& p_range, const std::string& amp_range,
             const std::string& out_table, const std::string& out_json) {
    if (!p_range.empty()) cfg.p_list = parse_range(p_range, "--p-range");
    if (!amp_range.empty()) cfg.amp_list = parse_range(amp_range, "--amp-range");
    if (cfg.p_list.empty() || cfg.amp_list.empty())
        throw std::invalid_argument("scan: need --p-range and --amp-range (or config lists)");
    if (!out_table.empty()) cfg.out_table = out_table;
    if (!out_json.empty()) cfg.out_json = out_json;
    if (cfg.out_table.empty()) cfg.out_table = "phase_table.csv";
    if (cfg.out_json.empty()) cfg.out_json = "phase_summary.json";

    const PhaseTable table = run_fujita_scan(cfg.p_list, cfg.amp_list, cfg.setup(), scan_workers());
    write_file(cfg.out_table, phase_table_csv(table));
    write_file(cfg.out_json, scan_summary_json(table, cfg));
    std::cout << "wrote " << cfg.out_table << " and " << cfg.out_json << "\n";
    return 0;
}

int run_check(const std::string& out_json) {
    const auto results = run_acceptance(std::cout);
    int passed = 0;
    for (const auto& r : results) passed += r.pass ? 1 : 0;
    std::cout << "acceptance: " << passed << "/" << results.size() << " criteria passed\n";
    if (!out_json.empty()) {
        std::string body = "[\n";
        for (size_t i = 0; i < results.size(); ++i) {
            body += "  {\"id\": " + std::to_string(results[i].id) + ", \"pass\": " +
                    (results[i].pass ? "true" : "false") + "}";
            body += i + 1 < results.size() ? ",\n" : "\n";
        }
        body += "]\n";
        write_file(out_json, body);
    }
    return all_passed(results) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiheat: a radial laboratory for u_t = Δu + u^p and its rescaled flow"};
    app.require_subcommand(1);

    CliOverrides o;
    std::string config_path, out_csv, out_json, out_table, p_range, amp_range;

    CLI::App* constants = app.add_subcommand("constants", "derived constants as JSON");
    add_common_flags(constants, o, config_path);
    constants->add_option("--out", out_json, "output path (default stdout)");

    CLI::App* evolve_cmd = app.add_subcommand("evolve", "integrate one run, emit CSV + JSON");
    add_common_flags(evolve_cmd, o, config_path);
    evolve_cmd->add_option("--out", out_csv, "diagnostics CSV path");
    evolve_cmd->add_option("--json", out_json, "summary JSON path");

    CLI::App* scan = app.add_subcommand("scan", "Fujita phase scan over (p, amplitude)");
    add_common_flags(scan, o, config_path);
    scan->add_option("--p-range", p_range, "p axis as lo:hi:n");
    scan->add_option("--amp-range", amp_range, "amplitude axis as lo:hi:n");
    scan->add_option("--out", out_table, "phase table CSV path");
    scan->add_option("--json", out_json, "scan summary JSON path");

    CLI::App* check = app.add_subcommand("check", "run the acceptance suite");
    check->add_option("--json", out_json, "write per-criterion verdicts as JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (constants->parsed()) return run_constants(resolve(config_path, o), out_json);
        if (evolve_cmd->parsed()) return run_evolve(resolve(config_path, o), out_csv, out_json);
        if (scan->parsed())
            return run_scan(resolve(config_path, o), p_range, amp_range, out_table, out_json);
        if (check->parsed()) return run_check(out_json);
    } catch (const semiheat::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
