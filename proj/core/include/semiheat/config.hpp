#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semiheat/experiments.hpp"

namespace semiheat {

/// Full run description: problem, grid, stepping, experiment selection and
/// output paths. Parsed from a sectioned key = value file; every field has a
/// default so the empty file is a valid config, and the canonical echo of a
/// config reparses to the identical config.
struct RunConfig {
    // [problem]
    int dim = 3;
    double p = 5.0;
    double lambda = 0.5;
    InitialDataSpec init{InitialKind::Gaussian, 0.1, 2.0};
    // [grid]
    double r_max = 16.0;
    int nodes = 1024;
    // [stepping]
    Frame frame = Frame::VFrame;
    double dt = 1e-3;
    double dt_min = 1e-7;
    double horizon = 8.0;
    int sample_every = 100;
    double blowup_threshold = 1e6;
    double decay_threshold = 1e-3;
    // [experiment]
    std::string experiment = "evolve";  // evolve|decay|scan|negentropy|crossframe|wang
    std::vector<double> q_list = {2.0, 4.0};
    std::optional<double> fit_lo, fit_hi;
    std::vector<double> p_list, amp_list;  // scan axes
    std::string out_csv, out_json, out_table;

    ProblemParams problem() const;
    ExperimentSetup setup() const;
    /// q values beyond the built-in {2, 4} columns.
    std::vector<double> extra_q() const;
};

/// Parses the sectioned key = value format. Unknown keys, type mismatches
/// and constraint violations are rejected with the offending line number.
RunConfig parse_config(const std::string& text);

/// Reads and parses a config file; empty path yields the defaults.
RunConfig load_config_file(const std::string& path);

/// Canonical text form: every field echoed (defaults included) so any run
/// is reproducible from its own echo.
std::string config_echo(const RunConfig& config);

std::string format_init_spec(const InitialDataSpec& spec);
InitialDataSpec parse_init_spec(const std::string& text);

}  // namespace semiheat
