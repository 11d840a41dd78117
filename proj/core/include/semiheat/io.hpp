#pragma once

#include <string>

#include "semiheat/config.hpp"
#include "semiheat/experiments.hpp"

namespace semiheat {

class io_error : public std::runtime_error {
  public:
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

/// %.17g rendering used everywhere numbers hit disk, so identical runs
/// produce identical bytes.
std::string format_double(double x);

/// Diagnostics CSV: header plus one row per sample, columns
///   s, t, E, I, K, R, g, dirichlet, norm_l2rho_v, norm_l2_u, norm_l4_u,
///   sup_v, wang_margin, gbound_margin
/// followed by norm_l{q}_u for any extra configured q.
std::string trajectory_csv(const Trajectory& traj);

/// JSON summary of a plain run: derived constants, regime, outcome,
/// initial/final scalars and the config echo.
std::string run_summary_json(const Trajectory& traj, const RunConfig& config);

/// JSON summary of a decay experiment: adds the fitted rates and verdicts.
std::string decay_summary_json(const DecayReport& report, const RunConfig& config);

/// Phase-table CSV: p, A, outcome, t_blowup_estimate (empty unless BlewUp).
std::string phase_table_csv(const PhaseTable& table);

/// JSON summary of a scan: axes, p*, outcomes, config echo.
std::string scan_summary_json(const PhaseTable& table, const RunConfig& config);

std::string constants_json(const ProblemParams& params);

/// Writes content to path, creating parent directories; throws io_error with
/// the path on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace semiheat
