#include "semiheat/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace semiheat {

namespace {

std::vector<std::pair<double, double>> series_of(const Trajectory& traj,
                                                 double DiagnosticsSample::*member) {
    std::vector<std::pair<double, double>> out;
    out.reserve(traj.samples.size());
    for (const auto& d : traj.samples) out.emplace_back(d.s, d.*member);
    return out;
}

RateCheck make_check(const Trajectory& traj, double DiagnosticsSample::*member,
                     const std::string& name, double lo, double hi, double target,
                     double tolerance, bool one_sided) {
    RateCheck c;
    c.fit = fit_log_slope(series_of(traj, member), lo, hi, name);
    c.target = target;
    c.tolerance = tolerance;
    c.one_sided = one_sided;
    c.pass = one_sided ? c.fit.slope <= target
                       : std::abs(c.fit.slope - target) <= tolerance * std::abs(target);
    return c;
}

Field gaussian_field(const RadialGrid& grid, double amplitude, double width) {
    Field f;
    f.frame = Frame::VFrame;
    f.clock = 0.0;
    f.values.assign(grid.size(), 0.0);
    for (int i = 0; i < grid.m; ++i) {
        const double r = grid.nodes[i];
        f.values[i] = amplitude * std::exp(-r * r / (width * width));
    }
    return f;
}

}  // namespace

DecayReport run_decay_experiment(const ExperimentSetup& setup) {
    const ProblemParams& params = setup.params;
    params.validate();
    if (setup.controls.frame != Frame::VFrame)
        throw std::invalid_argument("run_decay_experiment: configure the rescaled frame");

    DecayReport report;
    report.params = params;
    report.constants = derive_constants(params);
    const DerivedConstants& dc = report.constants;

    if (classify_regime(params.dim, params.p) != Regime::Supercritical || !(dc.gamma > 0.0))
        throw hypothesis_error("decay experiment: needs the supercritical regime (gamma > 0)");
    report.full_scope = params.wang_hypotheses();
    if (report.full_scope) {
        if (!dc.lambda_max || !(params.lambda < *dc.lambda_max))
            throw hypothesis_error(
                "decay experiment: lambda >= lambda_max violates the K-functional lemma "
                "admissibility bound");
    }

    const RadialGrid grid = build_grid(params.dim, setup.grid_nodes, setup.r_max);
    auto [u0, wang] = make_initial_data(grid, params.init, params);
    if (report.full_scope && wang.verdict != WangReport::Verdict::Pass) {
        std::ostringstream os;
        os << "decay experiment: barrier hypothesis 0 <= u0 <= lambda u_inf failed";
        if (!wang.detail.empty()) os << " (" << wang.detail << ")";
        throw hypothesis_error(os.str());
    }

    Trajectory traj = evolve(grid, params, u0, setup.controls, setup.extra_q);
    if (!std::isfinite(traj.initial_production))
        throw hypothesis_error("decay experiment: I(u0) is not finite on the grid");

    report.gbound_in_scope = dc.p_tilde && params.p > *dc.p_tilde;

    const double s_end =
        traj.samples.empty() ? setup.controls.horizon : traj.samples.back().s;
    const double lo = setup.fit_lo.value_or(std::max(dc.s1.value_or(0.0), 2.0));
    const double hi = setup.fit_hi.value_or(s_end - 1.0);
    const double g = dc.gamma;

    report.checks.push_back(make_check(traj, &DiagnosticsSample::norm_l2rho_v, "norm_l2rho_v",
                                       lo, hi, -g, 0.05, false));
    report.checks.push_back(
        make_check(traj, &DiagnosticsSample::entropy, "entropy", lo, hi, -2.0 * g, 0.10, false));
    report.checks.push_back(make_check(traj, &DiagnosticsSample::production, "production", lo,
                                       hi, -2.0 * g, 0.10, false));
    if (report.full_scope && dc.a)
        report.checks.push_back(make_check(traj, &DiagnosticsSample::k_fun, "k_functional", lo,
                                           hi, -(2.0 * g + *dc.a), 0.0, true));
    // u-frame power laws against ln(t+1), which equals s along the samples.
    report.checks.push_back(make_check(traj, &DiagnosticsSample::norm_l2_u, "norm_l2_u", lo, hi,
                                       -params.dim / 4.0, 0.10, false));
    const LqExponents lq = lq_exponents(params.dim, params.p, 4.0);
    report.checks.push_back(make_check(traj, &DiagnosticsSample::norm_l4_u, "norm_l4_u", lo, hi,
                                       -lq.paper_rate, 0.0, true));

    report.all_pass = true;
    for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
    report.trajectory = std::move(traj);
    return report;
}

PhaseTable run_fujita_scan(const std::vector<double>& p_list,
                           const std::vector<double>& amplitude_list,
                           const ExperimentSetup& setup, int workers) {
    if (p_list.empty() || amplitude_list.empty())
        throw std::invalid_argument("run_fujita_scan: empty axis");
    for (size_t i = 1; i < p_list.size(); ++i)
        if (!(p_list[i] > p_list[i - 1]))
            throw std::invalid_argument("run_fujita_scan: p axis must be strictly increasing");
    for (size_t i = 1; i < amplitude_list.size(); ++i)
        if (!(amplitude_list[i] > amplitude_list[i - 1]))
            throw std::invalid_argument(
                "run_fujita_scan: amplitude axis must be strictly increasing");

    PhaseTable table;
    table.p_values = p_list;
    table.amplitudes = amplitude_list;
    table.p_star = 1.0 + 2.0 / setup.params.dim;
    table.cells.resize(p_list.size() * amplitude_list.size());

    const RadialGrid grid = build_grid(setup.params.dim, setup.grid_nodes, setup.r_max);
    StepControls controls = setup.controls;
    controls.frame = Frame::VFrame;

    auto run_cell = [&](size_t index) {
        const size_t ip = index / amplitude_list.size();
        const size_t ia = index % amplitude_list.size();
        PhaseCell cell;
        cell.p = p_list[ip];
        cell.amplitude = amplitude_list[ia];
        ProblemParams params = setup.params;
        params.p = cell.p;
        params.init.kind = InitialKind::Gaussian;
        params.init.amplitude = cell.amplitude;
        const Field u0 = gaussian_field(grid, cell.amplitude, params.init.width);
        Trajectory traj = evolve(grid, params, u0, controls);
        cell.status = traj.outcome.status;
        cell.t_blowup = traj.outcome.t_blowup;
        if (cell.status != RunStatus::BlewUp)
            cell.final_norm_v = norm_l2_rho(grid, traj.final_state.values);
        table.cells[index] = cell;
    };

    const size_t total = table.cells.size();
    workers = std::max(1, std::min<int>(workers, static_cast<int>(total)));
    if (workers == 1) {
        for (size_t i = 0; i < total; ++i) run_cell(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
                    run_cell(i);
            });
        for (auto& th : pool) th.join();
    }
    return table;
}

NegativeEntropyReport run_negative_entropy_test(const ExperimentSetup& setup) {
    const ProblemParams& params = setup.params;
    params.validate();
    const RadialGrid grid = build_grid(params.dim, setup.grid_nodes, setup.r_max);
    auto [u0, wang] = make_initial_data(grid, params.init, params);
    (void)wang;

    NegativeEntropyReport report;
    report.initial_entropy = entropy(grid, params, u0.values);
    if (!(report.initial_entropy < 0.0)) {
        report.applicable = false;
        report.note = "E(u0) >= 0 on the grid; the negative-entropy criterion does not apply";
        return report;
    }
    report.applicable = true;
    StepControls controls = setup.controls;
    controls.frame = Frame::VFrame;
    Trajectory traj = evolve(grid, params, u0, controls, setup.extra_q);
    report.outcome = traj.outcome;
    report.clock_at_halt = traj.final_state.clock;
    report.note = traj.outcome.reason;
    return report;
}

CrossFrameReport run_cross_frame_check(const ExperimentSetup& setup, double t_max) {
    if (!(t_max >= 0.0) || t_max > 1.0)
        throw std::invalid_argument(
            "run_cross_frame_check: t_max must lie in [0, 1] so scaled supports stay on-grid");
    const ProblemParams& params = setup.params;
    const RadialGrid grid = build_grid(params.dim, setup.grid_nodes, setup.r_max);
    auto [u0, wang] = make_initial_data(grid, params.init, params);
    (void)wang;

    CrossFrameReport report;
    report.t_max = t_max;
    if (t_max == 0.0) {
        report.discrepancy = 0.0;  // identity map at t = 0
        return report;
    }

    StepControls uc = setup.controls;
    uc.frame = Frame::UFrame;
    uc.horizon = t_max;
    Trajectory u_run = evolve(grid, params, u0, uc);

    StepControls vc = setup.controls;
    vc.frame = Frame::VFrame;
    vc.horizon = std::log1p(t_max);
    Trajectory v_run = evolve(grid, params, u0, vc);

    Field u_final = u_run.final_state;
    u_final.clock = t_max;  // steps tile the horizon exactly
    const Field mapped = map_u_to_v(grid, u_final, params);

    std::vector<double> diff(grid.size());
    for (int i = 0; i <= grid.m; ++i)
        diff[i] = mapped.values[i] - v_run.final_state.values[i];
    const double denom = norm_l2_rho(grid, v_run.final_state.values);
    report.discrepancy = denom > 0.0 ? norm_l2_rho(grid, diff) / denom : 0.0;
    return report;
}

WangAuditReport run_wang_audit(const ExperimentSetup& setup) {
    const ProblemParams& params = setup.params;
    params.validate();
    if (!params.wang_hypotheses())
        throw hypothesis_error("wang audit: needs N >= 3 and p > N/(N-2)");
    const RadialGrid grid = build_grid(params.dim, setup.grid_nodes, setup.r_max);
    auto [u0, wang] = make_initial_data(grid, params.init, params);
    if (wang.verdict != WangReport::Verdict::Pass)
        throw hypothesis_error("wang audit: " + (wang.detail.empty()
                                                     ? std::string("u0 <= lambda u_inf violated")
                                                     : wang.detail));

    // lambda u_inf in rescaled variables: the original-frame barrier
    // u <= lambda u_inf is scale-invariant under the change of variables, so
    // it reads v(y, s) <= lambda u_inf(y) unchanged.
    std::vector<double> barrier(grid.size(), 0.0);
    for (int i = 1; i <= grid.m; ++i)
        barrier[i] = params.lambda * u_infinity_profile(grid.nodes[i], params.dim, params.p);

    WangAuditReport report;
    report.initial_report = wang;
    report.worst_envelope_margin = std::numeric_limits<double>::infinity();

    const StepControls& c = setup.controls;
    const long long steps = std::max<long long>(1, std::llround(c.horizon / c.dt));
    const double dt = c.horizon / static_cast<double>(steps);
    ImexStepper stepper(grid, params, Frame::VFrame, dt);
    std::vector<double> v = u0.values;

    const double slack = 1.0 + 1e-3;
    bool ok = true;
    for (long long k = 1; k <= steps; ++k) {
        stepper.step(v);
        if (k % c.sample_every != 0) continue;
        const double s = static_cast<double>(k) * dt;
        double sup = 0.0;
        for (double x : v) sup = std::max(sup, x);
        const double envelope = wang_envelope_v(s, params.p, params.lambda);
        report.worst_envelope_margin = std::min(report.worst_envelope_margin, envelope - sup);
        if (sup > envelope * slack) ok = false;
        for (int i = 1; i <= grid.m; ++i) {
            const double ratio = v[i] / barrier[i];
            if (ratio > report.worst_barrier_ratio) {
                report.worst_barrier_ratio = ratio;
                report.worst_barrier_radius = grid.nodes[i];
            }
        }
        ++report.samples_checked;
    }
    if (report.worst_barrier_ratio > slack) ok = false;
    report.pass = ok;
    return report;
}

}  // namespace semiheat
