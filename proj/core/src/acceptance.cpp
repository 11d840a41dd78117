#include "semiheat/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "semiheat/config.hpp"
#include "semiheat/dynamics.hpp"
#include "semiheat/experiments.hpp"
#include "semiheat/io.hpp"

namespace semiheat {

namespace {

// Reference values for the desk configuration (N=3, p=5, lambda=0.5),
// evaluated from the closed forms with 30-digit arithmetic and frozen here.
constexpr double kGamma = 1.25;
constexpr double kPStar = 1.0 + 2.0 / 3.0;
constexpr double kPTilde = 3.0;
constexpr double kCnp = 0.70710678118654752;     // 0.25^{1/4}
constexpr double kLambdaMax = 0.87576537317215873;  // 1.7^{-1/4}
constexpr double kWangCoeff = 0.35930411196308422;  // 60^{-1/4}
constexpr double kBigB = 21.428571428571429;        // 150/7
constexpr double kS1 = 0.093401175088400777;        // ln(157/143)
constexpr double kA = 1.1916666666666667;           // 143/120
constexpr double kEntropyA3 = -233.52633790724780;  // E(3 e^{-r^2/4}), N=3, p=5

struct Harness {
    std::ostream& out;
    std::vector<CriterionResult> results;

    void record(int id, const std::string& name, bool pass, const std::string& detail) {
        results.push_back({id, name, pass, detail});
        out << "[" << (id < 10 ? " " : "") << id << "/13] " << (pass ? "PASS" : "FAIL") << " "
            << name << " -- " << detail << "\n";
    }

    void guarded(int id, const std::string& name,
                 const std::function<std::pair<bool, std::string>()>& body) {
        try {
            auto [pass, detail] = body();
            record(id, name, pass, detail);
        } catch (const std::exception& e) {
            record(id, name, false, std::string("exception: ") + e.what());
        }
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

bool close_rel(double value, double reference, double tol) {
    return std::abs(value - reference) <= tol * std::abs(reference);
}

RunConfig default_config() { return RunConfig{}; }

double envelope_at(const DiagnosticsSample& d, const ProblemParams& p) {
    return wang_envelope_v(d.s, p.p, p.lambda);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& out) {
    Harness h{out, {}};
    const RunConfig cfg = default_config();
    const ProblemParams params = cfg.problem();

    // ---- 1: closed-form constants --------------------------------------
    h.guarded(1, "constants", [&] {
        const DerivedConstants dc = derive_constants(params);
        struct Entry {
            const char* name;
            double got;
            double want;
        };
        const Entry entries[] = {
            {"gamma", dc.gamma, kGamma},
            {"p_star", dc.p_star, kPStar},
            {"p_tilde", dc.p_tilde.value_or(0.0), kPTilde},
            {"c_np", dc.c_np.value_or(0.0), kCnp},
            {"lambda_max", dc.lambda_max.value_or(0.0), kLambdaMax},
            {"wang_coeff", dc.wang_coeff, kWangCoeff},
            {"big_b", dc.big_b.value_or(0.0), kBigB},
            {"s1", dc.s1.value_or(0.0), kS1},
            {"a", dc.a.value_or(0.0), kA},
        };
        bool pass = true;
        double worst = 0.0;
        for (const auto& e : entries) {
            const double rel = std::abs(e.got - e.want) / std::abs(e.want);
            worst = std::max(worst, rel);
            if (rel > 1e-6) pass = false;
        }
        return std::make_pair(pass, "worst relative error " + fmt(worst) + " (tol 1e-6)");
    });

    // ---- 2: operator fidelity -------------------------------------------
    h.guarded(2, "operator fidelity", [&] {
        const RadialGrid g = build_grid(3, 2048, 16.0);
        std::vector<double> phi(g.size());
        for (int i = 0; i <= g.m; ++i)
            phi[i] = std::exp(-g.nodes[i] * g.nodes[i] / 4.0);
        const std::vector<double> Lphi = apply_L(g, phi);
        double sup_err = 0.0;
        for (int i = 0; i < g.m; ++i) {
            if (g.nodes[i] > 0.9 * g.r_max) break;
            sup_err = std::max(sup_err, std::abs(Lphi[i] - 1.5 * phi[i]));
        }
        const bool eig_ok = sup_err < 1e-3;

        const std::vector<double> dphi = radial_derivative(g, phi);
        const double dirichlet = weighted_inner(g, dphi, dphi);
        const double target = 1.5 * weighted_inner(g, phi, phi);
        const double eq_err = std::abs(dirichlet / target - 1.0);
        const bool eq_ok = eq_err < 5e-3;

        std::mt19937_64 rng(20240811);
        std::uniform_real_distribution<double> coeff(-1.0, 1.0);
        double worst_quotient = 1e300;
        for (int trial = 0; trial < 50; ++trial) {
            double c[5];
            for (double& x : c) x = coeff(rng);
            std::vector<double> f(g.size());
            for (int i = 0; i <= g.m; ++i) {
                const double r = g.nodes[i];
                const double poly = c[0] + r * (c[1] + r * (c[2] + r * (c[3] + r * c[4])));
                f[i] = poly * std::exp(-r * r / 3.0);
            }
            f[g.m] = 0.0;
            const std::vector<double> df = radial_derivative(g, f);
            const double q = weighted_inner(g, df, df) / weighted_inner(g, f, f);
            worst_quotient = std::min(worst_quotient, q);
        }
        const bool poincare_ok = worst_quotient >= 1.5 * (1.0 - 1e-3);
        return std::make_pair(eig_ok && eq_ok && poincare_ok,
                              "eigen sup err " + fmt(sup_err) + ", equality err " + fmt(eq_err) +
                                  ", min Rayleigh quotient " + fmt(worst_quotient));
    });

    // ---- shared default run ---------------------------------------------
    const ExperimentSetup setup = cfg.setup();
    const RadialGrid grid = build_grid(params.dim, cfg.nodes, cfg.r_max);
    Trajectory traj;
    try {
        auto [u0, wang] = make_initial_data(grid, params.init, params);
        (void)wang;
        traj = evolve(grid, params, u0, setup.controls, setup.extra_q);
    } catch (const std::exception& e) {
        h.record(3, "entropy balance", false, std::string("default run failed: ") + e.what());
        return h.results;
    }
    const auto& S = traj.samples;

    // ---- 3: entropy balance ----------------------------------------------
    h.guarded(3, "entropy balance", [&] {
        const auto res = entropy_balance_residuals(S, 0.5, 4.0);
        const double worst = res.empty() ? 1.0 : *std::max_element(res.begin(), res.end());
        return std::make_pair(!res.empty() && worst < 0.01,
                              "max |dE/ds + I|/I = " + fmt(worst) + " on s in [0.5,4] (tol 1%)");
    });

    // ---- 4: production balance -------------------------------------------
    h.guarded(4, "production balance", [&] {
        const auto res = production_balance_residuals(S, kGamma, 0.5, 4.0);
        const double worst = res.empty() ? 1.0 : *std::max_element(res.begin(), res.end());
        return std::make_pair(!res.empty() && worst < 0.05,
                              "max |dI/ds + 2gI + 2R|/I = " + fmt(worst) + " (tol 5%)");
    });

    // ---- 5: rescaled-frame decay rates ------------------------------------
    auto series = [&](double DiagnosticsSample::*member) {
        std::vector<std::pair<double, double>> out_series;
        for (const auto& d : S) out_series.emplace_back(d.s, d.*member);
        return out_series;
    };
    h.guarded(5, "decay rates in s", [&] {
        const RateFit fv =
            fit_log_slope(series(&DiagnosticsSample::norm_l2rho_v), 2.0, 6.0, "norm_l2rho_v");
        const RateFit fe = fit_log_slope(series(&DiagnosticsSample::entropy), 2.0, 6.0, "E");
        const RateFit fi = fit_log_slope(series(&DiagnosticsSample::production), 2.0, 6.0, "I");
        const bool ok = close_rel(fv.slope, -kGamma, 0.05) &&
                        close_rel(fe.slope, -2.0 * kGamma, 0.10) &&
                        close_rel(fi.slope, -2.0 * kGamma, 0.10);
        return std::make_pair(ok, "slopes ||v|| " + fmt(fv.slope) + " (want -1.25±5%), E " +
                                      fmt(fe.slope) + ", I " + fmt(fi.slope) +
                                      " (want -2.5±10%)");
    });

    // ---- 6: original-frame rates ------------------------------------------
    h.guarded(6, "u-frame rates", [&] {
        const RateFit f2 =
            fit_log_slope(series(&DiagnosticsSample::norm_l2_u), 2.0, 6.0, "norm_l2_u");
        const RateFit f4 =
            fit_log_slope(series(&DiagnosticsSample::norm_l4_u), 2.0, 6.0, "norm_l4_u");
        const bool ok = close_rel(f2.slope, -0.75, 0.10) && f4.slope <= -0.5;
        return std::make_pair(ok, "||u||_L2 slope " + fmt(f2.slope) +
                                      " (want -0.75±10%), ||u||_L4 slope " + fmt(f4.slope) +
                                      " (want <= -0.5)");
    });

    // ---- 7: g-bound --------------------------------------------------------
    h.guarded(7, "g-bound margin", [&] {
        double worst = 1e300;
        bool ok = true;
        for (const auto& d : S) {
            const double floor = -1e-8 * (0.5 * d.production + 6.0 * std::abs(d.entropy) +
                                          4.0 * d.g_fun);
            worst = std::min(worst, d.gbound_margin - floor);
            if (!(d.gbound_margin >= floor)) ok = false;
        }
        return std::make_pair(ok, "min (margin - floor) = " + fmt(worst));
    });

    // ---- 8: K-functional structure -----------------------------------------
    h.guarded(8, "K-functional lemma structure", [&] {
        bool sign_ok = true, mono_ok = true;
        for (const auto& d : S)
            if (!(d.r_fun + 0.5 * d.k_fun >= -1e-3 * d.production)) sign_ok = false;
        const double rate = 2.0 * kGamma + kA;
        double prev = 0.0;
        bool first = true;
        for (const auto& d : S) {
            if (d.s < kS1) continue;
            const double val = d.k_fun * std::exp(rate * d.s);
            if (!first && val > prev * 1.01) mono_ok = false;
            prev = val;
            first = false;
        }
        auto integral_to = [&](double s_hi) {
            double acc = 0.0;
            for (size_t k = 0; k + 1 < S.size(); ++k) {
                if (S[k + 1].s > s_hi) break;
                const double fa = std::exp(2.0 * kGamma * S[k].s) * S[k].k_fun;
                const double fb = std::exp(2.0 * kGamma * S[k + 1].s) * S[k + 1].k_fun;
                acc += 0.5 * (fa + fb) * (S[k + 1].s - S[k].s);
            }
            return acc;
        };
        const double i6 = integral_to(6.0), i8 = integral_to(8.0);
        const double change = std::abs(i8 - i6) / std::abs(i8);
        const bool integ_ok = std::isfinite(i8) && change < 0.01;
        return std::make_pair(sign_ok && mono_ok && integ_ok,
                              std::string("R+K/2 sign ") + (sign_ok ? "ok" : "VIOLATED") +
                                  ", K e^{(2g+a)s} monotone " + (mono_ok ? "ok" : "VIOLATED") +
                                  ", integral 6->8 change " + fmt(change));
    });

    // ---- 9: Wang barrier audit ----------------------------------------------
    h.guarded(9, "wang barrier audit", [&] {
        bool env_ok = true;
        for (const auto& d : S)
            if (d.s > 0.0 && d.sup_v > envelope_at(d, params) * 1.001) env_ok = false;
        const WangAuditReport audit = run_wang_audit(setup);
        return std::make_pair(env_ok && audit.pass,
                              "worst envelope margin " + fmt(audit.worst_envelope_margin) +
                                  ", worst u/(lambda u_inf) = " + fmt(audit.worst_barrier_ratio) +
                                  " at r=" + fmt(audit.worst_barrier_radius));
    });

    // ---- 10: blow-up dichotomy ------------------------------------------------
    h.guarded(10, "blow-up (negative entropy and sub-Fujita)", [&] {
        ExperimentSetup neg = setup;
        neg.params.init = {InitialKind::Gaussian, 3.0, 2.0};
        const NegativeEntropyReport rep = run_negative_entropy_test(neg);
        const bool e0_ok = rep.initial_entropy < 0.0 &&
                           close_rel(rep.initial_entropy, kEntropyA3, 5e-3);
        const bool blew_ok = rep.applicable && rep.outcome.status == RunStatus::BlewUp &&
                             rep.clock_at_halt < 5.0;

        ProblemParams sub = params;
        sub.p = 1.5;
        sub.init = {InitialKind::Gaussian, 1.0, 2.0};
        StepControls uc = setup.controls;
        uc.frame = Frame::UFrame;
        uc.horizon = 50.0;
        const RadialGrid gsub = build_grid(sub.dim, cfg.nodes, cfg.r_max);
        auto [u0, wang] = make_initial_data(gsub, sub.init, sub);
        (void)wang;
        const Trajectory sub_run = evolve(gsub, sub, u0, uc);
        const bool sub_ok = sub_run.outcome.status == RunStatus::BlewUp &&
                            sub_run.final_state.clock < 50.0;
        return std::make_pair(
            e0_ok && blew_ok && sub_ok,
            "E(u0)=" + fmt(rep.initial_entropy) + " (ref " + fmt(kEntropyA3) + "), halt s=" +
                fmt(rep.clock_at_halt) + " (<5); p=1.5 u-frame " +
                to_string(sub_run.outcome.status) + " at t=" + fmt(sub_run.final_state.clock) +
                " (<50)");
    });

    // ---- 11: cross-frame consistency -------------------------------------------
    h.guarded(11, "cross-frame consistency", [&] {
        const CrossFrameReport base = run_cross_frame_check(setup, 1.0);
        ExperimentSetup fine = setup;
        fine.controls.dt /= 2.0;
        const CrossFrameReport half = run_cross_frame_check(fine, 1.0);
        const bool ok = base.discrepancy < 0.01 && half.discrepancy < base.discrepancy;
        return std::make_pair(ok, "discrepancy " + fmt(base.discrepancy) + " at dt, " +
                                      fmt(half.discrepancy) + " at dt/2");
    });

    // ---- 12: Fujita phase scan ---------------------------------------------------
    h.guarded(12, "fujita phase scan", [&] {
        const std::vector<double> ps = {1.5, 5.0 / 3.0, 5.0};
        const std::vector<double> amps = {0.05, 0.5, 3.0};
        const PhaseTable serial = run_fujita_scan(ps, amps, setup, 1);
        const PhaseTable parallel = run_fujita_scan(ps, amps, setup, 4);

        bool no_decay_below = true;
        for (size_t ip = 0; ip < ps.size(); ++ip) {
            if (classify_regime(params.dim, ps[ip]) == Regime::Supercritical) continue;
            for (size_t ia = 0; ia < amps.size(); ++ia)
                if (serial.at(ip, ia).status == RunStatus::Decayed) no_decay_below = false;
        }
        const bool super_ok = serial.at(2, 0).status == RunStatus::Decayed &&
                              serial.at(2, 2).status == RunStatus::BlewUp;
        bool identical = true;
        for (size_t i = 0; i < serial.cells.size(); ++i) {
            const auto& a = serial.cells[i];
            const auto& b = parallel.cells[i];
            if (a.status != b.status || a.t_blowup != b.t_blowup ||
                a.final_norm_v != b.final_norm_v)
                identical = false;
        }
        std::ostringstream rows;
        for (size_t ip = 0; ip < ps.size(); ++ip) {
            rows << " [p=" << fmt(ps[ip]) << ":";
            for (size_t ia = 0; ia < amps.size(); ++ia)
                rows << " " << to_string(serial.at(ip, ia).status);
            rows << "]";
        }
        return std::make_pair(no_decay_below && super_ok && identical,
                              "rows" + rows.str() +
                                  (identical ? ", serial == parallel" : ", PARALLEL MISMATCH"));
    });

    // ---- 13: determinism ------------------------------------------------------------
    h.guarded(13, "determinism from echoed config", [&] {
        auto run_once = [&](const RunConfig& c) {
            const ExperimentSetup s2 = c.setup();
            const RadialGrid g2 = build_grid(c.dim, c.nodes, c.r_max);
            auto [u0, wang] = make_initial_data(g2, c.init, s2.params);
            (void)wang;
            const Trajectory t2 = evolve(g2, s2.params, u0, s2.controls, s2.extra_q);
            return std::make_pair(trajectory_csv(t2), run_summary_json(t2, c));
        };
        const auto first = run_once(cfg);
        const RunConfig reparsed = parse_config(config_echo(cfg));
        const auto second = run_once(reparsed);
        const bool ok = first.first == second.first && first.second == second.second;
        return std::make_pair(ok, ok ? "CSV and JSON byte-identical across rerun"
                                     : "outputs differ across rerun");
    });

    return h.results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

}  // namespace semiheat
