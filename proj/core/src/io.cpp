#include "semiheat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace semiheat {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

json optional_json(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

json constants_to_json(const ProblemParams& params) {
    const DerivedConstants dc = derive_constants(params);
    json j;
    j["p_star"] = dc.p_star;
    j["p_tilde"] = optional_json(dc.p_tilde);
    j["gamma"] = dc.gamma;
    j["c_np"] = optional_json(dc.c_np);
    j["lambda_max"] = optional_json(dc.lambda_max);
    j["wang_coeff"] = dc.wang_coeff;
    j["big_b"] = optional_json(dc.big_b);
    j["s1"] = optional_json(dc.s1);
    j["mu_s1"] = optional_json(dc.mu_s1);
    j["a"] = optional_json(dc.a);
    j["regime"] = to_string(classify_regime(params.dim, params.p));
    return j;
}

json outcome_to_json(const RunOutcome& o) {
    json j;
    j["status"] = to_string(o.status);
    j["reason"] = o.reason;
    if (o.status == RunStatus::BlewUp) j["t_blowup_estimate"] = o.t_blowup;
    return j;
}

json fit_to_json(const RateCheck& c) {
    json j;
    j["quantity"] = c.fit.quantity;
    j["slope"] = c.fit.slope;
    j["target"] = c.target;
    j["tolerance"] = c.tolerance;
    j["one_sided"] = c.one_sided;
    j["window"] = {c.fit.window_lo, c.fit.window_hi};
    j["residual"] = c.fit.residual;
    j["points"] = c.fit.points;
    j["pass"] = c.pass;
    return j;
}

json trajectory_to_json(const Trajectory& traj) {
    json j;
    j["frame"] = to_string(traj.controls.frame);
    j["samples"] = traj.samples.size();
    j["accuracy_flagged"] = traj.accuracy_flagged;
    j["initial"] = {{"entropy", traj.initial_entropy},
                    {"production", traj.initial_production},
                    {"sup", traj.initial_sup},
                    {"norm_l2rho", traj.initial_norm_l2rho}};
    json fin;
    fin["clock"] = traj.final_state.clock;
    if (!traj.samples.empty()) {
        fin["norm_l2rho_v"] = traj.samples.back().norm_l2rho_v;
        fin["sup_v"] = traj.samples.back().sup_v;
    }
    j["final"] = fin;
    j["outcome"] = outcome_to_json(traj.outcome);
    return j;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::ostringstream os;
    os << "s,t,E,I,K,R,g,dirichlet,norm_l2rho_v,norm_l2_u,norm_l4_u,sup_v,wang_margin,"
          "gbound_margin";
    for (double q : traj.extra_q) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", q);
        os << ",norm_l" << buf << "_u";
    }
    os << "\n";
    for (const auto& d : traj.samples) {
        os << format_double(d.s) << ',' << format_double(d.t) << ',' << format_double(d.entropy)
           << ',' << format_double(d.production) << ',' << format_double(d.k_fun) << ','
           << format_double(d.r_fun) << ',' << format_double(d.g_fun) << ','
           << format_double(d.dirichlet) << ',' << format_double(d.norm_l2rho_v) << ','
           << format_double(d.norm_l2_u) << ',' << format_double(d.norm_l4_u) << ','
           << format_double(d.sup_v) << ',' << format_double(d.wang_margin) << ','
           << format_double(d.gbound_margin);
        for (double x : d.extra_lq_u) os << ',' << format_double(x);
        os << "\n";
    }
    return os.str();
}

std::string run_summary_json(const Trajectory& traj, const RunConfig& config) {
    json j;
    j["config"] = config_echo(config);
    j["constants"] = constants_to_json(traj.params);
    j["run"] = trajectory_to_json(traj);
    return j.dump(2) + "\n";
}

std::string decay_summary_json(const DecayReport& report, const RunConfig& config) {
    json j;
    j["config"] = config_echo(config);
    j["constants"] = constants_to_json(report.params);
    j["run"] = trajectory_to_json(report.trajectory);
    json fits = json::array();
    for (const auto& c : report.checks) fits.push_back(fit_to_json(c));
    j["fits"] = fits;
    j["full_scope"] = report.full_scope;
    j["gbound_in_scope"] = report.gbound_in_scope;
    j["all_pass"] = report.all_pass;
    return j.dump(2) + "\n";
}

std::string phase_table_csv(const PhaseTable& table) {
    std::ostringstream os;
    os << "p,A,outcome,t_blowup_estimate\n";
    for (size_t ip = 0; ip < table.p_values.size(); ++ip) {
        for (size_t ia = 0; ia < table.amplitudes.size(); ++ia) {
            const PhaseCell& c = table.at(ip, ia);
            os << format_double(c.p) << ',' << format_double(c.amplitude) << ','
               << to_string(c.status) << ',';
            if (c.status == RunStatus::BlewUp) os << format_double(c.t_blowup);
            os << "\n";
        }
    }
    return os.str();
}

std::string scan_summary_json(const PhaseTable& table, const RunConfig& config) {
    json j;
    j["config"] = config_echo(config);
    j["p_star"] = table.p_star;
    j["p_values"] = table.p_values;
    j["amplitudes"] = table.amplitudes;
    json cells = json::array();
    for (const auto& c : table.cells) {
        json e;
        e["p"] = c.p;
        e["A"] = c.amplitude;
        e["outcome"] = to_string(c.status);
        if (c.status == RunStatus::BlewUp)
            e["t_blowup_estimate"] = c.t_blowup;
        else
            e["final_norm_v"] = c.final_norm_v;
        cells.push_back(e);
    }
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

std::string constants_json(const ProblemParams& params) {
    json j = constants_to_json(params);
    j["dim"] = params.dim;
    j["p"] = params.p;
    j["lambda"] = params.lambda;
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    try {
        const fs::path p(path);
        if (p.has_parent_path() && !p.parent_path().empty())
            fs::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + path + "' for writing");
        out << content;
        if (!out) throw io_error("failed while writing '" + path + "'");
    } catch (const fs::filesystem_error& e) {
        throw io_error("writing '" + path + "': " + e.what());
    }
}

}  // namespace semiheat
