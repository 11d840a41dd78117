#include "semiheat/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace semiheat {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line, const std::string& key) {
    size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        fail(line, key + ": expected a number, got '" + v + "'");
    }
    if (used != v.size()) fail(line, key + ": trailing characters after number");
    return x;
}

int parse_int(const std::string& v, int line, const std::string& key) {
    const double x = parse_double(v, line, key);
    if (x != std::floor(x)) fail(line, key + ": expected an integer");
    return static_cast<int>(x);
}

std::vector<double> parse_list(const std::string& v, int line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, key + ": empty list entry");
        out.push_back(parse_double(item, line, key));
    }
    if (out.empty()) fail(line, key + ": empty list");
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string format_init_spec(const InitialDataSpec& spec) {
    return to_string(spec.kind) + ":" + fmt(spec.amplitude) + ":" + fmt(spec.width);
}

InitialDataSpec parse_init_spec(const std::string& text) {
    std::stringstream ss(text);
    std::string kind, a, w;
    if (!std::getline(ss, kind, ':') || !std::getline(ss, a, ':') || !std::getline(ss, w))
        throw std::invalid_argument("init spec: expected kind:amplitude:width, got '" + text +
                                    "'");
    InitialDataSpec spec;
    kind = trim(kind);
    if (kind == "gaussian")
        spec.kind = InitialKind::Gaussian;
    else if (kind == "bump")
        spec.kind = InitialKind::Bump;
    else if (kind == "singular")
        spec.kind = InitialKind::ScaledSingular;
    else
        throw std::invalid_argument("init spec: unknown kind '" + kind +
                                    "' (gaussian|bump|singular)");
    try {
        spec.amplitude = std::stod(trim(a));
        spec.width = std::stod(trim(w));
    } catch (const std::exception&) {
        throw std::invalid_argument("init spec: bad numbers in '" + text + "'");
    }
    spec.validate();
    return spec;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    std::string section;
    int line = 0;
    bool fit_lo_set = false, fit_hi_set = false;

    while (std::getline(ss, raw)) {
        ++line;
        std::string s = raw;
        const size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = s.substr(1, s.size() - 2);
            if (section != "problem" && section != "grid" && section != "stepping" &&
                section != "experiment")
                fail(line, "unknown section [" + section + "]");
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "missing key");
        if (val.empty()) fail(line, key + ": missing value");
        if (section.empty()) fail(line, "key '" + key + "' outside any section");

        if (section == "problem") {
            if (key == "dim") {
                cfg.dim = parse_int(val, line, key);
                if (cfg.dim < 1) fail(line, "dim must be >= 1");
            } else if (key == "p") {
                cfg.p = parse_double(val, line, key);
                if (!(cfg.p > 1.0)) fail(line, "p must exceed 1");
            } else if (key == "lambda") {
                cfg.lambda = parse_double(val, line, key);
                if (!(cfg.lambda > 0.0 && cfg.lambda < 1.0))
                    fail(line, "lambda must lie in (0, 1)");
            } else if (key == "init") {
                try {
                    cfg.init = parse_init_spec(val);
                } catch (const std::exception& e) {
                    fail(line, e.what());
                }
            } else {
                fail(line, "unknown key '" + key + "' in [problem]");
            }
        } else if (section == "grid") {
            if (key == "r_max") {
                cfg.r_max = parse_double(val, line, key);
                if (!(cfg.r_max > 0.0)) fail(line, "r_max must be positive");
            } else if (key == "nodes") {
                cfg.nodes = parse_int(val, line, key);
                if (cfg.nodes < 16) fail(line, "nodes must be >= 16");
            } else {
                fail(line, "unknown key '" + key + "' in [grid]");
            }
        } else if (section == "stepping") {
            if (key == "frame") {
                if (val == "u")
                    cfg.frame = Frame::UFrame;
                else if (val == "v")
                    cfg.frame = Frame::VFrame;
                else
                    fail(line, "frame must be u or v");
            } else if (key == "dt") {
                cfg.dt = parse_double(val, line, key);
                if (!(cfg.dt > 0.0)) fail(line, "dt must be positive");
            } else if (key == "dt_min") {
                cfg.dt_min = parse_double(val, line, key);
                if (!(cfg.dt_min > 0.0)) fail(line, "dt_min must be positive");
            } else if (key == "horizon") {
                cfg.horizon = parse_double(val, line, key);
                if (!(cfg.horizon > 0.0)) fail(line, "horizon must be positive");
            } else if (key == "sample_every") {
                cfg.sample_every = parse_int(val, line, key);
                if (cfg.sample_every < 1) fail(line, "sample_every must be >= 1");
            } else if (key == "blowup_threshold") {
                cfg.blowup_threshold = parse_double(val, line, key);
                if (!(cfg.blowup_threshold >= 1e3))
                    fail(line, "blowup_threshold must be >= 1e3");
            } else if (key == "decay_threshold") {
                cfg.decay_threshold = parse_double(val, line, key);
                if (!(cfg.decay_threshold > 0.0)) fail(line, "decay_threshold must be positive");
            } else {
                fail(line, "unknown key '" + key + "' in [stepping]");
            }
        } else {  // experiment
            if (key == "name") {
                if (val != "evolve" && val != "decay" && val != "scan" &&
                    val != "negentropy" && val != "crossframe" && val != "wang")
                    fail(line, "unknown experiment '" + val + "'");
                cfg.experiment = val;
            } else if (key == "q_list") {
                cfg.q_list = parse_list(val, line, key);
                for (double q : cfg.q_list)
                    if (!(q >= 2.0)) fail(line, "q_list entries must be >= 2");
            } else if (key == "fit_lo") {
                cfg.fit_lo = parse_double(val, line, key);
                fit_lo_set = true;
            } else if (key == "fit_hi") {
                cfg.fit_hi = parse_double(val, line, key);
                fit_hi_set = true;
            } else if (key == "p_list") {
                cfg.p_list = parse_list(val, line, key);
            } else if (key == "amp_list") {
                cfg.amp_list = parse_list(val, line, key);
            } else if (key == "out_csv") {
                cfg.out_csv = val;
            } else if (key == "out_json") {
                cfg.out_json = val;
            } else if (key == "out_table") {
                cfg.out_table = val;
            } else {
                fail(line, "unknown key '" + key + "' in [experiment]");
            }
        }
    }
    if (fit_lo_set && fit_hi_set && !(*cfg.fit_lo < *cfg.fit_hi))
        throw std::invalid_argument("config: fit window is empty (fit_lo >= fit_hi)");
    if (!(cfg.dt_min <= cfg.dt)) throw std::invalid_argument("config: need dt_min <= dt");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    if (path.empty()) return RunConfig{};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_echo(const RunConfig& c) {
    std::ostringstream os;
    os << "[problem]\n";
    os << "dim = " << c.dim << "\n";
    os << "p = " << fmt(c.p) << "\n";
    os << "lambda = " << fmt(c.lambda) << "\n";
    os << "init = " << format_init_spec(c.init) << "\n";
    os << "\n[grid]\n";
    os << "r_max = " << fmt(c.r_max) << "\n";
    os << "nodes = " << c.nodes << "\n";
    os << "\n[stepping]\n";
    os << "frame = " << to_string(c.frame) << "\n";
    os << "dt = " << fmt(c.dt) << "\n";
    os << "dt_min = " << fmt(c.dt_min) << "\n";
    os << "horizon = " << fmt(c.horizon) << "\n";
    os << "sample_every = " << c.sample_every << "\n";
    os << "blowup_threshold = " << fmt(c.blowup_threshold) << "\n";
    os << "decay_threshold = " << fmt(c.decay_threshold) << "\n";
    os << "\n[experiment]\n";
    os << "name = " << c.experiment << "\n";
    os << "q_list = ";
    for (size_t i = 0; i < c.q_list.size(); ++i)
        os << (i ? "," : "") << fmt(c.q_list[i]);
    os << "\n";
    if (c.fit_lo) os << "fit_lo = " << fmt(*c.fit_lo) << "\n";
    if (c.fit_hi) os << "fit_hi = " << fmt(*c.fit_hi) << "\n";
    if (!c.p_list.empty()) {
        os << "p_list = ";
        for (size_t i = 0; i < c.p_list.size(); ++i)
            os << (i ? "," : "") << fmt(c.p_list[i]);
        os << "\n";
    }
    if (!c.amp_list.empty()) {
        os << "amp_list = ";
        for (size_t i = 0; i < c.amp_list.size(); ++i)
            os << (i ? "," : "") << fmt(c.amp_list[i]);
        os << "\n";
    }
    if (!c.out_csv.empty()) os << "out_csv = " << c.out_csv << "\n";
    if (!c.out_json.empty()) os << "out_json = " << c.out_json << "\n";
    if (!c.out_table.empty()) os << "out_table = " << c.out_table << "\n";
    return os.str();
}

ProblemParams RunConfig::problem() const {
    ProblemParams p_;
    p_.dim = dim;
    p_.p = p;
    p_.lambda = lambda;
    p_.init = init;
    return p_;
}

std::vector<double> RunConfig::extra_q() const {
    std::vector<double> out;
    for (double q : q_list)
        if (q != 2.0 && q != 4.0) out.push_back(q);
    return out;
}

ExperimentSetup RunConfig::setup() const {
    ExperimentSetup s;
    s.params = problem();
    s.grid_nodes = nodes;
    s.r_max = r_max;
    s.controls.frame = frame;
    s.controls.dt = dt;
    s.controls.dt_min = dt_min;
    s.controls.horizon = horizon;
    s.controls.sample_every = sample_every;
    s.controls.blowup_threshold = blowup_threshold;
    s.controls.decay_threshold = decay_threshold;
    s.extra_q = extra_q();
    s.fit_lo = fit_lo;
    s.fit_hi = fit_hi;
    return s;
}

}  // namespace semiheat
