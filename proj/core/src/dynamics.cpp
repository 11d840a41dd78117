#include "semiheat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "semiheat/interpolate.hpp"

namespace semiheat {

namespace {

double sup_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
        s = std::max(s, x);
    }
    return s;
}

double clipped_pow(double v, double p) { return std::pow(std::max(v, 0.0), p); }

std::string format_clock(Frame frame, double clock) {
    std::ostringstream os;
    os << (frame == Frame::VFrame ? "s=" : "t=") << clock;
    return os.str();
}

}  // namespace

// --- initial data -----------------------------------------------------------

std::pair<Field, WangReport> make_initial_data(const RadialGrid& grid,
                                               const InitialDataSpec& spec,
                                               const ProblemParams& params) {
    params.validate();
    spec.validate();
    if (spec.kind == InitialKind::ScaledSingular && !params.wang_hypotheses())
        throw hypothesis_error(
            "make_initial_data: ScaledSingular data needs N >= 3 and p > N/(N-2)");

    Field u0;
    u0.frame = Frame::UFrame;
    u0.clock = 0.0;
    u0.values.assign(grid.size(), 0.0);
    const double A = spec.amplitude;
    const double w = spec.width;
    switch (spec.kind) {
        case InitialKind::Gaussian:
            for (int i = 0; i <= grid.m; ++i) {
                const double r = grid.nodes[i];
                u0.values[i] = A * std::exp(-r * r / (w * w));
            }
            break;
        case InitialKind::Bump:
            for (int i = 0; i <= grid.m; ++i) {
                const double x = grid.nodes[i] / w;
                u0.values[i] = x < 1.0 ? A * std::exp(1.0 - 1.0 / (1.0 - x * x)) : 0.0;
            }
            break;
        case InitialKind::ScaledSingular: {
            // fraction * lambda * u_inf, switched on smoothly below the inner
            // cutoff and tapered like exp(-(4r/r_max)^4) so the weighted tail
            // stays inside the truncation gates.
            const double cap = params.lambda * u_infinity_profile(w, params.dim, params.p);
            for (int i = 1; i <= grid.m; ++i) {
                const double r = grid.nodes[i];
                const double taper = std::exp(-std::pow(4.0 * r / grid.r_max, 4.0));
                double profile;
                if (r >= w) {
                    profile = params.lambda * u_infinity_profile(r, params.dim, params.p);
                } else {
                    const double x = r / w;
                    profile = cap * x * x * (3.0 - 2.0 * x);  // smoothstep to 0 at r = 0
                }
                u0.values[i] = A * profile * taper;
            }
            break;
        }
    }
    u0.values[grid.m] = 0.0;

    bool nontrivial = false;
    for (double v : u0.values) {
        if (v < 0.0) throw std::invalid_argument("make_initial_data: negative initial data");
        if (v > 0.0) nontrivial = true;
    }
    if (!nontrivial) throw std::invalid_argument("make_initial_data: initial data is trivial");

    const double tail = tail_fraction(grid, u0.values);
    if (tail >= 1e-4)
        throw std::invalid_argument(
            "make_initial_data: weighted tail fraction >= 1e-4; data is not representable on "
            "this truncation radius");

    WangReport report;
    if (tail > 1e-8) report.detail = "warning: weighted tail fraction above 1e-8; ";
    if (!params.wang_hypotheses()) {
        report.verdict = WangReport::Verdict::NotApplicable;
        report.detail += "barrier check skipped: needs N >= 3 and p > N/(N-2)";
        return {std::move(u0), report};
    }
    double worst = 0.0, worst_r = 0.0;
    for (int i = 1; i <= grid.m; ++i) {
        const double bound = params.lambda * u_infinity_profile(grid.nodes[i], params.dim, params.p);
        const double ratio = u0.values[i] / bound;
        if (ratio > worst) {
            worst = ratio;
            worst_r = grid.nodes[i];
        }
    }
    report.max_ratio = worst;
    report.argmax_r = worst_r;
    if (worst <= 1.0) {
        report.verdict = WangReport::Verdict::Pass;
    } else {
        report.verdict = WangReport::Verdict::Fail;
        std::ostringstream os;
        os << "u0 <= lambda u_inf violated at r=" << worst_r << " (ratio " << worst << ")";
        report.detail += os.str();
    }
    return {std::move(u0), report};
}

// --- right-hand sides --------------------------------------------------------

std::vector<double> rhs_v(const RadialGrid& grid, const ProblemParams& params,
                          std::span<const double> v, bool include_reaction) {
    std::vector<double> out = apply_L(grid, v);  // -Δv - (r/2) v_r
    const double shift = 1.0 / (params.p - 1.0);
    for (int i = 0; i < grid.m; ++i) {
        double val = -out[i] + shift * v[i];
        if (include_reaction) val += clipped_pow(v[i], params.p);
        out[i] = val;
    }
    out[grid.m] = 0.0;
    return out;
}

std::vector<double> rhs_u(const RadialGrid& grid, const ProblemParams& params,
                          std::span<const double> u, bool include_reaction) {
    std::vector<double> out = radial_laplacian(grid, u);
    for (int i = 0; i < grid.m; ++i) {
        if (include_reaction) out[i] += clipped_pow(u[i], params.p);
    }
    out[grid.m] = 0.0;
    return out;
}

// --- IMEX stepper -------------------------------------------------------------

ImexStepper::ImexStepper(const RadialGrid& grid, const ProblemParams& params, Frame frame,
                         double dt, bool include_reaction)
    : grid_(&grid), p_(params.p), frame_(frame), dt_(dt), include_reaction_(include_reaction) {
    params.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("ImexStepper: dt must be positive");
    if (dt >= max_stable_dt())
        throw std::invalid_argument(
            "ImexStepper: dt too large, implicit matrix loses diagonal dominance (need dt < "
            "p - 1 in the rescaled frame)");
    const int n = grid.size();
    lower_.resize(n);
    diag_.resize(n);
    upper_.resize(n);
    work_c_.resize(n);
    work_d_.resize(n);
    assemble();
}

double ImexStepper::max_stable_dt() const {
    return frame_ == Frame::VFrame ? p_ - 1.0 : std::numeric_limits<double>::infinity();
}

void ImexStepper::set_dt(double dt) {
    if (!(dt > 0.0) || dt >= max_stable_dt())
        throw std::invalid_argument("ImexStepper::set_dt: dt out of the stable range");
    dt_ = dt;
    assemble();
}

void ImexStepper::assemble() {
    const RadialGrid& g = *grid_;
    const int m = g.m;
    const double dr2 = g.dr * g.dr;
    const bool weighted = frame_ == Frame::VFrame;
    const double shift = weighted ? 1.0 / (p_ - 1.0) : 0.0;
    const auto& face = weighted ? g.face_w : g.face_u;

    for (int i = 1; i < m; ++i) {
        double denom = std::pow(g.nodes[i], g.dim - 1);
        if (weighted) denom *= g.rho[i];
        const double a = face[i - 1] / (dr2 * denom);
        const double c = face[i] / (dr2 * denom);
        lower_[i] = -dt_ * a;
        upper_[i] = -dt_ * c;
        diag_[i] = 1.0 + dt_ * (a + c) - dt_ * shift;
    }
    const double origin = 2.0 * g.dim / dr2;
    diag_[0] = 1.0 + dt_ * origin - dt_ * shift;
    upper_[0] = -dt_ * origin;
    lower_[0] = 0.0;
    lower_[m] = 0.0;
    upper_[m] = 0.0;
    diag_[m] = 1.0;  // Dirichlet row
}

void ImexStepper::step(std::vector<double>& state) {
    const int n = grid_->size();
    if (static_cast<int>(state.size()) != n)
        throw std::invalid_argument("ImexStepper::step: state size mismatch");
    // explicit reaction into the rhs (in place: state becomes the rhs)
    if (include_reaction_) {
        for (int i = 0; i + 1 < n; ++i) state[i] += dt_ * clipped_pow(state[i], p_);
    }
    state[n - 1] = 0.0;
    // Thomas solve
    work_c_[0] = upper_[0] / diag_[0];
    work_d_[0] = state[0] / diag_[0];
    for (int i = 1; i < n; ++i) {
        const double m = diag_[i] - lower_[i] * work_c_[i - 1];
        work_c_[i] = upper_[i] / m;
        work_d_[i] = (state[i] - lower_[i] * work_d_[i - 1]) / m;
    }
    state[n - 1] = work_d_[n - 1];
    for (int i = n - 2; i >= 0; --i) state[i] = work_d_[i] - work_c_[i] * state[i + 1];
}

Field step_imex(const RadialGrid& grid, const ProblemParams& params, const Field& state,
                double dt, bool include_reaction) {
    ImexStepper stepper(grid, params, state.frame, dt, include_reaction);
    Field out = state;
    stepper.step(out.values);
    out.clock = state.clock + dt;
    return out;
}

// --- frame maps ---------------------------------------------------------------

Field map_u_to_v(const RadialGrid& grid, const Field& u, const ProblemParams& params) {
    if (u.frame != Frame::UFrame)
        throw std::invalid_argument("map_u_to_v: field is not in the original frame");
    const double t = u.clock;
    if (t < 0.0) throw std::invalid_argument("map_u_to_v: t must be >= 0");
    Field v;
    v.frame = Frame::VFrame;
    v.clock = std::log1p(t);
    v.values.assign(grid.size(), 0.0);
    const double scale = std::pow(t + 1.0, 1.0 / (params.p - 1.0));
    const double stretch = std::sqrt(t + 1.0);
    if (t == 0.0) {
        v.values.assign(u.values.begin(), u.values.end());
        return v;
    }
    MonotoneCubic interp(0.0, grid.dr, u.values);
    for (int i = 0; i <= grid.m; ++i) {
        const double src = stretch * grid.nodes[i];
        v.values[i] = src <= grid.r_max ? scale * interp(src) : 0.0;
    }
    v.values[grid.m] = 0.0;
    return v;
}

Field map_v_to_u(const RadialGrid& grid, const Field& v, const ProblemParams& params) {
    if (v.frame != Frame::VFrame)
        throw std::invalid_argument("map_v_to_u: field is not in the rescaled frame");
    const double s = v.clock;
    if (s < 0.0) throw std::invalid_argument("map_v_to_u: s must be >= 0");
    const double t = std::expm1(s);
    Field u;
    u.frame = Frame::UFrame;
    u.clock = t;
    u.values.assign(grid.size(), 0.0);
    if (t == 0.0) {
        u.values.assign(v.values.begin(), v.values.end());
        return u;
    }
    const double scale = std::pow(t + 1.0, -1.0 / (params.p - 1.0));
    const double shrink = 1.0 / std::sqrt(t + 1.0);
    MonotoneCubic interp(0.0, grid.dr, v.values);
    for (int i = 0; i <= grid.m; ++i) {
        const double src = shrink * grid.nodes[i];
        u.values[i] = src <= grid.r_max ? scale * interp(src) : 0.0;
    }
    u.values[grid.m] = 0.0;
    return u;
}

double v_norm_from_u(const RadialGrid& grid, const Field& u, const ProblemParams& params) {
    if (u.frame != Frame::UFrame)
        throw std::invalid_argument("v_norm_from_u: field is not in the original frame");
    const double t = u.clock;
    const double tp1 = t + 1.0;
    double acc = 0.0;
    for (int i = 0; i <= grid.m; ++i) {
        const double x = grid.nodes[i];
        acc += u.values[i] * u.values[i] * std::exp(x * x / (4.0 * tp1)) * grid.vol_weights[i];
    }
    const double n = grid.dim;
    return std::sqrt(std::pow(tp1, 2.0 / (params.p - 1.0) - n / 2.0) * acc);
}

// --- evolve -------------------------------------------------------------------

namespace {

// Least-squares-free blow-up time estimate: fit m' = c m^p through the last
// two sup-norm samples in original-frame variables, then extrapolate to the
// singularity. Falls back to the pure ODE (c = 1) from the last sample when
// the pair is unusable. A labeled estimate, not a ground-truth claim.
double estimate_blowup_time(double p, double t1, double m1, double t2, double m2) {
    if (!(m2 > 0.0)) return t2;
    const double e2 = std::pow(m2, 1.0 - p);
    if (m1 > 0.0 && t2 > t1 && std::isfinite(m1)) {
        const double e1 = std::pow(m1, 1.0 - p);
        const double c = (e1 - e2) / ((p - 1.0) * (t2 - t1));
        if (c > 0.0 && std::isfinite(c)) return t2 + e2 / (c * (p - 1.0));
    }
    return t2 + e2 / (p - 1.0);
}

// Positivity monitor: negative values beyond -1e-12 of scale are an error;
// smaller undershoots are clipped.
void enforce_positivity(std::vector<double>& v, double clock, Frame frame) {
    double scale = 0.0, worst = 0.0;
    for (double x : v) {
        scale = std::max(scale, std::abs(x));
        worst = std::min(worst, x);
    }
    if (worst < -1e-12 * scale)
        throw std::runtime_error("evolve: positivity violated beyond tolerance at " +
                                 format_clock(frame, clock));
    if (worst < 0.0)
        for (double& x : v) x = std::max(x, 0.0);
}

}  // namespace

Trajectory evolve(const RadialGrid& grid, const ProblemParams& params, const Field& init,
                  const StepControls& controls, std::span<const double> extra_q) {
    params.validate();
    controls.validate();
    if (static_cast<int>(init.values.size()) != grid.size())
        throw std::invalid_argument("evolve: initial field does not live on the grid");
    const Frame frame = controls.frame;
    if (init.clock != 0.0)
        throw std::invalid_argument(
            "evolve: runs start at clock 0, where the u and v frames coincide");
    if (tail_fraction(grid, init.values) >= 1e-4)
        throw std::invalid_argument("evolve: initial data tail exceeds the truncation gate");

    Trajectory traj;
    traj.params = params;
    traj.controls = controls;
    traj.grid = grid;
    traj.extra_q.assign(extra_q.begin(), extra_q.end());

    // Initial-state scalars (the initial field is shared by both frames).
    {
        Field v0 = init;
        v0.frame = Frame::VFrame;
        v0.clock = 0.0;
        traj.initial_entropy = entropy(grid, params, v0.values);
        traj.initial_production = production(grid, params, v0.values);
        traj.initial_sup = sup_norm(v0.values);
        traj.initial_norm_l2rho = norm_l2_rho(grid, v0.values);
    }

    // Normalize dt so the horizon is an integer number of steps.
    const long long planned = std::max<long long>(1, std::llround(controls.horizon / controls.dt));
    const double dt0 = controls.horizon / static_cast<double>(planned);

    ImexStepper stepper(grid, params, frame, dt0);
    std::vector<double> state = init.values;
    std::vector<double> candidate(state.size());
    enforce_positivity(state, 0.0, frame);

    double dt_cur = dt0;
    double segment_base = 0.0;
    long long k_in_segment = 0;
    long long accepted = 0;
    double clock = 0.0;
    double sup_prev = sup_norm(state);
    double sup_before = sup_prev;  // one step earlier, for the blow-up fit
    double clock_prev = 0.0;
    const double eps_clock = 0.5 * controls.dt_min;

    auto to_u_time = [&](double c) { return frame == Frame::VFrame ? std::expm1(c) : c; };
    auto to_u_sup = [&](double c, double sup) {
        return frame == Frame::VFrame
                   ? std::pow(std::expm1(c) + 1.0, -1.0 / (params.p - 1.0)) * sup
                   : sup;
    };

    auto record_sample = [&](double at_clock) {
        Field cur;
        cur.frame = frame;
        cur.clock = at_clock;
        cur.values = state;
        if (frame == Frame::VFrame) {
            traj.samples.push_back(compute_sample(grid, params, cur, traj.extra_q));
        } else {
            DirectUNorms direct;
            direct.l2 = lq_norm_unweighted(grid, cur.values, 2.0);
            direct.l4 = lq_norm_unweighted(grid, cur.values, 4.0);
            for (double q : traj.extra_q)
                direct.extras.push_back(lq_norm_unweighted(grid, cur.values, q));
            direct.norm_l2rho_v = v_norm_from_u(grid, cur, params);
            direct.sup_v =
                std::pow(cur.clock + 1.0, 1.0 / (params.p - 1.0)) * sup_norm(cur.values);
            Field v = map_u_to_v(grid, cur, params);
            traj.samples.push_back(compute_sample(grid, params, v, traj.extra_q, &direct));
        }
    };

    bool halted = false;
    while (clock < controls.horizon - eps_clock && !halted) {
        candidate = state;
        stepper.step(candidate);
        const double sup_next = sup_norm(candidate);

        if (std::isinf(sup_next)) {
            traj.outcome.status = RunStatus::BlewUp;
            traj.outcome.t_blowup = to_u_time(clock);
            traj.outcome.reason = "nonfinite values at " + format_clock(frame, clock);
            halted = true;
            break;
        }
        const double rel = std::abs(sup_next - sup_prev) / std::max(sup_prev, 1e-300);
        if (rel > 0.10) {
            if (dt_cur / 2.0 >= controls.dt_min) {
                dt_cur /= 2.0;
                stepper.set_dt(dt_cur);
                segment_base = clock;
                k_in_segment = 0;
                continue;  // redo the step at the finer dt
            }
            traj.accuracy_flagged = true;
        }

        state.swap(candidate);
        ++k_in_segment;
        ++accepted;
        clock_prev = clock;
        clock = segment_base + static_cast<double>(k_in_segment) * dt_cur;
        sup_before = sup_prev;
        sup_prev = sup_next;

        if (sup_next >= controls.blowup_threshold) {
            traj.outcome.status = RunStatus::BlewUp;
            traj.outcome.t_blowup =
                estimate_blowup_time(params.p, to_u_time(clock_prev), to_u_sup(clock_prev, sup_before),
                                     to_u_time(clock), to_u_sup(clock, sup_next));
            std::ostringstream os;
            os << "sup-norm crossed " << controls.blowup_threshold << " at "
               << format_clock(frame, clock);
            traj.outcome.reason = os.str();
            halted = true;
            break;
        }
        if (accepted % controls.sample_every == 0) {
            enforce_positivity(state, clock, frame);
            record_sample(clock);
        }
    }

    traj.final_state.frame = frame;
    traj.final_state.clock = clock;
    traj.final_state.values = state;

    if (!halted) {
        Field fin = traj.final_state;
        const double norm_v = frame == Frame::VFrame ? norm_l2_rho(grid, fin.values)
                                                     : v_norm_from_u(grid, fin, params);
        std::ostringstream os;
        if (norm_v < controls.decay_threshold && !traj.accuracy_flagged) {
            traj.outcome.status = RunStatus::Decayed;
            os << "horizon reached with ||v||_rho = " << norm_v << " < "
               << controls.decay_threshold;
        } else {
            traj.outcome.status = RunStatus::Undetermined;
            os << "horizon reached with ||v||_rho = " << norm_v;
            if (traj.accuracy_flagged) os << " (step-size floor hit, accuracy not certified)";
        }
        traj.outcome.reason = os.str();
    }
    return traj;
}

}  // namespace semiheat
