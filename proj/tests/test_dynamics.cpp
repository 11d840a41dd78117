#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "semiheat/dynamics.hpp"

using namespace semiheat;

namespace {

ProblemParams desk_params() { return ProblemParams{}; }  // N=3, p=5, lambda=0.5

Field gaussian_v(const RadialGrid& g, double a, double w) {
    Field f;
    f.frame = Frame::VFrame;
    f.clock = 0.0;
    f.values.assign(g.size(), 0.0);
    for (int i = 0; i < g.m; ++i)
        f.values[i] = a * std::exp(-g.nodes[i] * g.nodes[i] / (w * w));
    return f;
}

StepControls controls(Frame frame, double dt, double horizon, int sample_every = 100) {
    StepControls c;
    c.frame = frame;
    c.dt = dt;
    c.horizon = horizon;
    c.sample_every = sample_every;
    return c;
}

}  // namespace

TEST_CASE("make_initial_data runs the barrier check") {
    const RadialGrid g = build_grid(3, 1024, 16.0);
    ProblemParams params = desk_params();

    SUBCASE("small Gaussian passes with the predicted ratio at r = 1") {
        params.init = {InitialKind::Gaussian, 0.1, 2.0};
        auto [u0, report] = make_initial_data(g, params.init, params);
        CHECK(report.verdict == WangReport::Verdict::Pass);
        CHECK(report.max_ratio ==
              doctest::Approx(0.1 * oracles::kWangRatioPerA).epsilon(1e-3));
        CHECK(report.argmax_r == doctest::Approx(1.0).epsilon(2e-2));
        CHECK(u0.frame == Frame::UFrame);
        CHECK(u0.clock == 0.0);
        CHECK(u0.values[0] == doctest::Approx(0.1));
        // dense-scan oracle for the maximizer location
        auto [r_star, ratio] = oracles::maximize_on(1e-3, 8.0, 200000, [&](double r) {
            return 0.1 * std::exp(-r * r / 4.0) /
                   (0.5 * oracles::kCnp35 * std::pow(r, -0.5));
        });
        CHECK(r_star == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(report.max_ratio == doctest::Approx(ratio).epsilon(1e-3));
    }
    SUBCASE("unit Gaussian fails with ratio about 2.2 at r = 1") {
        params.init = {InitialKind::Gaussian, 1.0, 2.0};
        auto [u0, report] = make_initial_data(g, params.init, params);
        (void)u0;
        CHECK(report.verdict == WangReport::Verdict::Fail);
        CHECK(report.max_ratio == doctest::Approx(oracles::kWangRatioPerA).epsilon(1e-3));
        CHECK(report.detail.find("violated at r=1") != std::string::npos);
    }
    SUBCASE("trivial and ill-posed data are rejected") {
        CHECK_THROWS_AS(make_initial_data(g, {InitialKind::Bump, 0.0, 3.0}, params),
                        std::invalid_argument);
        // sigma = 4 makes u0^2 rho grow with r: tail gate must fire
        CHECK_THROWS_AS(make_initial_data(g, {InitialKind::Gaussian, 0.1, 4.0}, params),
                        std::invalid_argument);
    }
    SUBCASE("scaled singular data sits at the configured fraction of the barrier") {
        params.init = {InitialKind::ScaledSingular, 0.9, 0.5};
        auto [u0, report] = make_initial_data(g, params.init, params);
        (void)u0;
        CHECK(report.verdict == WangReport::Verdict::Pass);
        CHECK(report.max_ratio == doctest::Approx(0.9).epsilon(5e-3));
        CHECK(report.argmax_r == doctest::Approx(0.5).epsilon(1e-6));
        ProblemParams low = params;
        low.dim = 2;
        CHECK_THROWS_AS(make_initial_data(g, params.init, low), hypothesis_error);
    }
    SUBCASE("barrier check is not applicable below the singular range") {
        ProblemParams low = params;
        low.dim = 2;
        low.init = {InitialKind::Gaussian, 0.1, 2.0};
        const RadialGrid g2 = build_grid(2, 256, 16.0);
        auto [u0, report] = make_initial_data(g2, low.init, low);
        (void)u0;
        CHECK(report.verdict == WangReport::Verdict::NotApplicable);
    }
}

TEST_CASE("rhs_v on the first eigenfunction") {
    const RadialGrid g = build_grid(3, 2048, 16.0);
    const ProblemParams params = desk_params();
    const Field phi = gaussian_v(g, 1.0, 2.0);
    const auto rhs = rhs_v(g, params, phi.values);
    // -L phi + phi/(p-1) + phi^p = (-3/2 + 1/4) phi + phi^5 = -0.25 at r = 0
    CHECK(rhs[0] == doctest::Approx(-0.25).epsilon(1e-3));

    const std::vector<double> zero(g.size(), 0.0);
    for (double x : rhs_v(g, params, zero)) CHECK(x == 0.0);
}

TEST_CASE("rhs_v linear part is linear") {
    const RadialGrid g = build_grid(3, 256, 16.0);
    const ProblemParams params = desk_params();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<double> f(g.size()), h(g.size());
    for (int i = 0; i <= g.m; ++i) {
        const double r = g.nodes[i];
        f[i] = coeff(rng) * std::exp(-r * r / 4.0);
        h[i] = coeff(rng) * std::exp(-r * r / 6.0);
    }
    const double a = 1.7, b = -0.4;
    std::vector<double> combo(g.size());
    for (int i = 0; i <= g.m; ++i) combo[i] = a * f[i] + b * h[i];
    const auto rf = rhs_v(g, params, f, false);
    const auto rh = rhs_v(g, params, h, false);
    const auto rc = rhs_v(g, params, combo, false);
    for (int i = 0; i <= g.m; ++i)
        CHECK(rc[i] == doctest::Approx(a * rf[i] + b * rh[i]).epsilon(1e-10));
}

TEST_CASE("rhs_u examples") {
    const RadialGrid g = build_grid(3, 1024, 16.0);
    const ProblemParams params = desk_params();

    const std::vector<double> zero(g.size(), 0.0);
    for (double x : rhs_u(g, params, zero)) CHECK(x == 0.0);

    std::vector<double> c(g.size(), 0.7);
    const auto rc = rhs_u(g, params, c);
    for (int i = 0; i < g.m; ++i)
        CHECK(rc[i] == doctest::Approx(std::pow(0.7, 5.0)).epsilon(1e-13));

    // Lane-Emden steady state: Δ u_inf + u_inf^p = 0 away from the origin
    std::vector<double> uinf(g.size());
    for (int i = 0; i <= g.m; ++i)
        uinf[i] = u_infinity_profile(std::max(g.nodes[i], g.dr), 3, 5.0);
    const auto r = rhs_u(g, params, uinf);
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i < g.m; ++i) {
        if (g.nodes[i] < 1.0 || g.nodes[i] > 0.9 * g.r_max) continue;
        scale = std::max(scale, std::pow(uinf[i], 5.0));
        worst = std::max(worst, std::abs(r[i]));
    }
    CHECK(worst <= 1e-2 * scale);
}

TEST_CASE("imex step basics") {
    const RadialGrid g = build_grid(3, 2048, 16.0);
    const ProblemParams params = desk_params();

    SUBCASE("zero is a fixed point") {
        Field zero;
        zero.frame = Frame::VFrame;
        zero.clock = 0.0;
        zero.values.assign(g.size(), 0.0);
        const Field next = step_imex(g, params, zero, 1e-3);
        for (double x : next.values) CHECK(x == 0.0);
    }
    SUBCASE("linear-only step contracts the eigenfunction by 1/(1 + gamma dt)") {
        Field phi = gaussian_v(g, 1.0, 2.0);
        const double before = norm_l2_rho(g, phi.values);
        const Field after = step_imex(g, params, phi, 1e-3, false);
        const double ratio = norm_l2_rho(g, after.values) / before;
        CHECK(std::abs(ratio - 1.0 / (1.0 + 1.25e-3)) < 1e-4);
    }
    SUBCASE("dt beyond the dominance bound is rejected in the rescaled frame") {
        CHECK_THROWS_AS(ImexStepper(g, params, Frame::VFrame, 4.5), std::invalid_argument);
        CHECK_NOTHROW(ImexStepper(g, params, Frame::UFrame, 4.5));
        CHECK_THROWS_AS(ImexStepper(g, params, Frame::VFrame, 0.0), std::invalid_argument);
    }
    SUBCASE("first order in time") {
        const RadialGrid gc = build_grid(3, 256, 16.0);
        auto run_to = [&](double dt) {
            ImexStepper stepper(gc, params, Frame::VFrame, dt);
            std::vector<double> v = gaussian_v(gc, 0.1, 2.0).values;
            const long long n = std::llround(0.5 / dt);
            for (long long k = 0; k < n; ++k) stepper.step(v);
            return v;
        };
        const auto ref = run_to(1e-5);
        auto err = [&](const std::vector<double>& v) {
            std::vector<double> d(v.size());
            for (size_t i = 0; i < v.size(); ++i) d[i] = v[i] - ref[i];
            return norm_l2_rho(gc, d);
        };
        const double e1 = err(run_to(2e-3));
        const double e2 = err(run_to(1e-3));
        CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.25));
    }
}

TEST_CASE("frame maps") {
    const RadialGrid g = build_grid(3, 1024, 16.0);
    const ProblemParams params = desk_params();

    SUBCASE("identity at t = 0") {
        Field u = gaussian_v(g, 0.1, 2.0);
        u.frame = Frame::UFrame;
        const Field v = map_u_to_v(g, u, params);
        CHECK(v.clock == 0.0);
        for (int i = 0; i <= g.m; ++i) CHECK(v.values[i] == u.values[i]);
    }
    SUBCASE("round trip at t = 1") {
        Field u = gaussian_v(g, 0.1, 2.0);
        u.frame = Frame::UFrame;
        u.clock = 1.0;
        const Field v = map_u_to_v(g, u, params);
        CHECK(v.clock == doctest::Approx(std::log(2.0)).epsilon(1e-15));
        const Field back = map_v_to_u(g, v, params);
        std::vector<double> diff(g.size());
        for (int i = 0; i <= g.m; ++i) diff[i] = back.values[i] - u.values[i];
        double num = 0.0, den = 0.0;
        for (int i = 0; i <= g.m; ++i) {
            num += diff[i] * diff[i] * g.vol_weights[i];
            den += u.values[i] * u.values[i] * g.vol_weights[i];
        }
        CHECK(std::sqrt(num / den) < 1e-4);
    }
    SUBCASE("the singular profile is invariant under the map") {
        Field u;
        u.frame = Frame::UFrame;
        u.clock = std::expm1(1.0);  // s = 1
        u.values.assign(g.size(), 0.0);
        for (int i = 1; i <= g.m; ++i)
            u.values[i] = u_infinity_profile(g.nodes[i], 3, 5.0);
        u.values[0] = u.values[1];
        const Field v = map_u_to_v(g, u, params);
        for (int i = 0; i <= g.m; ++i) {
            const double r = g.nodes[i];
            if (r < 1.0 || r > 4.0) continue;
            CHECK(v.values[i] ==
                  doctest::Approx(u_infinity_profile(r, 3, 5.0)).epsilon(1e-3));
        }
    }
    SUBCASE("frame mismatches are rejected") {
        Field v = gaussian_v(g, 0.1, 2.0);
        CHECK_THROWS_AS(map_v_to_u(g, [&] {
                            Field w = v;
                            w.frame = Frame::UFrame;
                            return w;
                        }()
                            , params),
                        std::invalid_argument);
        CHECK_THROWS_AS(map_u_to_v(g, v, params), std::invalid_argument);
    }
}

TEST_CASE("evolve decays the default data and matches an independent integrator") {
    const RadialGrid g = build_grid(3, 256, 16.0);
    const ProblemParams params = desk_params();
    const Field v0 = gaussian_v(g, 0.1, 2.0);
    const Trajectory traj = evolve(g, params, v0, controls(Frame::VFrame, 1e-3, 8.0));
    CHECK(traj.outcome.status == RunStatus::Decayed);
    REQUIRE(!traj.samples.empty());
    CHECK(traj.samples.back().norm_l2rho_v < 1e-3);
    CHECK(traj.samples.size() == 80);

    // cross-integrator oracle: explicit RK4 on composed central stencils
    const oracles::RefGrid rg = oracles::ref_grid(3, 256, 16.0);
    std::vector<double> f(rg.m + 1);
    for (int i = 0; i <= rg.m; ++i) f[i] = 0.1 * std::exp(-rg.r[i] * rg.r[i] / 4.0);
    f[rg.m] = 0.0;
    const oracles::RefRun ref = oracles::rk4_integrate(rg, f, 5.0, true, 2e-4, 8.0, 1e6);
    CHECK_FALSE(ref.blew_up);
    CHECK(ref.norm_l2rho < 1e-3);
    CHECK(traj.samples.back().norm_l2rho_v ==
          doctest::Approx(ref.norm_l2rho).epsilon(0.05));

    // positivity proxy at the end of the run
    double sup = 0.0, mn = 0.0;
    for (double x : traj.final_state.values) {
        sup = std::max(sup, x);
        mn = std::min(mn, x);
    }
    CHECK(mn >= -1e-10 * sup);
}

TEST_CASE("evolve detects blow-up from large data in both integrators") {
    const RadialGrid g = build_grid(3, 256, 16.0);
    const ProblemParams params = desk_params();
    const Field v0 = gaussian_v(g, 3.0, 2.0);
    const Trajectory traj = evolve(g, params, v0, controls(Frame::VFrame, 1e-3, 8.0));
    CHECK(traj.outcome.status == RunStatus::BlewUp);
    CHECK(traj.final_state.clock < 5.0);
    CHECK(traj.outcome.t_blowup > 0.0);

    const oracles::RefGrid rg = oracles::ref_grid(3, 256, 16.0);
    std::vector<double> f(rg.m + 1);
    for (int i = 0; i <= rg.m; ++i) f[i] = 3.0 * std::exp(-rg.r[i] * rg.r[i] / 4.0);
    f[rg.m] = 0.0;
    const oracles::RefRun ref = oracles::rk4_integrate(rg, f, 5.0, true, 1e-5, 5.0, 1e6);
    CHECK(ref.blew_up);
    CHECK(ref.clock < 5.0);
}

TEST_CASE("evolve detects sub-Fujita blow-up in the original frame") {
    const RadialGrid g = build_grid(3, 256, 16.0);
    ProblemParams params = desk_params();
    params.p = 1.5;
    const Field u0 = gaussian_v(g, 1.0, 2.0);
    const Trajectory traj = evolve(g, params, u0, controls(Frame::UFrame, 1e-3, 50.0));
    CHECK(traj.outcome.status == RunStatus::BlewUp);
    CHECK(traj.final_state.clock < 50.0);

    const oracles::RefGrid rg = oracles::ref_grid(3, 256, 16.0);
    std::vector<double> f(rg.m + 1);
    for (int i = 0; i <= rg.m; ++i) f[i] = std::exp(-rg.r[i] * rg.r[i] / 4.0);
    f[rg.m] = 0.0;
    const oracles::RefRun ref = oracles::rk4_integrate(rg, f, 1.5, false, 5e-4, 50.0, 1e6);
    CHECK(ref.blew_up);
    CHECK(ref.clock < 50.0);
    CHECK(traj.final_state.clock == doctest::Approx(ref.clock).epsilon(0.25));
}

TEST_CASE("evolve leaves slow cases undetermined instead of guessing") {
    const RadialGrid g = build_grid(3, 256, 16.0);
    ProblemParams params = desk_params();
    params.p = 1.5;
    const Field v0 = gaussian_v(g, 0.01, 2.0);
    const Trajectory traj = evolve(g, params, v0, controls(Frame::VFrame, 1e-3, 1.0));
    CHECK(traj.outcome.status == RunStatus::Undetermined);
}

TEST_CASE("evolve is deterministic") {
    const RadialGrid g = build_grid(3, 256, 16.0);
    const ProblemParams params = desk_params();
    const Field v0 = gaussian_v(g, 0.1, 2.0);
    const Trajectory a = evolve(g, params, v0, controls(Frame::VFrame, 1e-3, 2.0));
    const Trajectory b = evolve(g, params, v0, controls(Frame::VFrame, 1e-3, 2.0));
    REQUIRE(a.samples.size() == b.samples.size());
    for (size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].entropy == b.samples[i].entropy);
        CHECK(a.samples[i].norm_l2rho_v == b.samples[i].norm_l2rho_v);
    }
    CHECK(a.final_state.values == b.final_state.values);
}

TEST_CASE("sup stays under the time envelope along the default run") {
    const RadialGrid g = build_grid(3, 512, 16.0);
    const ProblemParams params = desk_params();
    const Field v0 = gaussian_v(g, 0.1, 2.0);
    const Trajectory traj = evolve(g, params, v0, controls(Frame::VFrame, 1e-3, 4.0));
    for (const auto& d : traj.samples) {
        if (d.s < 0.05) continue;
        CHECK(d.sup_v <= wang_envelope_v(d.s, params.p, params.lambda) * (1.0 + 1e-3));
    }
}
