// Test-only oracles, independent of the library's solver path:
//  - closed-form reference constants evaluated with 30-digit arithmetic and
//    frozen here,
//  - an explicit RK4 cross-integrator on its own (non-conservative, composed
//    central) stencils,
//  - a dense 1-D scan maximizer,
//  - reference quadrature at fixed high resolution.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace oracles {

// ---- frozen closed-form values (N=3, p=5, lambda=0.5) ----------------------
inline constexpr double kGamma = 1.25;
inline constexpr double kPStar35 = 1.6666666666666667;
inline constexpr double kCnp35 = 0.70710678118654752;      // 0.25^{1/4}
inline constexpr double kLambdaMax35 = 0.87576537317215873;  // 1.7^{-1/4}
inline constexpr double kWangCoeff35 = 0.35930411196308422;  // 60^{-1/4}
inline constexpr double kBigB35 = 21.428571428571429;        // 150/7
inline constexpr double kS1_35 = 0.093401175088400777;       // ln(157/143)
inline constexpr double kMuS1_35 = 2.3833333333333333;       // 143/60
inline constexpr double kA35 = 1.1916666666666667;           // 143/120
inline constexpr double kMuRoot35 = 0.047790663836348470;    // ln(150/143)

// Gaussian integrals over R^3 against rho = e^{r^2/4}
inline constexpr double kPhiNormSq3 = 44.546623974653663;   // (4 pi)^{3/2}
inline constexpr double kPhiNormSq1 = 3.5449077018110321;   // (4 pi)^{1/2}
inline constexpr double kPhi6Weighted3 = 3.9843711750178983;  // (4 pi / 5)^{3/2}
inline constexpr double kPhiL2Unweighted3 = 3.9685778240728025;  // (2 pi)^{3/4}

// E(A e^{-r^2/4}) = A^2 (N/4 - 1/(2(p-1))) (4pi)^{3/2} - A^6/6 (4pi/5)^{3/2}
inline constexpr double kEntropyEps001 = 2.7841639977517921e-3;  // A = 0.01
inline constexpr double kEntropyA3 = -233.52633790724780;        // A = 3
inline constexpr double kEntropyZeroAmplitude = 2.5446119861932543;  // E(A*) = 0

// I(A e^{-r^2/4}) to leading orders, A = 0.01
inline constexpr double kProductionEps001 = 6.9604099860787069e-3;

// max_r A e^{-r^2/4} sqrt(r) / (lambda C(3,5)), attained at r = 1
inline constexpr double kWangRatioPerA = 2.2027812596127350;

inline double ball_volume(double r) { return 4.0 / 3.0 * M_PI * r * r * r; }

// ---- dense scan maximizer ----------------------------------------------------
inline std::pair<double, double> maximize_on(double lo, double hi, int n,
                                             const std::function<double(double)>& f) {
    double best_x = lo, best = f(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + (hi - lo) * i / n;
        const double y = f(x);
        if (y > best) {
            best = y;
            best_x = x;
        }
    }
    return {best_x, best};
}

// ---- independent spatial discretization (composed central stencils) ---------
struct RefGrid {
    int dim;
    int m;
    double dr;
    std::vector<double> r;
    std::vector<double> w;    // volume weights (trapezoid)
    std::vector<double> rho;  // e^{r^2/4}
};

inline RefGrid ref_grid(int dim, int m, double r_max) {
    RefGrid g;
    g.dim = dim;
    g.m = m;
    g.dr = r_max / m;
    const double omega = 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0);
    g.r.resize(m + 1);
    g.w.resize(m + 1);
    g.rho.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        g.r[i] = r_max * static_cast<double>(i) / m;
        g.w[i] = omega * std::pow(g.r[i], dim - 1) * g.dr;
        g.rho[i] = std::exp(g.r[i] * g.r[i] / 4.0);
    }
    g.w[0] *= 0.5;
    g.w[m] *= 0.5;
    return g;
}

// composed central stencil: f'' + (N-1)/r f' (+ (r/2) f' in the v frame)
inline void ref_rhs(const RefGrid& g, std::span<const double> f, double p, bool v_frame,
                    std::vector<double>& out) {
    const int m = g.m;
    const double dr2 = g.dr * g.dr;
    out.assign(m + 1, 0.0);
    for (int i = 1; i < m; ++i) {
        const double lap = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / dr2 +
                           (g.dim - 1) / g.r[i] * (f[i + 1] - f[i - 1]) / (2.0 * g.dr);
        double val = lap;
        if (v_frame) {
            val += g.r[i] / 2.0 * (f[i + 1] - f[i - 1]) / (2.0 * g.dr);
            val += f[i] / (p - 1.0);
        }
        val += std::pow(std::max(f[i], 0.0), p);
        out[i] = val;
    }
    const double lap0 = 2.0 * g.dim * (f[1] - f[0]) / dr2;
    out[0] = lap0 + (v_frame ? f[0] / (p - 1.0) : 0.0) + std::pow(std::max(f[0], 0.0), p);
    out[m] = 0.0;
}

struct RefRun {
    bool blew_up = false;
    double clock = 0.0;       // s (v frame) or t (u frame) at halt
    std::vector<double> state;
    double norm_l2rho = 0.0;  // v-frame weighted norm at halt (v frame only)
};

// Fixed-step explicit RK4; halts when the sup-norm crosses `threshold` or
// goes nonfinite.
inline RefRun rk4_integrate(const RefGrid& g, std::vector<double> f, double p, bool v_frame,
                            double dt, double horizon, double threshold) {
    RefRun run;
    std::vector<double> k1, k2, k3, k4, tmp(f.size());
    const long long steps = std::llround(horizon / dt);
    for (long long n = 1; n <= steps; ++n) {
        ref_rhs(g, f, p, v_frame, k1);
        for (size_t i = 0; i < f.size(); ++i) tmp[i] = f[i] + 0.5 * dt * k1[i];
        ref_rhs(g, tmp, p, v_frame, k2);
        for (size_t i = 0; i < f.size(); ++i) tmp[i] = f[i] + 0.5 * dt * k2[i];
        ref_rhs(g, tmp, p, v_frame, k3);
        for (size_t i = 0; i < f.size(); ++i) tmp[i] = f[i] + dt * k3[i];
        ref_rhs(g, tmp, p, v_frame, k4);
        double sup = 0.0;
        for (size_t i = 0; i < f.size(); ++i) {
            f[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            sup = std::max(sup, f[i]);
        }
        f[f.size() - 1] = 0.0;
        run.clock = n * dt;
        if (!std::isfinite(sup) || sup >= threshold) {
            run.blew_up = true;
            break;
        }
    }
    if (v_frame) {
        double acc = 0.0;
        for (size_t i = 0; i < f.size(); ++i) acc += f[i] * f[i] * g.rho[i] * g.w[i];
        run.norm_l2rho = std::sqrt(acc);
    }
    run.state = std::move(f);
    return run;
}

}  // namespace oracles
