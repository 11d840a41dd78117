#include "semiheat/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "semiheat/dynamics.hpp"

namespace semiheat {

namespace {

double clipped_pow(double v, double p) { return std::pow(std::max(v, 0.0), p); }

}  // namespace

double entropy(const RadialGrid& grid, const ProblemParams& params, std::span<const double> v) {
    const std::vector<double> dv = radial_derivative(grid, v);
    const double dirichlet = weighted_inner(grid, dv, dv);
    const double quad = weighted_inner(grid, v, v);
    double power_term = 0.0;
    for (int i = 0; i <= grid.m; ++i)
        power_term += clipped_pow(v[i], params.p + 1.0) * grid.rho[i] * grid.vol_weights[i];
    return 0.5 * dirichlet - quad / (2.0 * (params.p - 1.0)) - power_term / (params.p + 1.0);
}

double production(const RadialGrid& grid, const ProblemParams& params,
                  std::span<const double> v) {
    const std::vector<double> vs = rhs_v(grid, params, v);
    return weighted_inner(grid, vs, vs);
}

double k_functional(const RadialGrid& grid, const ProblemParams& params,
                    std::span<const double> v) {
    const std::vector<double> vs = rhs_v(grid, params, v);
    double acc = 0.0;
    for (int i = 0; i <= grid.m; ++i)
        acc += clipped_pow(v[i], params.p - 1.0) * vs[i] * vs[i] * grid.rho[i] *
               grid.vol_weights[i];
    return 2.0 * params.p * acc;
}

double r_functional(const RadialGrid& grid, const ProblemParams& params,
                    std::span<const double> v) {
    const std::vector<double> vs = rhs_v(grid, params, v);
    const std::vector<double> Lvs = apply_L(grid, vs);
    const double n_half = grid.dim / 2.0;
    double k_acc = 0.0;
    for (int i = 0; i <= grid.m; ++i)
        k_acc += clipped_pow(v[i], params.p - 1.0) * vs[i] * vs[i] * grid.rho[i] *
                 grid.vol_weights[i];
    return weighted_inner(grid, Lvs, vs) - n_half * weighted_inner(grid, vs, vs) -
           params.p * k_acc;
}

double g_functional(const RadialGrid& grid, std::span<const double> v) {
    return 0.5 * weighted_inner(grid, v, v);
}

double gbound_margin(double entropy_value, double production_value, double g_value,
                     const ProblemParams& params) {
    const DerivedConstants dc = derive_constants(params);
    if (!dc.p_tilde || !(params.p > *dc.p_tilde))
        throw hypothesis_error("gbound_margin: needs p > p_tilde");
    const double coeff = (params.p - 1.0) * params.dim / 2.0 - 2.0;
    return 0.5 * production_value + (params.p + 1.0) * entropy_value - coeff * g_value;
}

DiagnosticsSample compute_sample(const RadialGrid& grid, const ProblemParams& params,
                                 const Field& v, std::span<const double> extra_q,
                                 const DirectUNorms* direct) {
    if (v.frame != Frame::VFrame)
        throw std::invalid_argument("compute_sample: field must be in the rescaled frame");
    DiagnosticsSample d;
    d.s = v.clock;
    d.t = std::expm1(v.clock);

    const std::vector<double> vs = rhs_v(grid, params, v.values);
    const std::vector<double> dv = radial_derivative(grid, v.values);
    const std::vector<double> Lvs = apply_L(grid, vs);

    d.dirichlet = weighted_inner(grid, dv, dv);
    const double quad = weighted_inner(grid, v.values, v.values);
    double power_term = 0.0, k_acc = 0.0;
    for (int i = 0; i <= grid.m; ++i) {
        const double w = grid.rho[i] * grid.vol_weights[i];
        power_term += clipped_pow(v.values[i], params.p + 1.0) * w;
        k_acc += clipped_pow(v.values[i], params.p - 1.0) * vs[i] * vs[i] * w;
    }
    d.entropy = 0.5 * d.dirichlet - quad / (2.0 * (params.p - 1.0)) -
                power_term / (params.p + 1.0);
    d.nonlinear_ratio = quad > 0.0 ? power_term / quad : 0.0;
    d.production = weighted_inner(grid, vs, vs);
    d.k_fun = 2.0 * params.p * k_acc;
    d.r_fun = weighted_inner(grid, Lvs, vs) - (grid.dim / 2.0) * d.production - 0.5 * d.k_fun;
    d.g_fun = 0.5 * quad;
    d.norm_l2rho_v = std::sqrt(quad);

    double sup = 0.0;
    for (double x : v.values) sup = std::max(sup, x);
    d.sup_v = sup;

    const double tp1 = d.t + 1.0;
    const double inv_pm1 = 1.0 / (params.p - 1.0);
    auto u_norm = [&](double q) {
        return std::pow(tp1, grid.dim / (2.0 * q) - inv_pm1) *
               lq_norm_unweighted(grid, v.values, q);
    };
    if (direct) {
        d.norm_l2_u = direct->l2;
        d.norm_l4_u = direct->l4;
        d.extra_lq_u = direct->extras;
        d.norm_l2rho_v = direct->norm_l2rho_v;
        d.sup_v = direct->sup_v;
        d.g_fun = 0.5 * d.norm_l2rho_v * d.norm_l2rho_v;
    } else {
        d.norm_l2_u = u_norm(2.0);
        d.norm_l4_u = u_norm(4.0);
        for (double q : extra_q) d.extra_lq_u.push_back(u_norm(q));
    }

    d.wang_margin = (d.s > 0.0 ? wang_envelope_v(d.s, params.p, params.lambda)
                               : std::numeric_limits<double>::infinity()) -
                    d.sup_v;

    const DerivedConstants dc = derive_constants(params);
    if (dc.p_tilde && params.p > *dc.p_tilde) {
        const double coeff = (params.p - 1.0) * grid.dim / 2.0 - 2.0;
        d.gbound_margin =
            0.5 * d.production + (params.p + 1.0) * d.entropy - coeff * d.g_fun;
    } else {
        d.gbound_margin = std::numeric_limits<double>::quiet_NaN();
    }
    return d;
}

RateFit fit_log_slope(std::span<const std::pair<double, double>> series, double lo, double hi,
                      const std::string& quantity) {
    if (!(lo < hi)) throw std::invalid_argument("fit_log_slope: empty window");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& [x, y] : series) {
        if (x < lo || x > hi) continue;
        if (!(y > 0.0))
            throw std::invalid_argument("fit_log_slope: nonpositive value for " + quantity +
                                        " in window; quantity crossed zero, fit refused");
        const double ly = std::log(y);
        sx += x;
        sy += ly;
        sxx += x * x;
        sxy += x * ly;
        ++n;
    }
    if (n < 10)
        throw std::invalid_argument("fit_log_slope: fewer than 10 samples in window for " +
                                    quantity);
    const double denom = n * sxx - sx * sx;
    RateFit fit;
    fit.quantity = quantity;
    fit.window_lo = lo;
    fit.window_hi = hi;
    fit.points = n;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (const auto& [x, y] : series) {
        if (x < lo || x > hi) continue;
        const double resid = std::log(y) - (fit.slope * x + fit.intercept);
        ss += resid * resid;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

namespace {

double midpoint_positive(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::sqrt(a * b);
    return 0.5 * (a + b);
}

}  // namespace

std::vector<double> entropy_balance_residuals(std::span<const DiagnosticsSample> samples,
                                              double s_lo, double s_hi) {
    std::vector<double> out;
    for (size_t k = 0; k + 1 < samples.size(); ++k) {
        const auto& A = samples[k];
        const auto& B = samples[k + 1];
        if (A.s < s_lo || B.s > s_hi) continue;
        const double h = B.s - A.s;
        const double i_mid = midpoint_positive(A.production, B.production);
        out.push_back(std::abs((B.entropy - A.entropy) / h + i_mid) / std::max(i_mid, 1e-12));
    }
    return out;
}

std::vector<double> production_balance_residuals(std::span<const DiagnosticsSample> samples,
                                                 double gamma, double s_lo, double s_hi) {
    std::vector<double> out;
    for (size_t k = 0; k + 1 < samples.size(); ++k) {
        const auto& A = samples[k];
        const auto& B = samples[k + 1];
        if (A.s < s_lo || B.s > s_hi) continue;
        const double h = B.s - A.s;
        const double i_mid = midpoint_positive(A.production, B.production);
        const double r_mid = 0.5 * (A.r_fun + B.r_fun);
        out.push_back(std::abs((B.production - A.production) / h + 2.0 * gamma * i_mid +
                               2.0 * r_mid) /
                      std::max(i_mid, 1e-10));
    }
    return out;
}

}  // namespace semiheat
