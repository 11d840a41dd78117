#pragma once

#include <span>
#include <string>
#include <vector>

#include "semiheat/constants.hpp"
#include "semiheat/grid.hpp"

namespace semiheat {

/// One row of the diagnostics time series. All functionals are evaluated
/// from the instantaneous field with v_s taken as the spatial right-hand
/// side of the rescaled equation, never as a temporal difference.
struct DiagnosticsSample {
    double s = 0.0;
    double t = 0.0;  // e^s - 1, exactly
    double entropy = 0.0;
    double production = 0.0;
    double k_fun = 0.0;
    double r_fun = 0.0;
    double g_fun = 0.0;
    double dirichlet = 0.0;
    double norm_l2rho_v = 0.0;
    double norm_l2_u = 0.0;
    double norm_l4_u = 0.0;
    double sup_v = 0.0;
    double wang_margin = 0.0;    // wang_envelope_v(s) - sup_v
    double gbound_margin = 0.0;  // NaN when p <= p_tilde (bound inapplicable)
    double nonlinear_ratio = 0.0;  // ∫v^{p+1} rho / ∫v^2 rho, the observable that
                                   // controls the power term of E at large s
    std::vector<double> extra_lq_u;  // norms for configured q beyond {2, 4}
};

/// Least-squares line through (x, ln value) over a window.
struct RateFit {
    std::string quantity;
    double slope = 0.0;
    double intercept = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double residual = 0.0;  // rms of the log-linear fit
    int points = 0;
};

struct Trajectory {
    ProblemParams params;
    StepControls controls;
    RadialGrid grid;
    std::vector<double> extra_q;  // q values beyond {2, 4} tracked per sample
    std::vector<DiagnosticsSample> samples;
    RunOutcome outcome;
    bool accuracy_flagged = false;
    double initial_entropy = 0.0;
    double initial_production = 0.0;
    double initial_sup = 0.0;
    double initial_norm_l2rho = 0.0;
    Field final_state;  // native frame, at the halt clock
};

// --- entropy-method functionals (v in the rescaled frame) -----------------

/// E(v) = ∫ [ (1/2)|v_r|^2 - v^2/(2(p-1)) - v^{p+1}/(p+1) ] rho dy.
double entropy(const RadialGrid& grid, const ProblemParams& params, std::span<const double> v);

/// I(v) = || rhs_v(v) ||^2_{L2_rho}, the entropy production with v_s
/// substituted by the equation's right-hand side.
double production(const RadialGrid& grid, const ProblemParams& params, std::span<const double> v);

/// K(v) = 2p ∫ v^{p-1} v_s^2 rho dy, with v clipped nonnegative before the
/// fractional power.
double k_functional(const RadialGrid& grid, const ProblemParams& params,
                    std::span<const double> v);

/// R(v) = (L v_s, v_s)_rho - (N/2)||v_s||^2_rho - K/2.
double r_functional(const RadialGrid& grid, const ProblemParams& params,
                    std::span<const double> v);

/// g(v) = (1/2) ||v||^2_{L2_rho}.
double g_functional(const RadialGrid& grid, std::span<const double> v);

/// (1/2) I + (p+1) E - ((p-1)N/2 - 2) g. Nonnegative when the g-bound holds.
/// Throws hypothesis_error when p <= p_tilde (or p_tilde is undefined).
double gbound_margin(double entropy_value, double production_value, double g_value,
                     const ProblemParams& params);

/// Full sample from a VFrame field. When u_norms_direct is non-null the
/// unweighted u-frame norms are taken from it instead of the scaling
/// identity (used by native UFrame runs).
struct DirectUNorms {
    double l2 = 0.0;
    double l4 = 0.0;
    std::vector<double> extras;
    double norm_l2rho_v = 0.0;
    double sup_v = 0.0;
};
DiagnosticsSample compute_sample(const RadialGrid& grid, const ProblemParams& params,
                                 const Field& v, std::span<const double> extra_q,
                                 const DirectUNorms* u_norms_direct = nullptr);

/// Least-squares slope of ln(value) against x over [lo, hi]. Requires at
/// least 10 points in the window and strictly positive values there.
RateFit fit_log_slope(std::span<const std::pair<double, double>> series, double lo, double hi,
                      const std::string& quantity);

// --- sampled balance residuals ---------------------------------------------
// Two-point differences centered at sample midpoints; the midpoint value of
// a positive quantity is its geometric mean (exact for pure exponentials).

/// |ΔE/Δs + I_mid| / max(I_mid, 1e-12) per interval inside [s_lo, s_hi].
std::vector<double> entropy_balance_residuals(std::span<const DiagnosticsSample> samples,
                                              double s_lo, double s_hi);

/// |ΔI/Δs + 2 gamma I_mid + 2 R_mid| / max(I_mid, 1e-10) per interval.
std::vector<double> production_balance_residuals(std::span<const DiagnosticsSample> samples,
                                                 double gamma, double s_lo, double s_hi);

}  // namespace semiheat
