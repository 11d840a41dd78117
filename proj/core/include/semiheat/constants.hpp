#pragma once

#include <optional>

#include "semiheat/types.hpp"

namespace semiheat {

struct ProblemParams {
    int dim = 3;          // spatial dimension N >= 1
    double p = 5.0;       // nonlinearity exponent, > 1
    double lambda = 0.5;  // barrier fraction in (0, 1)
    InitialDataSpec init{};

    void validate() const;
    /// True when N >= 3 and p > N/(N-2), the hypotheses under which the
    /// singular equilibrium u_inf and the comparison barrier exist.
    bool wang_hypotheses() const;
};

/// Every closed-form quantity derived from (N, p, lambda). Fields whose
/// defining hypotheses fail are absent rather than holding sentinel numbers,
/// so a downstream failure is always attributable to a named hypothesis.
struct DerivedConstants {
    double p_star = 0.0;                 // Fujita exponent 1 + 2/N
    std::optional<double> p_tilde;       // N/(N-2) for N=3, 1 + 4/N for N>=4
    double gamma = 0.0;                  // N/2 - 1/(p-1)
    std::optional<double> c_np;          // coefficient of u_inf (needs N>=3, p >= N/(N-2))
    std::optional<double> lambda_max;    // admissibility bound on lambda (needs gamma > 0)
    double wang_coeff = 0.0;             // [(lambda^{1-p}-1)(p-1)]^{-1/(p-1)}
    std::optional<double> big_b;         // B (needs gamma > 0)
    std::optional<double> s1;            // switch-on time (needs B > 1)
    std::optional<double> mu_s1;         // mu(s1)
    std::optional<double> a;             // mu(s1)/2
};

/// Closed-form substitution from (N, p, lambda). Throws std::invalid_argument
/// on invalid params; layered quantities come back absent when their
/// hypotheses fail (see DerivedConstants).
DerivedConstants derive_constants(const ProblemParams& params);

/// Fujita classification of (N, p). Criticality p == 1 + 2/N is declared
/// only within 1e-12 so rounding cannot land on the measure-zero case.
Regime classify_regime(int dim, double p);

/// Singular equilibrium u_inf(r) = C(N,p) r^{-2/(p-1)}; requires r > 0,
/// N >= 3 and p > N/(N-2).
double u_infinity_profile(double r, int dim, double p);

/// Pointwise barrier envelopes. In the rescaled frame
///   wang_envelope_v(s) = wang_coeff * (e^s/(e^s-1))^{1/(p-1)},  s > 0,
/// and in the original frame
///   wang_envelope_u(t) = [(lambda^{1-p}-1)(p-1) t]^{-1/(p-1)},  t > 0.
double wang_envelope_v(double s, double p, double lambda);
double wang_envelope_u(double t, double p, double lambda);

struct LqExponents {
    double paper_rate;     // 1/(p-1) + (2/q)(N/4 - 1/(p-1))
    double kawanago_rate;  // (N/2)(1 - 1/q)
};

/// Decay exponents of ||u(t)||_{L^q}, returned as positive rates; q >= 2.
LqExponents lq_exponents(int dim, double p, double q);

/// f(s) = e^s / (e^s - 1), the time factor of the rescaled envelope.
double envelope_time_factor(double s);

/// mu(s) = (p-1) gamma - (3p-1) / ((lambda^{1-p}-1)(p-1)) * f(s), s > 0.
double mu_of_s(double s, const ProblemParams& params);

}  // namespace semiheat
