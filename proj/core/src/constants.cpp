#include "semiheat/constants.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace semiheat {

std::string to_string(Frame f) { return f == Frame::UFrame ? "u" : "v"; }

std::string to_string(Regime r) {
    switch (r) {
        case Regime::SubcriticalFujita: return "SubcriticalFujita";
        case Regime::CriticalFujita: return "CriticalFujita";
        default: return "Supercritical";
    }
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Decayed: return "Decayed";
        case RunStatus::BlewUp: return "BlewUp";
        default: return "Undetermined";
    }
}

std::string to_string(InitialKind k) {
    switch (k) {
        case InitialKind::Gaussian: return "gaussian";
        case InitialKind::Bump: return "bump";
        default: return "singular";
    }
}

void ProblemParams::validate() const {
    if (dim < 1) throw std::invalid_argument("params: dimension N must be >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("params: p must exceed 1");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("params: lambda must lie in (0, 1)");
    init.validate();
}

bool ProblemParams::wang_hypotheses() const {
    return dim >= 3 && p > static_cast<double>(dim) / (dim - 2);
}

double envelope_time_factor(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("envelope_time_factor: s must be positive");
    return 1.0 / (-std::expm1(-s));  // e^s / (e^s - 1), stable for large s
}

DerivedConstants derive_constants(const ProblemParams& params) {
    params.validate();
    const double n = params.dim;
    const double p = params.p;
    const double lam = params.lambda;

    DerivedConstants out;
    out.p_star = 1.0 + 2.0 / n;
    out.gamma = n / 2.0 - 1.0 / (p - 1.0);
    if (params.dim == 3)
        out.p_tilde = n / (n - 2.0);
    else if (params.dim >= 4)
        out.p_tilde = 1.0 + 4.0 / n;

    // lambda^{1-p} > 1 for every lambda in (0,1), p > 1.
    const double lam_pow = std::pow(lam, 1.0 - p);
    out.wang_coeff = std::pow((lam_pow - 1.0) * (p - 1.0), -1.0 / (p - 1.0));

    if (params.dim >= 3 && p >= n / (n - 2.0)) {
        const double base = (2.0 / (p - 1.0)) * (n - 2.0 * p / (p - 1.0));
        out.c_np = std::pow(base, 1.0 / (p - 1.0));
    }

    if (out.gamma > 0.0) {
        const double pm1 = p - 1.0;
        out.lambda_max = std::pow((3.0 * p - 1.0) / (out.gamma * pm1 * pm1) + 1.0, 1.0 / (1.0 - p));
        const double b = out.gamma * pm1 * pm1 * (lam_pow - 1.0) / (3.0 * p - 1.0);
        out.big_b = b;
        if (b > 1.0) {
            const double w = (1.0 + b) / 2.0;  // f(s1) = (1 + B)/2
            out.s1 = -std::log1p(-1.0 / w);    // ln(w/(w-1)), stable for large B
            const double mu = pm1 * out.gamma - (3.0 * p - 1.0) / ((lam_pow - 1.0) * pm1) * w;
            out.mu_s1 = mu;
            out.a = mu / 2.0;
        }
    }
    return out;
}

Regime classify_regime(int dim, double p) {
    if (dim < 1) throw std::invalid_argument("classify_regime: dimension N must be >= 1");
    if (!(p > 1.0)) throw std::invalid_argument("classify_regime: p must exceed 1");
    const double p_star = 1.0 + 2.0 / dim;
    if (std::abs(p - p_star) <= 1e-12) return Regime::CriticalFujita;
    return p < p_star ? Regime::SubcriticalFujita : Regime::Supercritical;
}

double u_infinity_profile(double r, int dim, double p) {
    if (!(r > 0.0)) throw std::invalid_argument("u_infinity_profile: r must be positive");
    if (dim < 3 || !(p > static_cast<double>(dim) / (dim - 2)))
        throw hypothesis_error("u_infinity_profile: needs N >= 3 and p > N/(N-2)");
    const double n = dim;
    const double c = std::pow((2.0 / (p - 1.0)) * (n - 2.0 * p / (p - 1.0)), 1.0 / (p - 1.0));
    return c * std::pow(r, -2.0 / (p - 1.0));
}

double wang_envelope_v(double s, double p, double lambda) {
    const double coeff = std::pow((std::pow(lambda, 1.0 - p) - 1.0) * (p - 1.0), -1.0 / (p - 1.0));
    return coeff * std::pow(envelope_time_factor(s), 1.0 / (p - 1.0));
}

double wang_envelope_u(double t, double p, double lambda) {
    if (!(t > 0.0)) throw std::invalid_argument("wang_envelope_u: t must be positive");
    return std::pow((std::pow(lambda, 1.0 - p) - 1.0) * (p - 1.0) * t, -1.0 / (p - 1.0));
}

LqExponents lq_exponents(int dim, double p, double q) {
    if (!(q >= 2.0)) throw std::invalid_argument("lq_exponents: q must be >= 2");
    const double n = dim;
    const double inv = 1.0 / (p - 1.0);
    return {inv + (2.0 / q) * (n / 4.0 - inv), (n / 2.0) * (1.0 - 1.0 / q)};
}

double mu_of_s(double s, const ProblemParams& params) {
    const double p = params.p;
    const double g = params.dim / 2.0 - 1.0 / (p - 1.0);
    const double lam_pow = std::pow(params.lambda, 1.0 - p);
    return (p - 1.0) * g -
           (3.0 * p - 1.0) / ((lam_pow - 1.0) * (p - 1.0)) * envelope_time_factor(s);
}

}  // namespace semiheat
