#include "semiheat/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semiheat {

namespace {

// Largest argument for which exp(r^2/4) stays finite in double precision.
constexpr double kMaxWeightExponent = 708.0;

}  // namespace

RadialGrid build_grid(int dim, int m, double r_max) {
    if (dim < 1) throw std::invalid_argument("build_grid: dimension N must be >= 1");
    if (m < 16) throw std::invalid_argument("build_grid: need at least 16 intervals");
    if (!(r_max > 0.0)) throw std::invalid_argument("build_grid: r_max must be positive");
    if (r_max * r_max / 4.0 > kMaxWeightExponent)
        throw std::invalid_argument(
            "build_grid: exp(r_max^2/4) overflows double range (r_max > ~52)");

    RadialGrid g;
    g.dim = dim;
    g.m = m;
    g.r_max = r_max;
    g.dr = r_max / m;
    g.omega_n = 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0);
    g.nodes.resize(m + 1);
    g.vol_weights.resize(m + 1);
    g.rho.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        const double r = r_max * static_cast<double>(i) / m;
        g.nodes[i] = r;
        g.vol_weights[i] = g.omega_n * std::pow(r, dim - 1) * g.dr;
        g.rho[i] = std::exp(r * r / 4.0);
    }
    g.vol_weights[0] *= 0.5;
    g.vol_weights[m] *= 0.5;

    // Quadratic-exact face coefficients for the conservative radial
    // Laplacian: chat_{i+1/2} = dr^{N-1} * 2N * S_{N-1}(i) / (2i+1) with
    // S_{N-1}(i) = sum_{k<=i} k^{N-1} (N >= 2); chat = 1 for N = 1. The
    // choice makes (1/r^{N-1}) d(r^{N-1} f')/dr reproduce Δ(r^2) = 2N at
    // every interior node, unlike midpoint faces whose near-origin error is
    // O(dr^2 / r^2).
    g.face_u.resize(m);
    g.face_w.resize(m);
    double running = 0.0;
    const double dr_pow = std::pow(g.dr, dim - 1);
    for (int i = 0; i < m; ++i) {
        double chat;
        if (dim == 1) {
            chat = 1.0;
        } else {
            running += std::pow(static_cast<double>(i), dim - 1);
            chat = dr_pow * 2.0 * dim * running / (2.0 * i + 1.0);
        }
        const double r_face = 0.5 * (g.nodes[i] + g.nodes[i + 1]);
        g.face_u[i] = chat;
        g.face_w[i] = chat * std::exp(r_face * r_face / 4.0);
    }
    return g;
}

double weighted_inner(const RadialGrid& grid, std::span<const double> f,
                      std::span<const double> g) {
    if (f.size() != g.size() || static_cast<int>(f.size()) != grid.size())
        throw std::invalid_argument("weighted_inner: fields must live on the grid");
    double acc = 0.0;
    for (int i = 0; i <= grid.m; ++i) acc += f[i] * g[i] * grid.rho[i] * grid.vol_weights[i];
    return acc;
}

double lq_norm_unweighted(const RadialGrid& grid, std::span<const double> f, double q) {
    if (static_cast<int>(f.size()) != grid.size())
        throw std::invalid_argument("lq_norm_unweighted: field must live on the grid");
    if (std::isinf(q)) {
        double sup = 0.0;
        for (double v : f) sup = std::max(sup, std::abs(v));
        return sup;
    }
    if (!(q >= 1.0)) throw std::invalid_argument("lq_norm_unweighted: q must be >= 1");
    double acc = 0.0;
    for (int i = 0; i <= grid.m; ++i) acc += std::pow(std::abs(f[i]), q) * grid.vol_weights[i];
    return std::pow(acc, 1.0 / q);
}

std::vector<double> radial_derivative(const RadialGrid& grid, std::span<const double> f) {
    if (static_cast<int>(f.size()) != grid.size())
        throw std::invalid_argument("radial_derivative: field must live on the grid");
    const int m = grid.m;
    std::vector<double> out(m + 1);
    out[0] = 0.0;  // f_r(0) = 0 by symmetry
    for (int i = 1; i < m; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2.0 * grid.dr);
    out[m] = (f[m] - f[m - 1]) / grid.dr;
    return out;
}

namespace {

// Conservative divided difference of face fluxes; weighted selects the
// rho-carrying faces (for L) versus the plain ones (for Δ).
void flux_divergence(const RadialGrid& g, std::span<const double> f, bool weighted,
                     std::vector<double>& out) {
    const int m = g.m;
    const double dr2 = g.dr * g.dr;
    const auto& face = weighted ? g.face_w : g.face_u;
    out.assign(m + 1, 0.0);
    for (int i = 1; i < m; ++i) {
        double denom = std::pow(g.nodes[i], g.dim - 1);
        if (weighted) denom *= g.rho[i];
        const double lo = face[i - 1] * (f[i] - f[i - 1]);
        const double hi = face[i] * (f[i + 1] - f[i]);
        out[i] = (hi - lo) / (dr2 * denom);
    }
    out[0] = 2.0 * g.dim * (f[1] - f[0]) / dr2;  // radial-limit stencil at r = 0
}

}  // namespace

std::vector<double> radial_laplacian(const RadialGrid& grid, std::span<const double> f) {
    if (static_cast<int>(f.size()) != grid.size())
        throw std::invalid_argument("radial_laplacian: field must live on the grid");
    std::vector<double> out;
    flux_divergence(grid, f, false, out);
    // one-sided at r_max
    const int m = grid.m;
    const double dr = grid.dr;
    out[m] = (f[m] - 2.0 * f[m - 1] + f[m - 2]) / (dr * dr) +
             (grid.dim - 1) / grid.nodes[m] * (f[m] - f[m - 1]) / dr;
    return out;
}

std::vector<double> apply_L(const RadialGrid& grid, std::span<const double> f) {
    if (static_cast<int>(f.size()) != grid.size())
        throw std::invalid_argument("apply_L: field must live on the grid");
    std::vector<double> out;
    flux_divergence(grid, f, true, out);
    for (double& v : out) v = -v;
    out[grid.m] = 0.0;
    return out;
}

double tail_fraction(const RadialGrid& grid, std::span<const double> f) {
    if (static_cast<int>(f.size()) != grid.size())
        throw std::invalid_argument("tail_fraction: field must live on the grid");
    const int n = grid.size();
    const int start = n - std::max(1, n / 20);
    double tail = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double term = f[i] * f[i] * grid.rho[i] * grid.vol_weights[i];
        total += term;
        if (i >= start) tail += term;
    }
    if (total == 0.0) return 0.0;
    return tail / total;
}

}  // namespace semiheat
