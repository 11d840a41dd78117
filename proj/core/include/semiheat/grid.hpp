#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "semiheat/types.hpp"

namespace semiheat {

/// Uniform radial discretization of R^N for radially symmetric fields,
/// with the Gaussian-growth weight rho(r) = exp(r^2/4) cached per node and
/// trapezoid-type volume weights omega_N r^{N-1} dr (half weight at the
/// endpoints). Immutable after construction.
struct RadialGrid {
    int dim = 0;
    int m = 0;  // node count minus one; nodes are r_i = i * dr, i = 0..m
    double r_max = 0.0;
    double dr = 0.0;
    double omega_n = 0.0;  // sphere-area factor 2 pi^{N/2} / Gamma(N/2)
    std::vector<double> nodes;
    std::vector<double> vol_weights;
    std::vector<double> rho;
    // Face coefficients of the conservative second-order discretization of
    // (1/r^{N-1}) d/dr (r^{N-1} f') at faces i+1/2, chosen so the scheme is
    // exact on quadratics at every interior node. face_w carries the extra
    // rho factor for the weighted operator L.
    std::vector<double> face_u;
    std::vector<double> face_w;

    int size() const { return m + 1; }
};

/// Radial profile of u or v at one instant.
struct Field {
    Frame frame = Frame::VFrame;
    double clock = 0.0;  // t in the UFrame, s in the VFrame
    std::vector<double> values;
};

/// Builds the grid. Rejects r_max large enough that exp(r_max^2/4) leaves
/// double range (the weighted quadrature would be meaningless well before
/// that, see tail_fraction).
RadialGrid build_grid(int dim, int m, double r_max);

/// (f, g)_{L2_rho} = sum f_i g_i rho_i w_i.
double weighted_inner(const RadialGrid& grid, std::span<const double> f,
                      std::span<const double> g);

inline double norm_l2_rho(const RadialGrid& grid, std::span<const double> f) {
    return std::sqrt(weighted_inner(grid, f, f));
}

/// Unweighted L^q norm, (sum |f_i|^q w_i)^{1/q}; q = infinity gives max|f_i|.
double lq_norm_unweighted(const RadialGrid& grid, std::span<const double> f, double q);

/// Central first derivative; f_r(0) = 0 by radial symmetry, one-sided at r_max.
std::vector<double> radial_derivative(const RadialGrid& grid, std::span<const double> f);

/// Second-order radial Laplacian f_rr + (N-1)/r f_r. Conservative interior
/// stencil (exact on quadratics), 2N (f_1 - f_0)/dr^2 at the origin,
/// one-sided at r_max (boundary value excluded from accuracy statements).
std::vector<double> radial_laplacian(const RadialGrid& grid, std::span<const double> f);

/// L f = -Δf - (r/2) f_r, discretized in conservative form against the
/// weight rho so that (Lf, g)_rho = (f, Lg)_rho holds exactly for fields
/// vanishing at r_max. Boundary node is set to 0 (Dirichlet row).
std::vector<double> apply_L(const RadialGrid& grid, std::span<const double> f);

/// Fraction of the weighted quadratic mass sum f^2 rho w carried by the last
/// 5% of nodes; the truncation-radius guard. Returns 0 for the zero field.
double tail_fraction(const RadialGrid& grid, std::span<const double> f);

}  // namespace semiheat
