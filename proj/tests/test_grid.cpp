#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "semiheat/grid.hpp"

using namespace semiheat;

namespace {

std::vector<double> gaussian_phi(const RadialGrid& g, double inv_width_sq = 0.25) {
    std::vector<double> f(g.size());
    for (int i = 0; i <= g.m; ++i) f[i] = std::exp(-inv_width_sq * g.nodes[i] * g.nodes[i]);
    return f;
}

}  // namespace

TEST_CASE("grid layout and sphere-area factors") {
    const RadialGrid g = build_grid(3, 16, 1.0);
    CHECK(g.nodes.front() == 0.0);
    CHECK(g.nodes.back() == 1.0);
    for (int i = 1; i <= g.m; ++i) {
        CHECK(g.nodes[i] > g.nodes[i - 1]);
        CHECK(g.nodes[i] == doctest::Approx(i / 16.0).epsilon(1e-15));
    }
    CHECK(g.omega_n == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(g.vol_weights[0] == 0.0);  // r^{N-1} vanishes at the origin for N >= 2

    CHECK(build_grid(1, 16, 8.0).omega_n == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(build_grid(2, 16, 8.0).omega_n == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(build_grid(4, 16, 8.0).omega_n ==
          doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
    // half weight at the origin is nonzero only in one dimension
    CHECK(build_grid(1, 16, 8.0).vol_weights[0] == doctest::Approx(0.5 * 2.0 * 0.5));
}

TEST_CASE("volume weights integrate the ball") {
    for (int m : {256, 1024}) {
        const RadialGrid g = build_grid(3, m, 16.0);
        double total = 0.0;
        for (double w : g.vol_weights) total += w;
        CHECK(total == doctest::Approx(oracles::ball_volume(16.0)).epsilon(1e-3));
    }
}

TEST_CASE("grid construction guards") {
    CHECK_THROWS_AS(build_grid(3, 8, 16.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0, 64, 16.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(3, 64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(3, 64, 54.0), std::invalid_argument);  // weight overflow
    CHECK_NOTHROW(build_grid(3, 64, 52.0));
}

TEST_CASE("weighted inner product against Gaussian integrals") {
    {
        const RadialGrid g = build_grid(1, 2048, 16.0);
        const auto phi = gaussian_phi(g);
        CHECK(weighted_inner(g, phi, phi) ==
              doctest::Approx(oracles::kPhiNormSq1).epsilon(1e-3));
    }
    {
        const RadialGrid g = build_grid(3, 2048, 16.0);
        const auto phi = gaussian_phi(g);
        CHECK(weighted_inner(g, phi, phi) ==
              doctest::Approx(oracles::kPhiNormSq3).epsilon(1e-3));
        const std::vector<double> zero(g.size(), 0.0);
        CHECK(weighted_inner(g, zero, phi) == 0.0);
    }
}

TEST_CASE("unweighted Lq norms") {
    const RadialGrid g = build_grid(3, 1024, 16.0);
    std::vector<double> c(g.size(), 0.7);
    CHECK(lq_norm_unweighted(g, c, 2.0) ==
          doctest::Approx(0.7 * std::sqrt(oracles::ball_volume(16.0))).epsilon(1e-2));
    const auto phi = gaussian_phi(g);
    CHECK(lq_norm_unweighted(g, phi, 2.0) ==
          doctest::Approx(oracles::kPhiL2Unweighted3).epsilon(5e-3));
    std::vector<double> sharp(g.size());
    for (int i = 0; i <= g.m; ++i) sharp[i] = 2.5 * std::exp(-g.nodes[i] * g.nodes[i]);
    CHECK(lq_norm_unweighted(g, sharp, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(2.5));
    CHECK_THROWS_AS(lq_norm_unweighted(g, phi, 0.5), std::invalid_argument);
}

TEST_CASE("radial laplacian is exact on quadratics") {
    for (int dim : {1, 2, 3, 4, 5}) {
        const RadialGrid g = build_grid(dim, 64, 8.0);
        std::vector<double> f(g.size());
        for (int i = 0; i <= g.m; ++i) f[i] = g.nodes[i] * g.nodes[i];
        const auto lap = radial_laplacian(g, f);
        for (int i = 0; i < g.m; ++i)
            CHECK(lap[i] == doctest::Approx(2.0 * dim).epsilon(1e-11));
    }
}

TEST_CASE("derivative and laplacian of constants vanish in the interior") {
    const RadialGrid g = build_grid(3, 128, 8.0);
    std::vector<double> c(g.size(), 3.25);
    const auto lap = radial_laplacian(g, c);
    const auto der = radial_derivative(g, c);
    const auto lc = apply_L(g, c);
    for (int i = 0; i < g.m; ++i) {
        CHECK(lap[i] == doctest::Approx(0.0));
        CHECK(der[i] == doctest::Approx(0.0));
        CHECK(lc[i] == doctest::Approx(0.0));
    }
    CHECK(der[0] == 0.0);  // symmetry at the origin
}

TEST_CASE("first eigenfunction of L") {
    const RadialGrid g = build_grid(3, 2048, 16.0);
    const auto phi = gaussian_phi(g);
    const auto lphi = apply_L(g, phi);
    double sup_err = 0.0;
    for (int i = 0; i < g.m && g.nodes[i] <= 0.9 * g.r_max; ++i)
        sup_err = std::max(sup_err, std::abs(lphi[i] - 1.5 * phi[i]));
    CHECK(sup_err < 1e-3);

    // Poincare equality case within 0.5%
    const auto dphi = radial_derivative(g, phi);
    CHECK(weighted_inner(g, dphi, dphi) ==
          doctest::Approx(1.5 * weighted_inner(g, phi, phi)).epsilon(5e-3));
}

TEST_CASE("Poincare inequality on randomized boundary-compatible fields") {
    const RadialGrid g = build_grid(3, 2048, 16.0);
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> f(g.size());
        double c[5];
        for (double& x : c) x = coeff(rng);
        for (int i = 0; i <= g.m; ++i) {
            const double r = g.nodes[i];
            f[i] = (c[0] + r * (c[1] + r * (c[2] + r * (c[3] + r * c[4])))) *
                   std::exp(-r * r / 3.0);
        }
        f[g.m] = 0.0;
        const auto df = radial_derivative(g, f);
        const double quotient = weighted_inner(g, df, df) / weighted_inner(g, f, f);
        CHECK(quotient >= 1.5 * (1.0 - 1e-3));
    }
}

TEST_CASE("L is self-adjoint in the weighted inner product") {
    const RadialGrid g = build_grid(3, 2048, 16.0);
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> width(0.5, 3.0);
    auto mixture = [&] {
        std::vector<double> f(g.size(), 0.0);
        for (int k = 0; k < 4; ++k) {
            const double a = coeff(rng);
            const double w = width(rng);
            for (int i = 0; i <= g.m; ++i)
                f[i] += a * std::exp(-g.nodes[i] * g.nodes[i] / (4.0 * w));
        }
        f[g.m] = 0.0;
        return f;
    };
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = mixture();
        const auto h = mixture();
        auto lf = apply_L(g, f);
        auto lh = apply_L(g, h);
        const double asym = std::abs(weighted_inner(g, lf, h) - weighted_inner(g, f, lh));
        const double scale = std::sqrt(weighted_inner(g, lf, lf) * weighted_inner(g, h, h)) +
                             std::sqrt(weighted_inner(g, f, f) * weighted_inner(g, lh, lh));
        CHECK(asym <= 1e-6 * scale);
    }
}

TEST_CASE("quadrature error drops by at least 3X when the grid is halved") {
    auto norm_error = [](int m) {
        const RadialGrid g = build_grid(3, m, 16.0);
        const auto phi = gaussian_phi(g);
        return std::abs(weighted_inner(g, phi, phi) - oracles::kPhiNormSq3);
    };
    // measure on a short radius so the trapezoid error is not already at
    // roundoff (Gaussian tails superconverge on generous domains)
    auto short_error = [](int m) {
        const RadialGrid g = build_grid(3, m, 4.0);
        std::vector<double> f(g.size());
        for (int i = 0; i <= g.m; ++i) f[i] = std::cos(g.nodes[i]);
        double acc = 0.0;
        for (int i = 0; i <= g.m; ++i) acc += f[i] * f[i] * g.vol_weights[i];
        return acc;
    };
    const double ref = short_error(8192);
    const double e1 = std::abs(short_error(64) - ref);
    const double e2 = std::abs(short_error(128) - ref);
    CHECK(e1 / e2 >= 3.0);
    CHECK(norm_error(1024) <= oracles::kPhiNormSq3 * 1e-3);
}

TEST_CASE("tail fraction guards the truncation radius") {
    const RadialGrid g = build_grid(3, 1024, 16.0);
    const auto phi = gaussian_phi(g);
    CHECK(tail_fraction(g, phi) < 1e-10);
    std::vector<double> tail_only(g.size(), 0.0);
    for (int i = g.size() - g.size() / 20; i <= g.m; ++i) tail_only[i] = 1.0;
    CHECK(tail_fraction(g, tail_only) == doctest::Approx(1.0));
    const std::vector<double> zero(g.size(), 0.0);
    CHECK(tail_fraction(g, zero) == 0.0);  // degenerate by convention
}

TEST_CASE("grids are deterministic") {
    const RadialGrid a = build_grid(3, 512, 16.0);
    const RadialGrid b = build_grid(3, 512, 16.0);
    CHECK(a.nodes == b.nodes);
    CHECK(a.vol_weights == b.vol_weights);
    CHECK(a.rho == b.rho);
    CHECK(a.face_w == b.face_w);
}
