#pragma once

#include <span>
#include <vector>

namespace semiheat {

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slope limiting) on a
/// uniformly spaced abscissa. Preserves monotonicity of the data and is
/// third-order accurate for smooth profiles; used by the frame-change maps.
class MonotoneCubic {
  public:
    MonotoneCubic(double x0, double dx, std::span<const double> y);

    /// Evaluates the interpolant; arguments outside [x0, x_last] clamp to the
    /// end values (callers handle out-of-domain radii themselves).
    double operator()(double x) const;

  private:
    double x0_;
    double dx_;
    std::vector<double> y_;
    std::vector<double> d_;  // node slopes after limiting
};

}  // namespace semiheat
