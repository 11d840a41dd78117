#include "semiheat/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semiheat {

MonotoneCubic::MonotoneCubic(double x0, double dx, std::span<const double> y)
    : x0_(x0), dx_(dx), y_(y.begin(), y.end()) {
    const int n = static_cast<int>(y_.size());
    if (n < 2) throw std::invalid_argument("MonotoneCubic: need at least two nodes");
    if (!(dx > 0.0)) throw std::invalid_argument("MonotoneCubic: dx must be positive");
    d_.assign(n, 0.0);

    std::vector<double> delta(n - 1);
    for (int i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / dx;

    // Interior slopes: harmonic mean of adjacent secants when they share a
    // sign, zero otherwise (Fritsch-Carlson).
    for (int i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] > 0.0)
            d_[i] = 2.0 * delta[i - 1] * delta[i] / (delta[i - 1] + delta[i]);
        else
            d_[i] = 0.0;
    }
    // One-sided endpoint slopes, clipped to keep monotonicity.
    auto endpoint = [](double del0, double del1) {
        double d = (3.0 * del0 - del1) / 2.0;
        if (d * del0 <= 0.0) return 0.0;
        if (del0 * del1 < 0.0 && std::abs(d) > 3.0 * std::abs(del0)) return 3.0 * del0;
        return d;
    };
    d_[0] = (n == 2) ? delta[0] : endpoint(delta[0], delta[1]);
    d_[n - 1] = (n == 2) ? delta[0] : endpoint(delta[n - 2], delta[n - 3]);
}

double MonotoneCubic::operator()(double x) const {
    const int n = static_cast<int>(y_.size());
    const double x_last = x0_ + dx_ * (n - 1);
    if (x <= x0_) return y_.front();
    if (x >= x_last) return y_.back();
    int i = static_cast<int>((x - x0_) / dx_);
    i = std::clamp(i, 0, n - 2);
    const double t = (x - (x0_ + i * dx_)) / dx_;
    const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    const double h10 = t * (1.0 - t) * (1.0 - t);
    const double h01 = t * t * (3.0 - 2.0 * t);
    const double h11 = t * t * (t - 1.0);
    return h00 * y_[i] + h10 * dx_ * d_[i] + h01 * y_[i + 1] + h11 * dx_ * d_[i + 1];
}

}  // namespace semiheat
