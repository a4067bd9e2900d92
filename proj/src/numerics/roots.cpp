#include "coopnet/numerics.hpp"

#include <cmath>
#include <string>

namespace coopnet::numerics {

namespace {

bool same_sign(double a, double b)
{
    return (a < 0.0) == (b < 0.0);
}

}  // namespace

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          const RootOptions& opts)
{
    if (lo > hi) std::swap(lo, hi);
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::isnan(f_lo) || std::isnan(f_hi) || same_sign(f_lo, f_hi)) {
        throw NoBracketError("find_root_monotone: f(" + std::to_string(lo) + ") and f(" +
                             std::to_string(hi) + ") do not bracket a root");
    }

    // -1: last update moved lo, +1: moved hi. Two moves in a row on the same
    // side halve the stale end value (Illinois).
    int side = 0;
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double width = hi - lo;
        if (width <= opts.tol * std::max(1.0, std::abs(mid))) return mid;

        double x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if (!(x > lo && x < hi)) x = mid;
        double fx = f(x);
        if (fx == 0.0) return x;

        if (same_sign(fx, f_lo)) {
            lo = x;
            f_lo = fx;
            if (side == -1) f_hi *= 0.5;
            side = -1;
        } else {
            hi = x;
            f_hi = fx;
            if (side == +1) f_lo *= 0.5;
            side = +1;
        }

        // Interpolation stalled: force a bisection so progress is never
        // slower than plain halving.
        if (hi - lo > 0.5 * width) {
            const double m = 0.5 * (lo + hi);
            const double fm = f(m);
            if (fm == 0.0) return m;
            if (same_sign(fm, f_lo)) {
                lo = m;
                f_lo = fm;
            } else {
                hi = m;
                f_hi = fm;
            }
            side = 0;
        }
    }
    throw NonConvergenceError("find_root_monotone: iteration budget exhausted");
}

}  // namespace coopnet::numerics
