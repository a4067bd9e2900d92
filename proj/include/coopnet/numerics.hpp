#pragma once

/**
 * Special functions, bracketing root finder and adaptive quadrature used by
 * the outage model. Everything here is pure and thread-safe.
 */

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace coopnet {

/// Base class of every numerical failure raised by the library.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoBracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

namespace numerics {

/// Gaussian tail probability P(N(0,1) > x).
double q_function(double x);

/**
 * Modified Bessel function of the second kind, order one.
 *
 * Power series around the origin for x <= 2, Steed's continued fraction
 * above. Throws DomainError for x <= 0 (and NaN); returns 0 once the result
 * underflows.
 */
double bessel_k1(double x);

/// e^x K1(x). Same algorithm as bessel_k1 but never underflows.
double bessel_k1_scaled(double x);

/// x K1(x), continuous at the origin where it tends to 1.
double x_bessel_k1(double x);

/// 1 - x K1(x) for x >= 0, free of cancellation near the origin.
double one_minus_x_bessel_k1(double x);

struct RootOptions {
    double tol = 1e-14;       ///< bracket width target, relative to max(1, |x|)
    int max_iterations = 400;
};

/**
 * Root of a strictly monotone function bracketed by [lo, hi].
 *
 * Illinois-modified regula falsi with a bisection step whenever the bracket
 * fails to halve, so the iteration count is bounded by that of plain
 * bisection. Either orientation (increasing or decreasing) is accepted.
 * Throws NoBracketError if f(lo) and f(hi) share a sign.
 */
double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          const RootOptions& opts = {});

inline double find_root_monotone(const std::function<double(double)>& f, double lo,
                                 double hi, double tol)
{
    return find_root_monotone(f, lo, hi, RootOptions{tol});
}

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;   ///< absolute
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_intervals = 4000;
};

/**
 * Globally adaptive Gauss-Kronrod (7/15) integration over [a, b].
 *
 * Only interior nodes are sampled, so integrands whose endpoint value is a
 * limit never see the endpoint. Converged when the summed error estimate
 * is <= max(abs_tol, rel_tol * |value|); throws NonConvergenceError when
 * the interval budget runs out first.
 */
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts);

inline QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                           double b, double tol)
{
    return integrate_adaptive(f, a, b, QuadratureOptions{tol, tol});
}

}  // namespace numerics
}  // namespace coopnet
