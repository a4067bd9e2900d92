#include "coopnet/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace coopnet::numerics {

double q_function(double x)
{
    return 0.5 * std::erfc(x * std::numbers::sqrt2 * 0.5);
}

namespace {

// Below this the ascending series is used, above it Steed's continued fraction.
constexpr double kSeriesLimit = 2.0;
constexpr double kEps = 1e-17;

void check_domain(double x)
{
    if (!(x > 0.0)) {
        throw DomainError("bessel_k1: argument must be positive, got " + std::to_string(x));
    }
}

// x K1(x) from the ascending series
//   K1(x) = 1/x + ln(x/2) I1(x) - (x/4) sum_k [psi(k+1) + psi(k+2)] y^k / (k! (k+1)!)
// with y = x^2/4. Multiplying through by x removes the pole.
struct SeriesTerms {
    double x_log_i1;   // x ln(x/2) I1(x)
    double y_psi_sum;  // y sum_k [psi(k+1) + psi(k+2)] y^k / (k! (k+1)!)
};

SeriesTerms k1_series_terms(double x)
{
    const double y = 0.25 * x * x;
    double term = 1.0;                              // y^k / (k! (k+1)!)
    double psi_k1 = -std::numbers::egamma;          // psi(k+1)
    double psi_k2 = 1.0 - std::numbers::egamma;     // psi(k+2)
    double i1_sum = 0.0;
    double psi_sum = 0.0;
    for (int k = 0; k < 200; ++k) {
        i1_sum += term;
        psi_sum += (psi_k1 + psi_k2) * term;
        if (term < kEps * i1_sum) break;
        term *= y / ((k + 1.0) * (k + 2.0));
        psi_k1 += 1.0 / (k + 1.0);
        psi_k2 += 1.0 / (k + 2.0);
    }
    const double i1 = 0.5 * x * i1_sum;
    return {x * std::log(0.5 * x) * i1, y * psi_sum};
}

double x_k1_series(double x)
{
    const auto t = k1_series_terms(x);
    return 1.0 + t.x_log_i1 - t.y_psi_sum;
}

// e^x K1(x) for x > 2 via Steed's method (CF2) at order zero, followed by the
// K0 -> K1 step that falls out of the same recurrence.
double k1_scaled_cf(double x)
{
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i < 10000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < kEps) break;
    }
    h *= a1;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    return k0 * (x + 0.5 - h) / x;
}

}  // namespace

double bessel_k1(double x)
{
    check_domain(x);
    if (x <= kSeriesLimit) return x_k1_series(x) / x;
    return k1_scaled_cf(x) * std::exp(-x);
}

double bessel_k1_scaled(double x)
{
    check_domain(x);
    if (x <= kSeriesLimit) return x_k1_series(x) / x * std::exp(x);
    return k1_scaled_cf(x);
}

double x_bessel_k1(double x)
{
    if (x == 0.0) return 1.0;
    check_domain(x);
    if (x <= kSeriesLimit) return x_k1_series(x);
    return x * k1_scaled_cf(x) * std::exp(-x);
}

double one_minus_x_bessel_k1(double x)
{
    if (x == 0.0) return 0.0;
    check_domain(x);
    if (x <= kSeriesLimit) {
        const auto t = k1_series_terms(x);
        return t.y_psi_sum - t.x_log_i1;
    }
    return 1.0 - x * k1_scaled_cf(x) * std::exp(-x);
}

}  // namespace coopnet::numerics
