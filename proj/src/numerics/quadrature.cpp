#include "coopnet/numerics.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace coopnet::numerics {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5] and the centre.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_centre = f(centre);
    double kronrod = kWgk[7] * f_centre;
    double gauss = kWg[3] * f_centre;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f_sum = f(centre - dx) + f(centre + dx);
        kronrod += kWgk[j] * f_sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * f_sum;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod)) {
        throw NumericalError("integrate_adaptive: integrand not finite on [" + std::to_string(a) +
                             ", " + std::to_string(b) + "]");
    }
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& opts)
{
    if (!(a <= b)) throw DomainError("integrate_adaptive: requires a <= b");
    if (a == b) return {};

    constexpr std::size_t kRuleSize = 15;
    std::priority_queue<Panel> panels;
    panels.push(gauss_kronrod(f, a, b));
    std::size_t evaluations = kRuleSize;
    double value = panels.top().value;
    double error = panels.top().error;

    auto converged = [&] {
        return error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(value));
    };

    while (!converged()) {
        if (panels.size() >= opts.max_intervals) {
            throw NonConvergenceError("integrate_adaptive: subdivision budget exhausted (error " +
                                      std::to_string(error) + ")");
        }
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NonConvergenceError("integrate_adaptive: interval collapsed to machine precision");
        }
        const Panel left = gauss_kronrod(f, worst.a, mid);
        const Panel right = gauss_kronrod(f, mid, worst.b);
        evaluations += 2 * kRuleSize;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    value = 0.0;
    error = 0.0;
    std::vector<Panel> all;
    all.reserve(panels.size());
    while (!panels.empty()) {
        all.push_back(panels.top());
        panels.pop();
    }
    for (auto it = all.rbegin(); it != all.rend(); ++it) {
        value += it->value;
        error += it->error;
    }
    return {value, error, evaluations};
}

}  // namespace coopnet::numerics
