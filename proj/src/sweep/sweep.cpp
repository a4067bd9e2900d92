#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>
#include <tuple>

#include "coopnet/numerics.hpp"
#include "coopnet/sweep.hpp"

namespace coopnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

OutputRow evaluate_point(const SweepSpec& spec, SchemeKind kind, int b, double d_sd,
                         double relay_frac, bool point_parallel)
{
    OutputRow row;
    row.scheme = kind;
    row.b = b;
    row.d_sd = d_sd;
    row.relay_frac = relay_frac;
    const Modulation mod(b);
    const Geometry geom{d_sd, relay_frac};

    try {
        row.gamma_th = link::link_budget(spec.params, mod).gamma_th;
        const SchemeResult r = evaluate(kind, spec.params, geom, mod);
        row.p_success = r.p_success;
        row.p_avg_w = r.p_avg;
        row.e_bit_j = r.e_bit;
        row.gain = r.gain;
    } catch (const DegenerateSuccessError&) {
        row.p_success = row.p_avg_w = row.e_bit_j = row.gain = kNaN;
        row.error = "degenerate_success";
    } catch (const NumericalError&) {
        row.p_success = row.p_avg_w = row.e_bit_j = row.gain = kNaN;
        row.error = "numerical_failure";
    }

    if (spec.mc) {
        if (!row.error.empty()) {
            row.mc = McColumns{kNaN, kNaN, kNaN, kNaN};
            return row;
        }
        McConfig cfg = *spec.mc;
        if (point_parallel) cfg.threads = 1;
        try {
            const McEstimate est = simulate_scheme(spec.params, geom, mod, kind, cfg);
            row.mc = McColumns{est.p_success_hat, est.p_success_se, est.e_bit_hat, est.e_bit_se};
        } catch (const TrialBudgetError&) {
            row.mc = McColumns{kNaN, kNaN, kNaN, kNaN};
            row.error = "mc_trial_budget";
        }
    }
    return row;
}

}  // namespace

std::vector<OutputRow> run_sweep(const SweepSpec& spec, unsigned threads)
{
    spec.validate();

    struct Point {
        SchemeKind kind;
        int b;
        double d_sd;
        double relay_frac;
    };
    std::vector<Point> points;
    points.reserve(spec.cardinality());
    for (SchemeKind kind : spec.schemes)
        for (int b : spec.b_values)
            for (double d : spec.d_sd_values)
                for (double t : spec.relay_frac_values) points.push_back({kind, b, d, t});

    // Ordering key; duplicates in the input lists are kept as separate rows.
    std::stable_sort(points.begin(), points.end(), [](const Point& x, const Point& y) {
        return std::tie(x.kind, x.b, x.d_sd, x.relay_frac) < std::tie(y.kind, y.b, y.d_sd, y.relay_frac);
    });

    unsigned n_threads = threads != 0 ? threads : std::thread::hardware_concurrency();
    n_threads = std::clamp<unsigned>(n_threads, 1, static_cast<unsigned>(points.size()));
    const bool point_parallel = n_threads > 1;

    std::vector<OutputRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
            const Point& p = points[i];
            rows[i] = evaluate_point(spec, p.kind, p.b, p.d_sd, p.relay_frac, point_parallel);
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    return rows;
}

}  // namespace coopnet
