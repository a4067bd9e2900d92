#include <algorithm>
#include <cmath>
#include <limits>

#include "coopnet/sweep.hpp"

namespace coopnet {

namespace {

double z_score(double analytic, double simulated, double se)
{
    const double diff = std::abs(analytic - simulated);
    if (diff == 0.0) return 0.0;
    if (!(se > 0.0)) return std::numeric_limits<double>::infinity();
    return diff / se;
}

}  // namespace

std::vector<const PointCheck*> ValidationReport::offenders() const
{
    std::vector<const PointCheck*> out;
    for (const PointCheck& p : points) {
        if (!p.within) out.push_back(&p);
    }
    return out;
}

ValidationReport validate_rows(std::span<const OutputRow> rows, std::uint64_t trials,
                               const ValidationOptions& options)
{
    ValidationReport report;
    report.options = options;
    const double n = static_cast<double>(trials);
    for (const OutputRow& row : rows) {
        PointCheck check;
        check.row = row;
        if (!row.error.empty() || !row.mc) {
            check.z_p_success = check.z_e_bit = std::numeric_limits<double>::infinity();
            report.points.push_back(std::move(check));
            continue;
        }
        const McColumns& mc = *row.mc;
        const double p = row.p_success;
        // Binomial error of the per-round frequency over trials/p rounds, and
        // the matching relative error of the mean packet energy.
        const double model_rel = std::sqrt(std::max(1.0 - p, 0.0) / n);
        const double se_p = std::max(mc.p_success_se, p * model_rel);
        const double se_e = std::max(mc.e_bit_se, row.e_bit_j * model_rel);

        check.z_p_success = z_score(p, mc.p_success, se_p);
        check.z_e_bit = z_score(row.e_bit_j, mc.e_bit, se_e);
        check.within = check.z_p_success <= options.z_threshold && check.z_e_bit <= options.z_threshold;
        check.wide_se = mc.e_bit_se > options.wide_relative_se * mc.e_bit;
        report.within_count += check.within ? 1 : 0;
        report.points.push_back(std::move(check));
    }
    report.within_fraction =
        report.points.empty() ? 0.0
                              : static_cast<double>(report.within_count) / static_cast<double>(report.points.size());
    report.passed = !report.points.empty() && report.within_fraction >= options.required_fraction;
    return report;
}

ValidationReport validate(const SweepSpec& spec, const ValidationOptions& options)
{
    if (!spec.mc) throw std::invalid_argument("validate: the sweep has no Monte Carlo configuration");
    const auto rows = run_sweep(spec);
    return validate_rows(rows, spec.mc->trials, options);
}

}  // namespace coopnet
