// coopnet: energy-per-bit sweeps of direct / AF / DF cooperative relaying.
//
//   coopnet sweep    [--config F] [--out F.csv] [--trials N] [--seed S] [--schemes a,b]
//   coopnet validate [--config F] [--out F.csv] [--trials N] [--seed S] [--schemes a,b]
//   coopnet point    [--config F] --scheme S --b B --d D [--t T] [--trials N] [--seed S]
//
// Exit codes: 0 success, 1 usage/config error, 2 validation failure,
// 3 numerical failure.

#include <fmt/core.h>

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coopnet/kernels/kernels.hpp"
#include "coopnet/monte_carlo.hpp"
#include "coopnet/numerics.hpp"
#include "coopnet/schemes.hpp"
#include "coopnet/sweep.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidationFailed = 2, kNumerical = 3 };

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::string schemes;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("--config", opts.config, "key = value configuration file");
    cmd->add_option("--out", opts.out, "output CSV path (stdout when omitted)");
    cmd->add_option("--trials", opts.trials, "Monte Carlo packets per grid point (enables simulation)");
    cmd->add_option("--seed", opts.seed, "Monte Carlo master seed (enables simulation)");
    cmd->add_option("--schemes", opts.schemes, "comma-separated subset of direct,af,af_mrc,df,df_mrc");
    cmd->add_option("--threads", opts.threads, "worker threads, 0 = all cores");
}

coopnet::SweepSpec load_spec(const CommonOptions& opts, bool require_mc)
{
    coopnet::SweepSpec spec = opts.config.empty() ? coopnet::parse_config_text("", "<defaults>")
                                                  : coopnet::parse_config(opts.config);
    if (!opts.schemes.empty()) {
        spec.schemes.clear();
        std::string_view rest = opts.schemes;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto name = rest.substr(0, comma);
            const auto kind = coopnet::parse_scheme(name);
            if (!kind) throw coopnet::InvariantError("--schemes", "unknown scheme '" + std::string(name) + "'");
            spec.schemes.push_back(*kind);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
    }
    if (opts.trials || opts.seed || require_mc) {
        if (!spec.mc) spec.mc.emplace();
        if (opts.trials) spec.mc->trials = *opts.trials;
        if (opts.seed) spec.mc->seed = *opts.seed;
    }
    if (spec.mc && opts.threads != 0) spec.mc->threads = opts.threads;
    spec.validate();
    return spec;
}

int run_sweep_cmd(const CommonOptions& opts)
{
    const auto spec = load_spec(opts, false);
    const auto rows = coopnet::run_sweep(spec, opts.threads);
    if (opts.out.empty()) {
        std::cout << coopnet::format_csv(rows, spec.mc.has_value());
    } else {
        coopnet::write_csv(rows, opts.out, spec.mc.has_value());
    }
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            fmt::print(stderr, "warning: {} b={} d={} t={}: {}\n", coopnet::scheme_name(r.scheme), r.b,
                       r.d_sd, r.relay_frac, r.error);
        }
    }
    return kOk;
}

int run_validate_cmd(const CommonOptions& opts)
{
    const auto spec = load_spec(opts, true);
    const auto rows = coopnet::run_sweep(spec, opts.threads);
    if (!opts.out.empty()) coopnet::write_csv(rows, opts.out, true);
    const auto report = coopnet::validate_rows(rows, spec.mc->trials);

    fmt::print("{:<7} {:>3} {:>8} {:>6} {:>12} {:>12} {:>8} {:>12} {:>12} {:>8}  {}\n", "scheme", "b", "d_sd",
               "t", "p_success", "mc_p", "z_p", "e_bit", "mc_e_bit", "z_e", "flags");
    std::size_t wide = 0;
    for (const auto& p : report.points) {
        const auto& r = p.row;
        const double mc_p = r.mc ? r.mc->p_success : 0.0;
        const double mc_e = r.mc ? r.mc->e_bit : 0.0;
        std::string flags = p.within ? "" : "FAIL";
        if (p.wide_se) {
            flags += flags.empty() ? "wide-se" : ",wide-se";
            ++wide;
        }
        if (!r.error.empty()) flags += (flags.empty() ? "" : ",") + r.error;
        fmt::print("{:<7} {:>3} {:>8.3g} {:>6.3g} {:>12.6g} {:>12.6g} {:>8.3f} {:>12.6g} {:>12.6g} {:>8.3f}  {}\n",
                   coopnet::scheme_name(r.scheme), r.b, r.d_sd, r.relay_frac, r.p_success, mc_p, p.z_p_success,
                   r.e_bit_j, mc_e, p.z_e_bit, flags);
    }
    fmt::print("\n{} of {} points within z <= {} ({:.2f}%, need {:.0f}%); {} with wide standard errors\n",
               report.within_count, report.points.size(), report.options.z_threshold,
               100.0 * report.within_fraction, 100.0 * report.options.required_fraction, wide);
    fmt::print("validation {}\n", report.passed ? "PASSED" : "FAILED");
    return report.passed ? kOk : kValidationFailed;
}

struct PointOptions {
    std::string scheme = "af_mrc";
    int b = 10;
    double d = 100.0;
    double t = 0.5;
    bool optimize = false;
};

int run_point_cmd(const CommonOptions& opts, const PointOptions& point)
{
    const auto spec = load_spec(opts, false);
    const auto kind = coopnet::parse_scheme(point.scheme);
    if (!kind) throw coopnet::InvariantError("--scheme", "unknown scheme '" + point.scheme + "'");
    const coopnet::Geometry geom{point.d, point.t};
    geom.validate();
    const coopnet::Modulation mod(point.b);

    const auto budget = coopnet::link::link_budget(spec.params, mod);
    const auto r = coopnet::evaluate(*kind, spec.params, geom, mod);
    fmt::print("scheme        {}\n", coopnet::scheme_name(*kind));
    fmt::print("b             {} (M = {})\n", point.b, mod.m());
    fmt::print("d_sd          {} m (d_sr = {} m, d_rd = {} m)\n", geom.d_sd, geom.d_sr(), geom.d_rd());
    fmt::print("gamma_b       {:.10g}\n", budget.gamma_b);
    fmt::print("gamma_th      {:.10g}\n", r.gamma_th);
    fmt::print("alpha         {:.10g}\n", r.alpha);
    fmt::print("t_on          {:.10g} s\n", r.t_on);
    fmt::print("p_success     {:.12g}\n", r.p_success);
    fmt::print("p_avg         {:.10g} W\n", r.p_avg);
    fmt::print("e_bit         {:.10g} J/bit\n", r.e_bit);
    fmt::print("gain          {:.10g}\n", r.gain);

    if (point.optimize) {
        const auto best = coopnet::optimal_constellation(spec.params, geom, *kind);
        fmt::print("optimal b     {} (e_bit {:.10g} J/bit)\n", best.b, best.result.e_bit);
        for (int b : best.excluded) fmt::print("warning: b={} excluded (degenerate success)\n", b);
    }
    if (spec.mc) {
        const auto est = coopnet::simulate_scheme(spec.params, geom, mod, *kind, *spec.mc);
        fmt::print("mc trials     {} ({} rounds, {} kernels)\n", est.trials, est.rounds,
                   coopnet::kernels::isa_name(coopnet::kernels::active_isa()));
        fmt::print("mc p_success  {:.12g} +- {:.3g}\n", est.p_success_hat, est.p_success_se);
        fmt::print("mc e_bit      {:.10g} +- {:.3g} J/bit\n", est.e_bit_hat, est.e_bit_se);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Energy per bit of direct, amplify-and-forward and decode-and-forward relaying"};
    app.require_subcommand(1);

    CommonOptions sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "evaluate a grid and write CSV");
    add_common(sweep, sweep_opts);

    CommonOptions validate_opts;
    auto* validate = app.add_subcommand("validate", "compare the analytic model with simulation");
    add_common(validate, validate_opts);

    CommonOptions point_opts;
    PointOptions point;
    auto* point_cmd = app.add_subcommand("point", "evaluate and pretty-print one operating point");
    add_common(point_cmd, point_opts);
    point_cmd->add_option("--scheme", point.scheme, "direct, af, af_mrc, df or df_mrc");
    point_cmd->add_option("--b", point.b, "bits per symbol (even)");
    point_cmd->add_option("--d", point.d, "source-destination distance [m]");
    point_cmd->add_option("--t", point.t, "normalized relay position in (0, 1)");
    point_cmd->add_flag("--optimize", point.optimize, "also report the energy-minimizing b");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sweep) return run_sweep_cmd(sweep_opts);
        if (*validate) return run_validate_cmd(validate_opts);
        if (*point_cmd) return run_point_cmd(point_opts, point);
    } catch (const coopnet::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kUsage;
    } catch (const coopnet::InvariantError& e) {
        fmt::print(stderr, "invalid value: {}\n", e.what());
        return kUsage;
    } catch (const coopnet::InfeasibleTargetError& e) {
        fmt::print(stderr, "invalid value: {}\n", e.what());
        return kUsage;
    } catch (const coopnet::NumericalError& e) {
        fmt::print(stderr, "numerical failure: {}\n", e.what());
        return kNumerical;
    } catch (const coopnet::DegenerateSuccessError& e) {
        fmt::print(stderr, "numerical failure: {}\n", e.what());
        return kNumerical;
    } catch (const coopnet::TrialBudgetError& e) {
        fmt::print(stderr, "numerical failure: {}\n", e.what());
        return kNumerical;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kUsage;
    }
    return kUsage;
}
