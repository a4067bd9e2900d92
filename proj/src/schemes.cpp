#include "coopnet/schemes.hpp"

#include <algorithm>
#include <string>

namespace coopnet {

std::string_view scheme_name(SchemeKind kind)
{
    switch (kind) {
    case SchemeKind::Direct: return "direct";
    case SchemeKind::AfNonMrc: return "af";
    case SchemeKind::AfMrc: return "af_mrc";
    case SchemeKind::DfNonMrc: return "df";
    case SchemeKind::DfMrc: return "df_mrc";
    }
    return "unknown";
}

std::optional<SchemeKind> parse_scheme(std::string_view name)
{
    std::string normalized(name);
    for (char& c : normalized) {
        if (c == '-') c = '_';
    }
    for (SchemeKind kind : kAllSchemes) {
        if (scheme_name(kind) == normalized) return kind;
    }
    return std::nullopt;
}

bool uses_mrc(SchemeKind kind)
{
    return kind == SchemeKind::AfMrc || kind == SchemeKind::DfMrc;
}

RoundPowers round_powers(const NetworkParams& params, double alpha)
{
    const double radiated = (1.0 + alpha) * params.p_t;
    return {
        radiated + params.p_ct + params.p_cr,
        radiated + params.p_ct + 2.0 * params.p_cr,
        2.0 * radiated + 2.0 * params.p_ct + 3.0 * params.p_cr,
    };
}

double energy_per_bit(const NetworkParams& params, double p_avg, double t_on, double p_success)
{
    return (p_avg * t_on + params.p_tr * params.t_tr) / (params.l_bits * p_success);
}

namespace {

void check_success(double p_success, SchemeKind kind)
{
    if (!(p_success >= kMinSuccessProbability)) {
        throw DegenerateSuccessError(std::string(scheme_name(kind)) +
                                     ": success probability " + std::to_string(p_success) +
                                     " is below " + std::to_string(kMinSuccessProbability));
    }
}

SchemeResult make_result(SchemeKind kind, const NetworkParams& params, const LinkBudget& budget,
                         double p_success, double p_avg)
{
    check_success(p_success, kind);
    SchemeResult r;
    r.kind = kind;
    r.p_success = p_success;
    r.p_avg = p_avg;
    r.e_bit = energy_per_bit(params, p_avg, budget.t_on, p_success);
    r.gamma_th = budget.gamma_th;
    r.t_on = budget.t_on;
    r.alpha = budget.alpha;
    return r;
}

SchemeResult direct_from_budget(const NetworkParams& params, const Geometry& geom,
                                const LinkBudget& budget)
{
    const double p_success = 1.0 - link::cdf_exponential_link(budget.gamma_th, params, geom.d_sd);
    const double p_avg = round_powers(params, budget.alpha).direct;
    return make_result(SchemeKind::Direct, params, budget, p_success, p_avg);
}

// Baseline for the cooperative gain. A direct link too weak to evaluate on
// its own still yields a (huge or infinite) ratio rather than an error.
double direct_energy_for_gain(const NetworkParams& params, const Geometry& geom,
                              const LinkBudget& budget)
{
    const double p_success = 1.0 - link::cdf_exponential_link(budget.gamma_th, params, geom.d_sd);
    const double p_avg = round_powers(params, budget.alpha).direct;
    return energy_per_bit(params, p_avg, budget.t_on, p_success);
}

void validate_inputs(const NetworkParams& params, const Geometry& geom)
{
    params.validate();
    geom.validate();
}

}  // namespace

SchemeResult evaluate_direct(const NetworkParams& params, const Geometry& geom,
                             const Modulation& mod)
{
    validate_inputs(params, geom);
    return direct_from_budget(params, geom, link::link_budget(params, mod));
}

SchemeResult evaluate_af(const NetworkParams& params, const Geometry& geom, const Modulation& mod,
                         bool mrc)
{
    validate_inputs(params, geom);
    const LinkBudget budget = link::link_budget(params, mod);
    const RoundPowers powers = round_powers(params, budget.alpha);
    const double g = budget.gamma_th;

    const double sd_outage = link::cdf_exponential_link(g, params, geom.d_sd);
    const double relay_outage = mrc ? link::cdf_af_mrc_combined(g, params, geom)
                                    : link::cdf_af_relayed(g, params, geom.d_sr(), geom.d_rd());

    const double p_avg = powers.one_slot * (1.0 - sd_outage) + powers.two_slot * sd_outage;
    const double p_success = 1.0 - sd_outage * relay_outage;

    const SchemeKind kind = mrc ? SchemeKind::AfMrc : SchemeKind::AfNonMrc;
    SchemeResult r = make_result(kind, params, budget, p_success, p_avg);
    r.gain = direct_energy_for_gain(params, geom, budget) / r.e_bit;
    return r;
}

SchemeResult evaluate_df(const NetworkParams& params, const Geometry& geom, const Modulation& mod,
                         bool mrc)
{
    validate_inputs(params, geom);
    const LinkBudget budget = link::link_budget(params, mod);
    const RoundPowers powers = round_powers(params, budget.alpha);
    const double g = budget.gamma_th;

    const double sd_outage = link::cdf_exponential_link(g, params, geom.d_sd);
    const double sr_outage = link::cdf_exponential_link(g, params, geom.d_sr());
    double relay_delivers = 1.0 - link::cdf_exponential_link(g, params, geom.d_rd());
    if (mrc) {
        // The combined SNR dominates the relayed branch alone.
        relay_delivers =
            std::max(relay_delivers, link::tail_df_mrc_combined(g, params, geom.d_sd, geom.d_rd()));
    }

    // Four states: S-D success; S-D and S-R both out (relay silent); relay
    // decodes and forwards, after which R-D (or the combined SNR) decides.
    const double p_avg = powers.one_slot * (1.0 - sd_outage) +
                         powers.one_slot * sd_outage * sr_outage +
                         powers.two_slot * sd_outage * (1.0 - sr_outage);
    const double p_success = (1.0 - sd_outage) + sd_outage * (1.0 - sr_outage) * relay_delivers;

    const SchemeKind kind = mrc ? SchemeKind::DfMrc : SchemeKind::DfNonMrc;
    SchemeResult r = make_result(kind, params, budget, p_success, p_avg);
    r.gain = direct_energy_for_gain(params, geom, budget) / r.e_bit;
    return r;
}

SchemeResult evaluate(SchemeKind kind, const NetworkParams& params, const Geometry& geom,
                      const Modulation& mod)
{
    switch (kind) {
    case SchemeKind::Direct: return evaluate_direct(params, geom, mod);
    case SchemeKind::AfNonMrc: return evaluate_af(params, geom, mod, false);
    case SchemeKind::AfMrc: return evaluate_af(params, geom, mod, true);
    case SchemeKind::DfNonMrc: return evaluate_df(params, geom, mod, false);
    case SchemeKind::DfMrc: return evaluate_df(params, geom, mod, true);
    }
    throw std::invalid_argument("evaluate: unknown scheme");
}

ConstellationChoice optimal_constellation(const NetworkParams& params, const Geometry& geom,
                                          SchemeKind scheme, std::span<const int> candidates)
{
    if (candidates.empty()) throw std::invalid_argument("optimal_constellation: no candidates");

    ConstellationChoice best;
    bool found = false;
    for (int b : candidates) {
        SchemeResult r;
        try {
            r = evaluate(scheme, params, geom, Modulation(b));
        } catch (const DegenerateSuccessError&) {
            best.excluded.push_back(b);
            continue;
        }
        if (!found || r.e_bit < best.result.e_bit || (r.e_bit == best.result.e_bit && b > best.b)) {
            best.b = b;
            best.result = r;
            found = true;
        }
    }
    if (!found) {
        throw DegenerateSuccessError("optimal_constellation: every candidate degenerated");
    }
    return best;
}

}  // namespace coopnet
