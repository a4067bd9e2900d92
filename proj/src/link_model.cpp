#include "coopnet/link_model.hpp"

#include <algorithm>
#include <cmath>

#include "coopnet/numerics.hpp"

namespace coopnet {

namespace {

void require_positive(double value, const char* key)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvariantError(key, "must be finite and > 0, got " + std::to_string(value));
    }
}

}  // namespace

void NetworkParams::validate() const
{
    require_positive(p_t, "p_t");
    require_positive(n_0, "n_0");
    require_positive(beta, "beta");
    if (!(l_bits >= 1.0) || !std::isfinite(l_bits)) {
        throw InvariantError("l_bits", "must be >= 1, got " + std::to_string(l_bits));
    }
    require_positive(bandwidth, "bandwidth");
    require_positive(p_tr, "p_tr");
    require_positive(t_tr, "t_tr");
    require_positive(p_ct, "p_ct");
    require_positive(p_cr, "p_cr");
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw InvariantError("eta", "must lie in (0, 1], got " + std::to_string(eta));
    }
    if (!(target_ber > 0.0 && target_ber < 0.5)) {
        throw InvariantError("target_ber", "must lie in (0, 0.5), got " + std::to_string(target_ber));
    }
}

void Geometry::validate() const
{
    require_positive(d_sd, "d_sd");
    if (!(relay_frac > 0.0 && relay_frac < 1.0)) {
        throw InvariantError("relay_frac", "must lie in (0, 1), got " + std::to_string(relay_frac));
    }
}

Modulation::Modulation(int bits_per_symbol) : b_(bits_per_symbol)
{
    if (b_ < 2 || b_ > 30 || b_ % 2 != 0) {
        throw InvariantError("b", "square MQAM needs an even b in [2, 30], got " +
                                      std::to_string(bits_per_symbol));
    }
    m_ = std::ldexp(1.0, b_);
    sqrt_m_ = std::ldexp(1.0, b_ / 2);
}

namespace link {

double ber_mqam(double gamma_b, const Modulation& mod)
{
    const double coeff = 2.0 * (mod.sqrt_m() - 1.0) / mod.sqrt_m();
    const double q = numerics::q_function(std::sqrt(3.0 * mod.b() * gamma_b / (mod.m() - 1.0)));
    // 1 - (1 - cq)^2 rewritten to keep precision when cq is small.
    const double cq = coeff * q;
    return cq * (2.0 - cq) / mod.b();
}

double snr_per_bit_for_ber(const Modulation& mod, double target_ber)
{
    const double ceiling = ber_mqam(0.0, mod);
    if (!(target_ber > 0.0 && target_ber <= ceiling)) {
        throw InfeasibleTargetError("snr_per_bit_for_ber: target BER " + std::to_string(target_ber) +
                                    " outside (0, " + std::to_string(ceiling) + "] for b=" +
                                    std::to_string(mod.b()));
    }
    if (target_ber == ceiling) return 0.0;

    const double log_target = std::log(target_ber);
    auto f = [&](double gamma_b) { return std::log(ber_mqam(gamma_b, mod)) - log_target; };

    double hi = 1.0;
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e300) throw InfeasibleTargetError("snr_per_bit_for_ber: no upper bracket");
    }
    return numerics::find_root_monotone(f, 0.0, hi, numerics::RootOptions{1e-15, 400});
}

double snr_threshold(double gamma_b, const Modulation& mod, double bandwidth)
{
    return gamma_b * mod.b() * bandwidth;
}

double amplifier_overhead(const Modulation& mod, double eta)
{
    const double xi = 3.0 * (mod.sqrt_m() - 1.0) / (mod.sqrt_m() + 1.0);
    return xi / eta - 1.0;
}

double transmission_time(double l_bits, const Modulation& mod, double bandwidth)
{
    return l_bits / (mod.b() * bandwidth);
}

LinkBudget link_budget(const NetworkParams& params, const Modulation& mod)
{
    LinkBudget budget;
    budget.gamma_b = snr_per_bit_for_ber(mod, params.target_ber);
    budget.gamma_th = snr_threshold(budget.gamma_b, mod, params.bandwidth);
    budget.alpha = amplifier_overhead(mod, params.eta);
    budget.t_on = transmission_time(params.l_bits, mod, params.bandwidth);
    return budget;
}

double mean_link_snr(const NetworkParams& params, double d)
{
    return params.p_t * std::pow(d, -params.beta) / params.n_0;
}

double link_rate(const NetworkParams& params, double d)
{
    return params.n_0 * std::pow(d, params.beta) / params.p_t;
}

double cdf_exponential_link(double gamma_th, const NetworkParams& params, double d)
{
    return -std::expm1(-link_rate(params, d) * gamma_th);
}

double cdf_af_relayed(double gamma_th, const NetworkParams& params, double d_sr, double d_rd)
{
    if (gamma_th <= 0.0) return 0.0;
    const double rate_sr = link_rate(params, d_sr);
    const double rate_rd = link_rate(params, d_rd);
    const double root_xi =
        2.0 * std::sqrt((gamma_th * gamma_th + gamma_th) * (rate_sr * rate_rd));
    const double decay = gamma_th * (rate_sr + rate_rd);

    // 1 - s K1(s) e^{-decay} with s = sqrt(xi). Near the origin split it as
    // (1 - e^{-decay}) + e^{-decay} (1 - s K1(s)) so no term cancels.
    double cdf;
    if (root_xi <= 2.0) {
        cdf = -std::expm1(-decay) + std::exp(-decay) * numerics::one_minus_x_bessel_k1(root_xi);
    } else {
        cdf = 1.0 - root_xi * numerics::bessel_k1_scaled(root_xi) * std::exp(-(root_xi + decay));
    }
    return std::clamp(cdf, 0.0, 1.0);
}

double cdf_af_mrc_combined(double gamma_th, const NetworkParams& params, const Geometry& geom)
{
    if (gamma_th <= 0.0) return 0.0;
    const double rate_sd = link_rate(params, geom.d_sd);
    const double d_sr = geom.d_sr();
    const double d_rd = geom.d_rd();

    // Substituting gamma_sd = gamma_th * u maps the averaging integral onto
    // [0, 1]; the relayed CDF at u = 1 is its limit 0 and is never sampled.
    const double scale = gamma_th * rate_sd;
    auto integrand = [&](double u) {
        return scale * std::exp(-scale * u) * cdf_af_relayed(gamma_th * (1.0 - u), params, d_sr, d_rd);
    };
    // When the S-D link is almost surely in outage the density term is a
    // boundary layer of width 1/scale at u = 0, narrower than the coarsest
    // Kronrod panel can see, so the interval is split inside the layer.
    const numerics::QuadratureOptions opts{1e-16, 1e-10};
    double value = 0.0;
    double lo = 0.0;
    for (double k : {1.0, 8.0, 40.0}) {
        const double hi = k / scale;
        if (hi >= 1.0) break;
        if (hi > lo) value += numerics::integrate_adaptive(integrand, lo, hi, opts).value;
        lo = hi;
    }
    value += numerics::integrate_adaptive(integrand, lo, 1.0, opts).value;

    const double bound = std::min(cdf_af_relayed(gamma_th, params, d_sr, d_rd),
                                  cdf_exponential_link(gamma_th, params, geom.d_sd));
    return std::clamp(value, 0.0, bound);
}

double tail_sum_of_exponentials(double gamma_th, double rate_a, double rate_b)
{
    if (gamma_th <= 0.0) return 1.0;
    const double lo = std::min(rate_a, rate_b);
    const double hi = std::max(rate_a, rate_b);
    const double gap = hi - lo;
    if (gap / hi < 1e-9) {
        const double rate = 0.5 * (lo + hi);
        return (1.0 + rate * gamma_th) * std::exp(-rate * gamma_th);
    }
    // (hi e^{-lo g} - lo e^{-hi g}) / (hi - lo)
    //   = e^{-lo g} (1 + lo (1 - e^{-(hi - lo) g}) / (hi - lo))
    const double tail = std::exp(-lo * gamma_th) * (1.0 + lo * (-std::expm1(-gap * gamma_th)) / gap);
    return std::clamp(tail, 0.0, 1.0);
}

double tail_df_mrc_combined(double gamma_th, const NetworkParams& params, double d_sd, double d_rd)
{
    return tail_sum_of_exponentials(gamma_th, link_rate(params, d_sd), link_rate(params, d_rd));
}

}  // namespace link
}  // namespace coopnet
