#pragma once

// Physical-layer model of the three-node network: MQAM error rate and its
// inversion, per-round timing and amplifier overhead, and the outage CDFs of
// the direct, amplify-and-forward and combined links under Rayleigh fading.

#include <stdexcept>
#include <string>
#include <utility>

namespace coopnet {

/// A parameter value violates its documented range. key() names the field.
class InvariantError : public std::invalid_argument {
public:
    InvariantError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key))
    {
    }

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class InfeasibleTargetError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Radio, circuit and protocol constants. Defaults are the reference set
/// used throughout the figures (0.1 W transmitter, 10 kHz, 20000-bit packets).
struct NetworkParams {
    double p_t = 0.1;            ///< transmit power [W]
    double n_0 = 1e-14;          ///< noise power spectral density [W/Hz]
    double beta = 3.12;          ///< path-loss exponent
    double l_bits = 20000.0;     ///< packet size [bit]
    double bandwidth = 1e4;      ///< [Hz]
    double p_tr = 0.1;           ///< transient power [W]
    double t_tr = 5e-6;          ///< transient duration [s]
    double p_ct = 0.0982;        ///< transmitter circuit power [W]
    double p_cr = 0.1125;        ///< receiver circuit power [W]
    double eta = 0.35;           ///< amplifier drain efficiency
    double target_ber = 1e-4;    ///< per-link BER constraint

    /// Throws InvariantError naming the first offending field.
    void validate() const;
};

/// Collinear placement: the relay sits at relay_frac of the way from the
/// source to the destination.
struct Geometry {
    double d_sd = 50.0;
    double relay_frac = 0.5;

    double d_sr() const noexcept { return relay_frac * d_sd; }
    double d_rd() const noexcept { return (1.0 - relay_frac) * d_sd; }

    void validate() const;
};

/// Square MQAM: b bits per symbol, b even.
class Modulation {
public:
    explicit Modulation(int bits_per_symbol);

    int b() const noexcept { return b_; }
    double m() const noexcept { return m_; }
    double sqrt_m() const noexcept { return sqrt_m_; }

private:
    int b_;
    double m_;
    double sqrt_m_;
};

struct LinkBudget {
    double gamma_b = 0.0;    ///< required SNR per bit at the target BER
    double gamma_th = 0.0;   ///< outage threshold gamma_b * b * B
    double alpha = 0.0;      ///< amplifier overhead
    double t_on = 0.0;       ///< active transmission time per round [s]
};

namespace link {

/// Bit error rate of uncoded square MQAM in AWGN at SNR-per-bit gamma_b.
double ber_mqam(double gamma_b, const Modulation& mod);

/**
 * SNR per bit at which ber_mqam equals target_ber.
 *
 * Returns 0 when target_ber equals the zero-SNR error rate and throws
 * InfeasibleTargetError outside (0, ber_mqam(0, mod)].
 */
double snr_per_bit_for_ber(const Modulation& mod, double target_ber);

double snr_threshold(double gamma_b, const Modulation& mod, double bandwidth);
double amplifier_overhead(const Modulation& mod, double eta);
double transmission_time(double l_bits, const Modulation& mod, double bandwidth);

LinkBudget link_budget(const NetworkParams& params, const Modulation& mod);

/// Mean received SNR over distance d: P_t d^-beta / N_0.
double mean_link_snr(const NetworkParams& params, double d);

/// Rate of the exponential SNR law at distance d, i.e. 1 / mean_link_snr.
double link_rate(const NetworkParams& params, double d);

/// P(gamma <= gamma_th) for a single Rayleigh link of length d.
double cdf_exponential_link(double gamma_th, const NetworkParams& params, double d);

/// P(gamma_rd <= gamma_th) for the end-to-end SNR of a fixed-gain AF relay.
double cdf_af_relayed(double gamma_th, const NetworkParams& params, double d_sr, double d_rd);

/// P(gamma_sd + gamma_rd <= gamma_th), the AF link after maximum ratio
/// combining with the direct path. Evaluated by adaptive quadrature.
double cdf_af_mrc_combined(double gamma_th, const NetworkParams& params, const Geometry& geom);

/// P(gamma_sd + gamma_rd >= gamma_th) for two independent exponential links
/// (decode-and-forward with combining).
double tail_df_mrc_combined(double gamma_th, const NetworkParams& params, double d_sd,
                            double d_rd);

/// Same tail expressed directly in the two exponential rates.
double tail_sum_of_exponentials(double gamma_th, double rate_a, double rate_b);

}  // namespace link
}  // namespace coopnet
