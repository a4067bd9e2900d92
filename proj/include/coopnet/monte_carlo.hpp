#pragma once

// Packet-level Monte Carlo simulation of the retransmission protocol. Used as
// an independent check of the closed-form outage/energy model: it never
// touches the analytic CDFs, only sampled fades and threshold comparisons.

#include <cstdint>
#include <stdexcept>

#include "coopnet/link_model.hpp"
#include "coopnet/schemes.hpp"

namespace coopnet {

/// A single trial needed more than kMaxRoundsPerTrial rounds.
class TrialBudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kMaxRoundsPerTrial = 1'000'000;

struct McConfig {
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    std::uint64_t batch_size = 4096;   ///< trials per accumulation batch
    unsigned threads = 0;              ///< 0: std::thread::hardware_concurrency()

    void validate() const;
};

struct McEstimate {
    double p_success_hat = 0.0;     ///< delivered rounds / all rounds
    double p_success_se = 0.0;
    double e_bit_hat = 0.0;         ///< total energy / (L * trials) [J/bit]
    double e_bit_se = 0.0;
    double mean_rounds = 0.0;
    double mean_rounds_se = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t rounds = 0;
};

/// Unit-mean exponential |h|^2 of the three links for one round.
struct ChannelGains {
    double sd = 0.0;
    double sr = 0.0;
    double rd = 0.0;
};

/// Fades of round `round` of trial `trial`; a pure function of its arguments.
ChannelGains sample_channel_gains(std::uint64_t seed, std::uint64_t trial, std::uint64_t round);

/// Instantaneous S-R-D SNR of the fixed-gain AF relay for the given fades.
double effective_af_snr(double g_sr, double g_rd, const NetworkParams& params,
                        const Geometry& geom);

/**
 * Plays `cfg.trials` packets through `kind`, each retransmitted with fresh
 * fades until delivered, and returns the empirical per-round success
 * frequency and energy per bit with their standard errors.
 *
 * The result is bit-identical for a given (parameters, seed, trials,
 * batch_size) regardless of thread count or SIMD level.
 */
McEstimate simulate_scheme(const NetworkParams& params, const Geometry& geom,
                           const Modulation& mod, SchemeKind kind, const McConfig& cfg);

}  // namespace coopnet
