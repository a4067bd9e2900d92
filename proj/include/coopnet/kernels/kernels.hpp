#pragma once

// Data-parallel inner loops of the Monte Carlo simulator.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant picked at runtime. The variants use the same operation sequence
// (no fused multiply-add anywhere), so their outputs are bit-identical and
// simulation results do not depend on the host CPU.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include "coopnet/schemes.hpp"

namespace coopnet::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);

/// ISA used by the dispatching entry points. Defaults to the best available
/// one; the COOPNET_ISA environment variable ("scalar" / "avx2") overrides it.
Isa active_isa();

/// Pins the dispatching entry points to `isa`; throws if unavailable.
void set_active_isa(Isa isa);

// ---------------------------------------------------------------------------
// Counter-based random numbers
// ---------------------------------------------------------------------------

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key);

/// Independent fading process of each link.
enum class Channel : std::uint32_t { SourceDest = 0, SourceRelay = 1, RelayDest = 2 };

/// Identifies the random stream of one simulated packet (trial).
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
};

/// Maps 53 random bits onto (0, 1]; exact, so both paths agree.
inline double unit_interval_from_bits(std::uint32_t lo, std::uint32_t hi)
{
    const std::uint64_t x = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return static_cast<double>((std::uint64_t{1} << 53) - x) * 0x1p-53;
}

/// -ln(u) for u in (0, 1], fdlibm's reduction and polynomial written out so
/// the vector variant can reproduce it operation for operation.
double neg_log_unit(double u);

/**
 * Unit-mean exponential variates |h|^2 of `channel` for rounds
 * first_round, first_round + 1, ... of the trial named by `key`.
 *
 * Round r draws from Philox block {trial_lo, trial_hi, r / 2, channel}; even
 * rounds use words 0-1, odd rounds words 2-3. Results therefore depend only
 * on (seed, trial, channel, round), never on how rounds are batched.
 */
void unit_exponentials(StreamKey key, Channel channel, std::uint64_t first_round,
                       std::span<double> out);
void unit_exponentials(Isa isa, StreamKey key, Channel channel, std::uint64_t first_round,
                       std::span<double> out);

// ---------------------------------------------------------------------------
// Per-round protocol outcome
// ---------------------------------------------------------------------------

/// Outcome bits of one round.
enum RoundOutcome : std::uint8_t {
    kDelivered = 1,      ///< destination decoded the packet
    kRelayActive = 2,    ///< relay spent a second slot transmitting
};

struct RoundLinks {
    double gamma_th = 0.0;
    double mean_sd = 0.0;   ///< mean SNR of the S-D link
    double mean_sr = 0.0;
    double mean_rd = 0.0;
};

/// Instantaneous end-to-end SNR of a fixed-gain AF relay from the two hop SNRs.
inline double af_end_to_end_snr(double snr_sr, double snr_rd)
{
    return (snr_sr * snr_rd) / (snr_sr + snr_rd + 1.0);
}

/**
 * Classifies rounds given the unit-mean fades of each link. `g_sr` and
 * `g_rd` are ignored (and may be empty) for SchemeKind::Direct.
 */
void classify_rounds(SchemeKind kind, const RoundLinks& links, std::span<const double> g_sd,
                     std::span<const double> g_sr, std::span<const double> g_rd,
                     std::span<std::uint8_t> out);
void classify_rounds(Isa isa, SchemeKind kind, const RoundLinks& links,
                     std::span<const double> g_sd, std::span<const double> g_sr,
                     std::span<const double> g_rd, std::span<std::uint8_t> out);

namespace detail {

void unit_exponentials_scalar(StreamKey key, Channel channel, std::uint64_t first_round,
                              std::span<double> out);
void classify_rounds_scalar(SchemeKind kind, const RoundLinks& links, const double* g_sd,
                            const double* g_sr, const double* g_rd, std::uint8_t* out,
                            std::size_t n);

#if defined(COOPNET_HAVE_AVX2)
void unit_exponentials_avx2(StreamKey key, Channel channel, std::uint64_t first_round,
                            std::span<double> out);
void classify_rounds_avx2(SchemeKind kind, const RoundLinks& links, const double* g_sd,
                          const double* g_sr, const double* g_rd, std::uint8_t* out,
                          std::size_t n);
#endif

}  // namespace detail
}  // namespace coopnet::kernels
