#include "coopnet/kernels/kernels.hpp"

namespace coopnet::kernels::detail {

void unit_exponentials_scalar(StreamKey key, Channel channel, std::uint64_t first_round,
                              std::span<double> out)
{
    const PhiloxKey pkey = {static_cast<std::uint32_t>(key.seed),
                            static_cast<std::uint32_t>(key.seed >> 32)};
    PhiloxCounter block{};
    std::uint64_t cached_pair = ~std::uint64_t{0};
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint64_t round = first_round + i;
        const std::uint64_t pair = round >> 1;
        if (pair != cached_pair) {
            block = philox4x32({static_cast<std::uint32_t>(key.trial),
                                static_cast<std::uint32_t>(key.trial >> 32),
                                static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(channel)},
                               pkey);
            cached_pair = pair;
        }
        const double u = (round & 1) ? unit_interval_from_bits(block[2], block[3])
                                     : unit_interval_from_bits(block[0], block[1]);
        out[i] = neg_log_unit(u);
    }
}

void classify_rounds_scalar(SchemeKind kind, const RoundLinks& links, const double* g_sd,
                            const double* g_sr, const double* g_rd, std::uint8_t* out,
                            std::size_t n)
{
    const double th = links.gamma_th;
    for (std::size_t i = 0; i < n; ++i) {
        const double snr_sd = links.mean_sd * g_sd[i];
        if (snr_sd >= th) {
            out[i] = kDelivered;
            continue;
        }
        switch (kind) {
        case SchemeKind::Direct:
            out[i] = 0;
            break;
        case SchemeKind::AfNonMrc:
        case SchemeKind::AfMrc: {
            const double relayed = af_end_to_end_snr(links.mean_sr * g_sr[i], links.mean_rd * g_rd[i]);
            const double combined = kind == SchemeKind::AfMrc ? snr_sd + relayed : relayed;
            out[i] = static_cast<std::uint8_t>(kRelayActive | (combined >= th ? kDelivered : 0));
            break;
        }
        case SchemeKind::DfNonMrc:
        case SchemeKind::DfMrc: {
            if (!(links.mean_sr * g_sr[i] >= th)) {
                out[i] = 0;
                break;
            }
            const double snr_rd = links.mean_rd * g_rd[i];
            const double combined = kind == SchemeKind::DfMrc ? snr_sd + snr_rd : snr_rd;
            out[i] = static_cast<std::uint8_t>(kRelayActive | (combined >= th ? kDelivered : 0));
            break;
        }
        }
    }
}

}  // namespace coopnet::kernels::detail
