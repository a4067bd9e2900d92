#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "coopnet/kernels/kernels.hpp"

namespace coopnet::kernels {

namespace {

Isa best_available()
{
    if (const char* env = std::getenv("COOPNET_ISA")) {
        const std::string requested(env);
        if (requested == "scalar") return Isa::Scalar;
        if (requested == "avx2" && isa_available(Isa::Avx2)) return Isa::Avx2;
    }
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& active()
{
    static std::atomic<Isa> isa{best_available()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa)
{
    return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_available(Isa isa)
{
    switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(COOPNET_HAVE_AVX2)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

Isa active_isa()
{
    return active().load(std::memory_order_relaxed);
}

void set_active_isa(Isa isa)
{
    if (!isa_available(isa)) {
        throw std::runtime_error("ISA " + std::string(isa_name(isa)) + " is not available on this CPU");
    }
    active().store(isa, std::memory_order_relaxed);
}

void unit_exponentials(Isa isa, StreamKey key, Channel channel, std::uint64_t first_round,
                       std::span<double> out)
{
#if defined(COOPNET_HAVE_AVX2)
    if (isa == Isa::Avx2) return detail::unit_exponentials_avx2(key, channel, first_round, out);
#endif
    (void)isa;
    detail::unit_exponentials_scalar(key, channel, first_round, out);
}

void unit_exponentials(StreamKey key, Channel channel, std::uint64_t first_round,
                       std::span<double> out)
{
    unit_exponentials(active_isa(), key, channel, first_round, out);
}

void classify_rounds(Isa isa, SchemeKind kind, const RoundLinks& links,
                     std::span<const double> g_sd, std::span<const double> g_sr,
                     std::span<const double> g_rd, std::span<std::uint8_t> out)
{
    const std::size_t n = out.size();
    if (g_sd.size() < n || (kind != SchemeKind::Direct && (g_sr.size() < n || g_rd.size() < n))) {
        throw std::invalid_argument("classify_rounds: input spans shorter than output");
    }
#if defined(COOPNET_HAVE_AVX2)
    if (isa == Isa::Avx2) {
        return detail::classify_rounds_avx2(kind, links, g_sd.data(), g_sr.data(), g_rd.data(),
                                            out.data(), n);
    }
#endif
    (void)isa;
    detail::classify_rounds_scalar(kind, links, g_sd.data(), g_sr.data(), g_rd.data(), out.data(), n);
}

void classify_rounds(SchemeKind kind, const RoundLinks& links, std::span<const double> g_sd,
                     std::span<const double> g_sr, std::span<const double> g_rd,
                     std::span<std::uint8_t> out)
{
    classify_rounds(active_isa(), kind, links, g_sd, g_sr, g_rd, out);
}

}  // namespace coopnet::kernels
