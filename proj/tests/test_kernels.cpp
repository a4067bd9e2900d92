#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "coopnet/kernels/kernels.hpp"

using namespace coopnet;
using namespace coopnet::kernels;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("philox4x32-10")
{
    TEST_CASE("known-answer vectors")
    {
        CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
              PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
              PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }
}

TEST_SUITE("uniform and exponential transforms")
{
    TEST_CASE("unit interval excludes zero and includes one")
    {
        CHECK(unit_interval_from_bits(0, 0) == 1.0);
        CHECK(unit_interval_from_bits(0xffffffff, 0xffffffff) == 0x1p-53);
        CHECK(unit_interval_from_bits(0, 0x80000000) == 0.5);
    }

    TEST_CASE("negative log matches the C library")
    {
        CHECK(neg_log_unit(1.0) == 0.0);
        CHECK(neg_log_unit(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-16));
        CHECK(neg_log_unit(0x1p-53) == doctest::Approx(53.0 * std::log(2.0)).epsilon(1e-16));
        std::mt19937_64 rng(3);
        double worst_ulps = 0.0;
        for (int i = 0; i < 200000; ++i) {
            const double u = unit_interval_from_bits(static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng()));
            const double want = -std::log(u);
            const double got = neg_log_unit(u);
            const double ulp = std::nextafter(std::abs(want), INFINITY) - std::abs(want);
            worst_ulps = std::max(worst_ulps, std::abs(got - want) / ulp);
        }
        CHECK(worst_ulps <= 1.0);
    }

    TEST_CASE("stream position is independent of batch boundaries")
    {
        const StreamKey key{0x1234567890abcdefULL, 77};
        std::vector<double> whole(37);
        unit_exponentials(Isa::Scalar, key, Channel::RelayDest, 5, whole);
        for (std::size_t i = 0; i < whole.size(); ++i) {
            double one = 0.0;
            unit_exponentials(Isa::Scalar, key, Channel::RelayDest, 5 + i, {&one, 1});
            CHECK(std::bit_cast<std::uint64_t>(one) == std::bit_cast<std::uint64_t>(whole[i]));
        }
    }

    TEST_CASE("channels, trials and seeds give distinct streams")
    {
        auto first = [](StreamKey key, Channel ch) {
            double x = 0.0;
            unit_exponentials(Isa::Scalar, key, ch, 0, {&x, 1});
            return x;
        };
        const StreamKey base{1, 0};
        CHECK(first(base, Channel::SourceDest) != first(base, Channel::SourceRelay));
        CHECK(first(base, Channel::SourceRelay) != first(base, Channel::RelayDest));
        CHECK(first(base, Channel::SourceDest) != first(StreamKey{1, 1}, Channel::SourceDest));
        CHECK(first(base, Channel::SourceDest) != first(StreamKey{2, 0}, Channel::SourceDest));
        CHECK(first(base, Channel::SourceDest) != first(StreamKey{1ULL << 32 | 1, 0}, Channel::SourceDest));
    }

    TEST_CASE("unit exponential moments")
    {
        const std::size_t n = 1 << 20;
        std::vector<double> x(n);
        unit_exponentials(StreamKey{9, 4}, Channel::SourceDest, 0, x);
        double sum = 0.0;
        double sum_sq = 0.0;
        std::size_t negative = 0;
        for (double v : x) {
            negative += v < 0.0;
            sum += v;
            sum_sq += v * v;
        }
        CHECK(negative == 0);
        const double mean = sum / n;
        const double second = sum_sq / n;
        // mean 1 (sd 1/sqrt(n)); second moment 2 (sd sqrt(20/n))
        CHECK(std::abs(mean - 1.0) < 5.0 / std::sqrt(n));
        CHECK(std::abs(second - 2.0) < 5.0 * std::sqrt(20.0 / n));
    }
}

TEST_SUITE("instruction-set variants")
{
    TEST_CASE("names and availability")
    {
        CHECK(isa_name(Isa::Scalar) == "scalar");
        CHECK(isa_name(Isa::Avx2) == "avx2");
        CHECK(isa_available(Isa::Scalar));
        const Isa before = active_isa();
        set_active_isa(Isa::Scalar);
        CHECK(active_isa() == Isa::Scalar);
        set_active_isa(before);
    }

    TEST_CASE("exponential draws are bit-identical across variants")
    {
        if (!isa_available(Isa::Avx2)) {
            MESSAGE("AVX2 not available; equivalence test skipped");
            return;
        }
        std::mt19937_64 rng(5);
        for (int rep = 0; rep < 400; ++rep) {
            const StreamKey key{rng(), rng() >> (rep % 64)};
            const auto channel = static_cast<Channel>(rep % 3);
            const std::uint64_t first = rep % 7 == 0 ? (rng() >> 1) : rng() % 1000;
            const std::size_t n = rep < 100 ? static_cast<std::size_t>(rep) : 1 + rng() % 700;
            std::vector<double> scalar(n);
            std::vector<double> simd(n);
            unit_exponentials(Isa::Scalar, key, channel, first, scalar);
            unit_exponentials(Isa::Avx2, key, channel, first, simd);
            CAPTURE(rep);
            CAPTURE(first);
            CAPTURE(n);
            CHECK(same_bits(scalar, simd));
        }
    }

    TEST_CASE("round classification is identical across variants")
    {
        if (!isa_available(Isa::Avx2)) {
            MESSAGE("AVX2 not available; equivalence test skipped");
            return;
        }
        std::mt19937_64 rng(8);
        std::exponential_distribution<double> fade(1.0);
        for (SchemeKind kind : kAllSchemes) {
            for (int rep = 0; rep < 50; ++rep) {
                const RoundLinks links{1.0, 0.3 + 2.0 * (rep % 5), 0.5 + rep % 3, 0.7 + rep % 4};
                const std::size_t n = 1 + rng() % 300;
                std::vector<double> sd(n), sr(n), rd(n);
                for (std::size_t i = 0; i < n; ++i) {
                    sd[i] = fade(rng);
                    sr[i] = fade(rng);
                    rd[i] = fade(rng);
                }
                // exact ties with the threshold on every branch
                sd[0] = links.gamma_th / links.mean_sd;
                if (n > 2) {
                    sd[1] = 0.0;
                    sr[1] = links.gamma_th / links.mean_sr;
                    rd[2] = 0.0;
                }
                std::vector<std::uint8_t> a(n, 0xee), b(n, 0xee);
                classify_rounds(Isa::Scalar, kind, links, sd, sr, rd, a);
                classify_rounds(Isa::Avx2, kind, links, sd, sr, rd, b);
                CAPTURE(scheme_name(kind));
                CHECK(a == b);
            }
        }
    }
}

TEST_SUITE("round classification")
{
    TEST_CASE("protocol rules")
    {
        const RoundLinks links{10.0, 1.0, 1.0, 1.0};
        auto classify = [&](SchemeKind kind, double sd, double sr, double rd) {
            std::uint8_t code = 0xff;
            classify_rounds(Isa::Scalar, kind, links, {&sd, 1}, {&sr, 1}, {&rd, 1}, {&code, 1});
            return code;
        };
        // S-D success ends the round regardless of scheme
        for (SchemeKind k : kAllSchemes) CHECK(classify(k, 10.0, 0.0, 0.0) == kDelivered);
        CHECK(classify(SchemeKind::Direct, 9.99, 100.0, 100.0) == 0);

        // AF: relay always transmits after an S-D outage
        CHECK(classify(SchemeKind::AfNonMrc, 9.0, 0.0, 0.0) == kRelayActive);
        CHECK(classify(SchemeKind::AfNonMrc, 9.0, 30.0, 30.0) == (kRelayActive | kDelivered));   // 900/61 > 10
        CHECK(classify(SchemeKind::AfNonMrc, 9.0, 12.0, 12.0) == kRelayActive);                  // 144/25 < 10
        CHECK(classify(SchemeKind::AfMrc, 9.0, 12.0, 12.0) == (kRelayActive | kDelivered));      // 9 + 5.76

        // DF: relay forwards only when it decodes
        CHECK(classify(SchemeKind::DfNonMrc, 9.0, 9.99, 100.0) == 0);
        CHECK(classify(SchemeKind::DfNonMrc, 9.0, 10.0, 9.0) == kRelayActive);
        CHECK(classify(SchemeKind::DfNonMrc, 9.0, 10.0, 10.0) == (kRelayActive | kDelivered));
        CHECK(classify(SchemeKind::DfMrc, 9.0, 10.0, 1.0) == (kRelayActive | kDelivered));
        CHECK(classify(SchemeKind::DfMrc, 8.0, 10.0, 1.0) == kRelayActive);
    }

    TEST_CASE("short inputs are rejected")
    {
        std::vector<double> g(3, 1.0);
        std::vector<std::uint8_t> out(4);
        CHECK_THROWS_AS(classify_rounds(SchemeKind::Direct, RoundLinks{}, g, {}, {}, out), std::invalid_argument);
        std::vector<std::uint8_t> ok(3);
        CHECK_NOTHROW(classify_rounds(SchemeKind::Direct, RoundLinks{}, g, {}, {}, ok));
        CHECK_THROWS_AS(classify_rounds(SchemeKind::DfMrc, RoundLinks{}, g, g, {}, ok), std::invalid_argument);
    }
}
