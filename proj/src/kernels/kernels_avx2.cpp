// AVX2 variants of the simulator kernels. This translation unit alone is
// compiled with -mavx2 and is only entered after a runtime CPU check.

#include <immintrin.h>

#include "coopnet/kernels/kernels.hpp"

namespace coopnet::kernels::detail {

namespace {

struct Lo32Hi32 {
    __m256i lo;
    __m256i hi;
};

// 32x32 -> 64 bit products of all eight lanes.
inline Lo32Hi32 mulhilo(__m256i a, __m256i m)
{
    const __m256i even = _mm256_mul_epu32(a, m);
    const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
    return {_mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA),
            _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA)};
}

// Eight Philox4x32-10 blocks in structure-of-arrays form.
inline void philox8(__m256i& c0, __m256i& c1, __m256i& c2, __m256i& c3, std::uint32_t key0,
                    std::uint32_t key1)
{
    const __m256i m0 = _mm256_set1_epi32(static_cast<int>(0xD2511F53u));
    const __m256i m1 = _mm256_set1_epi32(static_cast<int>(0xCD9E8D57u));
    for (int round = 0; round < 10; ++round) {
        const __m256i k0 = _mm256_set1_epi32(static_cast<int>(key0));
        const __m256i k1 = _mm256_set1_epi32(static_cast<int>(key1));
        const Lo32Hi32 p0 = mulhilo(c0, m0);
        const Lo32Hi32 p1 = mulhilo(c2, m1);
        const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(p1.hi, c1), k0);
        const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(p0.hi, c3), k1);
        c0 = n0;
        c1 = p1.lo;
        c2 = n2;
        c3 = p0.lo;
        key0 += 0x9E3779B9u;
        key1 += 0xBB67AE85u;
    }
}

// 64-bit lanes holding (hi << 32 | lo) random words -> uniforms in (0, 1].
inline __m256d unit_interval(__m256i words)
{
    const __m256i x = _mm256_srli_epi64(words, 11);
    const __m256i v = _mm256_sub_epi64(_mm256_set1_epi64x(std::int64_t{1} << 53), x);
    const __m256i magic = _mm256_set1_epi64x(0x4330000000000000);
    const __m256d two52 = _mm256_set1_pd(0x1p52);
    const __m256i lo = _mm256_and_si256(v, _mm256_set1_epi64x(0xffffffff));
    const __m256i hi = _mm256_srli_epi64(v, 32);
    const __m256d d_lo = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(lo, magic)), two52);
    const __m256d d_hi = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(hi, magic)), two52);
    const __m256d d = _mm256_add_pd(_mm256_mul_pd(d_hi, _mm256_set1_pd(0x1p32)), d_lo);
    return _mm256_mul_pd(d, _mm256_set1_pd(0x1p-53));
}

// Lane-wise copy of neg_log_unit.
inline __m256d neg_log_unit4(__m256d u)
{
    const __m256i bits = _mm256_castpd_si256(u);
    __m256i hx = _mm256_srli_epi64(bits, 32);
    __m256i k = _mm256_sub_epi64(_mm256_srli_epi64(hx, 20), _mm256_set1_epi64x(1023));
    hx = _mm256_and_si256(hx, _mm256_set1_epi64x(0x000fffff));
    const __m256i i = _mm256_and_si256(_mm256_add_epi64(hx, _mm256_set1_epi64x(0x95f64)),
                                       _mm256_set1_epi64x(0x100000));
    const __m256i new_hi = _mm256_or_si256(hx, _mm256_xor_si256(i, _mm256_set1_epi64x(0x3ff00000)));
    const __m256i mbits = _mm256_or_si256(_mm256_slli_epi64(new_hi, 32),
                                          _mm256_and_si256(bits, _mm256_set1_epi64x(0xffffffff)));
    k = _mm256_add_epi64(k, _mm256_srli_epi64(i, 20));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d f = _mm256_sub_pd(_mm256_castsi256_pd(mbits), one);
    // small signed integer -> double via the 1.5 * 2^52 bias
    const __m256d bias = _mm256_set1_pd(0x1.8p52);
    const __m256d dk =
        _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(k, _mm256_castpd_si256(bias))), bias);

    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
    const __m256d z = _mm256_mul_pd(s, s);
    const __m256d w = _mm256_mul_pd(z, z);
    auto c = [](double v) { return _mm256_set1_pd(v); };
    const __m256d t1 = _mm256_mul_pd(
        w, _mm256_add_pd(c(3.999999999940941908e-01),
                         _mm256_mul_pd(w, _mm256_add_pd(c(2.222219843214978396e-01),
                                                        _mm256_mul_pd(w, c(1.531383769920937332e-01))))));
    const __m256d t2 = _mm256_mul_pd(
        z, _mm256_add_pd(
               c(6.666666666666735130e-01),
               _mm256_mul_pd(w, _mm256_add_pd(c(2.857142874366239149e-01),
                                              _mm256_mul_pd(w, _mm256_add_pd(c(1.818357216161805012e-01),
                                                                             _mm256_mul_pd(w, c(1.479819860511658591e-01))))))));
    const __m256d r = _mm256_add_pd(t2, t1);
    const __m256d hfsq = _mm256_mul_pd(_mm256_mul_pd(c(0.5), f), f);
    const __m256d inner = _mm256_add_pd(_mm256_mul_pd(s, _mm256_add_pd(hfsq, r)),
                                        _mm256_mul_pd(dk, c(1.90821492927058770002e-10)));
    const __m256d log_u = _mm256_sub_pd(_mm256_mul_pd(dk, c(6.93147180369123816490e-01)),
                                        _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f));
    return _mm256_xor_pd(log_u, _mm256_set1_pd(-0.0));
}

inline void store_interleaved(double* out, __m256d even_a, __m256d odd_a, __m256d even_b,
                              __m256d odd_b)
{
    // even_a/odd_a hold pairs {0,1 | 4,5}, even_b/odd_b pairs {2,3 | 6,7}.
    const __m256d a_lo = _mm256_unpacklo_pd(even_a, odd_a);
    const __m256d a_hi = _mm256_unpackhi_pd(even_a, odd_a);
    const __m256d b_lo = _mm256_unpacklo_pd(even_b, odd_b);
    const __m256d b_hi = _mm256_unpackhi_pd(even_b, odd_b);
    _mm256_storeu_pd(out + 0, _mm256_permute2f128_pd(a_lo, a_hi, 0x20));
    _mm256_storeu_pd(out + 4, _mm256_permute2f128_pd(b_lo, b_hi, 0x20));
    _mm256_storeu_pd(out + 8, _mm256_permute2f128_pd(a_lo, a_hi, 0x31));
    _mm256_storeu_pd(out + 12, _mm256_permute2f128_pd(b_lo, b_hi, 0x31));
}

}  // namespace

void unit_exponentials_avx2(StreamKey key, Channel channel, std::uint64_t first_round,
                            std::span<double> out)
{
    std::size_t done = 0;
    if ((first_round & 1) && !out.empty()) {
        unit_exponentials_scalar(key, channel, first_round, out.first(1));
        done = 1;
    }
    const auto key0 = static_cast<std::uint32_t>(key.seed);
    const auto key1 = static_cast<std::uint32_t>(key.seed >> 32);
    const __m256i lane = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    for (; done + 16 <= out.size(); done += 16) {
        const std::uint64_t pair = (first_round + done) >> 1;
        __m256i c0 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(key.trial)));
        __m256i c1 = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(key.trial >> 32)));
        __m256i c2 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(pair))), lane);
        __m256i c3 = _mm256_set1_epi32(static_cast<int>(channel));
        philox8(c0, c1, c2, c3, key0, key1);

        const __m256d even_a = neg_log_unit4(unit_interval(_mm256_unpacklo_epi32(c0, c1)));
        const __m256d even_b = neg_log_unit4(unit_interval(_mm256_unpackhi_epi32(c0, c1)));
        const __m256d odd_a = neg_log_unit4(unit_interval(_mm256_unpacklo_epi32(c2, c3)));
        const __m256d odd_b = neg_log_unit4(unit_interval(_mm256_unpackhi_epi32(c2, c3)));
        store_interleaved(out.data() + done, even_a, odd_a, even_b, odd_b);
    }
    if (done < out.size()) {
        unit_exponentials_scalar(key, channel, first_round + done, out.subspan(done));
    }
}

void classify_rounds_avx2(SchemeKind kind, const RoundLinks& links, const double* g_sd,
                          const double* g_sr, const double* g_rd, std::uint8_t* out,
                          std::size_t n)
{
    const __m256d th = _mm256_set1_pd(links.gamma_th);
    const __m256d mean_sd = _mm256_set1_pd(links.mean_sd);
    const __m256d mean_sr = _mm256_set1_pd(links.mean_sr);
    const __m256d mean_rd = _mm256_set1_pd(links.mean_rd);
    const __m256d one = _mm256_set1_pd(1.0);
    const bool mrc = uses_mrc(kind);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d snr_sd = _mm256_mul_pd(mean_sd, _mm256_loadu_pd(g_sd + i));
        const __m256d sd_ok = _mm256_cmp_pd(snr_sd, th, _CMP_GE_OQ);
        __m256d delivered = sd_ok;
        __m256d relay = _mm256_setzero_pd();
        if (kind == SchemeKind::AfNonMrc || kind == SchemeKind::AfMrc) {
            const __m256d a = _mm256_mul_pd(mean_sr, _mm256_loadu_pd(g_sr + i));
            const __m256d b = _mm256_mul_pd(mean_rd, _mm256_loadu_pd(g_rd + i));
            const __m256d relayed = _mm256_div_pd(_mm256_mul_pd(a, b), _mm256_add_pd(_mm256_add_pd(a, b), one));
            const __m256d combined = mrc ? _mm256_add_pd(snr_sd, relayed) : relayed;
            relay = _mm256_andnot_pd(sd_ok, _mm256_cmp_pd(one, one, _CMP_EQ_OQ));
            delivered = _mm256_or_pd(sd_ok, _mm256_cmp_pd(combined, th, _CMP_GE_OQ));
        } else if (kind == SchemeKind::DfNonMrc || kind == SchemeKind::DfMrc) {
            const __m256d sr_ok = _mm256_cmp_pd(_mm256_mul_pd(mean_sr, _mm256_loadu_pd(g_sr + i)), th, _CMP_GE_OQ);
            const __m256d snr_rd = _mm256_mul_pd(mean_rd, _mm256_loadu_pd(g_rd + i));
            const __m256d combined = mrc ? _mm256_add_pd(snr_sd, snr_rd) : snr_rd;
            relay = _mm256_andnot_pd(sd_ok, sr_ok);
            delivered = _mm256_or_pd(sd_ok, _mm256_and_pd(relay, _mm256_cmp_pd(combined, th, _CMP_GE_OQ)));
        }
        const int del_bits = _mm256_movemask_pd(delivered);
        const int relay_bits = _mm256_movemask_pd(relay);
        for (int j = 0; j < 4; ++j) {
            out[i + j] = static_cast<std::uint8_t>(((del_bits >> j) & 1) | (((relay_bits >> j) & 1) << 1));
        }
    }
    if (i < n) {
        const bool direct = kind == SchemeKind::Direct;
        classify_rounds_scalar(kind, links, g_sd + i, direct ? nullptr : g_sr + i,
                               direct ? nullptr : g_rd + i, out + i, n - i);
    }
}

}  // namespace coopnet::kernels::detail
