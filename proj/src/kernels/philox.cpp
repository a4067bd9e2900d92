#include <bit>
#include <cstdint>

#include "coopnet/kernels/kernels.hpp"

namespace coopnet::kernels {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key)
{
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

double neg_log_unit(double u)
{
    constexpr double ln2_hi = 6.93147180369123816490e-01;
    constexpr double ln2_lo = 1.90821492927058770002e-10;
    constexpr double lg1 = 6.666666666666735130e-01;
    constexpr double lg2 = 3.999999999940941908e-01;
    constexpr double lg3 = 2.857142874366239149e-01;
    constexpr double lg4 = 2.222219843214978396e-01;
    constexpr double lg5 = 1.818357216161805012e-01;
    constexpr double lg6 = 1.531383769920937332e-01;
    constexpr double lg7 = 1.479819860511658591e-01;

    // u is normal and positive: split into 2^k * m with m in [sqrt(2)/2, sqrt(2)).
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(u);
    std::uint32_t hx = static_cast<std::uint32_t>(bits >> 32);
    int k = static_cast<int>(hx >> 20) - 1023;
    hx &= 0x000fffffu;
    const std::uint32_t i = (hx + 0x95f64u) & 0x100000u;
    const std::uint64_t mbits = (static_cast<std::uint64_t>(hx | (i ^ 0x3ff00000u)) << 32) |
                                (bits & 0xffffffffu);
    k += static_cast<int>(i >> 20);
    const double f = std::bit_cast<double>(mbits) - 1.0;

    const double s = f / (2.0 + f);
    const double dk = static_cast<double>(k);
    const double z = s * s;
    const double w = z * z;
    const double t1 = w * (lg2 + w * (lg4 + w * lg6));
    const double t2 = z * (lg1 + w * (lg3 + w * (lg5 + w * lg7)));
    const double r = t2 + t1;
    const double hfsq = 0.5 * f * f;
    const double log_u = dk * ln2_hi - ((hfsq - (s * (hfsq + r) + dk * ln2_lo)) - f);
    return -log_u;
}

}  // namespace coopnet::kernels
