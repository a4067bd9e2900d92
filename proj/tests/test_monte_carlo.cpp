#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "coopnet/kernels/kernels.hpp"
#include "coopnet/monte_carlo.hpp"

using namespace coopnet;

namespace {

const NetworkParams kTable;

struct Exact {
    double p_success;
    double e_bit;
};

// Per-round success probability of the simulated protocol, with the S-D
// fade shared between the direct check and the combiner. The closed forms in
// the schemes module treat those two events as independent; for the non-MRC
// variants the result is the same.
Exact exact_protocol(SchemeKind kind, const Geometry& geom, const Modulation& mod)
{
    const SchemeResult analytic = evaluate(kind, kTable, geom, mod);
    const double g = analytic.gamma_th;
    double p = analytic.p_success;
    if (kind == SchemeKind::AfMrc) {
        // combined < threshold already implies an S-D outage
        p = 1.0 - link::cdf_af_mrc_combined(g, kTable, geom);
    } else if (kind == SchemeKind::DfMrc) {
        const double sd_ok = 1.0 - link::cdf_exponential_link(g, kTable, geom.d_sd);
        const double sr_ok = 1.0 - link::cdf_exponential_link(g, kTable, geom.d_sr());
        const double sum_ok = link::tail_df_mrc_combined(g, kTable, geom.d_sd, geom.d_rd());
        p = sd_ok + sr_ok * (sum_ok - sd_ok);
    }
    // Wald: energy per packet is E[rounds] times the mean round energy
    return {p, energy_per_bit(kTable, analytic.p_avg, analytic.t_on, p)};
}

double z_score(double estimate, double truth, double se)
{
    return std::abs(estimate - truth) / se;
}

}  // namespace

TEST_SUITE("monte carlo")
{
    TEST_CASE("configuration checks")
    {
        McConfig cfg;
        cfg.trials = 0;
        CHECK_THROWS_AS(cfg.validate(), InvariantError);
        cfg = {};
        cfg.batch_size = 0;
        CHECK_THROWS_AS(cfg.validate(), InvariantError);
        CHECK_THROWS_AS(simulate_scheme(kTable, Geometry{50.0, 1.5}, Modulation(2), SchemeKind::AfMrc, McConfig{}),
                        InvariantError);
    }

    TEST_CASE("direct link at b = 2, d = 50 m with 10^6 packets")
    {
        McConfig cfg;
        cfg.trials = 1'000'000;
        cfg.seed = 2024;
        const McEstimate est = simulate_scheme(kTable, Geometry{50.0, 0.5}, Modulation(2), SchemeKind::Direct, cfg);
        CHECK(est.trials == cfg.trials);
        CHECK(est.rounds >= est.trials);
        CHECK(z_score(est.p_success_hat, 0.997239171223085575, est.p_success_se) <= 3.0);
        CHECK(z_score(est.e_bit_hat, 2.48894548087921e-5, est.e_bit_se) <= 3.0);
    }

    TEST_CASE("all schemes agree with the exact protocol probabilities")
    {
        // 30 points, two statistics each; 4 standard errors keeps the
        // family-wise false alarm rate of a fixed seed below 1%.
        McConfig cfg;
        cfg.trials = 200'000;
        cfg.seed = 99;
        const std::pair<int, Geometry> points[] = {
            {10, {100.0, 0.5}}, {8, {60.0, 0.5}}, {6, {100.0, 0.3}},
            {10, {50.0, 0.7}},  {4, {100.0, 0.5}}, {8, {80.0, 0.2}},
        };
        for (const auto& [b, geom] : points) {
            for (SchemeKind kind : kAllSchemes) {
                const Modulation mod(b);
                const Exact want = exact_protocol(kind, geom, mod);
                const McEstimate est = simulate_scheme(kTable, geom, mod, kind, cfg);
                CAPTURE(scheme_name(kind));
                CAPTURE(b);
                CAPTURE(geom.d_sd);
                CAPTURE(geom.relay_frac);
                CHECK(z_score(est.p_success_hat, want.p_success, est.p_success_se) <= 4.0);
                CHECK(z_score(est.e_bit_hat, want.e_bit, est.e_bit_se) <= 4.0);
            }
        }
    }

    TEST_CASE("zero threshold delivers every packet in one round")
    {
        NetworkParams p = kTable;
        p.target_ber = link::ber_mqam(0.0, Modulation(2));
        McConfig cfg;
        cfg.trials = 5000;
        for (SchemeKind kind : kAllSchemes) {
            const McEstimate est = simulate_scheme(p, Geometry{90.0, 0.5}, Modulation(2), kind, cfg);
            CHECK(est.p_success_hat == 1.0);
            CHECK(est.rounds == cfg.trials);
            CHECK(est.mean_rounds == 1.0);
            CHECK(est.mean_rounds_se == 0.0);
        }
    }

    TEST_CASE("mean rounds is the reciprocal of the success frequency")
    {
        McConfig cfg;
        cfg.trials = 20000;
        const McEstimate est = simulate_scheme(kTable, Geometry{100.0, 0.5}, Modulation(8), SchemeKind::DfNonMrc, cfg);
        CHECK(est.mean_rounds == doctest::Approx(1.0 / est.p_success_hat).epsilon(1e-12));
        CHECK(est.mean_rounds_se > 0.0);
    }

    TEST_CASE("results do not depend on thread count or instruction set")
    {
        McConfig cfg;
        cfg.trials = 30000;
        cfg.batch_size = 1000;
        cfg.seed = 5;
        const Geometry geom{75.0, 0.4};
        const Modulation mod(8);
        cfg.threads = 1;
        const McEstimate one = simulate_scheme(kTable, geom, mod, SchemeKind::AfMrc, cfg);
        cfg.threads = 4;
        const McEstimate four = simulate_scheme(kTable, geom, mod, SchemeKind::AfMrc, cfg);
        CHECK(one.rounds == four.rounds);
        CHECK(one.e_bit_hat == four.e_bit_hat);
        CHECK(one.e_bit_se == four.e_bit_se);

        const auto before = kernels::active_isa();
        kernels::set_active_isa(kernels::Isa::Scalar);
        const McEstimate scalar = simulate_scheme(kTable, geom, mod, SchemeKind::AfMrc, cfg);
        kernels::set_active_isa(before);
        CHECK(scalar.rounds == one.rounds);
        CHECK(scalar.e_bit_hat == one.e_bit_hat);
    }

    TEST_CASE("MRC dominates non-MRC on shared draws")
    {
        const Geometry geom{90.0, 0.5};
        const Modulation mod(10);
        const LinkBudget lb = link::link_budget(kTable, mod);
        const kernels::RoundLinks links{lb.gamma_th, link::mean_link_snr(kTable, geom.d_sd),
                                        link::mean_link_snr(kTable, geom.d_sr()),
                                        link::mean_link_snr(kTable, geom.d_rd())};
        const std::size_t n = 20000;
        std::vector<double> sd(n), sr(n), rd(n);
        std::size_t combined_below_branch = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const ChannelGains g = sample_channel_gains(17, i, 0);
            sd[i] = g.sd;
            sr[i] = g.sr;
            rd[i] = g.rd;
            const double relayed = effective_af_snr(g.sr, g.rd, kTable, geom);
            combined_below_branch += !(links.mean_sd * g.sd + relayed >= relayed);
        }
        CHECK(combined_below_branch == 0);
        for (auto [plain, mrc] : {std::pair{SchemeKind::AfNonMrc, SchemeKind::AfMrc},
                                  std::pair{SchemeKind::DfNonMrc, SchemeKind::DfMrc}}) {
            std::vector<std::uint8_t> a(n), b(n);
            kernels::classify_rounds(plain, links, sd, sr, rd, a);
            kernels::classify_rounds(mrc, links, sd, sr, rd, b);
            std::size_t violations = 0;
            std::size_t gained = 0;
            std::size_t activity_differs = 0;
            for (std::size_t i = 0; i < n; ++i) {
                violations += (a[i] & kernels::kDelivered) && !(b[i] & kernels::kDelivered);
                gained += !(a[i] & kernels::kDelivered) && (b[i] & kernels::kDelivered);
                // relay activity does not depend on combining
                activity_differs += (a[i] & kernels::kRelayActive) != (b[i] & kernels::kRelayActive);
            }
            CHECK(activity_differs == 0);
            CHECK(violations == 0);
            CHECK(gained > 0);
        }
    }

    TEST_CASE("hopeless links exhaust the per-trial round budget")
    {
        McConfig cfg;
        cfg.trials = 10;
        CHECK_THROWS_AS(simulate_scheme(kTable, Geometry{200.0, 0.5}, Modulation(10), SchemeKind::Direct, cfg),
                        TrialBudgetError);
    }
}
