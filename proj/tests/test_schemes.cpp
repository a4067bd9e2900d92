#include <doctest.h>

#include <random>

#include "coopnet/schemes.hpp"
#include "oracle_table.hpp"

using namespace coopnet;
using coopnet::testing::rel_error;

namespace {

const NetworkParams kTable;

struct Expected {
    SchemeKind kind;
    double p_success;
    double e_bit;
    double gain;
};

void check_point(int b, Geometry geom, std::initializer_list<Expected> rows, double tol)
{
    for (const Expected& want : rows) {
        CAPTURE(scheme_name(want.kind));
        const SchemeResult got = evaluate(want.kind, kTable, geom, Modulation(b));
        CHECK(got.kind == want.kind);
        CHECK(rel_error(got.p_success, want.p_success) < tol);
        CHECK(rel_error(got.e_bit, want.e_bit) < tol);
        CHECK(rel_error(got.gain, want.gain) < tol);
    }
}

}  // namespace

TEST_SUITE("scheme names")
{
    TEST_CASE("round trip")
    {
        for (SchemeKind k : kAllSchemes) CHECK(parse_scheme(scheme_name(k)) == k);
        CHECK(parse_scheme("af-mrc") == SchemeKind::AfMrc);
        CHECK(parse_scheme("DF") == std::nullopt);
        CHECK(parse_scheme("") == std::nullopt);
        CHECK(uses_mrc(SchemeKind::DfMrc));
        CHECK_FALSE(uses_mrc(SchemeKind::AfNonMrc));
        CHECK_FALSE(uses_mrc(SchemeKind::Direct));
    }
}

TEST_SUITE("closed-form evaluation")
{
    TEST_CASE("direct link at b = 2, d = 50 m")
    {
        const SchemeResult r = evaluate_direct(kTable, Geometry{50.0, 0.5}, Modulation(2));
        CHECK(rel_error(r.p_success, 0.997239171223085575) < 1e-13);
        CHECK(rel_error(r.e_bit, 2.48894548087921e-5) < 1e-13);
        CHECK(r.gain == 1.0);
        CHECK(rel_error(r.p_avg, (1.0 + 1.0 / 0.35 - 1.0) * 0.1 + 0.0982 + 0.1125) < 1e-15);
    }

    TEST_CASE("all schemes at b = 10, d = 100 m, midpoint relay")
    {
        check_point(10, Geometry{100.0, 0.5},
                    {
                        {SchemeKind::Direct, 0.000789375125591861523, 0.0128696391900251578, 1.0},
                        {SchemeKind::AfNonMrc, 0.0726617158233878502, 0.00029499581230783981, 43.6265148625065219},
                        {SchemeKind::AfMrc, 0.11978393921744167, 0.000178946376476159439, 71.9189706070396255},
                        {SchemeKind::DfNonMrc, 0.193935801510586788, 0.0000811965007064157316, 158.499923987589589},
                        {SchemeKind::DfMrc, 0.218994636967128229, 0.0000719054524002673214, 178.980018349447345},
                    },
                    1e-9);
    }

    TEST_CASE("all schemes at b = 8, d = 60 m, midpoint relay")
    {
        check_point(8, Geometry{60.0, 0.5},
                    {
                        {SchemeKind::Direct, 0.689044786246947454, 0.0000175424830923442623, 1.0},
                        {SchemeKind::AfNonMrc, 0.971243382626389753, 0.0000177632998756712789, 0.987568932300160709},
                        {SchemeKind::AfMrc, 0.995316540460061838, 0.0000173336689952719381, 1.01204673385243955},
                        {SchemeKind::DfNonMrc, 0.974466604502975679, 0.000017542791621240250, 0.999982412782261256},
                        {SchemeKind::DfMrc, 0.984883323803058827, 0.0000173572484897425226, 1.010671887465989},
                    },
                    1e-10);
    }

    TEST_CASE("all schemes at b = 4, d = 50 m, relay at 0.3")
    {
        check_point(4, Geometry{50.0, 0.3},
                    {
                        {SchemeKind::Direct, 0.986804359660238483, 0.0000183670326136208681, 1.0},
                        {SchemeKind::AfNonMrc, 0.999938206897285579, 0.0000211776427578265256, 0.867284089341484759},
                        {SchemeKind::AfMrc, 0.99999959155036544, 0.0000211763427750418097, 0.867337330564371024},
                        {SchemeKind::DfNonMrc, 0.999938444617315203, 0.0000211775634914813129, 0.867287335533618754},
                        {SchemeKind::DfMrc, 0.999995524404169523, 0.0000211763546752609525, 0.867336843157333187},
                    },
                    1e-11);
    }

    TEST_CASE("round powers")
    {
        const RoundPowers p = round_powers(kTable, 2.0);
        CHECK(p.direct == doctest::Approx(0.3 + 0.0982 + 0.1125));
        CHECK(p.one_slot == doctest::Approx(0.3 + 0.0982 + 0.225));
        CHECK(p.two_slot == doctest::Approx(0.6 + 0.1964 + 0.3375));
    }
}

TEST_SUITE("properties")
{
    TEST_CASE("energy per bit is reconstructible from the reported fields")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int evaluated = 0;
        for (int i = 0; i < 1000; ++i) {
            NetworkParams p;
            p.p_t = 0.01 + 0.5 * unit(rng);
            p.beta = 2.0 + 2.0 * unit(rng);
            p.l_bits = std::floor(1000.0 + 40000.0 * unit(rng));
            p.eta = 0.1 + 0.9 * unit(rng);
            p.p_ct = 0.01 + 0.2 * unit(rng);
            p.p_cr = 0.01 + 0.2 * unit(rng);
            p.target_ber = std::pow(10.0, -2.0 - 4.0 * unit(rng));
            const Geometry g{5.0 + 95.0 * unit(rng), 0.05 + 0.9 * unit(rng)};
            const Modulation mod(2 + 2 * static_cast<int>(5.0 * unit(rng)));
            const SchemeKind kind = kAllSchemes[i % 5];
            SchemeResult r;
            try {
                r = evaluate(kind, p, g, mod);
            } catch (const DegenerateSuccessError&) {
                continue;
            }
            ++evaluated;
            CHECK(r.e_bit == energy_per_bit(p, r.p_avg, r.t_on, r.p_success));
            CHECK(r.e_bit == (r.p_avg * r.t_on + p.p_tr * p.t_tr) / (p.l_bits * r.p_success));
            CHECK(r.p_success > 0.0);
            CHECK(r.p_success <= 1.0);
            CHECK(r.gain > 0.0);
        }
        CHECK(evaluated > 900);
    }

    TEST_CASE("MRC never costs energy")
    {
        for (int b : {2, 4, 6, 8, 10}) {
            for (double d : {5.0, 25.0, 50.0, 75.0, 100.0}) {
                for (double t : {0.2, 0.5, 0.8}) {
                    const Geometry g{d, t};
                    const Modulation mod(b);
                    const auto af = evaluate_af(kTable, g, mod, false);
                    const auto af_mrc = evaluate_af(kTable, g, mod, true);
                    const auto df = evaluate_df(kTable, g, mod, false);
                    const auto df_mrc = evaluate_df(kTable, g, mod, true);
                    CHECK(af_mrc.p_avg == af.p_avg);
                    CHECK(df_mrc.p_avg == df.p_avg);
                    CHECK(af_mrc.p_success >= af.p_success);
                    CHECK(df_mrc.p_success >= df.p_success);
                    CHECK(af_mrc.e_bit <= af.e_bit);
                    CHECK(df_mrc.e_bit <= df.e_bit);
                }
            }
        }
    }

    TEST_CASE("DF with a relay next to the source")
    {
        const Modulation mod(8);
        const double d = 80.0;
        const double t = 1e-9;
        const double g = link::link_budget(kTable, mod).gamma_th;
        const double sd_out = link::cdf_exponential_link(g, kTable, d);
        const double rd_out = link::cdf_exponential_link(g, kTable, d);
        const double limit = (1.0 - sd_out) + sd_out * (1.0 - rd_out);
        CHECK(rel_error(evaluate_df(kTable, Geometry{d, t}, mod, false).p_success, limit) < 1e-8);
    }

    TEST_CASE("short links approach the outage-free energy")
    {
        const Modulation mod(4);
        const SchemeResult r = evaluate_direct(kTable, Geometry{1e-3, 0.5}, mod);
        const LinkBudget lb = link::link_budget(kTable, mod);
        const double ea = (round_powers(kTable, lb.alpha).direct * lb.t_on + kTable.p_tr * kTable.t_tr) / kTable.l_bits;
        CHECK(r.p_success == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rel_error(r.e_bit, ea) < 1e-12);
    }

    TEST_CASE("degenerate success is reported")
    {
        CHECK_THROWS_AS(evaluate_direct(kTable, Geometry{300.0, 0.5}, Modulation(10)), DegenerateSuccessError);
        CHECK_THROWS_AS(evaluate(SchemeKind::AfNonMrc, kTable, Geometry{1000.0, 0.5}, Modulation(10)),
                        DegenerateSuccessError);
    }

    TEST_CASE("a hopeless direct link does not invalidate the relayed schemes")
    {
        const Geometry g{200.0, 0.5};
        const SchemeResult df = evaluate_df(kTable, g, Modulation(10), true);
        CHECK(df.p_success > 1e-7);
        CHECK(df.gain > 1e15);
    }

    TEST_CASE("invalid inputs")
    {
        CHECK_THROWS_AS(evaluate_af(kTable, Geometry{50.0, 1.2}, Modulation(4), true), InvariantError);
        NetworkParams p;
        p.eta = -0.1;
        CHECK_THROWS_AS(evaluate_direct(p, Geometry{}, Modulation(4)), InvariantError);
    }
}

TEST_SUITE("optimal constellation")
{
    TEST_CASE("large constellations win on short links")
    {
        for (SchemeKind k : kAllSchemes) {
            CAPTURE(scheme_name(k));
            const auto choice = optimal_constellation(kTable, Geometry{5.0, 0.5}, k);
            CHECK(choice.b == 10);
            CHECK(choice.excluded.empty());
        }
    }

    TEST_CASE("candidate order does not matter")
    {
        const int reversed[] = {10, 8, 6, 4, 2};
        for (double d : {25.0, 60.0, 100.0}) {
            const auto a = optimal_constellation(kTable, Geometry{d, 0.5}, SchemeKind::DfMrc);
            const auto b = optimal_constellation(kTable, Geometry{d, 0.5}, SchemeKind::DfMrc, reversed);
            CHECK(a.b == b.b);
            CHECK(a.result.e_bit == b.result.e_bit);
        }
    }

    TEST_CASE("the chosen candidate minimizes energy")
    {
        const Geometry g{75.0, 0.5};
        const auto choice = optimal_constellation(kTable, g, SchemeKind::AfMrc);
        for (int b : kDefaultConstellations) {
            CHECK(choice.result.e_bit <= evaluate(SchemeKind::AfMrc, kTable, g, Modulation(b)).e_bit);
        }
    }

    TEST_CASE("degenerate candidates are excluded, not fatal")
    {
        const auto choice = optimal_constellation(kTable, Geometry{300.0, 0.5}, SchemeKind::Direct);
        CHECK(choice.b < 10);
        REQUIRE_FALSE(choice.excluded.empty());
        CHECK(choice.excluded.back() == 10);
        const int only_large[] = {10};
        CHECK_THROWS_AS(optimal_constellation(kTable, Geometry{300.0, 0.5}, SchemeKind::Direct, only_large),
                        DegenerateSuccessError);
    }
}
