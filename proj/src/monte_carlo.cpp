#include "coopnet/monte_carlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "coopnet/kernels/kernels.hpp"

namespace coopnet {

void McConfig::validate() const
{
    if (trials < 1) throw InvariantError("mc.trials", "must be >= 1");
    if (batch_size < 1) throw InvariantError("mc.batch_size", "must be >= 1");
}

ChannelGains sample_channel_gains(std::uint64_t seed, std::uint64_t trial, std::uint64_t round)
{
    const kernels::StreamKey key{seed, trial};
    ChannelGains g;
    kernels::unit_exponentials(key, kernels::Channel::SourceDest, round, {&g.sd, 1});
    kernels::unit_exponentials(key, kernels::Channel::SourceRelay, round, {&g.sr, 1});
    kernels::unit_exponentials(key, kernels::Channel::RelayDest, round, {&g.rd, 1});
    return g;
}

double effective_af_snr(double g_sr, double g_rd, const NetworkParams& params,
                        const Geometry& geom)
{
    return kernels::af_end_to_end_snr(link::mean_link_snr(params, geom.d_sr()) * g_sr,
                                      link::mean_link_snr(params, geom.d_rd()) * g_rd);
}

namespace {

// Running mean and sum of squared deviations; merged with Chan's update.
struct Moments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    static Moments merge(const Moments& a, const Moments& b)
    {
        if (a.n == 0) return b;
        if (b.n == 0) return a;
        Moments out;
        out.n = a.n + b.n;
        const double na = static_cast<double>(a.n);
        const double nb = static_cast<double>(b.n);
        const double delta = b.mean - a.mean;
        out.mean = a.mean + delta * (nb / static_cast<double>(out.n));
        out.m2 = a.m2 + b.m2 + delta * delta * (na * nb / static_cast<double>(out.n));
        return out;
    }

    double standard_error() const
    {
        if (n < 2) return 0.0;
        const double nd = static_cast<double>(n);
        return std::sqrt(std::max(m2, 0.0) / (nd - 1.0) / nd);
    }
};

struct BatchTally {
    Moments energy;
    Moments rounds;
    std::uint64_t total_rounds = 0;

    static BatchTally merge(const BatchTally& a, const BatchTally& b)
    {
        return {Moments::merge(a.energy, b.energy), Moments::merge(a.rounds, b.rounds),
                a.total_rounds + b.total_rounds};
    }
};

struct RoundModel {
    SchemeKind kind;
    kernels::RoundLinks links;
    double energy_plain;   ///< round without a relay transmission [J]
    double energy_relay;   ///< round in which the relay also transmits [J]
};

constexpr std::size_t kFirstBatch = 2;
constexpr std::size_t kMaxBatch = 256;

class TrialRunner {
public:
    TrialRunner(const RoundModel& model, std::uint64_t seed) : model_(model), seed_(seed) {}

    // Energy [J] and rounds spent delivering one packet.
    std::pair<double, std::uint64_t> run(std::uint64_t trial)
    {
        const kernels::StreamKey key{seed_, trial};
        const bool relay_used = model_.kind != SchemeKind::Direct;
        double energy = 0.0;
        std::uint64_t round = 0;
        std::size_t batch = kFirstBatch;
        for (;;) {
            const std::span<double> sd(g_sd_.data(), batch);
            const std::span<std::uint8_t> codes(codes_.data(), batch);
            kernels::unit_exponentials(key, kernels::Channel::SourceDest, round, sd);
            std::span<double> sr;
            std::span<double> rd;
            if (relay_used) {
                sr = {g_sr_.data(), batch};
                rd = {g_rd_.data(), batch};
                kernels::unit_exponentials(key, kernels::Channel::SourceRelay, round, sr);
                kernels::unit_exponentials(key, kernels::Channel::RelayDest, round, rd);
            }
            kernels::classify_rounds(model_.kind, model_.links, sd, sr, rd, codes);
            for (std::uint8_t code : codes) {
                ++round;
                energy += (code & kernels::kRelayActive) ? model_.energy_relay : model_.energy_plain;
                if (code & kernels::kDelivered) return {energy, round};
            }
            if (round >= kMaxRoundsPerTrial) {
                throw TrialBudgetError("simulate_scheme: trial " + std::to_string(trial) +
                                       " exceeded " + std::to_string(kMaxRoundsPerTrial) + " rounds");
            }
            batch = std::min<std::size_t>(
                {batch * 4, kMaxBatch, static_cast<std::size_t>(kMaxRoundsPerTrial - round)});
        }
    }

private:
    const RoundModel& model_;
    std::uint64_t seed_;
    std::array<double, kMaxBatch> g_sd_{};
    std::array<double, kMaxBatch> g_sr_{};
    std::array<double, kMaxBatch> g_rd_{};
    std::array<std::uint8_t, kMaxBatch> codes_{};
};

BatchTally run_batch(const RoundModel& model, std::uint64_t seed, std::uint64_t first,
                     std::uint64_t last)
{
    TrialRunner runner(model, seed);
    BatchTally tally;
    for (std::uint64_t trial = first; trial < last; ++trial) {
        const auto [energy, rounds] = runner.run(trial);
        tally.energy.add(energy);
        tally.rounds.add(static_cast<double>(rounds));
        tally.total_rounds += rounds;
    }
    return tally;
}

// Fixed-shape pairwise reduction, so the result does not depend on which
// thread finished which batch.
BatchTally reduce(const std::vector<BatchTally>& tallies, std::size_t lo, std::size_t hi)
{
    if (hi - lo == 1) return tallies[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return BatchTally::merge(reduce(tallies, lo, mid), reduce(tallies, mid, hi));
}

RoundModel make_round_model(const NetworkParams& params, const Geometry& geom,
                            const Modulation& mod, SchemeKind kind)
{
    const LinkBudget budget = link::link_budget(params, mod);
    const RoundPowers powers = round_powers(params, budget.alpha);
    const double transient = params.p_tr * params.t_tr;

    RoundModel model{};
    model.kind = kind;
    model.links.gamma_th = budget.gamma_th;
    model.links.mean_sd = link::mean_link_snr(params, geom.d_sd);
    model.links.mean_sr = link::mean_link_snr(params, geom.d_sr());
    model.links.mean_rd = link::mean_link_snr(params, geom.d_rd());
    if (kind == SchemeKind::Direct) {
        model.energy_plain = powers.direct * budget.t_on + transient;
        model.energy_relay = model.energy_plain;
    } else {
        model.energy_plain = powers.one_slot * budget.t_on + transient;
        model.energy_relay = powers.two_slot * budget.t_on + transient;
    }
    return model;
}

}  // namespace

McEstimate simulate_scheme(const NetworkParams& params, const Geometry& geom,
                           const Modulation& mod, SchemeKind kind, const McConfig& cfg)
{
    params.validate();
    geom.validate();
    cfg.validate();
    const RoundModel model = make_round_model(params, geom, mod, kind);

    const std::uint64_t n_batches = (cfg.trials + cfg.batch_size - 1) / cfg.batch_size;
    std::vector<BatchTally> tallies(n_batches);

    unsigned n_threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    n_threads = static_cast<unsigned>(std::clamp<std::uint64_t>(n_threads, 1, n_batches));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_batches) return;
            try {
                const std::uint64_t first = b * cfg.batch_size;
                tallies[b] = run_batch(model, cfg.seed, first, std::min(first + cfg.batch_size, cfg.trials));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_batches);
                return;
            }
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    const BatchTally total = reduce(tallies, 0, tallies.size());
    McEstimate est;
    est.trials = cfg.trials;
    est.rounds = total.total_rounds;
    const double rounds = static_cast<double>(total.total_rounds);
    est.p_success_hat = static_cast<double>(cfg.trials) / rounds;
    est.p_success_se = std::sqrt(est.p_success_hat * (1.0 - est.p_success_hat) / rounds);
    est.e_bit_hat = total.energy.mean / params.l_bits;
    est.e_bit_se = total.energy.standard_error() / params.l_bits;
    est.mean_rounds = total.rounds.mean;
    est.mean_rounds_se = total.rounds.standard_error();
    return est;
}

}  // namespace coopnet
