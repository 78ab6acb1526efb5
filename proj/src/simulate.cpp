#include "sgpv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "sgpv/error.hpp"
#include "sgpv/normal.hpp"
#include "sgpv/sgpv.hpp"

namespace sgpv {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

void validate(const SimConfig& cfg) {
    cfg.design.validate();
    if (cfg.replicates < 1) throw Error(Errc::InvalidConfig, "replicates must be >= 1");
    if (!std::isfinite(cfg.theta)) throw Error(Errc::InvalidConfig, "theta must be finite");
}

// Runs body(begin, end, tally) over contiguous replicate blocks and sums the
// per-block tallies in block order.
template <typename Tally, typename Body>
Tally run_blocks(std::uint64_t replicates, unsigned threads, Body body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const std::uint64_t blocks = std::min<std::uint64_t>(threads, replicates);
    std::vector<Tally> partial(blocks);
    std::vector<std::thread> workers;
    workers.reserve(blocks);
    for (std::uint64_t b = 0; b < blocks; ++b) {
        const std::uint64_t begin = replicates * b / blocks;
        const std::uint64_t end = replicates * (b + 1) / blocks;
        workers.emplace_back([&, b, begin, end] { body(begin, end, partial[b]); });
    }
    for (auto& w : workers) w.join();
    Tally total{};
    for (const auto& p : partial) total += p;
    return total;
}

// One replicate: draw theta_hat around theta, build the z-interval and score
// it against the null.
Classification draw_outcome(CounterRng& rng, double theta, double se, double half_width,
                            const ExtendedInterval& null_interval) {
    const double estimate = theta + se * rng.next_normal();
    const ExtendedInterval interval(estimate - half_width, estimate + half_width);
    return second_gen_p(interval, null_interval).classification;
}

struct OutcomeTally {
    OutcomeCounts c;
    OutcomeTally& operator+=(const OutcomeTally& o) {
        c.alt += o.c.alt;
        c.null += o.c.null;
        c.inconclusive += o.c.inconclusive;
        return *this;
    }
};

struct ReliabilityTally {
    std::uint64_t zero = 0, zero_h0 = 0, one = 0, one_h1 = 0;
    ReliabilityTally& operator+=(const ReliabilityTally& o) {
        zero += o.zero;
        zero_h0 += o.zero_h0;
        one += o.one;
        one_h1 += o.one_h1;
        return *this;
    }
};

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64(seed ^ splitmix64(stream))) {}

std::uint64_t CounterRng::next_u64() noexcept { return splitmix64(key_ + kGolden * counter_++); }

double CounterRng::next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_normal() { return std_normal_quantile(next_uniform()); }

SimResult simulate_outcomes(const SimConfig& cfg, unsigned threads) {
    validate(cfg);
    const auto& d = cfg.design;
    const double se = d.standard_error();
    const double half_width = d.z_half_alpha() * se;
    const ExtendedInterval null_interval(d.theta0 - d.delta, d.theta0 + d.delta);

    const auto tally = run_blocks<OutcomeTally>(
        cfg.replicates, threads, [&](std::uint64_t begin, std::uint64_t end, OutcomeTally& t) {
            for (std::uint64_t i = begin; i < end; ++i) {
                CounterRng rng(cfg.seed, i);
                switch (draw_outcome(rng, cfg.theta, se, half_width, null_interval)) {
                    case Classification::AlternativeCompatible: ++t.c.alt; break;
                    case Classification::NullCompatible: ++t.c.null; break;
                    case Classification::Inconclusive: ++t.c.inconclusive; break;
                }
            }
        });

    const double reps = static_cast<double>(cfg.replicates);
    const auto freq = [&](std::uint64_t k) { return static_cast<double>(k) / reps; };
    const auto se_of = [&](double p) { return std::sqrt(p * (1.0 - p) / reps); };

    SimResult result;
    result.counts = tally.c;
    result.empirical = {freq(tally.c.alt), freq(tally.c.null), freq(tally.c.inconclusive)};
    result.binomial_se = {se_of(result.empirical.p_alt), se_of(result.empirical.p_null),
                          se_of(result.empirical.p_inconclusive)};
    return result;
}

ReliabilitySimResult simulate_reliability(const SimConfig& cfg, PriorOdds odds, double theta1,
                                          unsigned threads) {
    validate(cfg);
    if (!std::isfinite(theta1)) throw Error(Errc::InvalidConfig, "theta1 must be finite");
    const auto& d = cfg.design;
    const double se = d.standard_error();
    const double half_width = d.z_half_alpha() * se;
    const ExtendedInterval null_interval(d.theta0 - d.delta, d.theta0 + d.delta);
    const double p_alt_truth = odds.value() / (1.0 + odds.value());

    const auto tally = run_blocks<ReliabilityTally>(
        cfg.replicates, threads, [&](std::uint64_t begin, std::uint64_t end, ReliabilityTally& t) {
            for (std::uint64_t i = begin; i < end; ++i) {
                CounterRng rng(cfg.seed, i);
                const bool alt_true = rng.next_uniform() < p_alt_truth;
                const double theta = alt_true ? theta1 : d.theta0;
                switch (draw_outcome(rng, theta, se, half_width, null_interval)) {
                    case Classification::AlternativeCompatible:
                        ++t.zero;
                        if (!alt_true) ++t.zero_h0;
                        break;
                    case Classification::NullCompatible:
                        ++t.one;
                        if (alt_true) ++t.one_h1;
                        break;
                    case Classification::Inconclusive: break;
                }
            }
        });

    ReliabilitySimResult r;
    r.zero_events = tally.zero;
    r.zero_under_null = tally.zero_h0;
    r.one_events = tally.one;
    r.one_under_alt = tally.one_h1;
    if (tally.zero > 0) {
        const double f = static_cast<double>(tally.zero_h0) / static_cast<double>(tally.zero);
        r.fdr = f;
        r.fdr_se = std::sqrt(f * (1.0 - f) / static_cast<double>(tally.zero));
    }
    if (tally.one > 0) {
        const double f = static_cast<double>(tally.one_h1) / static_cast<double>(tally.one);
        r.fcr = f;
        r.fcr_se = std::sqrt(f * (1.0 - f) / static_cast<double>(tally.one));
    }
    return r;
}

}  // namespace sgpv
