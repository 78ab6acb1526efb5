#pragma once

// Seeded Monte Carlo check of the closed-form design probabilities.
//
// Random numbers come from a counter-based generator: draw k of replicate i
// under seed s is splitmix64(splitmix64(s ^ splitmix64(i)) + k * golden), so
// every replicate owns an independent substream and the tallies do not depend
// on how replicates are scheduled across threads. Normal variates use
// inverse-transform sampling through std_normal_quantile.

#include <cstdint>
#include <optional>

#include "sgpv/design.hpp"
#include "sgpv/reliability.hpp"

namespace sgpv {

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t next_u64() noexcept;
    // Uniform on the open interval (0, 1) with 53-bit resolution.
    double next_uniform() noexcept;
    double next_normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

struct SimConfig {
    DesignConfig design;
    double theta = 0.0;  // data-generating hypothesis
    std::uint64_t replicates = 100000;
    std::uint64_t seed = 0;
};

struct OutcomeCounts {
    std::uint64_t alt = 0;
    std::uint64_t null = 0;
    std::uint64_t inconclusive = 0;
};

struct SimResult {
    OutcomeProbs empirical;
    OutcomeCounts counts;
    OutcomeProbs binomial_se;  // sqrt(p_hat (1 - p_hat) / replicates)
};

// threads == 0 uses the hardware concurrency. Results are bitwise identical
// for any thread count.
SimResult simulate_outcomes(const SimConfig& cfg, unsigned threads = 0);

struct ReliabilitySimResult {
    std::uint64_t zero_events = 0;        // replicates with p_delta = 0
    std::uint64_t zero_under_null = 0;    // ... whose truth was H0
    std::uint64_t one_events = 0;         // replicates with p_delta = 1
    std::uint64_t one_under_alt = 0;      // ... whose truth was H1
    std::optional<double> fdr;            // absent without p_delta = 0 events
    std::optional<double> fcr;            // absent without p_delta = 1 events
    std::optional<double> fdr_se;
    std::optional<double> fcr_se;
};

// Each replicate draws its truth, H1 (theta = theta1) with probability
// r / (1 + r) and otherwise H0 (theta = theta0); cfg.theta is not used.
ReliabilitySimResult simulate_reliability(const SimConfig& cfg, PriorOdds odds, double theta1,
                                          unsigned threads = 0);

}  // namespace sgpv
