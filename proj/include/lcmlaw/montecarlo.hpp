#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lcmlaw/rational.hpp"

namespace lcmlaw {

struct SamplerConfig {
    int k = 2;
    u64 prime_limit = 10'000; // primes above P are treated as contributing nothing
    u64 seed = 0;
    u64 sample_count = 1'000'000;
    unsigned threads = 1; // does not affect results

    void validate() const;
};

// SplitMix64 (Steele, Lea, Flood). Each sample gets its own stream seeded by
// mix_seed(seed, index), so results do not depend on how samples are split
// across workers.
class SplitMix64 {
public:
    explicit SplitMix64(u64 seed) : state_(seed) {}
    u64 next();
    // Uniform on (0, 1] with 53 random bits.
    long double uniform_open0();
    // Uniform on (0, 1) (midpoints of the 2^53 grid).
    long double uniform_open();
    // Exp(1).
    long double exponential();

private:
    u64 state_;
};

inline constexpr const char* kGeneratorName = "splitmix64";

u64 mix_seed(u64 seed, u64 index);

// m >= 0 with P(m) = (1 - 1/p) p^{-m}, by inversion: floor(-log U / log p).
u64 sample_geometric(u64 p, SplitMix64& rng);

// Draws n = prod_{p <= P} p^{sum_j G_j(p) - max_j G_j(p)}, so R_k = 1/n.
// Only primes where at least two of the k geometric variables are nonzero
// contribute; those are located by skipping along cumulative hazards.
class RkSampler {
public:
    RkSampler(int k, u64 prime_limit);
    // Saturates at u64 max; `saturated` is set when that happens.
    u64 sample(SplitMix64& rng, bool* saturated = nullptr) const;
    int k() const { return k_; }
    // Upper bound on P(some prime > P would have contributed).
    long double truncation_bias_bound() const;

private:
    int k_;
    u64 prime_limit_;
    std::vector<u64> primes_;
    std::vector<long double> cumulative_; // cumulative hazards -log(1 - q_p)
    std::vector<std::vector<long double>> count_cdf_; // per prime, CDF of N | N >= 2
};

// prod of k uniforms on (0,1) divided by n ~ R_k sampler.
long double sample_limit_lcm(const RkSampler& sampler, SplitMix64& rng);

struct RkSummary {
    SamplerConfig config;
    std::map<u64, u64> counts; // n -> number of samples
    u64 saturated = 0;
    long double bias_bound = 0.0L;
};

RkSummary run_rk(const SamplerConfig& config);

struct LimitSummary {
    SamplerConfig config;
    std::vector<long double> thresholds;
    std::vector<u64> exceed;         // samples with value > t
    u64 unit_count = 0;              // samples with R_k = 1
    std::vector<u64> unit_exceed;    // among those, value > t
    long double bias_bound = 0.0L;
};

LimitSummary run_limit(const SamplerConfig& config, std::span<const long double> thresholds);

} // namespace lcmlaw
