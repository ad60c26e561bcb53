#include "lcmlaw/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lcmlaw/ntcore.hpp"
#include "lcmlaw/parallel.hpp"

namespace lcmlaw {

namespace {

constexpr std::size_t kBlocks = 16;

u64 mul_saturating(u64 a, u64 b, bool& sat)
{
    u64 r;
    if (__builtin_mul_overflow(a, b, &r)) {
        sat = true;
        return std::numeric_limits<u64>::max();
    }
    return r;
}

} // namespace

void SamplerConfig::validate() const
{
    if (k < 2) throw std::domain_error("k must be at least 2");
    if (prime_limit < 2) throw std::domain_error("prime limit must be at least 2");
    if (sample_count < 1) throw std::domain_error("sample count must be positive");
}

u64 SplitMix64::next()
{
    u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

long double SplitMix64::uniform_open0()
{
    return static_cast<long double>((next() >> 11) + 1) * 0x1.0p-53L;
}

long double SplitMix64::uniform_open()
{
    return (static_cast<long double>(next() >> 11) + 0.5L) * 0x1.0p-53L;
}

long double SplitMix64::exponential() { return -std::log(uniform_open0()); }

u64 mix_seed(u64 seed, u64 index)
{
    SplitMix64 a(seed ^ 0x6a09e667f3bcc909ULL);
    const u64 s = a.next();
    SplitMix64 b(s + index * 0xd1b54a32d192ed03ULL);
    return b.next();
}

u64 sample_geometric(u64 p, SplitMix64& rng)
{
    if (p < 2) throw std::domain_error("geometric sampler needs p >= 2");
    const long double u = rng.uniform_open0();
    return static_cast<u64>(std::floor(-std::log(u) / std::log(static_cast<long double>(p))));
}

RkSampler::RkSampler(int k, u64 prime_limit) : k_(k), prime_limit_(prime_limit)
{
    if (k < 2) throw std::domain_error("k must be at least 2");
    if (prime_limit < 2) throw std::domain_error("prime limit must be at least 2");
    long double H = 0.0L;
    for (std::uint32_t p : primes_up_to(prime_limit)) {
        const long double y = 1.0L / static_cast<long double>(p);
        // P(N = j) for N ~ Bin(k, y), j >= 2, summed directly to avoid cancellation
        std::vector<long double> mass(static_cast<std::size_t>(k) + 1, 0.0L);
        long double q = 0.0L;
        for (int j = 2; j <= k; ++j) {
            mass[j] = static_cast<long double>(binomial(static_cast<u64>(k), static_cast<u64>(j))) * std::pow(y, j) *
                      std::pow(1.0L - y, k - j);
            q += mass[j];
        }
        std::vector<long double> cdf(static_cast<std::size_t>(k) + 1, 0.0L);
        long double acc = 0.0L;
        for (int j = 2; j <= k; ++j) {
            acc += mass[j] / q;
            cdf[j] = acc;
        }
        cdf[k] = 1.0L;
        H += -std::log1p(-q);
        primes_.push_back(p);
        cumulative_.push_back(H);
        count_cdf_.push_back(std::move(cdf));
    }
}

u64 RkSampler::sample(SplitMix64& rng, bool* saturated) const
{
    u64 n = 1;
    bool sat = false;
    long double position = 0.0L;
    const long double total = cumulative_.empty() ? 0.0L : cumulative_.back();
    for (;;) {
        position += rng.exponential();
        if (position > total) break;
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), position);
        const std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
        const u64 p = primes_[i];
        // number of nonzero geometric values, conditioned on being >= 2
        const long double v = rng.uniform_open0();
        const auto& cdf = count_cdf_[i];
        int N = 2;
        while (N < k_ && v > cdf[N]) ++N;
        u64 sum = 0, mx = 0;
        for (int j = 0; j < N; ++j) {
            const u64 g = 1 + sample_geometric(p, rng);
            sum += g;
            mx = std::max(mx, g);
        }
        for (u64 e = 0; e < sum - mx; ++e) n = mul_saturating(n, p, sat);
        position = cumulative_[i];
    }
    if (saturated) *saturated = sat;
    return n;
}

long double RkSampler::truncation_bias_bound() const
{
    // sum_{p > P} P(N >= 2) <= C(k,2) sum_{p > P} p^{-2} <= C(k,2) / P
    return static_cast<long double>(k_) * (k_ - 1) / 2.0L / static_cast<long double>(prime_limit_);
}

long double sample_limit_lcm(const RkSampler& sampler, SplitMix64& rng)
{
    long double prod = 1.0L;
    for (int j = 0; j < sampler.k(); ++j) prod *= rng.uniform_open();
    return prod / static_cast<long double>(sampler.sample(rng));
}

namespace {

template <class Acc, class Make, class PerSample>
std::vector<Acc> sample_blocks(const SamplerConfig& config, Make&& make, PerSample&& per_sample)
{
    const u64 N = config.sample_count;
    return run_blocks<Acc>(kBlocks, config.threads, make, [&](std::size_t b, Acc& acc) {
        const u64 begin = static_cast<u64>(static_cast<u128>(N) * b / kBlocks);
        const u64 end = static_cast<u64>(static_cast<u128>(N) * (b + 1) / kBlocks);
        for (u64 i = begin; i < end; ++i) {
            SplitMix64 rng(mix_seed(config.seed, i));
            per_sample(acc, rng);
        }
    });
}

} // namespace

RkSummary run_rk(const SamplerConfig& config)
{
    config.validate();
    const RkSampler sampler(config.k, config.prime_limit);
    struct Acc {
        std::map<u64, u64> counts;
        u64 saturated = 0;
    };
    auto blocks = sample_blocks<Acc>(config, [] { return Acc{}; }, [&](Acc& acc, SplitMix64& rng) {
        bool sat = false;
        ++acc.counts[sampler.sample(rng, &sat)];
        if (sat) ++acc.saturated;
    });
    RkSummary out;
    out.config = config;
    out.bias_bound = sampler.truncation_bias_bound();
    for (const auto& b : blocks) {
        for (const auto& [n, c] : b.counts) out.counts[n] += c;
        out.saturated += b.saturated;
    }
    return out;
}

LimitSummary run_limit(const SamplerConfig& config, std::span<const long double> thresholds)
{
    config.validate();
    for (long double t : thresholds)
        if (!(t > 0.0L && t <= 1.0L)) throw std::domain_error("t must lie in (0, 1]");
    const RkSampler sampler(config.k, config.prime_limit);
    const std::size_t m = thresholds.size();
    struct Acc {
        std::vector<u64> exceed, unit_exceed;
        u64 unit = 0;
    };
    auto blocks = sample_blocks<Acc>(
        config, [m] { return Acc{std::vector<u64>(m, 0), std::vector<u64>(m, 0), 0}; },
        [&](Acc& acc, SplitMix64& rng) {
            long double prod = 1.0L;
            for (int j = 0; j < config.k; ++j) prod *= rng.uniform_open();
            const u64 n = sampler.sample(rng);
            const long double value = prod / static_cast<long double>(n);
            if (n == 1) ++acc.unit;
            for (std::size_t i = 0; i < m; ++i) {
                if (value > thresholds[i]) ++acc.exceed[i];
                if (n == 1 && prod > thresholds[i]) ++acc.unit_exceed[i];
            }
        });
    LimitSummary out;
    out.config = config;
    out.thresholds.assign(thresholds.begin(), thresholds.end());
    out.exceed.assign(m, 0);
    out.unit_exceed.assign(m, 0);
    out.bias_bound = sampler.truncation_bias_bound();
    for (const auto& b : blocks) {
        out.unit_count += b.unit;
        for (std::size_t i = 0; i < m; ++i) {
            out.exceed[i] += b.exceed[i];
            out.unit_exceed[i] += b.unit_exceed[i];
        }
    }
    return out;
}

} // namespace lcmlaw
