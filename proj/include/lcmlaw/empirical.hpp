#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lcmlaw/bracket.hpp"
#include "lcmlaw/rational.hpp"
#include "lcmlaw/series.hpp"

namespace lcmlaw {

// Thrown when an enumeration would exceed its configured work ceiling.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnumerationOptions {
    u64 budget = 500'000'000; // ceiling on enumerated tuples (or sorted classes)
    unsigned threads = 1;
};

// An exact value when one exists, plus its long double rendering.
struct ExactOrReal {
    std::optional<Rational> exact;
    long double value = 0.0L;
};

struct PmfEntry {
    u64 n = 1;
    std::optional<Rational> exact;
    long double value = 0.0L;
};

struct PmfTable {
    u64 x = 1;
    int k = 2;
    std::string method;
    long double r = 0.0L; // weight exponent for weighted tables
    std::vector<PmfEntry> entries; // sorted by n

    const PmfEntry* find(u64 n) const;
    // Exact total when every entry is exact.
    std::optional<Rational> exact_total() const;
    long double total() const;
};

// Number of sorted (nondecreasing) classes in [1,x]^k, i.e. C(x+k-1, k),
// saturating at u64 max.
u64 sorted_class_count(u64 x, int k);

// Law of (n_1 ... n_k) / lcm over [1,x]^k, exact.
PmfTable ratio_pmf(u64 x, int k, const EnumerationOptions& opt = {});

// Each tuple weighted by prod (n_i / x)^r, divided by x^k. Exact for integer
// r >= 0, compensated long double otherwise.
PmfTable weighted_pmf(u64 x, int k, long double r, const EnumerationOptions& opt = {});

// Fraction of tuples with lcm > t x^k. t is taken at its exact binary value.
Rational empirical_survival(u64 x, int k, long double t, const EnumerationOptions& opt = {});

enum class MomentNormalization { xPower, product };

// xPower: x^{-k} sum (lcm / x^k)^r.  product: x^{-k} sum (lcm / prod)^r.
ExactOrReal empirical_moment(u64 x, int k, long double r, MomentNormalization norm,
                             const EnumerationOptions& opt = {});

// V_k(x) = sum over [1,x]^k of prod / lcm.
BigInt vk(u64 x, int k, const EnumerationOptions& opt = {});
// V_k(y) for y = 0..x from one enumeration (index y).
std::vector<BigInt> vk_prefix(u64 x, int k, const EnumerationOptions& opt = {});
// sum_{d <= x} phi(d) floor(x/d)^2.
BigInt vk_oracle_k2(u64 x);

// Law of gcd over [1,x]^k, exact.
PmfTable gcd_pmf(u64 x, int k, const EnumerationOptions& opt = {});

// Coprimality constraints between coordinates.
struct ConstraintGraph {
    int k = 2;
    std::vector<std::pair<int, int>> edges; // 0-based vertex indices

    static ConstraintGraph complete(int k);
    static ConstraintGraph edgeless(int k);
    static ConstraintGraph path(int k); // 0-1-2-...-(k-1)

    void validate() const;
    bool adjacent(int i, int j) const;
    bool independent(unsigned mask) const;
};

// f(s) on [0,1]^k, s_i = n_i / (x / a_i).
struct WeightSpec {
    enum class Kind { unit, power, threshold } kind = Kind::unit;
    long double r = 0.0L; // power: f = (s_1 ... s_k)^r
    long double t = 1.0L; // threshold: f = [s_1 ... s_k > t]

    static WeightSpec unit() { return {}; }
    static WeightSpec power(long double r) { return {Kind::power, r, 1.0L}; }
    static WeightSpec threshold(long double t) { return {Kind::threshold, 0.0L, t}; }
    void validate() const;
};

// Brute-force weighted count over n_i <= x / a_i with (n_i, n_j) = 1 on the
// edges of G and (u_i, n_i) = 1.
ExactOrReal coprime_count(const ConstraintGraph& G, std::span<const u64> u, std::span<const u64> a, u64 x,
                          const WeightSpec& f, const EnumerationOptions& opt = {});

// Number of independent sets of each size; entry m is i_m(G).
std::vector<u64> independent_set_counts(const ConstraintGraph& G);
// Independent sets of each size that meet the vertex set S (bitmask).
std::vector<u64> independent_set_counts_meeting(const ConstraintGraph& G, unsigned S);

struct CoprimeMainTerm {
    Bracket value;    // A_G f_G(u) x^k / (a_1 ... a_k) * integral of f
    Bracket A_G;
    Rational f_G;
    long double integral = 1.0L;
    u64 theta = 1;    // max_i 2^{omega(u_i)}
};

CoprimeMainTerm coprime_main_term(const ConstraintGraph& G, std::span<const u64> u, std::span<const u64> a, u64 x,
                                  const WeightSpec& f, const TruncationPolicy& policy = {});

} // namespace lcmlaw
