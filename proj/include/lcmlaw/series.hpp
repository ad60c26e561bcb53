#pragma once

#include <functional>
#include <vector>

#include "lcmlaw/bracket.hpp"
#include "lcmlaw/rational.hpp"

namespace lcmlaw {

// Controls truncation of every infinite product / sum. Tail majorants turn
// the truncation into a rigorous Bracket; the policy only sets the width.
struct TruncationPolicy {
    u64 prime_limit = 1'000'000;   // P: primes p <= P are multiplied out
    int exponent_limit = 200;      // E: cap on the per-prime e-sum
    u64 direct_sum_limit = 10'000; // N: cap for direct Dirichlet sums

    void validate() const;
};

// T_k = prod_p (1 - 1/p)^{k-1} (1 + (k-1)/p). Evaluated as
// zeta(2)^{-k(k-1)/2} prod_p f(p) (1 - p^{-2})^{-k(k-1)/2}; the corrected
// factors are 1 + O(p^{-3}) with an explicit constant, so the tail over
// p > P is exp(+-D / (2 P^2)).
Bracket Tk(int k, const TruncationPolicy& policy = {});

// Memoized Tk(k) at the default policy.
const Bracket& default_Tk(int k);

enum class SeriesMethod { euler, direct };

// C_{r,k} = F_k(r) = sum_n n^{-r} p_k(n), r > -1.
Bracket Ck(long double r, int k, const TruncationPolicy& policy = {}, SeriesMethod method = SeriesMethod::euler);

// G_k(s) = sum_n n^{-s} g_k(n), s > -1.
Bracket Gk(long double s, int k, const TruncationPolicy& policy = {}, SeriesMethod method = SeriesMethod::euler);

// sum_{n <= x} n p_k(n) = T_k * coefficient_sum.
struct WeightedPartialSum {
    Rational coefficient_sum;
    Bracket value;
};
WeightedPartialSum partial_sum_weighted_pk(u64 x, int k, const Bracket& tk);
WeightedPartialSum partial_sum_weighted_pk(u64 x, int k);
// sum_{n <= x} n g_k(n), exact.
Rational partial_sum_weighted_gk(u64 x, int k);
// Same sums in long double (for large x where exact rationals get heavy).
long double partial_sum_weighted_pk_numeric(u64 x, int k);
long double partial_sum_weighted_gk_numeric(u64 x, int k);

// c_k = H_k(-1) / M!, d_k = I_k(-1) / M!, M = 2^k - k - 1.
// lower_product encloses T_k prod_p (1 + M/(p+k-1)) (1-1/p)^M, which is a
// lower bound for H_k(-1).
struct AsymptoticConstants {
    int k = 2;
    int log_power = 1; // M
    Bracket H, I, c, d, lower_product;
};
AsymptoticConstants ck_dk_brackets(int k, const TruncationPolicy& policy = {});

// prod_p h(1/p) for a polynomial h with integer coefficients, h(0) = 1 and
// h'(0) = 0. Primes p <= P use `local_value(p)`, which should evaluate h(1/p)
// in a cancellation-free form; the tail over p > P uses |h(y) - 1| <= c y^2
// on (0, 1/(P+1)] with c read off the coefficients, so it lies within
// [1 - c/P, exp(c/P)].
Bracket polynomial_euler_product(const std::vector<BigInt>& coefficients,
                                 const std::function<long double(u64)>& local_value,
                                 u64 prime_limit);

} // namespace lcmlaw
