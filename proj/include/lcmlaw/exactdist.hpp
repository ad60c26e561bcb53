#pragma once

#include <functional>
#include <vector>

#include "lcmlaw/bracket.hpp"
#include "lcmlaw/plocal.hpp"
#include "lcmlaw/rational.hpp"

namespace lcmlaw {

// p_k(n) carried as an exact rational multiple of T_k. `bracket` is
// coefficient * (T_k bracket), `numeric` its midpoint.
struct PkValue {
    u64 n = 1;
    int k = 2;
    Rational coefficient;
    long double numeric = 0.0L;
    Bracket bracket;
};

// prod over p^e || n of plocal_pk(p, e, k). Local factors are memoized.
Rational pk_coefficient(u64 n, int k);

PkValue pk(u64 n, int k, const Bracket& tk);
PkValue pk(u64 n, int k); // T_k at the default truncation policy

// g_k(n) = T_k^{-1} p_k(n) prod_{p | n} (1 + (k-1)/p); multiplicative, exact.
Rational gk(u64 n, int k);

// Long double coefficient of T_k, for bulk numeric sums.
long double pk_coefficient_numeric(u64 n, int k);
long double gk_numeric(u64 n, int k);

// Independent closed forms: p_2(n) = 1/(n^2 zeta(2)) and
// p_3(n) = T_3 sum_{j^2 m = n} Upsilon_3(m) 3^{omega(m)} / (j^3 m^2).
// Throws std::domain_error unless k is 2 or 3.
long double pk_closed_small_k(u64 n, int k);

// The k = 3 closed-form sum with T_3 factored out, as an exact rational.
Rational pk3_closed_coefficient(u64 n);

// One combined divisibility condition M in B_n: a tagged row per prime of n.
struct ConditionSet {
    u64 n = 1;
    int k = 2;
    std::vector<TaggedCondition> rows;

    // a_i = prod_p p^{e_{p,i}}
    std::vector<BigInt> scales() const;
    // u_j = product of the primes whose row is *not* tagged at j
    std::vector<u64> coprimality_moduli() const;
    bool satisfied_by(std::span<const u64> tuple) const;
};

// Streams B_n (|B_n| = tau_{k-1}(n) k^{omega(n)}) in odometer order over the
// per-prime tagged_conditions lists, last prime varying fastest. The visitor
// receives a reference to a reused object.
void for_each_condition_set(u64 n, int k, const std::function<void(const ConditionSet&)>& visit);
std::vector<ConditionSet> enumerate_Bn(u64 n, int k);

// sum over M in B_n of sum_i a_i^{1-|r|} / (a_1 ... a_k), for -1 < r < 0.
// a_i^{|r|} is irrational in general, so this returns an enclosure.
Bracket qk(u64 n, int k, long double r);

} // namespace lcmlaw
