#pragma once

#include <span>
#include <vector>

#include "lcmlaw/bracket.hpp"
#include "lcmlaw/ntcore.hpp"
#include "lcmlaw/rational.hpp"

namespace lcmlaw {

// One p-power divisibility row on a k-tuple. Untagged positions demand the
// exact valuation v_p(n_i) == exponents[i]; the tagged position demands
// v_p(n_tag) >= exponents[tag].
struct TaggedCondition {
    u64 prime = 0;
    std::vector<int> exponents;
    int tag = 0;      // 0-based position carrying the "or higher" tag
    int dropped = 0;  // 1-based dropped-maximum position (row label of the table)

    int k() const { return static_cast<int>(exponents.size()); }
    bool satisfied_by(std::span<const u64> tuple) const;

    bool operator==(const TaggedCondition&) const = default;
};

// p-adic valuation.
int valuation(u64 n, u64 p);

// 1-based index of the maximum entry; ties go to the largest index.
int i1_index(std::span<const int> parts);

// All k tagged conditions generated by every composition of e into k-1
// parts, compositions in lexicographic order, rows within one composition
// ordered by dropped position k, k-1, ..., 1.
std::vector<TaggedCondition> tagged_conditions(u64 p, int e, int k);

// sum over compositions x of e into k-1 parts of
//   (k - i1) p^{-x_{i1}} + i1 p^{-x_{i1}-1}
// i.e. the local weight before the p^{-e} factor. Exact.
Rational local_composition_sum(u64 p, int e, int k);

// p-local factor of p_k(n)/T_k at p^e || n; 1 for e == 0.
Rational plocal_pk(u64 p, int e, int k);

// p-local factor of g_k(n); equals plocal_pk * (1 + (k-1)/p) for e >= 1.
Rational plocal_gk(u64 p, int e, int k);

// Integer coefficients c_j with local_composition_sum(p, e, k) = sum_j c_j p^{-j}.
// Built once per (k, e) and shared.
const std::vector<u64>& local_sum_coefficients(int e, int k);

// Sum over e = 1..e_count of p^{-(s+1)e} * local_composition_sum(p,e,k), plus
// a rigorous bound on the omitted terms e > e_count.
struct LocalSeries {
    long double partial = 0.0L;
    long double tail = 0.0L;   // +inf when the majorant does not converge
    int terms = 0;
};

// Majorant of the e-th term: k * C(e+k-2, k-2) * p^{-(s+1)e - e/(k-1)}.
long double local_term_majorant(u64 p, long double s, int k, int e);

// Tail bound for sum_{e > e_count} local_term_majorant(p, s, k, e).
long double local_series_tail(u64 p, long double s, int k, int e_count);

LocalSeries local_gk_series(u64 p, long double s, int k, int e_count);

// Stops as soon as the tail falls below rel_tol * partial, or at e_cap.
LocalSeries local_gk_series_adaptive(u64 p, long double s, int k, int e_cap,
                                     long double rel_tol = 1e-21L);

// Euler factor of F_k(s) = E R_k^s at p, composition-sum form, over
// 0 <= e <= e_max plus a geometric tail. Includes the T_k local factor, so
// at s = 0 the exact value is 1. Throws std::domain_error for s <= -1.
Bracket plocal_F_series(u64 p, long double s, int k, int e_max);

// The same Euler factor in the finite alternating-binomial form. Evaluated
// in 50-digit arithmetic. Throws std::domain_error for s <= -1.
long double plocal_F_closed(u64 p, long double s, int k);

// Sum of (k - i1(x)) over compositions x (any total e >= 1) whose maximum
// entry equals 1, by enumeration.
u64 dropped_max_identity(int k);

// a_m = sum over compositions (any e >= 1) with maximum entry m of (k - i1),
// plus sum over those with maximum entry m - 1 of i1: the coefficient of p^{-m}
// in sum_{e >= 1} local_composition_sum(p, e, k). Closed form via counts of
// vectors with a given maximum and last argmax. a_1 = 2^k - k - 1.
long double max_entry_weight(int m, int k);

} // namespace lcmlaw
