#pragma once

#include "lcmlaw/bracket.hpp"
#include "lcmlaw/series.hpp"

namespace lcmlaw {

// Volume of {s in [0,1]^k : s_1 ... s_k <= t}, i.e. sum_{j<k} t (-log t)^j / j!.
// Throws std::domain_error unless 0 < t <= 1 and k >= 1.
long double omega_k(long double t, int k);

// Limit of P(lcm / x^k > t): sum_{n <= 1/t} (1 - Omega_k(n t)) p_k(n).
// The coefficient sum is computed in long double and multiplied by the T_k
// bracket.
Bracket survival_main(long double t, int k, const TruncationPolicy& policy = {});

// k = 2 closed form: (1/zeta(2)) sum_{j <= 1/t} (1 - j t (1 - log(j t))) / j^2.
long double de_survival(long double t);

// C_{r,k} / (r+1)^k.
Bracket moment_main(long double r, int k, const TruncationPolicy& policy = {});

// 1 / (m^k zeta(k)), k >= 3.
long double gcd_pmf_main(u64 m, int k);

} // namespace lcmlaw
