#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace lcmlaw {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Exact rationals and integers are GMP values; mpq_class keeps itself
// canonical (lowest terms, positive denominator) after every arithmetic op.
using Rational = mpq_class;
using BigInt = mpz_class;

BigInt to_bigint(u128 v);
BigInt to_bigint(u64 v);

// Nearest-ish long double (truncation error below 2 ulp).
long double to_long_double(const BigInt& z);
long double to_long_double(const Rational& q);

// The exact binary value of a finite long double.
Rational exact_rational(long double v);

// p^e as an exact integer.
BigInt ipow(u64 base, unsigned e);

// "num/den", or just "num" when den == 1.
std::string to_string(const Rational& q);

} // namespace lcmlaw
