#include "lcmlaw/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace lcmlaw {

BigInt to_bigint(u128 v)
{
    BigInt hi(static_cast<unsigned long>(static_cast<u64>(v >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<u64>(v)));
    return (hi << 64) + lo;
}

BigInt to_bigint(u64 v) { return BigInt(static_cast<unsigned long>(v)); }

long double to_long_double(const BigInt& z)
{
    if (z == 0) return 0.0L;
    const bool negative = z < 0;
    BigInt a = abs(z);
    const auto bits = static_cast<long>(mpz_sizeinbase(a.get_mpz_t(), 2));
    long shift = bits > 64 ? bits - 64 : 0;
    BigInt top = a >> shift;
    const u64 mant = mpz_get_ui(top.get_mpz_t());
    long double r = std::ldexp(static_cast<long double>(mant), static_cast<int>(shift));
    return negative ? -r : r;
}

long double to_long_double(const Rational& q)
{
    if (q == 0) return 0.0L;
    const BigInt& num = q.get_num();
    const BigInt& den = q.get_den();
    const long nb = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
    const long db = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    // Scale so the integer quotient carries at least 70 significant bits.
    const long shift = 70 - (nb - db);
    BigInt scaled = abs(num);
    BigInt d = den;
    if (shift > 0) scaled <<= shift;
    else d <<= -shift;
    BigInt quot = scaled / d;
    long double r = std::ldexp(to_long_double(quot), static_cast<int>(-shift));
    return num < 0 ? -r : r;
}

Rational exact_rational(long double v)
{
    if (!std::isfinite(v)) throw std::domain_error("exact_rational: non-finite value");
    if (v == 0.0L) return Rational(0);
    int exp = 0;
    long double frac = std::frexp(std::fabs(v), &exp);
    // frac in [0.5, 1): 64 mantissa bits for x87 extended precision.
    const u64 mant = static_cast<u64>(std::ldexp(frac, 64));
    BigInt m = to_bigint(mant);
    Rational r;
    const int e2 = exp - 64;
    if (e2 >= 0) r = Rational(m << e2);
    else r = Rational(m, BigInt(1) << -e2);
    r.canonicalize();
    return v < 0 ? Rational(-r) : r;
}

BigInt ipow(u64 base, unsigned e)
{
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
    return r;
}

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_str();
}

} // namespace lcmlaw
