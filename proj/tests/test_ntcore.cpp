#include <doctest.h>

#include <numeric>

#include "lcmlaw/ntcore.hpp"

using namespace lcmlaw;

TEST_CASE("factorize small values")
{
    CHECK(factorize(1).factors.empty());
    const auto f = factorize(12);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == PrimePower{2, 2});
    CHECK(f.factors[1] == PrimePower{3, 1});
    CHECK_THROWS_AS(factorize(0), std::domain_error);
}

TEST_CASE("factorize reconstructs large inputs")
{
    for (u64 n : {u64{(u64{1} << 40) + 1}, u64{1} << 63, u64{18446744073709551557ULL}, u64{600851475143ULL},
                  u64{4611686014132420609ULL} /* (2^31-1)^2 */}) {
        const auto f = factorize(n);
        CHECK(f.reconstruct() == n);
        for (std::size_t i = 0; i < f.factors.size(); ++i) {
            CHECK(is_prime(f.factors[i].prime));
            CHECK(f.factors[i].exponent >= 1);
            if (i) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
        }
    }
    // 2^40 + 1 = 257 * 4278255361
    const auto f = factorize((u64{1} << 40) + 1);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].prime == 257);
    CHECK(f.factors[1].prime == 4278255361ULL);
}

TEST_CASE("is_prime agrees with trial division below 10^5")
{
    for (u64 n = 0; n < 100000; ++n) {
        bool trial = n >= 2;
        for (u64 d = 2; d * d <= n && trial; ++d)
            if (n % d == 0) trial = false;
        REQUIRE(is_prime(n) == trial);
    }
}

TEST_CASE("tau_ordered")
{
    CHECK(tau_ordered(12, 1) == 1);
    CHECK(tau_ordered(12, 2) == 6);
    CHECK(tau_ordered(8, 3) == 10);
    // brute force over ordered triples
    for (u64 n : {1, 8, 12, 30, 36, 64}) {
        u64 count = 0;
        for (u64 a = 1; a <= n; ++a)
            for (u64 b = 1; b <= n; ++b)
                if (n % (a * b) == 0) ++count;
        CHECK(tau_ordered(n, 3) == count);
    }
}

TEST_CASE("mobius sums over divisors vanish")
{
    CHECK(mobius(1) == 1);
    CHECK(mobius(6) == 1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(30) == -1);
    for (u64 n = 2; n <= 300; ++n) {
        int s = 0;
        for (u64 d = 1; d <= n; ++d)
            if (n % d == 0) s += mobius(d);
        CHECK(s == 0);
    }
}

TEST_CASE("primes and totients")
{
    const auto p = primes_up_to(100);
    CHECK(p.size() == 25);
    CHECK(p.back() == 97);
    CHECK(primes_up_to(1'000'000).size() == 78498);
    const auto phi = totient_table(100);
    for (u64 n = 1; n <= 100; ++n) {
        u64 c = 0;
        for (u64 a = 1; a <= n; ++a)
            if (std::gcd(a, n) == 1) ++c;
        CHECK(phi[n] == c);
    }
}

TEST_CASE("binomial")
{
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(5, 7) == 0);
    CHECK(binomial(66, 33) == 7219428434016265740ULL);
    CHECK_THROWS_AS(binomial(200, 100), std::overflow_error);
}

TEST_CASE("compositions: count, order, sums")
{
    for (int e = 0; e <= 6; ++e)
        for (int m = 1; m <= 4; ++m) {
            const auto cs = compositions(e, m);
            CHECK(cs.size() == binomial(static_cast<u64>(e + m - 1), static_cast<u64>(m - 1)));
            for (std::size_t i = 0; i < cs.size(); ++i) {
                CHECK(std::accumulate(cs[i].parts.begin(), cs[i].parts.end(), 0) == e);
                if (i) CHECK(cs[i - 1].parts < cs[i].parts);
            }
        }
    const auto c = compositions(2, 2);
    REQUIRE(c.size() == 3);
    CHECK(c[0].parts == std::vector<int>{0, 2});
    CHECK(c[2].parts == std::vector<int>{2, 0});
}
