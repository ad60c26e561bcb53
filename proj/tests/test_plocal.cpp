#include <doctest.h>

#include <cmath>

#include "lcmlaw/plocal.hpp"

using namespace lcmlaw;

namespace {

// Probability that k independent p-adic valuations of random integers
// (P(v) = (1-1/p) p^{-v}) have sum - max = e, by summing over [0,V]^k.
long double local_law_bruteforce(u64 p, int e, int k, int V)
{
    const long double y = 1.0L / p;
    std::vector<long double> weight(V + 1);
    for (int j = 0; j <= V; ++j) weight[j] = (1.0L - y) * std::pow(y, j);
    std::vector<int> v(k, 0);
    long double total = 0.0L;
    for (;;) {
        int sum = 0, mx = 0;
        long double w = 1.0L;
        for (int i = 0; i < k; ++i) {
            sum += v[i];
            mx = std::max(mx, v[i]);
            w *= weight[v[i]];
        }
        if (sum - mx == e) total += w;
        int pos = 0;
        while (pos < k && ++v[pos] > V) v[pos++] = 0;
        if (pos == k) break;
    }
    return total;
}

} // namespace

TEST_CASE("i1 picks the last maximal entry")
{
    CHECK(i1_index(std::vector<int>{0, 2, 1}) == 2);
    CHECK(i1_index(std::vector<int>{2, 0, 2}) == 3);
    CHECK(i1_index(std::vector<int>{0}) == 1);
}

TEST_CASE("tagged conditions: small table")
{
    // e = 1, k = 2: the single composition (1) gives <1,1^> and <2^,1>
    const auto rows = tagged_conditions(2, 1, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].exponents == std::vector<int>{1, 1});
    CHECK(rows[0].tag == 1);
    CHECK(rows[1].exponents == std::vector<int>{2, 1});
    CHECK(rows[1].tag == 0);
}

TEST_CASE("tagged conditions partition the valuation patterns with sum - max = e")
{
    for (int k = 2; k <= 4; ++k)
        for (int e = 1; e <= 4; ++e) {
            const auto rows = tagged_conditions(3, e, k);
            CHECK(rows.size() == k * binomial(static_cast<u64>(e + k - 2), static_cast<u64>(k - 2)));
            const int V = e + 3;
            std::vector<int> v(k, 0);
            for (;;) {
                int sum = 0, mx = 0;
                for (int x : v) {
                    sum += x;
                    mx = std::max(mx, x);
                }
                int matches = 0;
                for (const auto& row : rows) {
                    bool ok = true;
                    for (int i = 0; i < k; ++i)
                        ok = ok && (i == row.tag ? v[i] >= row.exponents[i] : v[i] == row.exponents[i]);
                    matches += ok;
                }
                REQUIRE(matches == (sum - mx == e ? 1 : 0));
                int pos = 0;
                while (pos < k && ++v[pos] > V) v[pos++] = 0;
                if (pos == k) break;
            }
        }
}

TEST_CASE("satisfied_by reads valuations of actual integers")
{
    const auto rows = tagged_conditions(2, 1, 2);
    const std::vector<u64> t1{2, 6};   // valuations (1,1)
    const std::vector<u64> t2{12, 10}; // valuations (2,1)
    CHECK(rows[0].satisfied_by(t1));
    CHECK_FALSE(rows[1].satisfied_by(t1));
    CHECK(rows[1].satisfied_by(t2));
    CHECK_FALSE(rows[0].satisfied_by(t2));
    CHECK_THROWS(rows[0].satisfied_by(std::vector<u64>{2}));
}

TEST_CASE("local factors match the geometric valuation law")
{
    for (int k = 2; k <= 4; ++k)
        for (u64 p : {2, 3, 5})
            for (int e = 0; e <= 3; ++e) {
                const long double y = 1.0L / p;
                const long double Lp = std::pow(1.0L - y, k - 1) * (1.0L + (k - 1) * y);
                const long double ours = Lp * to_long_double(plocal_pk(p, e, k));
                const int V = p == 2 ? 44 : 28;
                CHECK(ours == doctest::Approx(static_cast<double>(local_law_bruteforce(p, e, k, V))).epsilon(1e-10));
            }
}

TEST_CASE("plocal_gk and plocal_pk relation")
{
    for (int k = 2; k <= 5; ++k)
        for (u64 p : {2, 3, 7})
            for (int e = 1; e <= 4; ++e)
                CHECK(plocal_gk(p, e, k) ==
                      plocal_pk(p, e, k) * Rational(to_bigint(p + k - 1), to_bigint(p)));
    // g_2(p^e) = (1 + 1/p) p^{-2e} ... for k = 2: composition (e) gives p^{-e}(1 + 1/p) / p^e
    CHECK(plocal_gk(2, 1, 2) == Rational(3, 8));
    CHECK(plocal_pk(2, 0, 3) == 1);
}

TEST_CASE("local_sum_coefficients reproduce the exact composition sum")
{
    for (int k = 2; k <= 5; ++k)
        for (int e = 1; e <= 6; ++e) {
            const auto& c = local_sum_coefficients(e, k);
            for (u64 p : {2, 3, 11}) {
                Rational s(0);
                for (std::size_t j = 0; j < c.size(); ++j)
                    s += Rational(to_bigint(c[j]), ipow(p, static_cast<unsigned>(j)));
                s.canonicalize();
                CHECK(s == local_composition_sum(p, e, k));
            }
        }
}

TEST_CASE("Euler factor: closed form inside the series bracket")
{
    for (int k = 2; k <= 5; ++k)
        for (u64 p : {2, 3, 5, 7, 11})
            for (long double s : {-0.5L, 0.0L, 0.5L, 1.0L, 2.0L}) {
                const Bracket b = plocal_F_series(p, s, k, 80);
                CHECK(b.contains(plocal_F_closed(p, s, k)));
            }
    // the factor at s = 0 is exactly 1
    CHECK(plocal_F_closed(2, 0.0L, 4) == doctest::Approx(1.0).epsilon(1e-18));
    CHECK_THROWS_AS(plocal_F_series(2, -1.0L, 3, 10), std::domain_error);
    CHECK_THROWS_AS(plocal_F_closed(2, -1.5L, 3), std::domain_error);
}

TEST_CASE("series tail majorant dominates omitted terms")
{
    for (int k = 2; k <= 4; ++k)
        for (u64 p : {2, 3}) {
            const long double s = 0.0L;
            const auto full = local_gk_series(p, s, k, 120);
            const auto cut = local_gk_series(p, s, k, 10);
            CHECK(full.partial - cut.partial <= cut.tail);
            CHECK(full.partial - cut.partial >= 0.0L);
        }
}

TEST_CASE("dropped maximum identity")
{
    for (int k = 2; k <= 12; ++k) CHECK(dropped_max_identity(k) == (u64{1} << k) - k - 1);
    for (int k = 2; k <= 8; ++k) CHECK(max_entry_weight(1, k) == doctest::Approx((1 << k) - k - 1));
}
