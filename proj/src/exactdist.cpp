#include "lcmlaw/exactdist.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "lcmlaw/series.hpp"

namespace lcmlaw {

namespace {

struct LocalCache {
    std::mutex mu;
    std::map<std::tuple<u64, int, int>, std::pair<Rational, Rational>> entries; // (pk, gk)
};

const std::pair<Rational, Rational>& local_factors(u64 p, int e, int k)
{
    static LocalCache cache;
    {
        std::lock_guard lock(cache.mu);
        auto it = cache.entries.find({p, e, k});
        if (it != cache.entries.end()) return it->second;
    }
    Rational pkf = plocal_pk(p, e, k);
    Rational gkf = plocal_gk(p, e, k);
    std::lock_guard lock(cache.mu);
    return cache.entries.try_emplace({p, e, k}, std::move(pkf), std::move(gkf)).first->second;
}

void check_k(int k)
{
    if (k < 2) throw std::domain_error("k must be at least 2");
}

} // namespace

Rational pk_coefficient(u64 n, int k)
{
    check_k(k);
    Rational r(1);
    for (const auto& pe : factorize(n).factors) r *= local_factors(pe.prime, pe.exponent, k).first;
    return r;
}

Rational gk(u64 n, int k)
{
    check_k(k);
    Rational r(1);
    for (const auto& pe : factorize(n).factors) r *= local_factors(pe.prime, pe.exponent, k).second;
    return r;
}

long double pk_coefficient_numeric(u64 n, int k)
{
    check_k(k);
    long double r = 1.0L;
    for (const auto& pe : factorize(n).factors) r *= to_long_double(local_factors(pe.prime, pe.exponent, k).first);
    return r;
}

long double gk_numeric(u64 n, int k)
{
    check_k(k);
    long double r = 1.0L;
    for (const auto& pe : factorize(n).factors) r *= to_long_double(local_factors(pe.prime, pe.exponent, k).second);
    return r;
}

PkValue pk(u64 n, int k, const Bracket& tk)
{
    PkValue v;
    v.n = n;
    v.k = k;
    v.coefficient = pk_coefficient(n, k);
    const long double c = to_long_double(v.coefficient);
    v.bracket = (tk * c).widened(rounding_slack(2));
    v.numeric = v.bracket.mid();
    return v;
}

PkValue pk(u64 n, int k) { return pk(n, k, default_Tk(k)); }

Rational pk3_closed_coefficient(u64 n)
{
    if (n == 0) throw std::domain_error("n must be positive");
    Rational total(0);
    for (u64 j = 1; j * j <= n; ++j) {
        if (n % (j * j) != 0) continue;
        const u64 m = n / (j * j);
        Rational term(1);
        for (const auto& pe : factorize(m).factors) {
            // Upsilon_3 factor (1+1/p)/(1+2/p) times the 3 from 3^{omega(m)}
            term *= Rational(to_bigint(3 * (pe.prime + 1)), to_bigint(pe.prime + 2));
        }
        term /= Rational(to_bigint(static_cast<u128>(j) * j * j) * to_bigint(static_cast<u128>(m) * m));
        total += term;
    }
    total.canonicalize();
    return total;
}

long double pk_closed_small_k(u64 n, int k)
{
    if (k == 2) {
        const long double zeta2 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6.0L;
        const long double nn = static_cast<long double>(n);
        return 1.0L / (nn * nn * zeta2);
    }
    if (k == 3) return default_Tk(3).mid() * to_long_double(pk3_closed_coefficient(n));
    throw std::domain_error("closed form only available for k = 2 and k = 3");
}

std::vector<BigInt> ConditionSet::scales() const
{
    std::vector<BigInt> a(static_cast<std::size_t>(k), BigInt(1));
    for (const auto& row : rows)
        for (int i = 0; i < k; ++i) a[i] *= ipow(row.prime, static_cast<unsigned>(row.exponents[i]));
    return a;
}

std::vector<u64> ConditionSet::coprimality_moduli() const
{
    std::vector<u64> u(static_cast<std::size_t>(k), 1);
    for (const auto& row : rows)
        for (int j = 0; j < k; ++j)
            if (j != row.tag) u[j] *= row.prime;
    return u;
}

bool ConditionSet::satisfied_by(std::span<const u64> tuple) const
{
    for (const auto& row : rows)
        if (!row.satisfied_by(tuple)) return false;
    return true;
}

void for_each_condition_set(u64 n, int k, const std::function<void(const ConditionSet&)>& visit)
{
    check_k(k);
    const auto f = factorize(n);
    std::vector<std::vector<TaggedCondition>> options;
    for (const auto& pe : f.factors) options.push_back(tagged_conditions(pe.prime, pe.exponent, k));

    ConditionSet current;
    current.n = n;
    current.k = k;
    const std::size_t m = options.size();
    std::vector<std::size_t> digit(m, 0);
    current.rows.resize(m);
    for (std::size_t i = 0; i < m; ++i) current.rows[i] = options[i][0];
    for (;;) {
        visit(current);
        std::size_t pos = m;
        while (pos > 0) {
            --pos;
            if (++digit[pos] < options[pos].size()) {
                current.rows[pos] = options[pos][digit[pos]];
                break;
            }
            digit[pos] = 0;
            current.rows[pos] = options[pos][0];
            if (pos == 0) return;
        }
        if (m == 0) return;
    }
}

std::vector<ConditionSet> enumerate_Bn(u64 n, int k)
{
    std::vector<ConditionSet> out;
    for_each_condition_set(n, k, [&](const ConditionSet& c) { out.push_back(c); });
    return out;
}

Bracket qk(u64 n, int k, long double r)
{
    if (!(r > -1.0L && r < 0.0L)) throw std::domain_error("qk requires -1 < r < 0");
    const long double expo = 1.0L + r; // a_i^{1-|r|}
    long double total = 0.0L;
    long double ops = 0.0L;
    for_each_condition_set(n, k, [&](const ConditionSet& c) {
        const auto a = c.scales();
        long double prod = 1.0L;
        for (const auto& ai : a) prod *= to_long_double(ai);
        for (const auto& ai : a) total += std::pow(to_long_double(ai), expo) / prod;
        ops += 3.0L * k + 8.0L;
    });
    return Bracket(total, total).widened(rounding_slack(ops));
}

} // namespace lcmlaw
