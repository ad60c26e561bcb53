#include "lcmlaw/plocal.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace lcmlaw {

namespace {

void check_k(int k)
{
    if (k < 2) throw std::domain_error("k must be at least 2");
}

void check_s(long double s)
{
    if (!(s > -1.0L)) throw std::domain_error("Euler factor requires s > -1 (the series diverges)");
}

} // namespace

int valuation(u64 n, u64 p)
{
    if (n == 0) throw std::domain_error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

bool TaggedCondition::satisfied_by(std::span<const u64> tuple) const
{
    if (tuple.size() != exponents.size()) throw std::invalid_argument("tuple length does not match condition");
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        const int v = valuation(tuple[i], prime);
        if (static_cast<int>(i) == tag ? v < exponents[i] : v != exponents[i]) return false;
    }
    return true;
}

int i1_index(std::span<const int> parts)
{
    if (parts.empty()) throw std::invalid_argument("i1_index of an empty composition");
    int best = 0;
    for (int i = 1; i < static_cast<int>(parts.size()); ++i)
        if (parts[i] >= parts[best]) best = i;
    return best + 1;
}

std::vector<TaggedCondition> tagged_conditions(u64 p, int e, int k)
{
    check_k(k);
    if (e < 1) throw std::domain_error("tagged_conditions: e must be positive");
    std::vector<TaggedCondition> rows;
    for_each_composition(e, k - 1, [&](std::span<const int> x) {
        const int i1 = i1_index(x);
        const int top = x[i1 - 1];
        auto emit = [&](int dropped, int value) {
            TaggedCondition c;
            c.prime = p;
            c.exponents.assign(x.begin(), x.begin() + (dropped - 1));
            c.exponents.push_back(value);
            c.exponents.insert(c.exponents.end(), x.begin() + (dropped - 1), x.end());
            c.tag = dropped - 1;
            c.dropped = dropped;
            rows.push_back(std::move(c));
        };
        for (int d = k; d > i1; --d) emit(d, top);
        for (int d = i1; d >= 1; --d) emit(d, top + 1);
    });
    return rows;
}

Rational local_composition_sum(u64 p, int e, int k)
{
    check_k(k);
    Rational total(0);
    for_each_composition(e, k - 1, [&](std::span<const int> x) {
        const int i1 = i1_index(x);
        const auto top = static_cast<unsigned>(x[i1 - 1]);
        total += Rational(BigInt(k - i1), ipow(p, top));
        total += Rational(BigInt(i1), ipow(p, top + 1));
    });
    total.canonicalize();
    return total;
}

Rational plocal_gk(u64 p, int e, int k)
{
    check_k(k);
    if (e < 0) throw std::domain_error("negative exponent");
    if (e == 0) return Rational(1);
    Rational r = local_composition_sum(p, e, k) / Rational(ipow(p, static_cast<unsigned>(e)));
    r.canonicalize();
    return r;
}

Rational plocal_pk(u64 p, int e, int k)
{
    if (e == 0) return Rational(1);
    Rational r = plocal_gk(p, e, k) * Rational(to_bigint(p), to_bigint(p + static_cast<u64>(k - 1)));
    r.canonicalize();
    return r;
}

const std::vector<u64>& local_sum_coefficients(int e, int k)
{
    check_k(k);
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::vector<u64>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find({e, k});
    if (it != cache.end()) return it->second;
    std::vector<u64> c(static_cast<std::size_t>(e) + 2, 0);
    for_each_composition(e, k - 1, [&](std::span<const int> x) {
        const int i1 = i1_index(x);
        const int top = x[i1 - 1];
        c[top] += static_cast<u64>(k - i1);
        c[top + 1] += static_cast<u64>(i1);
    });
    return cache.emplace(std::pair{e, k}, std::move(c)).first->second;
}

long double local_term_majorant(u64 p, long double s, int k, int e)
{
    long double binom = 1.0L;
    for (int i = 1; i <= k - 2; ++i) binom = binom * static_cast<long double>(e + i) / i;
    const long double expo = (s + 1.0L) * e + static_cast<long double>(e) / (k - 1);
    return k * binom * std::pow(static_cast<long double>(p), -expo);
}

long double local_series_tail(u64 p, long double s, int k, int e_count)
{
    const long double w = std::pow(static_cast<long double>(p), -(s + 1.0L) - 1.0L / (k - 1));
    const long double rho = w * (e_count + k) / (e_count + 2);
    if (rho >= 1.0L) return std::numeric_limits<long double>::infinity();
    return local_term_majorant(p, s, k, e_count + 1) / (1.0L - rho);
}

namespace {

long double local_sum_numeric(u64 p, int e, int k)
{
    const auto& c = local_sum_coefficients(e, k);
    const long double inv = 1.0L / static_cast<long double>(p);
    // Horner in 1/p.
    long double acc = 0.0L;
    for (std::size_t j = c.size(); j-- > 0;) acc = acc * inv + static_cast<long double>(c[j]);
    return acc;
}

} // namespace

LocalSeries local_gk_series(u64 p, long double s, int k, int e_count)
{
    check_k(k);
    LocalSeries out;
    const long double step = std::pow(static_cast<long double>(p), -(s + 1.0L));
    long double scale = 1.0L;
    for (int e = 1; e <= e_count; ++e) {
        scale *= step;
        out.partial += scale * local_sum_numeric(p, e, k);
    }
    out.terms = e_count;
    out.tail = local_series_tail(p, s, k, e_count);
    return out;
}

LocalSeries local_gk_series_adaptive(u64 p, long double s, int k, int e_cap, long double rel_tol)
{
    check_k(k);
    LocalSeries out;
    const long double step = std::pow(static_cast<long double>(p), -(s + 1.0L));
    long double scale = 1.0L;
    out.tail = std::numeric_limits<long double>::infinity();
    for (int e = 1; e <= e_cap; ++e) {
        scale *= step;
        out.partial += scale * local_sum_numeric(p, e, k);
        out.terms = e;
        out.tail = local_series_tail(p, s, k, e);
        if (out.tail <= rel_tol * out.partial) break;
    }
    return out;
}

Bracket plocal_F_series(u64 p, long double s, int k, int e_max)
{
    check_k(k);
    check_s(s);
    if (e_max < 1) throw std::domain_error("e_max must be positive");
    const long double inv = 1.0L / static_cast<long double>(p);
    const long double u = std::pow(1.0L - inv, k - 1);
    const long double local_tk = u * (1.0L + (k - 1) * inv);
    const LocalSeries series = local_gk_series(p, s, k, e_max);
    const long double lo = local_tk + u * series.partial;
    const long double hi = lo + u * series.tail;
    return Bracket(lo, hi).widened(rounding_slack(4.0L * e_max + 4.0L * k));
}

long double plocal_F_closed(u64 p, long double s, int k)
{
    check_k(k);
    check_s(s);
    using Real = boost::multiprecision::cpp_bin_float_50;
    const Real pr(static_cast<unsigned long long>(p));
    const Real sp1 = Real(s) + 1;
    const Real q = pow(pr, -sp1);
    const Real inv = 1 / pr;
    Real sum = 0;
    for (int j = 1; j <= k; ++j) {
        const Real num = 1 - pow(q, j);
        const Real den = 1 - pow(pr, -(Real(j - 1) * sp1 + 1));
        const Real term = Real(static_cast<unsigned long long>(binomial(static_cast<u64>(k), static_cast<u64>(j)))) * num / den;
        sum += (j % 2 == 1) ? term : Real(-term);
    }
    const Real front = pow((1 - inv) / (1 - q), k);
    return static_cast<long double>(front * sum);
}

u64 dropped_max_identity(int k)
{
    check_k(k);
    u64 total = 0;
    for (int e = 1; e <= k - 1; ++e) {
        for_each_composition(e, k - 1, [&](std::span<const int> x) {
            const int i1 = i1_index(x);
            if (x[i1 - 1] == 1) total += static_cast<u64>(k - i1);
        });
    }
    return total;
}

long double max_entry_weight(int m, int k)
{
    check_k(k);
    if (m < 1) return 0.0L;
    // Vectors in [0, m]^{k-1} with maximum exactly m and last argmax at i.
    auto count = [k](int mx, int i) -> long double {
        if (mx < 1) return 0.0L; // the zero vector has e = 0 and is excluded
        return std::pow(static_cast<long double>(mx + 1), i - 1) *
               std::pow(static_cast<long double>(mx), k - 1 - i);
    };
    long double a = 0.0L;
    for (int i = 1; i <= k - 1; ++i) {
        a += (k - i) * count(m, i);
        a += i * count(m - 1, i);
    }
    return a;
}

} // namespace lcmlaw
