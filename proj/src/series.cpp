#include "lcmlaw/series.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "lcmlaw/exactdist.hpp"
#include "lcmlaw/ntcore.hpp"
#include "lcmlaw/plocal.hpp"

namespace lcmlaw {

namespace {

constexpr long double kInf = std::numeric_limits<long double>::infinity();

void check_k(int k)
{
    if (k < 2) throw std::domain_error("k must be at least 2");
}

long double zeta2() { return std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6.0L; }

// Multiplies per-prime brackets for p <= P and a tail bracket.
template <class LocalFn>
Bracket euler_product(u64 prime_limit, LocalFn&& local, const Bracket& tail)
{
    long double lo = 1.0L, hi = 1.0L;
    const auto primes = primes_up_to(prime_limit);
    for (std::uint32_t p : primes) {
        const Bracket b = local(static_cast<u64>(p));
        lo *= b.lo;
        hi *= b.hi;
    }
    Bracket out(lo * tail.lo, hi * tail.hi);
    return out.widened(rounding_slack(2.0L * static_cast<long double>(primes.size()) + 4.0L));
}

// Bound on sum_{p > P} delta(p) where delta(p) bounds |local factor - 1| for
// the F / G Euler products:
//   delta(p) <= sum_e k C(e+k-2,k-2) p^{-(1+sigma) e - ceil(e/(k-1))},
// sigma = min(s, 0). Every exponent is >= 2 + sigma, so
// delta(p) <= K(P+1) p^{-(2+sigma)} for p > P and the prime sum is at most
// K(P+1) P^{-(1+sigma)} / (1+sigma).
long double fg_tail_mass(long double s, int k, u64 prime_limit)
{
    const long double sigma = std::min(s, 0.0L);
    const long double q = 1.0L / static_cast<long double>(prime_limit + 1);
    const long double lead = 2.0L + sigma;
    long double K = 0.0L;
    long double binom = 1.0L; // C(e+k-2, k-2) at e = 0
    const int e_stop = 80;
    for (int e = 1; e <= e_stop; ++e) {
        binom = binom * (e + k - 2) / e;
        const long double ceil_part = std::ceil(static_cast<long double>(e) / (k - 1));
        const long double expo = (1.0L + sigma) * e + ceil_part - lead;
        K += k * binom * std::pow(q, expo);
    }
    // Remaining e > e_stop: ratio of successive majorant terms is at most
    // (e+k-1)/(e+1) * q^{1+sigma}.
    const long double ratio = static_cast<long double>(e_stop + k) / (e_stop + 2) * std::pow(q, 1.0L + sigma);
    if (ratio >= 1.0L) return kInf;
    const long double next = k * binom * (e_stop + k - 1) / (e_stop + 1) *
                             std::pow(q, (1.0L + sigma) * (e_stop + 1) +
                                             std::ceil(static_cast<long double>(e_stop + 1) / (k - 1)) - lead);
    K += next / (1.0L - ratio);
    const long double P = static_cast<long double>(prime_limit);
    return K * std::pow(P, -(1.0L + sigma)) / (1.0L + sigma);
}

Bracket euler_F_or_G(long double s, int k, const TruncationPolicy& policy, bool is_F)
{
    check_k(k);
    policy.validate();
    if (!(s > -1.0L)) throw std::domain_error("series diverges for s <= -1");
    auto local = [&](u64 p) {
        const LocalSeries series = local_gk_series_adaptive(p, s, k, policy.exponent_limit);
        const long double slack = rounding_slack(4.0L * series.terms + 4.0L * k);
        if (is_F) {
            const long double inv = 1.0L / static_cast<long double>(p);
            const long double u = std::pow(1.0L - inv, k - 1);
            const long double lo = u * (1.0L + (k - 1) * inv) + u * series.partial;
            return Bracket(lo, lo + u * series.tail).widened(slack);
        }
        const long double lo = 1.0L + series.partial;
        return Bracket(lo, lo + series.tail).widened(slack);
    };
    const long double delta = fg_tail_mass(s, k, policy.prime_limit);
    Bracket tail(1.0L, 1.0L);
    if (!is_F || s < 0.0L) tail = Bracket(1.0L, std::isfinite(delta) ? std::exp(delta) : kInf);
    else if (s > 0.0L) tail = Bracket(std::max(0.0L, 1.0L - delta), 1.0L);
    return euler_product(policy.prime_limit, local, tail);
}

// coefficient(n) tables for n <= N via smallest-prime-factor sieve.
std::vector<long double> multiplicative_table(u64 N, int k, bool want_pk)
{
    std::vector<long double> f(N + 1, 0.0L);
    if (N == 0) return f;
    std::vector<std::uint32_t> spf(N + 1, 0);
    for (u64 i = 2; i <= N; ++i) {
        if (spf[i]) continue;
        for (u64 j = i; j <= N; j += i)
            if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
    }
    std::map<std::pair<u64, int>, long double> local;
    f[1] = 1.0L;
    for (u64 n = 2; n <= N; ++n) {
        const u64 p = spf[n];
        u64 m = n;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        auto [it, fresh] = local.try_emplace({p, e}, 0.0L);
        if (fresh) it->second = to_long_double(want_pk ? plocal_pk(p, e, k) : plocal_gk(p, e, k));
        f[n] = f[m] * it->second;
    }
    return f;
}

// Rankin-type tail: sum_{n > N} n^{-s} g_k(n) <= N^{-delta} (G_k(s - delta) - sum_{n <= N} n^{-(s-delta)} g_k(n)).
long double direct_g_tail(long double s, int k, const TruncationPolicy& policy, const std::vector<long double>& g)
{
    const u64 N = policy.direct_sum_limit;
    long double best = kInf;
    for (long double frac : {0.25L, 0.5L, 0.75L}) {
        const long double delta = frac * (s + 1.0L);
        const Bracket G = Gk(s - delta, k, policy, SeriesMethod::euler);
        if (!std::isfinite(G.hi)) continue;
        long double partial = 0.0L;
        for (u64 n = 1; n <= N; ++n) partial += std::pow(static_cast<long double>(n), -(s - delta)) * g[n];
        partial *= 1.0L - rounding_slack(static_cast<long double>(N) * 4.0L);
        const long double rest = std::max(0.0L, G.hi - partial);
        best = std::min(best, std::pow(static_cast<long double>(N), -delta) * rest);
    }
    return best;
}

Rational tree_sum(std::vector<Rational> terms)
{
    if (terms.empty()) return Rational(0);
    while (terms.size() > 1) {
        std::vector<Rational> next;
        next.reserve((terms.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] + terms[i + 1]);
        if (terms.size() % 2) next.push_back(terms.back());
        terms.swap(next);
    }
    return terms.front();
}

// sup over y in (0, y0] of |h(y) - 1| / y^2 for the polynomial part.
long double poly_tail_constant(const std::vector<BigInt>& coefficients, long double y0)
{
    if (coefficients.empty() || coefficients[0] != 1) throw std::logic_error("Euler polynomial must have h(0) = 1");
    if (coefficients.size() > 1 && coefficients[1] != 0) throw std::logic_error("Euler polynomial must have h'(0) = 0");
    long double c = 0.0L, power = 1.0L;
    for (std::size_t j = 2; j < coefficients.size(); ++j) {
        c += std::fabs(to_long_double(coefficients[j])) * power;
        power *= y0;
    }
    return c * (1.0L + rounding_slack(static_cast<long double>(coefficients.size())));
}

using Poly = std::vector<BigInt>;

Poly poly_mul(const Poly& a, const Poly& b)
{
    Poly r(a.size() + b.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly one_minus_y_pow(int n)
{
    Poly r(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        BigInt c;
        mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(j));
        r[j] = (j % 2) ? BigInt(-c) : c;
    }
    return r;
}

// Exact a_m (see max_entry_weight).
BigInt max_entry_weight_exact(int m, int k)
{
    auto count = [k](int mx, int i) -> BigInt {
        if (mx < 1) return BigInt(0);
        return ipow(static_cast<u64>(mx + 1), static_cast<unsigned>(i - 1)) *
               ipow(static_cast<u64>(mx), static_cast<unsigned>(k - 1 - i));
    };
    BigInt a(0);
    for (int i = 1; i <= k - 1; ++i) a += (k - i) * count(m, i) + i * count(m - 1, i);
    return a;
}

// A(y) = sum_{m >= 1} a_m y^m at y = 1/p, with a bound on the omitted terms
// from a_m <= k (m+1)^{k-1}.
Bracket max_entry_series(u64 p, int k)
{
    const long double y = 1.0L / static_cast<long double>(p);
    long double sum = 0.0L;
    long double yp = 1.0L;
    for (int m = 1; m <= 4000; ++m) {
        yp *= y;
        sum += max_entry_weight(m, k) * yp;
        const long double ratio = std::pow(static_cast<long double>(m + 2) / (m + 1), k - 1) * y;
        if (ratio < 1.0L) {
            const long double next = k * std::pow(static_cast<long double>(m + 2), k - 1) * yp * y;
            const long double tail = next / (1.0L - ratio);
            if (tail <= 1e-22L * sum) return Bracket(sum, sum + tail).widened(rounding_slack(4.0L * m));
        }
    }
    return Bracket(sum, kInf);
}

// sup_{0 < y <= y0} sum_{m > J} a_m y^{m-2}, via a_m <= k (m+1)^{k-1}.
long double max_entry_remainder_constant(int J, int k, long double y0)
{
    long double total = 0.0L;
    for (int m = J + 1; m <= J + 400; ++m) {
        const long double term = k * std::pow(static_cast<long double>(m + 1), k - 1) * std::pow(y0, m - 2);
        total += term;
        const long double ratio = std::pow(static_cast<long double>(m + 2) / (m + 1), k - 1) * y0;
        if (ratio < 0.5L && term < 1e-30L * (total + 1e-300L)) return total * 1.01L;
    }
    return total * 1.01L;
}

Bracket poly_euler_with_remainder(const Poly& coefficients, long double remainder_constant,
                                  const std::function<Bracket(u64)>& local, u64 prime_limit)
{
    const long double y0 = 1.0L / static_cast<long double>(prime_limit + 1);
    const long double c = poly_tail_constant(coefficients, y0) + remainder_constant;
    // sum_{p > P} p^{-2} <= 1/P
    const long double delta = c / static_cast<long double>(prime_limit);
    const Bracket tail(std::max(0.0L, 1.0L - delta), std::exp(delta));
    return euler_product(prime_limit, local, tail);
}

} // namespace

void TruncationPolicy::validate() const
{
    if (prime_limit < 2) throw std::domain_error("prime limit must be at least 2");
    if (exponent_limit < 1) throw std::domain_error("exponent limit must be at least 1");
    if (direct_sum_limit < 1) throw std::domain_error("direct sum limit must be at least 1");
}

Bracket Tk(int k, const TruncationPolicy& policy)
{
    check_k(k);
    policy.validate();
    const long double c = static_cast<long double>(k) * (k - 1) / 2.0L;
    const u64 P = std::max<u64>(policy.prime_limit, static_cast<u64>(2 * (k - 1)));
    auto local = [&](u64 p) {
        const long double y = 1.0L / static_cast<long double>(p);
        // log of the corrected factor, computed without cancellation
        const long double lg = (k - 1) * std::log1p(-y) + std::log1p((k - 1) * y) - c * std::log1p(-y * y);
        const long double v = std::exp(lg);
        return Bracket(v, v);
    };
    const long double km1 = k - 1;
    const long double D = 2.0L / 3.0L * (km1 + km1 * km1 * km1 + c);
    const long double tail = D / (2.0L * static_cast<long double>(P) * static_cast<long double>(P));
    const Bracket corrected = euler_product(P, local, Bracket(std::exp(-tail), std::exp(tail)));
    const long double scale = std::pow(zeta2(), -c);
    return (corrected * scale).widened(rounding_slack(8.0L * static_cast<long double>(primes_up_to(P).size()) + 4.0L * c));
}

const Bracket& default_Tk(int k)
{
    static std::mutex mu;
    static std::map<int, Bracket> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, Tk(k)).first;
    return it->second;
}

Bracket Ck(long double r, int k, const TruncationPolicy& policy, SeriesMethod method)
{
    check_k(k);
    if (!(r > -1.0L)) throw std::domain_error("C_{r,k} diverges for r <= -1");
    if (method == SeriesMethod::euler) return euler_F_or_G(r, k, policy, true);

    policy.validate();
    const u64 N = policy.direct_sum_limit;
    const auto coef = multiplicative_table(N, k, true);
    const auto g = multiplicative_table(N, k, false);
    long double S = 0.0L;
    for (u64 n = 1; n <= N; ++n) S += std::pow(static_cast<long double>(n), -r) * coef[n];
    const Bracket T = Tk(k, policy);
    const long double tail = T.hi * direct_g_tail(r, k, policy, g);
    const long double slack = rounding_slack(4.0L * static_cast<long double>(N));
    return Bracket(T.lo * S * (1.0L - slack), T.hi * S * (1.0L + slack) + tail);
}

Bracket Gk(long double s, int k, const TruncationPolicy& policy, SeriesMethod method)
{
    check_k(k);
    if (!(s > -1.0L)) throw std::domain_error("G_k(s) diverges for s <= -1");
    if (method == SeriesMethod::euler) return euler_F_or_G(s, k, policy, false);

    policy.validate();
    const u64 N = policy.direct_sum_limit;
    const auto g = multiplicative_table(N, k, false);
    long double S = 0.0L;
    for (u64 n = 1; n <= N; ++n) S += std::pow(static_cast<long double>(n), -s) * g[n];
    const long double tail = direct_g_tail(s, k, policy, g);
    const long double slack = rounding_slack(4.0L * static_cast<long double>(N));
    return Bracket(S * (1.0L - slack), S * (1.0L + slack) + tail);
}

WeightedPartialSum partial_sum_weighted_pk(u64 x, int k, const Bracket& tk)
{
    check_k(k);
    std::vector<Rational> terms;
    terms.reserve(x);
    for (u64 n = 1; n <= x; ++n) terms.push_back(Rational(to_bigint(n)) * pk_coefficient(n, k));
    WeightedPartialSum out;
    out.coefficient_sum = tree_sum(std::move(terms));
    out.coefficient_sum.canonicalize();
    out.value = (tk * to_long_double(out.coefficient_sum)).widened(rounding_slack(2));
    return out;
}

WeightedPartialSum partial_sum_weighted_pk(u64 x, int k) { return partial_sum_weighted_pk(x, k, default_Tk(k)); }

Rational partial_sum_weighted_gk(u64 x, int k)
{
    check_k(k);
    std::vector<Rational> terms;
    terms.reserve(x);
    for (u64 n = 1; n <= x; ++n) terms.push_back(Rational(to_bigint(n)) * gk(n, k));
    Rational r = tree_sum(std::move(terms));
    r.canonicalize();
    return r;
}

long double partial_sum_weighted_pk_numeric(u64 x, int k)
{
    const auto coef = multiplicative_table(x, k, true);
    long double s = 0.0L;
    for (u64 n = 1; n <= x; ++n) s += static_cast<long double>(n) * coef[n];
    return s * default_Tk(k).mid();
}

long double partial_sum_weighted_gk_numeric(u64 x, int k)
{
    const auto g = multiplicative_table(x, k, false);
    long double s = 0.0L;
    for (u64 n = 1; n <= x; ++n) s += static_cast<long double>(n) * g[n];
    return s;
}

Bracket polynomial_euler_product(const std::vector<BigInt>& coefficients,
                                 const std::function<long double(u64)>& local_value, u64 prime_limit)
{
    if (prime_limit < 2) throw std::domain_error("prime limit must be at least 2");
    const long double slack = rounding_slack(4.0L * static_cast<long double>(coefficients.size()));
    return poly_euler_with_remainder(coefficients, 0.0L,
                                     [&](u64 p) {
                                         const long double v = local_value(p);
                                         return Bracket(v, v).widened(slack);
                                     },
                                     prime_limit);
}

AsymptoticConstants ck_dk_brackets(int k, const TruncationPolicy& policy)
{
    check_k(k);
    policy.validate();
    if (k > 10) throw std::domain_error("ck_dk_brackets supports k <= 10");
    AsymptoticConstants out;
    out.k = k;
    const int M = (1 << k) - k - 1;
    out.log_power = M;
    const int NH = M + k - 1;
    const u64 P = std::max<u64>(policy.prime_limit, 2 * static_cast<u64>(k));

    // Exact low-order part of A(y) for the tail constants.
    const int J = 8;
    Poly A(J + 1, BigInt(0));
    for (int m = 1; m <= J; ++m) A[m] = max_entry_weight_exact(m, k);
    const long double y0 = 1.0L / static_cast<long double>(P + 1);
    const long double remainder = max_entry_remainder_constant(J, k, y0);

    Poly baseH = A;
    baseH[0] += 1;
    baseH[1] += k - 1;
    Poly baseI = A;
    baseI[0] += 1;
    const Poly QH = poly_mul(one_minus_y_pow(NH), baseH);
    const Poly QI = poly_mul(one_minus_y_pow(M), baseI);

    auto localH = [&](u64 p) {
        const long double y = 1.0L / static_cast<long double>(p);
        const Bracket a = max_entry_series(p, k);
        const long double front = std::pow(1.0L - y, M);
        const long double u = std::pow(1.0L - y, k - 1);
        const long double base = u * (1.0L + (k - 1) * y);
        return Bracket(front * (base + u * a.lo), front * (base + u * a.hi)).widened(rounding_slack(8.0L + M));
    };
    auto localI = [&](u64 p) {
        const long double y = 1.0L / static_cast<long double>(p);
        const Bracket a = max_entry_series(p, k);
        const long double front = std::pow(1.0L - y, M);
        return Bracket(front * (1.0L + a.lo), front * (1.0L + a.hi)).widened(rounding_slack(8.0L + M));
    };
    out.H = poly_euler_with_remainder(QH, remainder, localH, P);
    out.I = poly_euler_with_remainder(QI, remainder, localI, P);

    // T_k prod (1 + M/(p+k-1)) (1-1/p)^M = prod (1-y)^{M+k-1} (1 + (k-1+M) y)
    Poly lower = one_minus_y_pow(NH);
    Poly lin{BigInt(1), BigInt(k - 1 + M)};
    lower = poly_mul(lower, lin);
    out.lower_product = polynomial_euler_product(lower,
                                                 [&](u64 p) {
                                                     const long double y = 1.0L / static_cast<long double>(p);
                                                     return std::pow(1.0L - y, NH) * (1.0L + (k - 1 + M) * y);
                                                 },
                                                 P);

    BigInt fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(M));
    const long double inv_fact = 1.0L / to_long_double(fact);
    out.c = (out.H * inv_fact).widened(rounding_slack(static_cast<long double>(M)));
    out.d = (out.I * inv_fact).widened(rounding_slack(static_cast<long double>(M)));
    return out;
}

} // namespace lcmlaw
