#include "lcmlaw/ntcore.hpp"

#include <algorithm>
#include <list>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace lcmlaw {

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m)
{
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s)
{
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

u64 pollard_brent(u64 n)
{
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_into(u64 n, std::vector<u64>& out)
{
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const u64 d = pollard_brent(n);
    split_into(d, out);
    split_into(n / d, out);
}

struct SieveStore {
    std::mutex mu;
    std::list<std::vector<std::uint32_t>> tables; // never shrunk; spans stay valid
    u64 covered = 0;
};

SieveStore& sieve_store()
{
    static SieveStore store;
    return store;
}

std::vector<std::uint32_t> sieve(u64 limit)
{
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> primes;
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

} // namespace

u128 Factorization::reconstruct() const
{
    u128 r = 1;
    for (const auto& f : factors)
        for (int i = 0; i < f.exponent; ++i) r *= f.prime;
    return r;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

bool is_prime(u64 n)
{
    if (n < 2) return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (miller_rabin_witness(n, a, d, s)) return false;
    }
    return true;
}

Factorization factorize(u64 n)
{
    if (n == 0) throw std::domain_error("factorize: n must be positive");
    Factorization f;
    f.value = n;
    u64 rest = n;
    std::vector<u64> found;
    for (std::uint32_t p : primes_up_to(1000)) {
        if (static_cast<u64>(p) * p > rest) break;
        while (rest % p == 0) {
            found.push_back(p);
            rest /= p;
        }
    }
    if (rest > 1) split_into(rest, found);
    std::sort(found.begin(), found.end());
    for (u64 p : found) {
        if (!f.factors.empty() && f.factors.back().prime == p) ++f.factors.back().exponent;
        else f.factors.push_back({p, 1});
    }
    return f;
}

u64 binomial(u64 n, u64 k)
{
    if (k > n) return 0;
    k = std::min(k, n - k);
    u128 r = 1;
    for (u64 i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > static_cast<u128>(UINT64_MAX)) throw std::overflow_error("binomial overflow");
    }
    return static_cast<u64>(r);
}

u64 tau_ordered(u64 n, int m)
{
    if (m < 1) throw std::domain_error("tau_ordered: m must be positive");
    u128 r = 1;
    for (const auto& pe : factorize(n).factors) {
        r *= binomial(static_cast<u64>(pe.exponent + m - 1), static_cast<u64>(m - 1));
        if (r > static_cast<u128>(UINT64_MAX)) throw std::overflow_error("tau_ordered overflow");
    }
    return static_cast<u64>(r);
}

int mobius(u64 n)
{
    int sign = 1;
    for (const auto& pe : factorize(n).factors) {
        if (pe.exponent > 1) return 0;
        sign = -sign;
    }
    return sign;
}

std::span<const std::uint32_t> primes_up_to(u64 limit)
{
    auto& store = sieve_store();
    std::lock_guard lock(store.mu);
    if (store.tables.empty() || store.covered < limit) {
        const u64 target = std::max<u64>(limit, u64{1} << 16);
        store.tables.push_back(sieve(target));
        store.covered = target;
    }
    const auto& table = store.tables.back();
    auto end = std::upper_bound(table.begin(), table.end(), limit);
    return {table.data(), static_cast<std::size_t>(end - table.begin())};
}

std::vector<u64> totient_table(u64 limit)
{
    std::vector<u64> phi(limit + 1);
    std::iota(phi.begin(), phi.end(), u64{0});
    for (u64 i = 2; i <= limit; ++i) {
        if (phi[i] != i) continue;
        for (u64 j = i; j <= limit; j += i) phi[j] -= phi[j] / i;
    }
    return phi;
}

std::vector<Composition> compositions(int e, int m)
{
    std::vector<Composition> out;
    for_each_composition(e, m, [&](std::span<const int> parts) {
        out.push_back({std::vector<int>(parts.begin(), parts.end()), e});
    });
    return out;
}

} // namespace lcmlaw
