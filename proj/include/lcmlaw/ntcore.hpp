#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lcmlaw/rational.hpp"

namespace lcmlaw {

struct PrimePower {
    u64 prime = 0;
    int exponent = 0;

    bool operator==(const PrimePower&) const = default;
};

// n = prod prime^exponent with primes strictly increasing.
struct Factorization {
    u64 value = 1;
    std::vector<PrimePower> factors;

    int omega() const { return static_cast<int>(factors.size()); }
    u128 reconstruct() const;
};

// Ordered sequence of m nonnegative parts summing to `total`.
struct Composition {
    std::vector<int> parts;
    int total = 0;
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

// Trial division by small primes, then Pollard-Brent with primality checks
// on the cofactors. Throws std::domain_error for n == 0.
Factorization factorize(u64 n);

// Number of ordered m-factorizations of n: prod over p^e || n of C(e+m-1, m-1).
// Throws std::overflow_error if the result does not fit in 64 bits.
u64 tau_ordered(u64 n, int m);

int mobius(u64 n);

// Exact binomial coefficient; throws std::overflow_error beyond 64 bits.
u64 binomial(u64 n, u64 k);

// Primes <= limit from a shared, read-only sieve. The returned span stays
// valid for the lifetime of the process.
std::span<const std::uint32_t> primes_up_to(u64 limit);

// Euler phi for 0..limit (phi[0] = 0).
std::vector<u64> totient_table(u64 limit);

u64 gcd_u64(u64 a, u64 b);

// Visits every composition of e into m parts in ascending lexicographic
// order: (0,...,0,e), (0,...,1,e-1), ..., (e,0,...,0).
template <class Visitor>
void for_each_composition(int e, int m, Visitor&& visit)
{
    if (m < 1 || e < 0) return;
    std::vector<int> parts(static_cast<std::size_t>(m), 0);
    parts.back() = e;
    const std::span<const int> view(parts);
    for (;;) {
        visit(view);
        if (m == 1) return;
        int pivot;
        if (parts[m - 1] > 0) {
            pivot = m - 2;
        } else {
            int j = m - 2;
            while (j >= 0 && parts[j] == 0) --j;
            if (j <= 0) return;
            pivot = j - 1;
        }
        int suffix = 0;
        for (int i = pivot + 1; i < m; ++i) {
            suffix += parts[i];
            parts[i] = 0;
        }
        ++parts[pivot];
        parts[m - 1] = suffix - 1;
    }
}

std::vector<Composition> compositions(int e, int m);

} // namespace lcmlaw
