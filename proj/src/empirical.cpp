#include "lcmlaw/empirical.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "lcmlaw/limitdist.hpp"
#include "lcmlaw/ntcore.hpp"
#include "lcmlaw/parallel.hpp"

namespace lcmlaw {

namespace {

constexpr std::size_t kBlocks = 16;
constexpr u64 kDenseLimit = 1u << 18;

void check_k(int k)
{
    if (k < 2) throw std::domain_error("k must be at least 2");
    if (k > 20) throw std::domain_error("k above 20 is not supported by the enumeration engine");
}

void check_x(u64 x)
{
    if (x < 1) throw std::domain_error("x must be positive");
}

long double log2_of(u64 x) { return std::log2(static_cast<long double>(x)); }

bool is_small_integer(long double r) { return r >= 0.0L && r <= 64.0L && r == std::floor(r); }

// Keyed accumulator: a flat array for small key ranges, a hash map beyond.
template <class T>
class Histogram {
public:
    explicit Histogram(u64 max_key) : dense_(max_key < kDenseLimit)
    {
        if (dense_) values_.assign(max_key + 1, T{});
    }
    T& operator[](u64 key) { return dense_ ? values_[key] : sparse_[key]; }

    // Visits nonzero-key entries; dense entries in key order, sparse ones in
    // an unspecified order (callers merge into ordered maps).
    template <class F>
    void for_each(F&& f) const
    {
        if (dense_) {
            for (u64 i = 0; i < values_.size(); ++i)
                if (touched(values_[i])) f(i, values_[i]);
        } else {
            for (const auto& [key, v] : sparse_) f(key, v);
        }
    }

private:
    static bool touched(const T& v)
    {
        if constexpr (std::is_same_v<T, CompensatedSum>) return v.sum != 0.0L || v.carry != 0.0L;
        else return v != T{};
    }
    bool dense_;
    std::vector<T> values_;
    std::unordered_map<u64, T> sparse_;
};

struct Leaf {
    const u64* v;
    u64 mult;
    u128 prod;
    u128 lcm;
    u64 gcd;
};

u128 pow_u128(u128 base, int e)
{
    u128 r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

BigInt x_power(u64 x, int e) { return ipow(x, static_cast<unsigned>(e)); }

// Sorted-tuple engine. Blocks own leading values first = b+1, b+1+kBlocks, ...
template <class Acc, class Make, class Visit>
std::vector<Acc> enumerate_sorted(u64 x, int k, const EnumerationOptions& opt, Make&& make, Visit&& visit)
{
    check_k(k);
    check_x(x);
    const u64 classes = sorted_class_count(x, k);
    if (classes > opt.budget)
        throw BudgetExceeded("enumeration of " + std::to_string(classes) + " sorted classes exceeds budget " +
                             std::to_string(opt.budget));
    if (static_cast<long double>(k) * log2_of(x) >= 62.0L)
        throw BudgetExceeded("x^k exceeds the 63-bit tuple count range");
    u64 fact[21];
    fact[0] = 1;
    for (int i = 1; i <= 20; ++i) fact[i] = fact[i - 1] * static_cast<u64>(i);

    return run_blocks<Acc>(kBlocks, opt.threads, make, [&](std::size_t b, Acc& acc) {
        std::vector<u64> v(static_cast<std::size_t>(k));
        auto rec = [&](auto& self, int d, u128 prod, u128 lcm, u64 g, u64 run, u64 denom) -> void {
            if (d == k) {
                visit(acc, Leaf{v.data(), fact[k] / denom, prod, lcm, g});
                return;
            }
            const u64 prev = v[d - 1];
            for (u64 w = prev; w <= x; ++w) {
                v[d] = w;
                const bool same = (w == prev);
                const u64 r = same ? run + 1 : 1;
                const u64 gl = gcd_u64(static_cast<u64>(lcm % w), w);
                self(self, d + 1, prod * w, lcm / gl * w, gcd_u64(g, w), r, same ? denom * r : denom);
            }
        };
        for (u64 first = b + 1; first <= x; first += kBlocks) {
            v[0] = first;
            rec(rec, 1, first, first, first, 1, 1);
        }
    });
}

PmfTable table_from_counts(const std::map<u64, u64>& counts, u64 x, int k, const std::string& method)
{
    PmfTable t;
    t.x = x;
    t.k = k;
    t.method = method;
    const BigInt denom = x_power(x, k);
    for (const auto& [n, c] : counts) {
        PmfEntry e;
        e.n = n;
        e.exact = Rational(to_bigint(c), denom);
        e.exact->canonicalize();
        e.value = to_long_double(*e.exact);
        t.entries.push_back(std::move(e));
    }
    return t;
}

std::map<u64, u64> ratio_counts(u64 x, int k, const EnumerationOptions& opt)
{
    check_k(k);
    if (static_cast<long double>(k - 1) * log2_of(x) >= 63.0L) throw BudgetExceeded("ratio keys exceed 64 bits");
    const u64 max_key = static_cast<u64>(pow_u128(x, k - 1));
    auto blocks = enumerate_sorted<Histogram<u64>>(
        x, k, opt, [&] { return Histogram<u64>(max_key); },
        [](Histogram<u64>& h, const Leaf& leaf) { h[static_cast<u64>(leaf.prod / leaf.lcm)] += leaf.mult; });
    std::map<u64, u64> counts;
    for (const auto& h : blocks) h.for_each([&](u64 n, u64 c) { counts[n] += c; });
    return counts;
}

// Exact sum of mult * value(leaf)^r over tuples, grouped by key, as integers.
template <class T, class KeyFn, class BaseFn>
std::map<u64, BigInt> integer_weighted(u64 x, int k, int r, u64 max_key, const EnumerationOptions& opt, KeyFn key,
                                       BaseFn base)
{
    auto blocks = enumerate_sorted<Histogram<T>>(
        x, k, opt, [&] { return Histogram<T>(max_key); },
        [&](Histogram<T>& h, const Leaf& leaf) {
            if constexpr (std::is_same_v<T, u128>) {
                h[key(leaf)] += pow_u128(base(leaf), r) * leaf.mult;
            } else {
                BigInt b = to_bigint(base(leaf));
                BigInt p;
                mpz_pow_ui(p.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(r));
                h[key(leaf)] += p * to_bigint(leaf.mult);
            }
        });
    std::map<u64, BigInt> out;
    for (const auto& h : blocks)
        h.for_each([&](u64 n, const T& v) {
            if constexpr (std::is_same_v<T, u128>) out[n] += to_bigint(v);
            else out[n] += v;
        });
    return out;
}

Rational tree_sum(std::vector<Rational> terms)
{
    if (terms.empty()) return Rational(0);
    while (terms.size() > 1) {
        std::vector<Rational> next;
        for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] + terms[i + 1]);
        if (terms.size() % 2) next.push_back(terms.back());
        terms.swap(next);
    }
    return terms.front();
}

} // namespace

const PmfEntry* PmfTable::find(u64 n) const
{
    auto it = std::lower_bound(entries.begin(), entries.end(), n,
                               [](const PmfEntry& e, u64 key) { return e.n < key; });
    return (it != entries.end() && it->n == n) ? &*it : nullptr;
}

std::optional<Rational> PmfTable::exact_total() const
{
    std::vector<Rational> terms;
    for (const auto& e : entries) {
        if (!e.exact) return std::nullopt;
        terms.push_back(*e.exact);
    }
    return tree_sum(std::move(terms));
}

long double PmfTable::total() const
{
    CompensatedSum s;
    for (const auto& e : entries) s.add(e.value);
    return s.value();
}

u64 sorted_class_count(u64 x, int k)
{
    // C(x+k-1, k) computed incrementally, saturating.
    u128 c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (x + static_cast<u64>(i) - 1) / static_cast<u64>(i);
        if (c > std::numeric_limits<u64>::max()) return std::numeric_limits<u64>::max();
    }
    return static_cast<u64>(c);
}

PmfTable ratio_pmf(u64 x, int k, const EnumerationOptions& opt)
{
    return table_from_counts(ratio_counts(x, k, opt), x, k, "enumeration");
}

PmfTable weighted_pmf(u64 x, int k, long double r, const EnumerationOptions& opt)
{
    check_k(k);
    if (!(r > -1.0L)) throw std::domain_error("r must exceed -1");
    if (static_cast<long double>(k - 1) * log2_of(x) >= 63.0L) throw BudgetExceeded("ratio keys exceed 64 bits");
    const u64 max_key = static_cast<u64>(pow_u128(x, k - 1));
    auto key = [](const Leaf& leaf) { return static_cast<u64>(leaf.prod / leaf.lcm); };
    PmfTable t;
    t.x = x;
    t.k = k;
    t.r = r;
    if (is_small_integer(r)) {
        const int ri = static_cast<int>(r);
        auto base = [](const Leaf& leaf) { return leaf.prod; };
        // The grouped sums are at most x^{k(1+r)}.
        const bool fits = static_cast<long double>(k) * (1 + ri) * log2_of(x) < 126.0L;
        const auto sums = fits ? integer_weighted<u128>(x, k, ri, max_key, opt, key, base)
                               : integer_weighted<BigInt>(x, k, ri, max_key, opt, key, base);
        const BigInt denom = x_power(x, k * (1 + ri));
        t.method = "enumeration-exact";
        for (const auto& [n, s] : sums) {
            PmfEntry e;
            e.n = n;
            e.exact = Rational(s, denom);
            e.exact->canonicalize();
            e.value = to_long_double(*e.exact);
            t.entries.push_back(std::move(e));
        }
        return t;
    }
    const long double xk = std::pow(static_cast<long double>(x), static_cast<long double>(k));
    auto blocks = enumerate_sorted<Histogram<CompensatedSum>>(
        x, k, opt, [&] { return Histogram<CompensatedSum>(max_key); },
        [&](Histogram<CompensatedSum>& h, const Leaf& leaf) {
            const long double w = std::pow(static_cast<long double>(leaf.prod) / xk, r);
            h[key(leaf)].add(static_cast<long double>(leaf.mult) * w);
        });
    std::map<u64, CompensatedSum> sums;
    for (const auto& h : blocks) h.for_each([&](u64 n, const CompensatedSum& s) { sums[n].add(s); });
    t.method = "enumeration-compensated";
    for (const auto& [n, s] : sums) {
        PmfEntry e;
        e.n = n;
        e.value = s.value() / xk;
        t.entries.push_back(std::move(e));
    }
    return t;
}

Rational empirical_survival(u64 x, int k, long double t, const EnumerationOptions& opt)
{
    check_k(k);
    if (!(t > 0.0L && t <= 1.0L)) throw std::domain_error("t must lie in (0, 1]");
    const BigInt xk = x_power(x, k);
    const Rational scaled = exact_rational(t) * Rational(xk);
    BigInt floor_val;
    mpz_fdiv_q(floor_val.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    // floor_val <= x^k < 2^62
    const u128 thr = static_cast<u128>(floor_val.get_ui());
    auto blocks = enumerate_sorted<u64>(
        x, k, opt, [] { return u64{0}; },
        [thr](u64& acc, const Leaf& leaf) {
            if (leaf.lcm > thr) acc += leaf.mult;
        });
    u64 total = 0;
    for (u64 c : blocks) total += c;
    Rational out(to_bigint(total), xk);
    out.canonicalize();
    return out;
}

ExactOrReal empirical_moment(u64 x, int k, long double r, MomentNormalization norm, const EnumerationOptions& opt)
{
    check_k(k);
    if (!(r > -1.0L)) throw std::domain_error("r must exceed -1");
    ExactOrReal out;
    const long double xk = std::pow(static_cast<long double>(x), static_cast<long double>(k));
    if (norm == MomentNormalization::product) {
        if (is_small_integer(r)) {
            const auto counts = ratio_counts(x, k, opt);
            const int ri = static_cast<int>(r);
            std::vector<Rational> terms;
            for (const auto& [n, c] : counts) terms.push_back(Rational(to_bigint(c), ipow(n, static_cast<unsigned>(ri))));
            Rational s = tree_sum(std::move(terms)) / Rational(x_power(x, k));
            s.canonicalize();
            out.exact = s;
            out.value = to_long_double(s);
            return out;
        }
        auto blocks = enumerate_sorted<CompensatedSum>(
            x, k, opt, [] { return CompensatedSum{}; },
            [r](CompensatedSum& acc, const Leaf& leaf) {
                const long double n = static_cast<long double>(leaf.prod / leaf.lcm);
                acc.add(static_cast<long double>(leaf.mult) * std::pow(n, -r));
            });
        CompensatedSum s;
        for (const auto& b : blocks) s.add(b);
        out.value = s.value() / xk;
        return out;
    }
    if (is_small_integer(r)) {
        const int ri = static_cast<int>(r);
        auto key = [](const Leaf&) { return u64{0}; };
        auto base = [](const Leaf& leaf) { return leaf.lcm; };
        const bool fits = static_cast<long double>(k) * (1 + ri) * log2_of(x) < 126.0L;
        const auto sums = fits ? integer_weighted<u128>(x, k, ri, 1, opt, key, base)
                               : integer_weighted<BigInt>(x, k, ri, 1, opt, key, base);
        Rational s(sums.empty() ? BigInt(0) : sums.begin()->second, x_power(x, k * (1 + ri)));
        s.canonicalize();
        out.exact = s;
        out.value = to_long_double(s);
        return out;
    }
    auto blocks = enumerate_sorted<CompensatedSum>(
        x, k, opt, [] { return CompensatedSum{}; },
        [r, xk](CompensatedSum& acc, const Leaf& leaf) {
            acc.add(static_cast<long double>(leaf.mult) * std::pow(static_cast<long double>(leaf.lcm) / xk, r));
        });
    CompensatedSum s;
    for (const auto& b : blocks) s.add(b);
    out.value = s.value() / xk;
    return out;
}

BigInt vk(u64 x, int k, const EnumerationOptions& opt)
{
    auto blocks = enumerate_sorted<u128>(
        x, k, opt, [] { return u128{0}; },
        [](u128& acc, const Leaf& leaf) { acc += (leaf.prod / leaf.lcm) * leaf.mult; });
    BigInt total(0);
    for (u128 b : blocks) total += to_bigint(b);
    return total;
}

std::vector<BigInt> vk_prefix(u64 x, int k, const EnumerationOptions& opt)
{
    auto blocks = enumerate_sorted<std::vector<u128>>(
        x, k, opt, [x] { return std::vector<u128>(x + 1, 0); },
        [k](std::vector<u128>& acc, const Leaf& leaf) { acc[leaf.v[k - 1]] += (leaf.prod / leaf.lcm) * leaf.mult; });
    std::vector<BigInt> out(x + 1, BigInt(0));
    BigInt running(0);
    for (u64 y = 1; y <= x; ++y) {
        for (const auto& b : blocks) running += to_bigint(b[y]);
        out[y] = running;
    }
    return out;
}

BigInt vk_oracle_k2(u64 x)
{
    check_x(x);
    const auto phi = totient_table(x);
    BigInt total(0);
    for (u64 d = 1; d <= x; ++d) {
        const u64 q = x / d;
        total += to_bigint(static_cast<u128>(phi[d]) * q * q);
    }
    return total;
}

PmfTable gcd_pmf(u64 x, int k, const EnumerationOptions& opt)
{
    if (k < 3) throw std::domain_error("gcd_pmf requires k >= 3");
    auto blocks = enumerate_sorted<Histogram<u64>>(
        x, k, opt, [x] { return Histogram<u64>(x); },
        [](Histogram<u64>& h, const Leaf& leaf) { h[leaf.gcd] += leaf.mult; });
    std::map<u64, u64> counts;
    for (const auto& h : blocks) h.for_each([&](u64 m, u64 c) { counts[m] += c; });
    return table_from_counts(counts, x, k, "enumeration-gcd");
}

ConstraintGraph ConstraintGraph::complete(int k)
{
    ConstraintGraph g;
    g.k = k;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) g.edges.emplace_back(i, j);
    return g;
}

ConstraintGraph ConstraintGraph::edgeless(int k)
{
    ConstraintGraph g;
    g.k = k;
    return g;
}

ConstraintGraph ConstraintGraph::path(int k)
{
    ConstraintGraph g;
    g.k = k;
    for (int i = 0; i + 1 < k; ++i) g.edges.emplace_back(i, i + 1);
    return g;
}

void ConstraintGraph::validate() const
{
    if (k < 1 || k > 20) throw std::domain_error("graph must have between 1 and 20 vertices");
    for (const auto& [i, j] : edges) {
        if (i < 0 || j < 0 || i >= k || j >= k) throw std::domain_error("edge references a missing vertex");
        if (i == j) throw std::domain_error("self-loops are not allowed");
    }
}

bool ConstraintGraph::adjacent(int i, int j) const
{
    for (const auto& [a, b] : edges)
        if ((a == i && b == j) || (a == j && b == i)) return true;
    return false;
}

bool ConstraintGraph::independent(unsigned mask) const
{
    for (const auto& [a, b] : edges)
        if ((mask >> a & 1u) && (mask >> b & 1u)) return false;
    return true;
}

void WeightSpec::validate() const
{
    if (kind == Kind::power && !(r > -1.0L)) throw std::domain_error("power weight needs r > -1");
    if (kind == Kind::threshold && !(t > 0.0L && t <= 1.0L)) throw std::domain_error("threshold must lie in (0, 1]");
}

ExactOrReal coprime_count(const ConstraintGraph& G, std::span<const u64> u, std::span<const u64> a, u64 x,
                          const WeightSpec& f, const EnumerationOptions& opt)
{
    G.validate();
    f.validate();
    check_x(x);
    const int k = G.k;
    if (u.size() != static_cast<std::size_t>(k) || a.size() != static_cast<std::size_t>(k))
        throw std::domain_error("u and a must have one entry per vertex");
    std::vector<u64> box(k);
    long double work = 1.0L;
    for (int i = 0; i < k; ++i) {
        if (u[i] == 0 || a[i] == 0) throw std::domain_error("u and a entries must be positive");
        box[i] = x / a[i];
        work *= static_cast<long double>(box[i]);
    }
    ExactOrReal out;
    if (work == 0.0L) {
        out.exact = Rational(0);
        return out;
    }
    if (work > static_cast<long double>(opt.budget))
        throw BudgetExceeded("coprime count over " + std::to_string(static_cast<double>(work)) +
                             " tuples exceeds budget " + std::to_string(opt.budget));
    if (static_cast<long double>(k) * log2_of(x) >= 62.0L) throw BudgetExceeded("x^k exceeds 62 bits");

    std::vector<std::vector<int>> earlier(k);
    for (const auto& [i, j] : G.edges) earlier[std::max(i, j)].push_back(std::min(i, j));

    const BigInt xk = x_power(x, k);
    u128 threshold = 0;
    if (f.kind == WeightSpec::Kind::threshold) {
        const Rational scaled = exact_rational(f.t) * Rational(xk);
        BigInt fl;
        mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
        threshold = fl.get_ui();
    }
    const bool integer_power = f.kind == WeightSpec::Kind::power && is_small_integer(f.r);
    const int ri = integer_power ? static_cast<int>(f.r) : 0;
    const bool use_big = integer_power && static_cast<long double>(k) * (ri + 1) * log2_of(x) >= 126.0L;
    const long double xkf = std::pow(static_cast<long double>(x), static_cast<long double>(k));

    struct Acc {
        u128 count = 0;
        BigInt big{0};
        CompensatedSum real;
    };
    auto blocks = run_blocks<Acc>(kBlocks, opt.threads, [] { return Acc{}; }, [&](std::size_t b, Acc& acc) {
        std::vector<u64> n(k);
        auto leaf = [&](u128 prod) {
            switch (f.kind) {
            case WeightSpec::Kind::unit:
                ++acc.count;
                break;
            case WeightSpec::Kind::threshold:
                if (prod > threshold) ++acc.count;
                break;
            case WeightSpec::Kind::power:
                if (!integer_power) acc.real.add(std::pow(static_cast<long double>(prod) / xkf, f.r));
                else if (use_big) {
                    BigInt p;
                    const BigInt base = to_bigint(prod);
                    mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(ri));
                    acc.big += p;
                } else {
                    acc.count += pow_u128(prod, ri);
                }
                break;
            }
        };
        auto rec = [&](auto& self, int d, u128 prod) -> void {
            if (d == k) {
                leaf(prod);
                return;
            }
            for (u64 w = 1; w <= box[d]; ++w) {
                if (u[d] > 1 && gcd_u64(u[d], w) != 1) continue;
                bool ok = true;
                for (int j : earlier[d])
                    if (gcd_u64(n[j], w) != 1) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                n[d] = w;
                self(self, d + 1, prod * w * a[d]);
            }
        };
        for (u64 first = b + 1; first <= box[0]; first += kBlocks) {
            if (u[0] > 1 && gcd_u64(u[0], first) != 1) continue;
            n[0] = first;
            rec(rec, 1, static_cast<u128>(first) * a[0]);
        }
    });

    if (f.kind == WeightSpec::Kind::power && !integer_power) {
        CompensatedSum s;
        for (const auto& b : blocks) s.add(b.real);
        out.value = s.value();
        return out;
    }
    BigInt total(0);
    for (const auto& b : blocks) total += to_bigint(b.count) + b.big;
    Rational q(total);
    if (integer_power && ri > 0) q /= Rational(x_power(x, k * ri));
    q.canonicalize();
    out.exact = q;
    out.value = to_long_double(q);
    return out;
}

std::vector<u64> independent_set_counts(const ConstraintGraph& G)
{
    G.validate();
    std::vector<u64> counts(G.k + 1, 0);
    for (unsigned mask = 0; mask < (1u << G.k); ++mask)
        if (G.independent(mask)) ++counts[std::popcount(mask)];
    return counts;
}

std::vector<u64> independent_set_counts_meeting(const ConstraintGraph& G, unsigned S)
{
    G.validate();
    std::vector<u64> counts(G.k + 1, 0);
    for (unsigned mask = 0; mask < (1u << G.k); ++mask)
        if ((mask & S) && G.independent(mask)) ++counts[std::popcount(mask)];
    return counts;
}

CoprimeMainTerm coprime_main_term(const ConstraintGraph& G, std::span<const u64> u, std::span<const u64> a, u64 x,
                                  const WeightSpec& f, const TruncationPolicy& policy)
{
    G.validate();
    f.validate();
    policy.validate();
    const int k = G.k;
    if (u.size() != static_cast<std::size_t>(k) || a.size() != static_cast<std::size_t>(k))
        throw std::domain_error("u and a must have one entry per vertex");
    const auto im = independent_set_counts(G);

    // h(y) = sum_m i_m (1-y)^{k-m} y^m
    std::vector<BigInt> h(k + 1, BigInt(0));
    for (int m = 0; m <= k; ++m) {
        for (int j = 0; j <= k - m; ++j) {
            BigInt c;
            mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(k - m), static_cast<unsigned long>(j));
            c *= static_cast<unsigned long>(im[m]);
            if (j % 2) h[m + j] -= c;
            else h[m + j] += c;
        }
    }
    CoprimeMainTerm out;
    out.A_G = polynomial_euler_product(
        h,
        [&](u64 p) {
            const long double y = 1.0L / static_cast<long double>(p);
            long double s = 0.0L;
            for (int m = 0; m <= k; ++m)
                s += static_cast<long double>(im[m]) * std::pow(1.0L - y, k - m) * std::pow(y, m);
            return s;
        },
        policy.prime_limit);

    std::set<u64> primes;
    out.theta = 1;
    for (int i = 0; i < k; ++i) {
        if (u[i] == 0 || a[i] == 0) throw std::domain_error("u and a entries must be positive");
        const auto fac = factorize(u[i]);
        out.theta = std::max<u64>(out.theta, u64{1} << fac.omega());
        for (const auto& pe : fac.factors) primes.insert(pe.prime);
    }
    out.f_G = Rational(1);
    for (u64 p : primes) {
        unsigned S = 0;
        for (int i = 0; i < k; ++i)
            if (u[i] % p == 0) S |= 1u << i;
        const auto ims = independent_set_counts_meeting(G, S);
        BigInt num(0), den(0);
        for (int m = 0; m <= k; ++m) {
            const BigInt w = ipow(p - 1, static_cast<unsigned>(k - m));
            num += w * static_cast<unsigned long>(ims[m]);
            den += w * static_cast<unsigned long>(im[m]);
        }
        out.f_G *= Rational(1) - Rational(num, den);
    }
    out.f_G.canonicalize();

    switch (f.kind) {
    case WeightSpec::Kind::unit: out.integral = 1.0L; break;
    case WeightSpec::Kind::power: out.integral = std::pow(f.r + 1.0L, -static_cast<long double>(k)); break;
    case WeightSpec::Kind::threshold: out.integral = 1.0L - omega_k(f.t, k); break;
    }
    Rational box(x_power(x, k));
    for (int i = 0; i < k; ++i) box /= Rational(to_bigint(a[i]));
    const long double scale = to_long_double(out.f_G * box) * std::max(0.0L, out.integral);
    out.value = (out.A_G * scale).widened(rounding_slack(16.0L));
    return out;
}

} // namespace lcmlaw
