#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace lcmlaw {

// A rigorous enclosure [lo, hi] of a real quantity. Every truncated
// infinite product or series in this library is reported as one.
struct Bracket {
    long double lo = 0.0L;
    long double hi = 0.0L;

    Bracket() = default;
    Bracket(long double l, long double h) : lo(l), hi(h)
    {
        if (!(l <= h)) throw std::logic_error("Bracket: lo > hi");
    }

    static Bracket point(long double v) { return {v, v}; }

    long double mid() const { return lo / 2 + hi / 2; }
    long double width() const { return hi - lo; }
    bool contains(long double v) const { return lo <= v && v <= hi; }
    bool contains(const Bracket& b) const { return lo <= b.lo && b.hi <= hi; }
    bool overlaps(const Bracket& b) const { return lo <= b.hi && b.lo <= hi; }

    // Outward widening by a relative amount of |endpoint|.
    Bracket widened(long double rel) const
    {
        return {lo - std::fabs(lo) * rel, hi + std::fabs(hi) * rel};
    }
};

// Product of two brackets with nonnegative endpoints.
inline Bracket operator*(const Bracket& a, const Bracket& b)
{
    return {a.lo * b.lo, a.hi * b.hi};
}

// Scaling by a nonnegative scalar.
inline Bracket operator*(const Bracket& a, long double s)
{
    if (s < 0) throw std::logic_error("Bracket scaling by a negative value");
    return {a.lo * s, a.hi * s};
}

inline Bracket operator+(const Bracket& a, const Bracket& b)
{
    return {a.lo + b.lo, a.hi + b.hi};
}

// Relative slack used to absorb round-off of a chain of `ops` long double
// operations.
inline long double rounding_slack(long double ops)
{
    return (ops + 4.0L) * 2.0L * LDBL_EPSILON;
}

} // namespace lcmlaw
