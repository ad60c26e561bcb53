#include "lcmlaw/limitdist.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lcmlaw/exactdist.hpp"

namespace lcmlaw {

namespace {

void check_t(long double t)
{
    if (!(t > 0.0L && t <= 1.0L)) throw std::domain_error("t must lie in (0, 1]");
}

} // namespace

long double omega_k(long double t, int k)
{
    check_t(t);
    if (k < 1) throw std::domain_error("k must be at least 1");
    const long double L = -std::log(t);
    long double term = t, sum = 0.0L;
    for (int j = 0; j < k; ++j) {
        sum += term;
        term *= L / (j + 1);
    }
    return std::min(sum, 1.0L);
}

Bracket survival_main(long double t, int k, const TruncationPolicy& policy)
{
    check_t(t);
    if (k < 2) throw std::domain_error("k must be at least 2");
    const Bracket T = (policy.prime_limit == TruncationPolicy{}.prime_limit) ? default_Tk(k) : Tk(k, policy);
    long double coef = 0.0L;
    u64 terms = 0;
    for (u64 n = 1; static_cast<long double>(n) * t <= 1.0L; ++n) {
        const long double mass = 1.0L - omega_k(static_cast<long double>(n) * t, k);
        if (mass > 0.0L) coef += mass * pk_coefficient_numeric(n, k);
        ++terms;
    }
    return (T * coef).widened(rounding_slack(8.0L * static_cast<long double>(terms) + 8.0L * k));
}

long double de_survival(long double t)
{
    check_t(t);
    const long double zeta2 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double> / 6.0L;
    long double sum = 0.0L;
    for (u64 j = 1; static_cast<long double>(j) * t <= 1.0L; ++j) {
        const long double jt = static_cast<long double>(j) * t;
        const long double jj = static_cast<long double>(j);
        sum += (1.0L - jt * (1.0L - std::log(jt))) / (jj * jj);
    }
    return sum / zeta2;
}

Bracket moment_main(long double r, int k, const TruncationPolicy& policy)
{
    if (!(r > -1.0L)) throw std::domain_error("r must exceed -1");
    const Bracket C = Ck(r, k, policy);
    return (C * std::pow(r + 1.0L, -static_cast<long double>(k))).widened(rounding_slack(static_cast<long double>(k)));
}

long double gcd_pmf_main(u64 m, int k)
{
    if (k < 3) throw std::domain_error("gcd_pmf_main requires k >= 3");
    if (m == 0) throw std::domain_error("m must be positive");
    static const std::array<long double, 65> zeta_table = [] {
        std::array<long double, 65> z{};
        for (int j = 3; j <= 64; ++j) z[j] = std::riemann_zeta(static_cast<long double>(j));
        return z;
    }();
    const long double zk = k <= 64 ? zeta_table[k] : 1.0L;
    return std::pow(static_cast<long double>(m), -static_cast<long double>(k)) / zk;
}

} // namespace lcmlaw
