#include "lcmlaw/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <numbers>

#include <CLI11.hpp>

#include "lcmlaw/empirical.hpp"
#include "lcmlaw/exactdist.hpp"
#include "lcmlaw/limitdist.hpp"
#include "lcmlaw/montecarlo.hpp"
#include "lcmlaw/ntcore.hpp"
#include "lcmlaw/plocal.hpp"

#ifndef LCMLAW_VERSION
#define LCMLAW_VERSION "0.0.0"
#endif

namespace lcmlaw::cli {

namespace {

constexpr long double kMinSurvivalT = 1e-4L;

long double zeta(long double s) { return std::riemann_zeta(s); }

Json real(long double v) { return format_real(v); }

void require(bool ok, const std::string& msg)
{
    if (!ok) throw UsageError(msg);
}

EnumerationOptions enum_opts(const Manifest& m) { return {m.budget, m.threads}; }

ReportRow rational_row(const std::string& key, const Rational& q)
{
    return {key, q, to_long_double(q)};
}

ReportRow real_row(const std::string& key, long double v) { return {key, std::nullopt, v}; }

void add_bracket_rows(Report& r, const std::string& name, const Bracket& b)
{
    r.rows.push_back(real_row(name + ".lo", b.lo));
    r.rows.push_back(real_row(name + ".hi", b.hi));
}

void table_rows(Report& r, const PmfTable& t)
{
    r.key_column = "n";
    for (const auto& e : t.entries) r.rows.push_back({std::to_string(e.n), e.exact, e.value});
}

ConstraintGraph make_graph(const Manifest& m)
{
    if (m.graph == "complete") return ConstraintGraph::complete(m.k);
    if (m.graph == "edgeless") return ConstraintGraph::edgeless(m.k);
    if (m.graph == "path") return ConstraintGraph::path(m.k);
    throw UsageError("unknown graph '" + m.graph + "' (complete, edgeless, path)");
}

WeightSpec make_weight(const Manifest& m)
{
    if (m.weight == "unit") return WeightSpec::unit();
    if (m.weight == "power") return WeightSpec::power(m.r);
    if (m.weight == "threshold") return WeightSpec::threshold(m.t);
    throw UsageError("unknown weight '" + m.weight + "' (unit, power, threshold)");
}

SeriesMethod make_method(const Manifest& m)
{
    if (m.method == "euler") return SeriesMethod::euler;
    if (m.method == "direct") return SeriesMethod::direct;
    throw UsageError("unknown method '" + m.method + "' (euler, direct)");
}

// ---- commands ------------------------------------------------------------

void cmd_pk(const Manifest& m, Report& r)
{
    const Bracket T = Tk(m.k, m.policy);
    r.key_column = "n";
    const u64 lo = m.n_max ? 1 : m.n, hi = m.n_max ? m.n_max : m.n;
    for (u64 n = lo; n <= hi; ++n) {
        const PkValue v = pk(n, m.k, T);
        r.rows.push_back({std::to_string(n), v.coefficient, v.numeric});
        if (lo == hi) {
            r.results["coefficient"] = exact_json(v.coefficient);
            r.results["value"] = bracket_json(v.bracket);
        }
    }
    r.results["Tk"] = bracket_json(T);
    r.results["note"] = "numerator/denominator give p_k(n)/T_k; float is the bracket midpoint of p_k(n)";
}

void cmd_gk(const Manifest& m, Report& r)
{
    r.key_column = "n";
    const u64 lo = m.n_max ? 1 : m.n, hi = m.n_max ? m.n_max : m.n;
    for (u64 n = lo; n <= hi; ++n) {
        const Rational g = gk(n, m.k);
        r.rows.push_back(rational_row(std::to_string(n), g));
        if (lo == hi) r.results["gk"] = exact_json(g);
    }
}

void cmd_tk(const Manifest& m, Report& r)
{
    const Bracket T = Tk(m.k, m.policy);
    r.results["Tk"] = bracket_json(T);
    r.results["width"] = real(T.width());
    add_bracket_rows(r, "Tk", T);
}

void cmd_ck(const Manifest& m, Report& r)
{
    require(m.r > -1.0L, "r must exceed -1 (the series diverges at r = -1)");
    const Bracket C = Ck(m.r, m.k, m.policy, make_method(m));
    r.results["Ck"] = bracket_json(C);
    add_bracket_rows(r, "Ck", C);
}

void cmd_gk_series(const Manifest& m, Report& r)
{
    require(m.s > -1.0L, "s must exceed -1");
    const Bracket G = Gk(m.s, m.k, m.policy, make_method(m));
    r.results["Gk"] = bracket_json(G);
    add_bracket_rows(r, "Gk", G);
}

void cmd_omega(const Manifest& m, Report& r)
{
    const long double v = omega_k(m.t, m.k);
    r.results["omega"] = real(v);
    r.rows.push_back(real_row("omega", v));
}

void cmd_survival(const Manifest& m, Report& r)
{
    require(m.t >= kMinSurvivalT, "survival needs t >= 1e-4");
    const Bracket main = survival_main(m.t, m.k, m.policy);
    r.results["main_term"] = bracket_json(main);
    add_bracket_rows(r, "main_term", main);
    if (m.k == 2) {
        const long double de = de_survival(m.t);
        r.results["de_oracle"] = real(de);
        r.rows.push_back(real_row("de_oracle", de));
        r.checks.push_back(compare_report("main term vs k=2 closed form", {2, 0, m.t}, main, {2, 0, m.t}, de,
                                          ErrorBand{1e-10L, 0}));
    }
    if (m.compare) {
        const Rational emp = empirical_survival(m.x, m.k, m.t, enum_opts(m));
        r.results["empirical"] = exact_json(emp);
        r.rows.push_back(rational_row("empirical", emp));
        r.checks.push_back(compare_report("empirical survival vs main term", {m.k, m.x, m.t}, main,
                                          {m.k, m.x, m.t}, to_long_double(emp), ErrorBand{m.band_c, m.k - 1}));
    }
}

void cmd_de_survival(const Manifest& m, Report& r)
{
    const long double v = de_survival(m.t);
    r.results["survival"] = real(v);
    r.rows.push_back(real_row("survival", v));
}

void cmd_moments(const Manifest& m, Report& r)
{
    require(m.r > -1.0L, "r must exceed -1");
    const bool product = m.normalization == "product";
    require(product || m.normalization == "xPower", "normalization must be product or xPower");
    // product normalization converges to C_{r,k}, xPower to C_{r,k} / (r+1)^k
    const Bracket C = Ck(m.r, m.k, m.policy);
    const Bracket main = product ? C : moment_main(m.r, m.k, m.policy);
    r.results["main_term"] = bracket_json(main);
    add_bracket_rows(r, "main_term", main);
    if (m.compare) {
        const auto emp = empirical_moment(m.x, m.k, m.r, product ? MomentNormalization::product
                                                                  : MomentNormalization::xPower,
                                          enum_opts(m));
        if (emp.exact) {
            r.results["empirical"] = exact_json(*emp.exact);
            r.rows.push_back(rational_row("empirical", *emp.exact));
        } else {
            r.results["empirical"] = real(emp.value);
            r.rows.push_back(real_row("empirical", emp.value));
        }
        r.checks.push_back(compare_report("empirical moment vs main term", {m.k, m.x, m.r}, main, {m.k, m.x, m.r},
                                          emp.value, ErrorBand{m.band_c, m.k - 1}));
    }
}

void cmd_ratio_pmf(const Manifest& m, Report& r)
{
    const PmfTable t = ratio_pmf(m.x, m.k, enum_opts(m));
    const auto total = t.exact_total();
    if (!total || *total != 1) throw InvariantViolation("ratio pmf does not sum to 1");
    r.results["entries"] = t.entries.size();
    r.results["total"] = exact_json(*total);
    table_rows(r, t);
}

void cmd_weighted_pmf(const Manifest& m, Report& r)
{
    require(m.r > -1.0L, "r must exceed -1");
    const PmfTable t = weighted_pmf(m.x, m.k, m.r, enum_opts(m));
    r.results["entries"] = t.entries.size();
    r.results["method"] = t.method;
    if (auto total = t.exact_total()) r.results["total"] = exact_json(*total);
    else r.results["total"] = real(t.total());
    r.results["limit_total"] = real(std::pow(m.r + 1.0L, -static_cast<long double>(m.k)));
    table_rows(r, t);
}

void cmd_vk(const Manifest& m, Report& r)
{
    const BigInt v = vk(m.x, m.k, enum_opts(m));
    r.results["vk"] = v.get_str();
    r.rows.push_back(rational_row("vk", Rational(v)));
    if (m.k == 2) {
        const BigInt o = vk_oracle_k2(m.x);
        r.results["oracle"] = o.get_str();
        r.rows.push_back(rational_row("oracle", Rational(o)));
        if (o != v) throw InvariantViolation("V_2(x) enumeration disagrees with the gcd-sum identity");
    }
}

void cmd_coprime_count(const Manifest& m, Report& r)
{
    const ConstraintGraph G = make_graph(m);
    const WeightSpec f = make_weight(m);
    std::vector<u64> u = m.u.empty() ? std::vector<u64>(m.k, 1) : m.u;
    std::vector<u64> a = m.a.empty() ? std::vector<u64>(m.k, 1) : m.a;
    require(u.size() == static_cast<std::size_t>(m.k) && a.size() == static_cast<std::size_t>(m.k),
            "--u and --a need exactly k entries");
    const auto count = coprime_count(G, u, a, m.x, f, enum_opts(m));
    const auto main = coprime_main_term(G, u, a, m.x, f, m.policy);
    if (count.exact) {
        r.results["count"] = exact_json(*count.exact);
        r.rows.push_back(rational_row("count", *count.exact));
    } else {
        r.results["count"] = real(count.value);
        r.rows.push_back(real_row("count", count.value));
    }
    r.results["main_term"] = bracket_json(main.value);
    r.results["A_G"] = bracket_json(main.A_G);
    r.results["f_G"] = exact_json(main.f_G);
    r.results["integral"] = real(main.integral);
    r.results["theta"] = main.theta;
    add_bracket_rows(r, "main_term", main.value);
    if (m.compare) {
        // compare on the x^k-normalized scale
        const long double xk = std::pow(static_cast<long double>(m.x), static_cast<long double>(m.k));
        r.checks.push_back(compare_report("count / x^k vs main term / x^k", {m.k, m.x, 0}, main.value * (1.0L / xk),
                                          {m.k, m.x, 0}, count.value / xk,
                                          ErrorBand{m.band_c * static_cast<long double>(main.theta), m.k - 1}));
    }
}

void cmd_gcd_pmf(const Manifest& m, Report& r)
{
    const PmfTable t = gcd_pmf(m.x, m.k, enum_opts(m));
    r.key_column = "m";
    for (const auto& e : t.entries) r.rows.push_back({std::to_string(e.n), e.exact, e.value});
    r.results["main_term_m1"] = real(gcd_pmf_main(1, m.k));
    if (const auto* e1 = t.find(1)) {
        r.checks.push_back(compare_report("gcd mass at 1 vs 1/zeta(k)", {m.k, m.x, 1},
                                          Bracket::point(gcd_pmf_main(1, m.k)), {m.k, m.x, 1}, e1->value,
                                          ErrorBand{m.band_c, 0}));
    }
}

void cmd_sample_rk(const Manifest& m, Report& r)
{
    SamplerConfig cfg{m.k, m.mc_prime_limit, m.seed, m.samples, m.threads};
    const RkSummary s = run_rk(cfg);
    r.results["generator"] = kGeneratorName;
    r.results["saturated"] = s.saturated;
    r.results["bias_bound"] = real(s.bias_bound);
    r.key_column = "n";
    const BigInt N = to_bigint(m.samples);
    for (const auto& [n, c] : s.counts) {
        if (m.n_max && n > m.n_max) break;
        Rational q(to_bigint(c), N);
        q.canonicalize();
        r.rows.push_back(rational_row(std::to_string(n), q));
    }
    if (m.k == 2) {
        const u64 limit = m.n_max ? m.n_max : 20;
        long double tv = 0.0L;
        for (u64 n = 1; n <= limit; ++n) {
            auto it = s.counts.find(n);
            const long double emp = it == s.counts.end() ? 0.0L : static_cast<long double>(it->second) / m.samples;
            tv += std::fabs(emp - pk_closed_small_k(n, 2));
        }
        r.results["tv_distance_k2"] = real(tv / 2.0L);
    }
}

void cmd_sample_limit(const Manifest& m, Report& r)
{
    std::vector<long double> ts = m.ts.empty() ? std::vector<long double>{m.t} : m.ts;
    SamplerConfig cfg{m.k, m.mc_prime_limit, m.seed, m.samples, m.threads};
    const LimitSummary s = run_limit(cfg, ts);
    r.results["generator"] = kGeneratorName;
    r.results["unit_count"] = s.unit_count;
    r.results["bias_bound"] = real(s.bias_bound);
    r.key_column = "t";
    const long double N = static_cast<long double>(m.samples);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        Rational q(to_bigint(s.exceed[i]), to_bigint(m.samples));
        q.canonicalize();
        r.rows.push_back(rational_row(format_real(ts[i]), q));
        const Bracket main = survival_main(ts[i], m.k, m.policy);
        const long double pm = main.mid();
        const long double sigma = std::sqrt(std::max(pm * (1.0L - pm), 0.0L) / N);
        r.checks.push_back(compare_report("sampled survival vs main term (3 sigma)", {m.k, 0, ts[i]}, main,
                                          {m.k, 0, ts[i]}, to_long_double(q), ErrorBand{3.0L * sigma + s.bias_bound, 0}));
    }
}

void cmd_partial_sums(const Manifest& m, Report& r)
{
    const Bracket T = Tk(m.k, m.policy);
    const auto ps = partial_sum_weighted_pk(m.x, m.k, T);
    const Rational g = partial_sum_weighted_gk(m.x, m.k);
    r.results["pk_coefficient_sum"] = exact_json(ps.coefficient_sum);
    r.results["pk_sum"] = bracket_json(ps.value);
    r.results["gk_sum"] = exact_json(g);
    r.rows.push_back(rational_row("pk_coefficient_sum", ps.coefficient_sum));
    add_bracket_rows(r, "pk_sum", ps.value);
    r.rows.push_back(rational_row("gk_sum", g));
    if (ps.value.lo > to_long_double(g) * T.hi) throw InvariantViolation("p_k partial sum exceeds the g_k bound");
}

void cmd_ck_dk(const Manifest& m, Report& r)
{
    const AsymptoticConstants c = ck_dk_brackets(m.k, m.policy);
    r.results["log_power"] = c.log_power;
    r.results["c"] = bracket_json(c.c);
    r.results["d"] = bracket_json(c.d);
    r.results["H"] = bracket_json(c.H);
    r.results["I"] = bracket_json(c.I);
    r.results["lower_product"] = bracket_json(c.lower_product);
    add_bracket_rows(r, "c", c.c);
    add_bracket_rows(r, "d", c.d);
    if (!(c.c.hi < c.d.lo)) throw InvariantViolation("c_k and d_k brackets are not separated");
}

void cmd_identity_suite(const Manifest& m, Report& r)
{
    auto point = [](long double v) { return Bracket::point(v); };
    const ErrorBand none{0.0L, 0};

    for (long double t : {0.9L, 0.7L, 0.5L, 0.3L, 0.1L, 0.05L, 0.01L})
        r.checks.push_back(compare_report("survival main term = closed form at k=2", {2, 0, t},
                                          survival_main(t, 2, m.policy), {2, 0, t}, de_survival(t),
                                          ErrorBand{1e-10L, 0}));
    for (int k = 2; k <= 6; ++k)
        r.checks.push_back(compare_report("F_k(0) = 1", {k, 0, 0}, Ck(0, k, m.policy), {k, 0, 0}, 1.0L,
                                          ErrorBand{1e-6L, 0}));
    for (int k = 2; k <= 12; ++k)
        r.checks.push_back(compare_report("dropped-maximum count = 2^k-k-1", {k, 0, 0},
                                          point(static_cast<long double>((u64{1} << k) - k - 1)), {k, 0, 0},
                                          static_cast<long double>(dropped_max_identity(k)), none));
    for (int k = 2; k <= 5; ++k)
        for (u64 p : {2, 3, 5, 7, 11})
            for (long double s : {-0.5L, 0.0L, 0.5L, 1.0L, 2.0L})
                r.checks.push_back(compare_report("Euler factor closed form in series bracket", {k, p, s},
                                                  plocal_F_series(p, s, k, 80), {k, p, s},
                                                  plocal_F_closed(p, s, k), none));
    {
        const Bracket T2 = Tk(2, m.policy);
        long double worst = 0.0L;
        for (u64 n = 1; n <= 200; ++n)
            worst = std::max(worst, std::fabs(pk(n, 2, T2).numeric - pk_closed_small_k(n, 2)));
        r.checks.push_back(compare_report("p_2(n) = 1/(n^2 zeta(2)), n <= 200, max deviation", {2, 200, 0},
                                          point(0.0L), {2, 200, 0}, worst, ErrorBand{T2.width(), 0}));
        u64 mismatches = 0;
        for (u64 n = 1; n <= 200; ++n)
            if (pk_coefficient(n, 3) != pk3_closed_coefficient(n)) ++mismatches;
        r.checks.push_back(compare_report("p_3(n)/T_3 = closed form, n <= 200, mismatches", {3, 200, 0}, point(0),
                                          {3, 200, 0}, static_cast<long double>(mismatches), none));
    }
    {
        const long double target = zeta(3) / zeta(2);
        r.checks.push_back(compare_report("C_{1,2} = zeta(3)/zeta(2)", {2, 0, 1}, Ck(1, 2, m.policy), {2, 0, 1},
                                          target, none));
        const auto c2 = ck_dk_brackets(2, m.policy);
        r.checks.push_back(compare_report("c_2 = 1/zeta(2)", {2, 0, 0}, c2.c, {2, 0, 0}, 1.0L / zeta(2), none));
    }
    {
        const BigInt v = vk(100, 2, enum_opts(m));
        const BigInt o = vk_oracle_k2(100);
        r.checks.push_back(compare_report("V_2(100) = gcd-sum identity", {2, 100, 0}, point(to_long_double(o)),
                                          {2, 100, 0}, to_long_double(v), none));
        const PmfTable t = ratio_pmf(30, 3, enum_opts(m));
        const auto total = t.exact_total();
        r.checks.push_back(compare_report("ratio pmf mass = 1 (x=30, k=3)", {3, 30, 0}, point(1.0L), {3, 30, 0},
                                          total && *total == 1 ? 1.0L : 0.0L, none));
        Rational weighted(0);
        for (const auto& e : t.entries) weighted += Rational(to_bigint(e.n)) * *e.exact;
        Rational v3(vk(30, 3, enum_opts(m)), ipow(30, 3));
        v3.canonicalize();
        r.checks.push_back(compare_report("sum n pmf(n) = V_3(30)/30^3", {3, 30, 0}, point(1.0L), {3, 30, 0},
                                          weighted == v3 ? 1.0L : 0.0L, none));
    }
    for (u64 n : {12ULL, 360ULL, 1001ULL}) {
        const u64 expected = tau_ordered(n, 2) * static_cast<u64>(std::pow(3, factorize(n).omega()));
        r.checks.push_back(compare_report("|B_n| = tau_{k-1}(n) k^omega(n) (k=3)", {3, n, 0},
                                          point(static_cast<long double>(expected)), {3, n, 0},
                                          static_cast<long double>(enumerate_Bn(n, 3).size()), none));
    }
    u64 passed = 0;
    for (const auto& c : r.checks) passed += c.pass ? 1 : 0;
    r.results["checks"] = r.checks.size();
    r.results["passed"] = passed;
    r.key_column = "check";
    for (std::size_t i = 0; i < r.checks.size(); ++i)
        r.rows.push_back(real_row(std::to_string(i + 1) + " " + r.checks[i].name, r.checks[i].pass ? 1.0L : 0.0L));
}

using Handler = void (*)(const Manifest&, Report&);

const std::map<std::string, Handler>& handlers()
{
    static const std::map<std::string, Handler> table = {
        {"pk", cmd_pk},
        {"gk", cmd_gk},
        {"tk", cmd_tk},
        {"ck", cmd_ck},
        {"gk-series", cmd_gk_series},
        {"omega", cmd_omega},
        {"survival", cmd_survival},
        {"de-survival", cmd_de_survival},
        {"moments", cmd_moments},
        {"ratio-pmf", cmd_ratio_pmf},
        {"weighted-pmf", cmd_weighted_pmf},
        {"vk", cmd_vk},
        {"coprime-count", cmd_coprime_count},
        {"gcd-pmf", cmd_gcd_pmf},
        {"sample-rk", cmd_sample_rk},
        {"sample-limit", cmd_sample_limit},
        {"partial-sums", cmd_partial_sums},
        {"ck-dk", cmd_ck_dk},
        {"identity-suite", cmd_identity_suite},
    };
    return table;
}

} // namespace

std::string version() { return LCMLAW_VERSION; }

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, h] : handlers()) v.push_back(name);
        return v;
    }();
    return names;
}

void Manifest::validate() const
{
    require(handlers().count(command) == 1, "unknown command '" + command + "'");
    require(k >= 2, "k must be at least 2");
    require(k <= 20, "k must be at most 20");
    require(x >= 1, "x must be positive");
    require(n >= 1, "n must be positive");
    require(t > 0.0L && t <= 1.0L, "t must lie in (0, 1]");
    for (long double v : ts) require(v > 0.0L && v <= 1.0L, "every t must lie in (0, 1]");
    require(budget >= 1, "budget must be positive");
    require(samples >= 1, "sample count must be positive");
    require(mc_prime_limit >= 2, "sampler prime limit must be at least 2");
    require(threads >= 1, "threads must be positive");
    require(format == "json" || format == "csv", "format must be json or csv");
    require(band_c >= 0.0L, "band constant must be nonnegative");
    require(policy.prime_limit >= 2 && policy.exponent_limit >= 1 && policy.direct_sum_limit >= 1,
            "truncation policy fields must be positive (prime limit >= 2)");
    for (u64 v : u) require(v >= 1, "u entries must be positive");
    for (u64 v : a) require(v >= 1, "a entries must be positive");
}

Json Manifest::echo() const
{
    Json j;
    j["command"] = command;
    j["k"] = k;
    j["x"] = x;
    j["n"] = n;
    j["n_max"] = n_max;
    j["r"] = real(r);
    j["s"] = real(s);
    j["t"] = real(t);
    Json tl = Json::array();
    for (long double v : ts) tl.push_back(real(v));
    j["ts"] = tl;
    j["compare"] = compare;
    j["method"] = method;
    j["normalization"] = normalization;
    j["graph"] = graph;
    j["u"] = u;
    j["a"] = a;
    j["weight"] = weight;
    j["band_c"] = real(band_c);
    j["policy"] = {{"prime_limit", policy.prime_limit},
                   {"exponent_limit", policy.exponent_limit},
                   {"direct_sum_limit", policy.direct_sum_limit}};
    j["seed"] = seed;
    j["samples"] = samples;
    j["mc_prime_limit"] = mc_prime_limit;
    j["budget"] = budget;
    j["format"] = format;
    return j;
}

Report build_report(const Manifest& m)
{
    m.validate();
    Report r;
    r.command = m.command;
    r.manifest = m.echo();
    try {
        handlers().at(m.command)(m, r);
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    return r;
}

std::string run(const Manifest& m)
{
    const Report r = build_report(m);
    return m.format == "csv" ? render_csv(r, version()) : render_json(r, version());
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"lcmlaw: limiting distribution of lcm/(n1...nk) and lcm/x^k"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    Manifest m;
    double r = 1.0, s = 0.0, t = 0.5, band = 20.0;
    std::vector<double> ts;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--k", m.k, "tuple length k")->capture_default_str();
        sub->add_option("--prime-limit", m.policy.prime_limit, "Euler product prime cutoff P")->capture_default_str();
        sub->add_option("--exponent-limit", m.policy.exponent_limit, "per-prime exponent cap E")->capture_default_str();
        sub->add_option("--direct-limit", m.policy.direct_sum_limit, "direct Dirichlet sum cutoff N")
            ->capture_default_str();
        sub->add_option("--threads", m.threads, "worker threads (results do not depend on it)")->capture_default_str();
        sub->add_option("--format", m.format, "json or csv")->capture_default_str();
        sub->add_option("--out", m.out, "output path (default: $LCMLAW_OUTPUT_DIR/<command>.<format> or stdout)");
    };
    auto enumerating = [&](CLI::App* sub) {
        sub->add_option("--x", m.x, "box size x")->capture_default_str();
        sub->add_option("--budget", m.budget, "ceiling on enumerated tuples")->capture_default_str();
    };
    auto sampling = [&](CLI::App* sub) {
        sub->add_option("--seed", m.seed, "64-bit seed")->capture_default_str();
        sub->add_option("--samples", m.samples, "number of samples")->capture_default_str();
        sub->add_option("--mc-prime-limit", m.mc_prime_limit, "sampler prime cutoff")->capture_default_str();
    };
    auto opt_r = [&](CLI::App* sub) { sub->add_option("--r", r, "moment / weight exponent r > -1")->capture_default_str(); };
    auto opt_t = [&](CLI::App* sub) { sub->add_option("--t", t, "threshold t in (0, 1]")->capture_default_str(); };
    auto opt_n = [&](CLI::App* sub) {
        sub->add_option("--n", m.n, "argument n")->capture_default_str();
        sub->add_option("--n-max", m.n_max, "tabulate n = 1..n-max instead");
    };
    auto opt_compare = [&](CLI::App* sub) {
        sub->add_flag("--compare", m.compare, "also enumerate and compare against the main term");
        sub->add_option("--band", band, "error band constant C in C x^-1 log^(k-1) x")->capture_default_str();
    };
    auto opt_method = [&](CLI::App* sub) {
        sub->add_option("--method", m.method, "euler or direct")->capture_default_str();
    };

    std::map<std::string, CLI::App*> subs;
    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        common(sub);
        subs[name] = sub;
        return sub;
    };

    opt_n(add("pk", "p_k(n) as an exact multiple of T_k"));
    opt_n(add("gk", "g_k(n), exact"));
    add("tk", "T_k bracket");
    {
        auto* c = add("ck", "C_{r,k} bracket");
        opt_r(c);
        opt_method(c);
    }
    {
        auto* c = add("gk-series", "G_k(s) bracket");
        c->add_option("--s", s, "argument s > -1")->capture_default_str();
        opt_method(c);
    }
    opt_t(add("omega", "Omega_k(t)"));
    {
        auto* c = add("survival", "limit of P(lcm/x^k > t)");
        opt_t(c);
        enumerating(c);
        opt_compare(c);
    }
    opt_t(add("de-survival", "k = 2 closed-form survival"));
    {
        auto* c = add("moments", "moment main term, optionally against enumeration");
        opt_r(c);
        enumerating(c);
        opt_compare(c);
        c->add_option("--normalization", m.normalization, "product or xPower")->capture_default_str();
    }
    enumerating(add("ratio-pmf", "exact law of prod/lcm over [1,x]^k"));
    {
        auto* c = add("weighted-pmf", "weighted law of prod/lcm");
        enumerating(c);
        opt_r(c);
    }
    enumerating(add("vk", "V_k(x)"));
    {
        auto* c = add("coprime-count", "graph-constrained coprime count and main term");
        enumerating(c);
        opt_r(c);
        opt_t(c);
        opt_compare(c);
        c->add_option("--graph", m.graph, "complete, edgeless or path")->capture_default_str();
        c->add_option("--u", m.u, "coprimality moduli u_i (k values)");
        c->add_option("--a", m.a, "box divisors a_i (k values)");
        c->add_option("--weight", m.weight, "unit, power or threshold")->capture_default_str();
    }
    {
        auto* c = add("gcd-pmf", "exact gcd law over [1,x]^k");
        enumerating(c);
        c->add_option("--band", band, "band constant for the m = 1 comparison")->capture_default_str();
    }
    {
        auto* c = add("sample-rk", "Monte Carlo law of 1/R_k");
        sampling(c);
        c->add_option("--n-max", m.n_max, "only report n <= n-max");
    }
    {
        auto* c = add("sample-limit", "Monte Carlo survival of the limit variable");
        sampling(c);
        c->add_option("--t", ts, "thresholds in (0, 1]");
    }
    enumerating(add("partial-sums", "sum_{n<=x} n p_k(n) and n g_k(n)"));
    add("ck-dk", "c_k and d_k brackets");
    enumerating(add("identity-suite", "run every analytic identity check"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) m.command = name;
    m.r = r;
    m.s = s;
    m.t = t;
    m.band_c = band;
    for (double v : ts) m.ts.push_back(v);

    try {
        const Report report = build_report(m);
        const std::string text = m.format == "csv" ? render_csv(report, version()) : render_json(report, version());
        std::string path = m.out;
        if (path.empty()) {
            if (const char* dir = std::getenv("LCMLAW_OUTPUT_DIR"); dir && *dir)
                path = (std::filesystem::path(dir) / (m.command + "." + m.format)).string();
        }
        if (path.empty()) std::cout << text;
        else write_atomically(path, text);
        if (m.command == "identity-suite" && !report.all_pass()) return kInvariant;
        return kOk;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kBudget;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kInvariant;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInvariant;
    }
}

} // namespace lcmlaw::cli
