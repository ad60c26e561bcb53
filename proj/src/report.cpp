#include "lcmlaw/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

namespace lcmlaw {

long double ErrorBand::at(u64 x) const
{
    if (x == 0) return C;
    const long double lx = std::log(static_cast<long double>(x));
    return C * std::pow(lx, log_power) / static_cast<long double>(x);
}

CompareRecord compare_report(const std::string& name, const CompareMeta& theory_meta, const Bracket& theory,
                             const CompareMeta& empirical_meta, long double empirical, const ErrorBand& band)
{
    if (!(theory_meta == empirical_meta))
        throw MetadataMismatch("compare_report: metadata of '" + name + "' differ (k " +
                               std::to_string(theory_meta.k) + " vs " + std::to_string(empirical_meta.k) + ", x " +
                               std::to_string(theory_meta.x) + " vs " + std::to_string(empirical_meta.x) + ")");
    CompareRecord rec;
    rec.name = name;
    rec.meta = theory_meta;
    rec.theory = theory;
    rec.empirical = empirical;
    rec.band = band.at(theory_meta.x);
    rec.deviation = std::fabs(empirical - theory.mid());
    rec.pass = rec.deviation <= theory.width() + rec.band;
    return rec;
}

bool Report::all_pass() const
{
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string format_real(long double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.21Lg", v);
    return buf;
}

namespace {

double down(long double v)
{
    double d = static_cast<double>(v);
    if (static_cast<long double>(d) > v) d = std::nextafter(d, -std::numeric_limits<double>::infinity());
    return d;
}

double up(long double v)
{
    double d = static_cast<double>(v);
    if (static_cast<long double>(d) < v) d = std::nextafter(d, std::numeric_limits<double>::infinity());
    return d;
}

Json real_json(long double v)
{
    if (std::isfinite(v)) return static_cast<double>(v);
    return format_real(v);
}

Json check_json(const CompareRecord& c)
{
    Json j;
    j["name"] = c.name;
    j["k"] = c.meta.k;
    j["x"] = c.meta.x;
    j["parameter"] = real_json(c.meta.parameter);
    j["theory"] = bracket_json(c.theory);
    j["empirical"] = real_json(c.empirical);
    j["band"] = real_json(c.band);
    j["deviation"] = real_json(c.deviation);
    j["pass"] = c.pass;
    return j;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

Json bracket_json(const Bracket& b)
{
    Json j;
    if (std::isfinite(b.lo)) j["lo"] = down(b.lo);
    else j["lo"] = format_real(b.lo);
    if (std::isfinite(b.hi)) j["hi"] = up(b.hi);
    else j["hi"] = format_real(b.hi);
    return j;
}

Json exact_json(const Rational& q)
{
    Json j;
    j["numerator"] = q.get_num().get_str();
    j["denominator"] = q.get_den().get_str();
    return j;
}

std::string render_json(const Report& r, const std::string& version)
{
    Json j;
    j["schema"] = kReportSchema;
    j["tool"] = {{"name", "lcmlaw"}, {"version", version}};
    j["command"] = r.command;
    j["manifest"] = r.manifest;
    j["results"] = r.results;
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(check_json(c));
    j["checks"] = checks;
    j["all_pass"] = r.all_pass();
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json e;
        e[r.key_column] = row.key;
        if (row.exact) {
            e["numerator"] = row.exact->get_num().get_str();
            e["denominator"] = row.exact->get_den().get_str();
        }
        e["float"] = real_json(row.value);
        rows.push_back(e);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string render_csv(const Report& r, const std::string& version)
{
    std::ostringstream os;
    os << "# schema: " << kReportSchema << "\n";
    os << "# tool: lcmlaw " << version << "\n";
    os << "# command: " << r.command << "\n";
    os << "# manifest: " << r.manifest.dump() << "\n";
    os << "# results: " << r.results.dump() << "\n";
    for (const auto& c : r.checks) os << "# check: " << check_json(c).dump() << "\n";
    os << "# all_pass: " << (r.all_pass() ? "true" : "false") << "\n";
    os << r.key_column << ",numerator,denominator,float\n";
    for (const auto& row : r.rows) {
        os << csv_field(row.key) << ',';
        if (row.exact) os << row.exact->get_num().get_str() << ',' << row.exact->get_den().get_str();
        else os << ',';
        os << ',' << format_real(row.value) << "\n";
    }
    return os.str();
}

void write_atomically(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move report into place at " + path);
    }
}

} // namespace lcmlaw
