#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcmlaw/bracket.hpp"
#include "lcmlaw/rational.hpp"

namespace lcmlaw {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "lcmlaw-report/1";

// Band C * x^{-1} * log^j x; x = 0 means a constant band C.
struct ErrorBand {
    long double C = 0.0L;
    int log_power = 0;

    long double at(u64 x) const;
};

// Identifies what a value refers to; compare_report refuses mismatches.
struct CompareMeta {
    int k = 2;
    u64 x = 0;
    long double parameter = 0.0L;

    bool operator==(const CompareMeta&) const = default;
};

struct MetadataMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CompareRecord {
    std::string name;
    CompareMeta meta;
    Bracket theory;
    long double empirical = 0.0L;
    long double band = 0.0L;
    long double deviation = 0.0L; // |empirical - theory midpoint|
    bool pass = false;
};

// pass iff |empirical - theory.mid()| <= theory.width() + band.at(x).
CompareRecord compare_report(const std::string& name, const CompareMeta& theory_meta, const Bracket& theory,
                             const CompareMeta& empirical_meta, long double empirical, const ErrorBand& band);

// One output row: key (n, m, or a quantity name), optional exact value, float.
struct ReportRow {
    std::string key;
    std::optional<Rational> exact;
    long double value = 0.0L;
};

struct Report {
    std::string command;
    Json manifest = Json::object();
    Json results = Json::object();
    std::vector<CompareRecord> checks;
    std::string key_column = "quantity";
    std::vector<ReportRow> rows;

    bool all_pass() const;
};

// Round-trip decimal rendering of a long double.
std::string format_real(long double v);
// Outward-rounded double endpoints, so the JSON bracket still encloses.
Json bracket_json(const Bracket& b);
Json exact_json(const Rational& q);

std::string render_json(const Report& r, const std::string& version);
std::string render_csv(const Report& r, const std::string& version);

// Writes via a temporary file in the same directory and renames it over the
// target, so readers never see a partial report.
void write_atomically(const std::string& path, const std::string& content);

} // namespace lcmlaw
