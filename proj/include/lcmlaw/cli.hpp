#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lcmlaw/report.hpp"
#include "lcmlaw/series.hpp"

namespace lcmlaw::cli {

// Parameter ranges outside the documented domain (exit status 2).
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computed result contradicts an identity that must hold (exit status 1).
struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

enum ExitCode { kOk = 0, kInvariant = 1, kUsage = 2, kBudget = 3 };

// Everything a run depends on. `threads` and `out` are deliberately left out
// of the echoed manifest: neither may change the report.
struct Manifest {
    std::string command;
    int k = 2;
    u64 x = 100;
    u64 n = 1;
    u64 n_max = 0;           // tables over n = 1..n_max when positive
    long double r = 1.0L;
    long double s = 0.0L;    // Dirichlet series argument for gk-series
    long double t = 0.5L;
    std::vector<long double> ts; // threshold list for sample-limit
    bool compare = false;
    std::string method = "euler";          // ck / gk-series
    std::string normalization = "product"; // moments
    std::string graph = "complete";        // coprime-count
    std::vector<u64> u, a;
    std::string weight = "unit";           // unit | power | threshold
    long double band_c = 20.0L;            // error band constant C
    TruncationPolicy policy;
    u64 seed = 1;
    u64 samples = 1'000'000;
    u64 mc_prime_limit = 10'000;
    u64 budget = 500'000'000;
    unsigned threads = 1;
    std::string format = "json";
    std::string out;

    void validate() const;
    Json echo() const;
};

const std::vector<std::string>& command_names();

// Builds the report for a manifest. Throws UsageError, BudgetExceeded or
// InvariantViolation.
Report build_report(const Manifest& m);

// Rendered report text (JSON or CSV per m.format).
std::string run(const Manifest& m);

// Full command-line entry: parse, run, write, map errors to exit codes.
int main_entry(int argc, char** argv);

std::string version();

} // namespace lcmlaw::cli
