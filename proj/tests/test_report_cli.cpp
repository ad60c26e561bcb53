#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lcmlaw/cli.hpp"
#include "lcmlaw/empirical.hpp"
#include "lcmlaw/report.hpp"

using namespace lcmlaw;

namespace {

cli::Manifest manifest(const std::string& command)
{
    cli::Manifest m;
    m.command = command;
    return m;
}

Json run_json(const cli::Manifest& m) { return Json::parse(cli::run(m)); }

} // namespace

TEST_CASE("error band formula")
{
    const ErrorBand b{2.0L, 3};
    const long double l = std::log(1000.0L);
    CHECK(b.at(1000) == doctest::Approx(static_cast<double>(2.0L * l * l * l / 1000.0L)));
    CHECK(b.at(0) == 2.0L);
    CHECK(ErrorBand{5.0L, 0}.at(10) == doctest::Approx(0.5));
}

TEST_CASE("compare_report")
{
    const CompareMeta meta{2, 100, 0.5L};
    const Bracket theory(0.1L, 0.2L);
    const auto ok = compare_report("q", meta, theory, meta, 0.3L, ErrorBand{5.0L, 0});
    CHECK(ok.pass);
    CHECK(ok.deviation == doctest::Approx(0.15));
    CHECK(ok.band == doctest::Approx(0.05));
    const auto bad = compare_report("q", meta, theory, meta, 0.5L, ErrorBand{5.0L, 0});
    CHECK_FALSE(bad.pass);
    const CompareMeta other{3, 100, 0.5L};
    CHECK_THROWS_AS(compare_report("q", meta, theory, other, 0.15L, ErrorBand{}), MetadataMismatch);
    const CompareMeta shifted{2, 100, 0.25L};
    CHECK_THROWS_AS(compare_report("q", meta, theory, shifted, 0.15L, ErrorBand{}), MetadataMismatch);
}

TEST_CASE("bracket_json rounds outward")
{
    const long double v = 0.1L;
    const Json j = bracket_json(Bracket(v, v));
    CHECK(static_cast<long double>(j["lo"].get<double>()) <= v);
    CHECK(static_cast<long double>(j["hi"].get<double>()) >= v);
    CHECK(format_real(0.5L) == "0.5");
}

TEST_CASE("pk and vk through the CLI layer")
{
    auto m = manifest("pk");
    m.k = 3;
    m.n = 2;
    const Json j = run_json(m);
    CHECK(j["schema"] == kReportSchema);
    CHECK(j["results"]["coefficient"]["numerator"] == "9");
    CHECK(j["results"]["coefficient"]["denominator"] == "16");
    auto v = manifest("vk");
    v.x = 10;
    CHECK(run_json(v)["rows"][0]["numerator"] == "189");
}

TEST_CASE("survival --compare reports main term, empirical value and deviation")
{
    auto m = manifest("survival");
    m.k = 2;
    m.x = 300;
    m.t = 0.4L;
    m.compare = true;
    const Json j = run_json(m);
    CHECK(j["results"].contains("main_term"));
    CHECK(j["results"].contains("empirical"));
    bool found = false;
    for (const auto& c : j["checks"])
        if (c["name"] == "empirical survival vs main term") {
            found = true;
            CHECK(c.contains("deviation"));
            CHECK(c.contains("band"));
            CHECK(c["pass"] == true);
        }
    CHECK(found);
    CHECK(j["all_pass"] == true);
}

TEST_CASE("reports are byte-identical across thread counts")
{
    for (const std::string cmd : {"ratio-pmf", "weighted-pmf", "sample-rk"}) {
        for (const std::string fmt : {"json", "csv"}) {
            auto m = manifest(cmd);
            m.k = 3;
            m.x = 40;
            m.r = -0.5L;
            m.samples = 20'000;
            m.format = fmt;
            m.threads = 1;
            const std::string a = cli::run(m);
            m.threads = 8;
            CHECK_MESSAGE(a == cli::run(m), cmd << " " << fmt);
        }
    }
}

TEST_CASE("manifest echo omits threads and out")
{
    auto m = manifest("tk");
    m.threads = 4;
    m.out = "/tmp/x.json";
    const Json e = m.echo();
    CHECK_FALSE(e.contains("threads"));
    CHECK_FALSE(e.contains("out"));
    CHECK(e["command"] == "tk");
}

TEST_CASE("csv layout")
{
    auto m = manifest("gk");
    m.k = 2;
    m.n_max = 3;
    m.format = "csv";
    const std::string text = cli::run(m);
    std::istringstream in(text);
    std::string line, header;
    while (std::getline(in, line))
        if (!line.starts_with("#")) {
            header = line;
            break;
        }
    CHECK(header == "n,numerator,denominator,float");
    std::getline(in, line);
    CHECK(line.starts_with("1,1,1,"));
}

TEST_CASE("usage errors and budget")
{
    auto m = manifest("survival");
    m.t = 0.0L;
    CHECK_THROWS_AS(cli::run(m), cli::UsageError);
    m.t = 1.5L;
    CHECK_THROWS_AS(cli::run(m), cli::UsageError);
    auto c = manifest("ck");
    c.r = -1.0L;
    CHECK_THROWS_AS(cli::run(c), cli::UsageError);
    auto k = manifest("tk");
    k.k = 1;
    CHECK_THROWS_AS(cli::run(k), cli::UsageError);
    auto b = manifest("ratio-pmf");
    b.k = 3;
    b.x = 100;
    b.budget = 10;
    CHECK_THROWS_AS(cli::run(b), BudgetExceeded);
}

TEST_CASE("atomic writes leave no temporary behind")
{
    const auto dir = std::filesystem::temp_directory_path() / "lcmlaw_atomic_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto path = (dir / "r.json").string();
    write_atomically(path, "first\n");
    write_atomically(path, "second\n");
    std::ifstream in(path);
    std::string s;
    std::getline(in, s);
    CHECK(s == "second");
    CHECK(std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{}) == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("every command is registered")
{
    CHECK(cli::command_names().size() == 19);
}
