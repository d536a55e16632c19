#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "nfsieve/cli.hpp"

using namespace nfsieve;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "nfsieve");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("nfsieve_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, sep);) cells.push_back(c);
    return cells;
}

} // namespace

TEST_CASE("compare on the worked example") {
    TempDir dir("compare");
    const auto r = cli({"compare", "--poly", "1,0,1", "--m", "4", "--u", "3", "--y", "5", "--out", dir.path.string()});
    REQUIRE(r.code == kExitOk);
    const json summary = json::parse(r.out);
    CHECK(summary["ok"] == true);
    CHECK(summary["identities_hold"] == true);
    CHECK(summary["tables_agree"] == true);
    CHECK(summary["residuals_coprime"] == true);
    CHECK(summary["correction_total"] == 0);
    CHECK(json::parse(slurp(dir / "compare_summary.json")) == summary);

    std::istringstream csv(slurp(dir / "compare_rows.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "instance_id,b,l,alg,attempts_rational,attempts_algebraic_simple,attempts_algebraic_multiple,"
                  "C_exact,D_exact,correction,C_asym,D_asym");
    int found = 0;
    while (std::getline(csv, line)) {
        const auto c = split(line);
        REQUIRE(c.size() == 12);
        if (c[1] != "1" || c[2] != "5") continue;
        const long total = std::stol(c[4]) + std::stol(c[5]) + std::stol(c[6]);
        if (c[3] == "classical") {
            CHECK(total == 10);
            ++found;
        } else if (c[3] == "improved") {
            CHECK(total == 5);
            CHECK(c[4] == "1");
            CHECK(c[5] == "4");
            ++found;
        }
        CHECK(c[7] == "10");
        CHECK(c[8] == "5");
        CHECK(c[9] == "0");
        CHECK(c[10] == "11.250000");
        CHECK(c[11] == "6.250000");
    }
    CHECK(found == 2);
}

TEST_CASE("random compare is deterministic") {
    TempDir a("det_a"), b("det_b");
    const std::vector<std::string> base{"compare", "--random", "--d", "3", "--m", "20", "--u", "200", "--y", "50",
                                        "--seed", "7", "--out"};
    auto args_a = base, args_b = base;
    args_a.push_back(a.path.string());
    args_b.push_back(b.path.string());
    args_b.insert(args_b.end(), {"--workers", "3"});
    const auto ra = cli(args_a), rb = cli(args_b);
    CHECK(ra.code == kExitOk);
    CHECK(rb.code == kExitOk);
    CHECK(ra.out == rb.out);
    CHECK(slurp(a / "compare_rows.csv") == slurp(b / "compare_rows.csv"));
    CHECK(slurp(a / "compare_summary.json") == slurp(b / "compare_summary.json"));
    const json s = json::parse(ra.out);
    CHECK(s["alg3_total"].get<std::uint64_t>() < s["alg2_total"].get<std::uint64_t>());
}

TEST_CASE("usage errors") {
    CHECK(cli({"compare", "--poly", "1,0,2", "--m", "4", "--u", "3", "--y", "5"}).code == kExitUsage);
    // coefficients run c0 first: 2,0,1 is x^2 + 2, which is fine
    CHECK(cli({"compare", "--poly", "2,0,1", "--m", "4", "--u", "3", "--y", "5"}).code == kExitOk);
    CHECK(cli({"compare", "--poly", "1,0,9", "--m", "4"}).code == kExitUsage);  // not monic
    CHECK(cli({"compare", "--poly", "9,0,1", "--m", "4"}).code == kExitUsage);  // |c_0| > m
    CHECK(cli({"compare", "--poly", "1,0,1", "--m", "4", "--y", "1"}).code == kExitUsage);
    CHECK(cli({"compare", "--poly", "1,0,1", "--m", "4", "--u", "0"}).code == kExitUsage);
    CHECK(cli({"montecarlo", "--trials", "0"}).code == kExitUsage);
    CHECK(cli({"enumerate", "--d", "6", "--l", "5"}).code == kExitUsage);
    CHECK(cli({"compare", "--bogus"}).code == kExitUsage);
    CHECK(cli({}).code == kExitUsage);
    CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("montecarlo output") {
    TempDir dir("mc");
    const auto r = cli({"montecarlo", "--d", "3", "--y", "30", "--trials", "2000", "--seed", "1", "--out",
                        dir.path.string()});
    CHECK(r.code == kExitOk);
    const json doc = json::parse(r.out);
    for (const char* key : {"estimate", "stderr", "reference_product", "zeta2_inverse", "passes", "per_prime"})
        CHECK(doc.contains(key));
    CHECK(doc["estimate"].get<double>() >= 0.0);
    CHECK(doc["estimate"].get<double>() <= 1.0);
    CHECK(doc["passes"] == true);
    CHECK(json::parse(slurp(dir / "montecarlo.json")) == doc);

    const json small = json::parse(cli({"montecarlo", "--d", "2", "--y", "2", "--trials", "5000", "--seed", "1"}).out);
    const double se = std::sqrt(0.75 * 0.25 / 5000);
    CHECK(std::abs(small["estimate"].get<double>() - 0.75) <= 3 * se);
}

TEST_CASE("enumerate output") {
    const auto r = cli({"enumerate", "--d", "2", "--l", "2"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.rfind("4/16\n", 0) == 0);
    const auto j = cli({"enumerate", "--d", "2", "--l", "3", "--format", "json"});
    const json doc = json::parse(j.out);
    CHECK(doc["count_total"] == 81);
    CHECK(doc["per_point_counts"] == json::array({3, 3, 3}));
    CHECK(doc["per_point_density_is_inverse_l_cubed"] == true);
}

TEST_CASE("sieve subcommand") {
    TempDir dir("sieve");
    for (const char* alg : {"1", "2", "3"}) {
        const auto r = cli({"sieve", "--poly", "1,0,1", "--m", "4", "--u", "3", "--y", "5", "--alg", alg, "--out",
                            dir.path.string()});
        CHECK(r.code == kExitOk);
        const json s = json::parse(r.out);
        CHECK(s["residuals_coprime"] == true);
        CHECK(fs::exists(dir / "sieve_rows.csv"));
        CHECK(fs::exists(dir / "sieve_smooth.csv"));
    }
    CHECK(json::parse(cli({"sieve", "--poly", "1,0,1", "--m", "4", "--u", "3", "--y", "5", "--alg", "2"}).out)
              ["total_attempts"] == 52);
    CHECK(cli({"sieve", "--poly", "1,0,1", "--m", "4", "--alg", "4"}).code == kExitUsage);
}

TEST_CASE("config file and sweep") {
    TempDir dir("config");
    const json cfg = {{"subcommand", "sweep"},
                      {"format", "json"},
                      {"instances",
                       {{{"d", 2}, {"m", 4}, {"u", 3}, {"y", 5}, {"poly", {1, 0, 1}}},
                        {{"d", 2}, {"m", 2}, {"u", 30}, {"y", 20}, {"poly", "1,2,1"}},
                        {{"d", 4}, {"m", 30}, {"u", 40}, {"y", 20}, {"seed", 3}}}}};
    std::ofstream(dir / "cfg.json") << cfg.dump();
    const auto r = cli({"--config", dir / "cfg.json"});
    REQUIRE(r.code == kExitOk);
    const json rows = json::parse(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["alg2_total"] == 52);
    CHECK(rows[0]["alg3_total"] == 27);
    CHECK(rows[0]["correction_flag"] == false);
    CHECK(rows[1]["correction_flag"] == true);
    for (const auto& row : rows) CHECK(row["ratio"].get<double>() < 1.0);

    const auto csv = cli({"sweep", "--d", "3", "--m", "15", "--u", "40", "--y", "15", "--count", "4", "--seed", "5"});
    CHECK(csv.code == kExitOk);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 5);

    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK(cli({"--config", dir / "bad.json"}).code == kExitUsage);
    std::ofstream(dir / "conflict.json") << R"({"subcommand": "enumerate", "d": 2, "l": 2})";
    CHECK(cli({"--config", dir / "conflict.json", "compare"}).code == kExitUsage);
}

TEST_CASE("installed binary") {
    const char* bin = std::getenv("NFSIEVE_BIN");
    if (!bin) return;
    TempDir dir("bin");
    const std::string cmd = std::string(bin) + " enumerate --d 2 --l 2 > " + (dir / "o.txt");
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(slurp(dir / "o.txt").rfind("4/16\n", 0) == 0);
    const std::string bad = std::string(bin) + " compare --poly 1,0,2 --m 4 2> " + (dir / "e.txt");
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == kExitUsage);
}
