// cli.hpp
//
// Command-line front end: compare | sieve | montecarlo | enumerate | sweep.
// Per-(b, l) rows go to CSV (or JSON), aggregates to JSON.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "nfsieve/arith.hpp"
#include "nfsieve/engine.hpp"
#include "nfsieve/experiments.hpp"

namespace nfsieve {

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitViolation = 3,
};

struct RunConfig {
    std::string subcommand;
    std::optional<std::vector<Integer>> poly;
    bool random = false;
    unsigned d = 3;
    Integer m = 10;
    unsigned long u = 50;
    Prime y = 20;
    Prime l = 2;
    std::uint64_t trials = 2000;
    std::uint64_t seed = 1;
    unsigned count = 20;
    Algorithm alg = Algorithm::improved;
    std::string out;
    std::string format = "csv";
    std::string instance_id = "0";
    unsigned workers = 1;
    std::vector<SweepInstance> instances;
};

/// Throws UsageError on anything the subcommand cannot run with.
void validate(const RunConfig& cfg);

/// Reads a JSON document whose keys mirror the flags.
RunConfig config_from_json(const nlohmann::json& doc);

/// Decimal rendering of an exact rational, rounded half away from zero.
std::string render_fixed(const Rational& x, unsigned places = 6);

// Each runner writes its primary output to `out` (and files under cfg.out when
// set) and returns an ExitCode.
int run_compare(const RunConfig& cfg, std::ostream& out);
int run_sieve(const RunConfig& cfg, std::ostream& out);
int run_montecarlo(const RunConfig& cfg, std::ostream& out);
int run_enumerate(const RunConfig& cfg, std::ostream& out);
int run_sweep(const RunConfig& cfg, std::ostream& out);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nfsieve
