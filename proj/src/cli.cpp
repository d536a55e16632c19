// cli.cpp

#include "nfsieve/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "nfsieve/oracle.hpp"
#include "nfsieve/roots.hpp"

namespace nfsieve {

using nlohmann::json;

namespace {

const char* const kCompareColumns =
    "instance_id,b,l,alg,attempts_rational,attempts_algebraic_simple,attempts_algebraic_multiple,"
    "C_exact,D_exact,correction,C_asym,D_asym";

Algorithm parse_algorithm(const std::string& s) {
    if (s == "1" || s == "trivial") return Algorithm::trivial;
    if (s == "2" || s == "classical") return Algorithm::classical;
    if (s == "3" || s == "improved") return Algorithm::improved;
    throw UsageError("unknown algorithm '" + s + "' (expected 1|2|3 or trivial|classical|improved)");
}

Integer parse_integer(const std::string& s, const char* what) {
    Integer v;
    if (s.empty() || v.set_str(s, 10) != 0) throw UsageError(std::string("malformed ") + what + " '" + s + "'");
    return v;
}

// JSON numbers or decimal strings, so large m and coefficients survive.
Integer json_integer(const json& j, const char* what) {
    if (j.is_number_integer()) return Integer(j.get<long>());
    if (j.is_string()) return parse_integer(j.get<std::string>(), what);
    throw UsageError(std::string(what) + " must be an integer or a decimal string");
}

std::vector<Integer> json_coefficients(const json& j) {
    if (j.is_string()) return parse_coefficients(j.get<std::string>());
    if (!j.is_array()) throw UsageError("poly must be a string 'c0,...,cd' or an array");
    std::vector<Integer> out;
    for (const auto& c : j) out.push_back(json_integer(c, "coefficient"));
    return out;
}

json integer_json(const Integer& x) {
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

json stats_json(const PrecomputeStats& s) {
    return {{"root_scan_evaluations", s.root_scan_evaluations},
            {"hensel_steps", s.hensel_steps},
            {"rational_residues", s.rational_residues},
            {"lift_tests", s.lift_tests}};
}

SievePolynomial make_polynomial(const RunConfig& cfg) {
    if (cfg.poly) return SievePolynomial(*cfg.poly, cfg.m);
    return random_sieve_polynomial(cfg.d, cfg.m, cfg.seed);
}

class OutputDir {
  public:
    explicit OutputDir(const std::string& path) : path_(path) {
        if (!path_.empty()) std::filesystem::create_directories(path_);
    }
    bool enabled() const { return !path_.empty(); }
    void write(const std::string& name, const std::string& content) const {
        std::ofstream f(std::filesystem::path(path_) / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (std::filesystem::path(path_) / name).string());
        f << content;
    }

  private:
    std::string path_;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string csv_or_json(const std::string& format, const std::string& header, const std::vector<json>& rows) {
    if (format == "json") return json(rows).dump(2) + "\n";
    std::ostringstream os;
    os << header << "\n";
    std::vector<std::string> keys;
    std::stringstream hs(header);
    for (std::string k; std::getline(hs, k, ',');) keys.push_back(k);
    for (const json& r : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (i) os << ',';
            const json& v = r.at(keys[i]);
            if (v.is_string())
                os << csv_field(v.get<std::string>());
            else
                os << v.dump();
        }
        os << "\n";
    }
    return os.str();
}

} // namespace

std::string render_fixed(const Rational& x, unsigned places) {
    Integer scale = power(10, places);
    Integer num = abs(x.get_num()) * scale * 2 + x.get_den();
    Integer den = x.get_den() * 2;
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    std::string digits = q.get_str();
    if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
    std::string out = (sgn(x) < 0 && q != 0 ? "-" : "") + digits.substr(0, digits.size() - places);
    if (places) out += "." + digits.substr(digits.size() - places);
    return out;
}

void validate(const RunConfig& cfg) {
    const auto& sc = cfg.subcommand;
    if (sc != "compare" && sc != "sieve" && sc != "montecarlo" && sc != "enumerate" && sc != "sweep")
        throw UsageError("unknown subcommand '" + sc + "'");
    if (cfg.format != "csv" && cfg.format != "json") throw UsageError("format must be csv or json");
    if (cfg.workers < 1) throw UsageError("workers must be at least 1");

    if (sc == "compare" || sc == "sieve") {
        if (cfg.poly.has_value() == cfg.random) throw UsageError("give exactly one of --poly or --random");
        if (cfg.u < 1) throw UsageError("u must be at least 1");
        if (cfg.y < 2) throw UsageError("y must be at least 2");
        if (cfg.m < 1) throw UsageError("m must be at least 1");
        if (cfg.random && cfg.d < 2) throw UsageError("d must be at least 2");
        try {
            make_polynomial(cfg);
        } catch (const InvalidPolynomialError& e) {
            throw UsageError(std::string("invalid polynomial: ") + e.what());
        }
    } else if (sc == "montecarlo") {
        if (cfg.trials < 1) throw UsageError("trials must be at least 1");
        if (cfg.d < 2) throw UsageError("d must be at least 2");
        if (cfg.y < 2) throw UsageError("y must be at least 2");
    } else if (sc == "enumerate") {
        if (cfg.d < 2) throw UsageError("d must be at least 2");
        if (cfg.l < 2 || !primes_up_to(cfg.l).contains(cfg.l)) throw UsageError("l must be a prime");
    } else if (sc == "sweep") {
        if (cfg.instances.empty()) {
            if (cfg.count < 1) throw UsageError("count must be at least 1");
            if (cfg.u < 1 || cfg.y < 2 || cfg.m < 1 || cfg.d < 2) throw UsageError("sweep needs u >= 1, y >= 2, m >= 1, d >= 2");
        }
        for (const auto& inst : cfg.instances) {
            if (inst.u < 1 || inst.y < 2 || inst.m < 1) throw UsageError("sweep instance needs u >= 1, y >= 2, m >= 1");
            try {
                instance_polynomial(inst);
            } catch (const InvalidPolynomialError& e) {
                throw UsageError(std::string("invalid polynomial: ") + e.what());
            }
        }
    }
}

RunConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw UsageError("config must be a JSON object");
    RunConfig cfg;
    try {
        cfg.subcommand = doc.value("subcommand", std::string{});
        if (doc.contains("poly")) cfg.poly = json_coefficients(doc["poly"]);
        cfg.random = doc.value("random", false);
        cfg.d = doc.value("d", cfg.d);
        if (doc.contains("m")) cfg.m = json_integer(doc["m"], "m");
        cfg.u = doc.value("u", cfg.u);
        cfg.y = doc.value("y", cfg.y);
        cfg.l = doc.value("l", cfg.l);
        cfg.trials = doc.value("trials", cfg.trials);
        cfg.seed = doc.value("seed", cfg.seed);
        cfg.count = doc.value("count", cfg.count);
        if (doc.contains("alg")) {
            const json& a = doc["alg"];
            cfg.alg = parse_algorithm(a.is_string() ? a.get<std::string>() : std::to_string(a.get<int>()));
        }
        cfg.out = doc.value("out", cfg.out);
        cfg.format = doc.value("format", cfg.format);
        cfg.instance_id = doc.value("instance_id", cfg.instance_id);
        cfg.workers = doc.value("workers", cfg.workers);
        if (doc.contains("instances")) {
            for (const json& j : doc["instances"]) {
                SweepInstance inst;
                inst.degree = j.value("d", 3u);
                inst.m = j.contains("m") ? json_integer(j["m"], "m") : Integer(10);
                inst.u = j.value("u", 50ul);
                inst.y = j.value("y", 20ul);
                inst.seed = j.value("seed", std::uint64_t{0});
                if (j.contains("poly")) inst.coeffs = json_coefficients(j["poly"]);
                cfg.instances.push_back(std::move(inst));
            }
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config: ") + e.what());
    }
    return cfg;
}

int run_compare(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    const SievePolynomial f = make_polynomial(cfg);
    const SieveOptions opts{cfg.workers};
    const PrimeList primes = primes_up_to(cfg.y);

    const SieveTable table = build_table(f, cfg.u);
    const LiftTables tables = build_lift_tables(f, cfg.u, cfg.y);
    const SieveOutcome trivial = sieve_trivial(table, primes, opts);
    const SieveOutcome classical = sieve_classical(table, f, tables, opts);
    const SieveOutcome improved = sieve_improved(table, tables, opts);
    const LedgerReport report = verify_ledgers(classical, improved, f, cfg.u, cfg.y);

    const bool tables_agree = trivial.table == classical.table && classical.table == improved.table;
    const bool coprime = residuals_coprime(improved.table, primes);
    const bool strict = report.classical_total == 0 || report.improved_total < report.classical_total;
    bool two_thirds = true;
    std::vector<json> rows;
    for (const LedgerRow& r : report.rows) {
        if (r.exact.correction == 0 && 3 * r.asym.d_asym > 2 * r.asym.c_asym) two_thirds = false;
        const std::string c_asym = render_fixed(r.asym.c_asym), d_asym = render_fixed(r.asym.d_asym);
        for (const auto& [alg, a] : {std::pair{"classical", r.classical}, std::pair{"improved", r.improved}}) {
            rows.push_back({{"instance_id", cfg.instance_id},
                            {"b", r.sets.b},
                            {"l", r.sets.l},
                            {"alg", alg},
                            {"attempts_rational", a.rational},
                            {"attempts_algebraic_simple", a.algebraic_simple},
                            {"attempts_algebraic_multiple", a.algebraic_multiple},
                            {"C_exact", r.exact.c_exact},
                            {"D_exact", r.exact.d_exact},
                            {"correction", r.exact.correction},
                            {"C_asym", c_asym},
                            {"D_asym", d_asym}});
        }
    }

    const double ratio = report.ratio();
    const bool ok = report.ok() && tables_agree && coprime && strict && two_thirds;
    json summary = {
        {"instance_id", cfg.instance_id},
        {"poly", f.poly().to_string()},
        {"d", f.degree()},
        {"m", integer_json(f.m())},
        {"u", cfg.u},
        {"y", cfg.y},
        {"alg1_total", trivial.ledger.total().total()},
        {"alg2_total", report.classical_total},
        {"alg3_total", report.improved_total},
        {"C_exact_total", report.c_exact_total},
        {"D_exact_total", report.d_exact_total},
        {"correction_total", report.correction_total},
        {"ratio", ratio},
        {"C_asym_total", render_fixed(report.c_asym_total)},
        {"D_asym_total", render_fixed(report.d_asym_total)},
        {"ratio_expected_range", {0.45, 0.67}},
        {"ratio_in_expected_range", ratio >= 0.45 && ratio <= 0.67},
        {"identities_hold", report.ok()},
        {"tables_agree", tables_agree},
        {"residuals_coprime", coprime},
        {"strict_improvement", strict},
        {"asymptotic_two_thirds_holds", two_thirds},
        {"violations", report.violations},
        {"precompute",
         {{"classical", stats_json(classical.precompute)}, {"improved", stats_json(improved.precompute)}}},
        {"ok", ok},
    };

    OutputDir dir(cfg.out);
    if (dir.enabled()) {
        dir.write("compare_rows." + cfg.format, csv_or_json(cfg.format, kCompareColumns, rows));
        dir.write("compare_summary.json", summary.dump(2) + "\n");
    }
    out << summary.dump(2) << "\n";
    return ok ? kExitOk : kExitViolation;
}

int run_sieve(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    const SievePolynomial f = make_polynomial(cfg);
    const PrimeList primes = primes_up_to(cfg.y);
    const SieveOutcome result = run_sieve(cfg.alg, f, cfg.u, cfg.y, SieveOptions{cfg.workers});

    std::vector<json> rows;
    for (const auto& [key, a] : result.ledger.cells()) {
        rows.push_back({{"instance_id", cfg.instance_id},
                        {"b", key.b},
                        {"l", key.l},
                        {"alg", std::string(to_string(cfg.alg))},
                        {"attempts_rational", a.rational},
                        {"attempts_algebraic_simple", a.algebraic_simple},
                        {"attempts_algebraic_multiple", a.algebraic_multiple},
                        {"attempts_untargeted", a.untargeted}});
    }
    std::vector<json> smooth;
    const long su = static_cast<long>(cfg.u);
    for (unsigned long b = 1; b <= cfg.u; ++b)
        for (long a = -su; a <= su; ++a)
            if (abs(result.table.at(b, a)) == 1) smooth.push_back({{"b", b}, {"a", a}});

    const bool coprime = residuals_coprime(result.table, primes);
    json summary = {{"instance_id", cfg.instance_id},
                    {"poly", f.poly().to_string()},
                    {"m", integer_json(f.m())},
                    {"u", cfg.u},
                    {"y", cfg.y},
                    {"alg", std::string(to_string(cfg.alg))},
                    {"total_attempts", result.ledger.total().total()},
                    {"nonzero_entries", result.table.nonzero_count()},
                    {"smooth_count", smooth.size()},
                    {"residuals_coprime", coprime},
                    {"precompute", stats_json(result.precompute)}};

    OutputDir dir(cfg.out);
    if (dir.enabled()) {
        dir.write("sieve_rows." + cfg.format,
                  csv_or_json(cfg.format,
                              "instance_id,b,l,alg,attempts_rational,attempts_algebraic_simple,"
                              "attempts_algebraic_multiple,attempts_untargeted",
                              rows));
        dir.write("sieve_smooth." + cfg.format, csv_or_json(cfg.format, "b,a", smooth));
        dir.write("sieve_summary.json", summary.dump(2) + "\n");
    }
    out << summary.dump(2) << "\n";
    return coprime ? kExitOk : kExitViolation;
}

int run_montecarlo(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    const RandomModel model(cfg.d, cfg.y, cfg.seed);
    const LiftEventReport r = monte_carlo(model, cfg.trials);
    constexpr double threshold = 0.6;

    std::vector<json> per_prime;
    for (std::size_t i = 0; i < r.primes.size(); ++i) {
        const Prime l = r.primes[i];
        per_prime.push_back({{"l", l},
                             {"failures", r.failures[i]},
                             {"rate", static_cast<double>(r.failures[i]) / static_cast<double>(r.trials)},
                             {"bound", 1.0 / static_cast<double>(l * l)}});
    }
    json doc = {{"d", r.degree},
                {"y", r.y},
                {"seed", r.seed},
                {"trials", r.trials},
                {"successes", r.successes},
                {"estimate", r.estimate()},
                {"stderr", r.stderr_estimate()},
                {"reference_product", r.reference_product.get_d()},
                {"reference_product_exact", render_fixed(r.reference_product)},
                {"zeta2_inverse", r.zeta2_inverse},
                {"threshold", threshold},
                {"gate", threshold - 3.0 * r.stderr_estimate()},
                {"passes", r.passes(threshold)},
                {"per_prime", per_prime}};

    OutputDir dir(cfg.out);
    if (dir.enabled()) dir.write("montecarlo.json", doc.dump(2) + "\n");
    out << doc.dump(2) << "\n";
    return r.passes(threshold) ? kExitOk : kExitViolation;
}

int run_enumerate(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    const EnumerationResult r = enumerate_exact(cfg.d, cfg.l);
    const std::uint64_t l3 = static_cast<std::uint64_t>(cfg.l) * cfg.l * cfg.l;
    bool density_exact = true;
    for (auto c : r.per_point_counts)
        if (c * l3 != r.count_total) density_exact = false;

    std::ostringstream text;
    if (cfg.format == "json") {
        json doc = {{"d", r.degree},
                    {"l", r.l},
                    {"count_bad", r.count_bad},
                    {"count_total", r.count_total},
                    {"per_point_counts", r.per_point_counts},
                    {"per_point_density_is_inverse_l_cubed", density_exact}};
        text << doc.dump(2) << "\n";
    } else {
        text << r.count_bad << "/" << r.count_total << "\n";
        for (std::size_t i = 0; i < r.per_point_counts.size(); ++i)
            text << "point " << i << ": " << r.per_point_counts[i] << "/" << r.count_total << "\n";
    }
    OutputDir dir(cfg.out);
    if (dir.enabled()) dir.write(std::string("enumerate.") + (cfg.format == "json" ? "json" : "txt"), text.str());
    out << text.str();
    return density_exact ? kExitOk : kExitViolation;
}

int run_sweep(const RunConfig& cfg, std::ostream& out) {
    validate(cfg);
    std::vector<SweepInstance> instances = cfg.instances;
    if (instances.empty()) {
        for (unsigned i = 0; i < cfg.count; ++i)
            instances.push_back({cfg.d, cfg.m, cfg.u, cfg.y, derive_seed(cfg.seed, i), std::nullopt});
    }
    const auto rows = ratio_sweep(instances, cfg.workers);

    bool ok = true;
    std::vector<json> out_rows;
    for (const SweepRow& r : rows) {
        const bool strict = r.classical_total == 0 || r.improved_total < r.classical_total;
        ok = ok && r.identities_hold && r.tables_agree && strict;
        out_rows.push_back({{"instance", r.instance},
                            {"poly", r.poly},
                            {"d", r.degree},
                            {"m", r.m.get_str()},
                            {"u", r.u},
                            {"y", r.y},
                            {"seed", r.seed},
                            {"alg1_total", r.trivial_total},
                            {"alg2_total", r.classical_total},
                            {"alg3_total", r.improved_total},
                            {"ratio", r.ratio},
                            {"correction_total", r.correction_total},
                            {"correction_flag", !r.correction_free},
                            {"identities_hold", r.identities_hold},
                            {"tables_agree", r.tables_agree}});
    }
    const std::string text = csv_or_json(cfg.format,
                                         "instance,poly,d,m,u,y,seed,alg1_total,alg2_total,alg3_total,ratio,"
                                         "correction_total,correction_flag,identities_hold,tables_agree",
                                         out_rows);
    OutputDir dir(cfg.out);
    if (dir.enabled()) dir.write("sweep." + cfg.format, text);
    out << text;
    return ok ? kExitOk : kExitViolation;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.subcommand == "compare") return run_compare(cfg, out);
        if (cfg.subcommand == "sieve") return run_sieve(cfg, out);
        if (cfg.subcommand == "montecarlo") return run_montecarlo(cfg, out);
        if (cfg.subcommand == "enumerate") return run_enumerate(cfg, out);
        if (cfg.subcommand == "sweep") return run_sweep(cfg, out);
        throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << "\n";
        return kExitViolation;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::length_error& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Division-counting laboratory for number field sieve line sieving"};
    app.require_subcommand(0, 1);

    RunConfig cfg;
    std::string config_path, poly, m = "10", alg = "3";

    app.add_option("--config", config_path, "JSON file mirroring the flags (includes \"subcommand\")")
        ->check(CLI::ExistingFile);

    auto common = [&](CLI::App* sc) {
        sc->add_option("--d", cfg.d, "polynomial degree");
        sc->add_option("--seed", cfg.seed, "master seed");
        sc->add_option("--out", cfg.out, "output directory");
        sc->add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        sc->add_option("--workers", cfg.workers, "threads for row/instance work");
    };
    auto region = [&](CLI::App* sc) {
        sc->add_option("--m", m, "coefficient bound and rational-side integer");
        sc->add_option("--u", cfg.u, "region half-width: b in [1,u], a in [-u,u]");
        sc->add_option("--y", cfg.y, "smoothness bound");
    };

    auto* compare = app.add_subcommand("compare", "run all three sieves and check ledgers against the oracle");
    common(compare);
    region(compare);
    compare->add_option("--poly", poly, "coefficients c0,...,cd (monic)");
    compare->add_flag("--random", cfg.random, "draw c_i uniformly from [-m, m]");
    compare->add_option("--id", cfg.instance_id, "instance id written to every row");

    auto* sieve = app.add_subcommand("sieve", "run one sieve and report its ledger and smooth pairs");
    common(sieve);
    region(sieve);
    sieve->add_option("--poly", poly, "coefficients c0,...,cd (monic)");
    sieve->add_flag("--random", cfg.random, "draw c_i uniformly from [-m, m]");
    sieve->add_option("--alg", alg, "1|2|3 or trivial|classical|improved");
    sieve->add_option("--id", cfg.instance_id, "instance id written to every row");

    auto* mc = app.add_subcommand("montecarlo", "estimate P(no liftable multiple root at any l <= y)");
    common(mc);
    mc->add_option("--y", cfg.y, "smoothness bound");
    mc->add_option("--trials", cfg.trials, "number of sampled polynomials");

    auto* en = app.add_subcommand("enumerate", "enumerate monic polynomials mod l^2 exactly");
    common(en);
    en->add_option("--l", cfg.l, "prime");

    auto* sweep = app.add_subcommand("sweep", "improved/classical ratio over seeded random instances");
    common(sweep);
    region(sweep);
    sweep->add_option("--count", cfg.count, "number of instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::exception& e) {
                throw UsageError(std::string("cannot parse config: ") + e.what());
            }
            RunConfig from_file = config_from_json(doc);
            if (app.get_subcommands().size() == 1) {
                const std::string named = app.get_subcommands().front()->get_name();
                if (!from_file.subcommand.empty() && from_file.subcommand != named)
                    throw UsageError("config subcommand '" + from_file.subcommand + "' conflicts with '" + named + "'");
                from_file.subcommand = named;
            }
            return run(from_file, out, err);
        }
        if (app.get_subcommands().empty()) {
            err << app.help();
            return kExitUsage;
        }
        cfg.subcommand = app.get_subcommands().front()->get_name();
        cfg.m = parse_integer(m, "m");
        if (!poly.empty()) cfg.poly = parse_coefficients(poly);
        cfg.alg = parse_algorithm(alg);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    return run(cfg, out, err);
}

} // namespace nfsieve
