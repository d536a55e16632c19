// experiments.cpp

#include "nfsieve/experiments.hpp"

#include <cmath>
#include <numbers>

#include "nfsieve/engine.hpp"
#include "nfsieve/oracle.hpp"
#include "nfsieve/roots.hpp"

namespace nfsieve {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomModel::RandomModel(unsigned degree, Prime y, std::uint64_t seed)
    : degree_(degree), primes_(primes_up_to(y)), modulus_(1), seed_(seed) {
    if (degree < 1) throw std::invalid_argument("RandomModel: degree must be positive");
    for (Prime l : primes_) modulus_ *= Integer(l) * l;
}

Polynomial sample_poly(const RandomModel& model, std::uint64_t index) {
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(derive_seed(model.seed(), index));
    std::vector<Integer> coeffs;
    coeffs.reserve(model.degree() + 1);
    for (unsigned i = 0; i < model.degree(); ++i) coeffs.push_back(rng.get_z_range(model.modulus()));
    coeffs.push_back(1);
    return Polynomial(std::move(coeffs));
}

bool lift_event(const Polynomial& f, Prime l) {
    for (Prime r : classify_roots(f, l).multiple_roots)
        if (lift_multiple_test(f, l, r)) return true;
    return false;
}

double LiftEventReport::estimate() const {
    return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
}

double LiftEventReport::stderr_estimate() const {
    if (trials == 0) return 0.0;
    const double p = estimate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

bool LiftEventReport::passes(double threshold) const {
    return estimate() >= threshold - 3.0 * stderr_estimate();
}

LiftEventReport monte_carlo(const RandomModel& model, std::uint64_t trials) {
    if (trials < 1) throw std::invalid_argument("monte_carlo: trials must be at least 1");
    LiftEventReport r;
    r.degree = model.degree();
    r.y = model.y();
    r.seed = model.seed();
    r.trials = trials;
    r.primes = model.primes().primes;
    r.failures.assign(r.primes.size(), 0);
    r.reference_product = 1;
    for (Prime l : r.primes) r.reference_product *= Rational(1) - Rational(1, l * l);
    r.reference_product.canonicalize();
    r.zeta2_inverse = 6.0 / (std::numbers::pi * std::numbers::pi);

    for (std::uint64_t t = 0; t < trials; ++t) {
        const Polynomial f = sample_poly(model, t);
        bool clean = true;
        for (std::size_t i = 0; i < r.primes.size(); ++i) {
            if (lift_event(f, r.primes[i])) {
                ++r.failures[i];
                clean = false;
            }
        }
        if (clean) ++r.successes;
    }
    return r;
}

EnumerationResult enumerate_exact(unsigned degree, Prime l) {
    if (degree < 1) throw std::invalid_argument("enumerate_exact: degree must be positive");
    if (l < 2) throw std::invalid_argument("enumerate_exact: l must be a prime");
    const std::uint64_t q = static_cast<std::uint64_t>(l) * l;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < degree; ++i) {
        if (total > kEnumerationLimit / q)
            throw EnumerationTooLargeError("enumerate_exact: l^(2d) exceeds " + std::to_string(kEnumerationLimit));
        total *= q;
    }

    EnumerationResult r;
    r.degree = degree;
    r.l = l;
    r.count_total = total;
    r.per_point_counts.assign(l, 0);

    // c[0..d-1] run over [0, l^2) like an odometer; c_d = 1.
    std::vector<std::uint64_t> c(degree, 0);
    for (std::uint64_t n = 0; n < total; ++n) {
        bool bad = false;
        for (Prime i = 0; i < l; ++i) {
            std::uint64_t h = 1, dh = 0;
            for (unsigned k = degree; k-- > 0;) {
                dh = (dh * i + h) % q;  // derivative Horner uses the running value
                h = (h * i + c[k]) % q;
            }
            if (h == 0 && dh % l == 0) {
                ++r.per_point_counts[i];
                bad = true;
            }
        }
        if (bad) ++r.count_bad;
        for (unsigned k = 0; k < degree; ++k) {
            if (++c[k] < q) break;
            c[k] = 0;
        }
    }
    return r;
}

SievePolynomial random_sieve_polynomial(unsigned degree, const Integer& m, std::uint64_t seed) {
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(derive_seed(seed, 0));
    std::vector<Integer> coeffs;
    for (unsigned i = 0; i < degree; ++i) coeffs.push_back(Integer(rng.get_z_range(2 * m + 1)) - m);
    coeffs.push_back(1);
    return SievePolynomial(std::move(coeffs), m);
}

SievePolynomial instance_polynomial(const SweepInstance& inst) {
    if (inst.coeffs) return SievePolynomial(*inst.coeffs, inst.m);
    return random_sieve_polynomial(inst.degree, inst.m, inst.seed);
}

std::vector<SweepRow> ratio_sweep(std::span<const SweepInstance> instances, unsigned workers) {
    std::vector<SweepRow> rows;
    const SieveOptions opts{workers};
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const SweepInstance& inst = instances[i];
        const SievePolynomial f = instance_polynomial(inst);
        const SieveTable table = build_table(f, inst.u);
        const LiftTables tables = build_lift_tables(f, inst.u, inst.y);

        const SieveOutcome trivial = sieve_trivial(table, primes_up_to(inst.y), opts);
        const SieveOutcome classical = sieve_classical(table, f, tables, opts);
        const SieveOutcome improved = sieve_improved(table, tables, opts);
        const LedgerReport report = verify_ledgers(classical, improved, f, inst.u, inst.y);

        SweepRow row;
        row.instance = std::to_string(i);
        row.poly = f.poly().to_string();
        row.degree = f.degree();
        row.m = f.m();
        row.u = inst.u;
        row.y = inst.y;
        row.seed = inst.seed;
        row.trivial_total = trivial.ledger.total().total();
        row.classical_total = report.classical_total;
        row.improved_total = report.improved_total;
        row.correction_total = report.correction_total;
        row.ratio = report.ratio();
        row.identities_hold = report.ok();
        row.tables_agree = trivial.table == classical.table && classical.table == improved.table;
        row.correction_free = report.correction_total == 0;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace nfsieve
