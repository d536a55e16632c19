// oracle.cpp

#include "nfsieve/oracle.hpp"

#include <algorithm>

#include "nfsieve/roots.hpp"

namespace nfsieve {

namespace {

struct RowEntry {
    long a;
    Integer rational; // a - bm
    Integer norm;     // F(a, b)
};

std::vector<RowEntry> row_entries(const SievePolynomial& f, unsigned long u, unsigned long b) {
    const NormForm F = norm_form(f);
    const long su = static_cast<long>(u);
    const Integer bz = b;
    std::vector<RowEntry> out;
    for (long a = -su; a <= su; ++a) {
        if (gcd(a, static_cast<long>(b)) != 1) continue;
        RowEntry e{a, Integer(a) - bz * f.m(), eval_norm(F, a, bz)};
        if (e.rational == 0 || e.norm == 0) continue;
        out.push_back(std::move(e));
    }
    return out;
}

void bump(std::vector<std::uint64_t>& counts, unsigned v, const char* side, unsigned long b, Prime l) {
    if (v > counts.size()) {
        throw std::logic_error(std::string(side) + " valuation exceeds its bound at (b=" + std::to_string(b) +
                               ", l=" + std::to_string(l) + ")");
    }
    for (unsigned e = 1; e <= v; ++e) ++counts[e - 1];
}

SetFamily sets_for_prime(const SievePolynomial& f, unsigned long u, unsigned long b, Prime l,
                         const std::vector<RowEntry>& entries) {
    SetFamily sets;
    sets.b = b;
    sets.l = l;
    sets.rational.assign(max_exponent(l, rational_bound(f, u)), 0);
    const unsigned acap = max_exponent(l, algebraic_bound(f, u));
    sets.simple.assign(acap, 0);
    sets.multiple.assign(acap, 0);

    const RootClassification roots = classify_roots(f.poly(), l);
    const Prime b_inv = mod_inverse(Integer(b), Integer(l)).get_ui();
    for (const RowEntry& e : entries) {
        bump(sets.rational, valuation(e.rational, l), "rational", b, l);
        const unsigned vn = valuation(e.norm, l);
        if (vn == 0) continue;
        // a corresponds to the root a * b^-1 mod l
        const Prime x = (mod_floor(Integer(e.a), Integer(l)).get_ui() * b_inv) % l;
        const bool simple = std::binary_search(roots.simple_roots.begin(), roots.simple_roots.end(), x);
        const bool multiple = std::binary_search(roots.multiple_roots.begin(), roots.multiple_roots.end(), x);
        if (simple == multiple)
            throw std::logic_error("norm hit at a=" + std::to_string(e.a) + " does not map to a root mod " +
                                   std::to_string(l));
        bump(simple ? sets.simple : sets.multiple, vn, "algebraic", b, l);
    }
    return sets;
}

} // namespace

SetFamily compute_sets(const SievePolynomial& f, unsigned long u, unsigned long b, Prime l) {
    if (b < 1 || b > u) throw OracleMisuseError("compute_sets: b outside [1, u]");
    if (b % l == 0) throw OracleMisuseError("compute_sets: l = " + std::to_string(l) + " divides b = " + std::to_string(b));
    return sets_for_prime(f, u, b, l, row_entries(f, u, b));
}

std::vector<SetFamily> compute_row_sets(const SievePolynomial& f, unsigned long u, unsigned long b,
                                        const PrimeList& primes) {
    const auto entries = row_entries(f, u, b);
    std::vector<SetFamily> out;
    for (Prime l : primes) {
        if (b % l == 0) continue;
        out.push_back(sets_for_prime(f, u, b, l, entries));
    }
    return out;
}

ExactPrediction predict_exact(const SetFamily& s) {
    ExactPrediction p;
    std::uint64_t sum_b = 0, sum_s = 0, sum_m = 0;
    for (auto v : s.rational) sum_b += v;
    for (auto v : s.simple) sum_s += v;
    for (auto v : s.multiple) sum_m += v;

    p.c_exact = s.rational_at(1) + sum_b + s.algebraic_at(1) + sum_s + sum_m;
    // sum_{e>=1} #A^m_{l^e} = #A^m_l + sum_{e>=2} #A^m_{l^e}
    p.d_exact = sum_b + sum_s + sum_m;
    p.correction = s.multiple_at(2);
    return p;
}

AsymptoticPrediction predict_asymptotic(const SetFamily& s) {
    if (s.l < 2) throw std::invalid_argument("predict_asymptotic: l must be at least 2");
    const Rational l(s.l);
    const Rational long_series = (2 * l - 1) / (l - 1);
    const Rational short_series = l / (l - 1);

    Rational higher_multiple = 0;
    for (unsigned e = 2; e <= s.multiple.size(); ++e) higher_multiple += s.multiple_at(e);

    const Rational level1 = Rational(s.rational_at(1)) + Rational(s.simple_at(1));
    AsymptoticPrediction p;
    p.c_asym = long_series * level1 + 2 * Rational(s.multiple_at(1)) + higher_multiple;
    p.d_asym = short_series * level1 + Rational(s.multiple_at(1)) + higher_multiple;
    p.c_asym.canonicalize();
    p.d_asym.canonicalize();
    return p;
}

double LedgerReport::ratio() const {
    return classical_total == 0 ? 0.0 : static_cast<double>(improved_total) / static_cast<double>(classical_total);
}

LedgerReport verify_ledgers(const SieveOutcome& classical, const SieveOutcome& improved, const SievePolynomial& f,
                            unsigned long u, Prime y) {
    if (classical.algorithm != Algorithm::classical || improved.algorithm != Algorithm::improved)
        throw std::invalid_argument("verify_ledgers: expects a classical and an improved outcome");

    LedgerReport report;
    const PrimeList primes = primes_up_to(y);
    for (unsigned long b = 1; b <= u; ++b) {
        for (SetFamily& sets : compute_row_sets(f, u, b, primes)) {
            LedgerRow row;
            row.classical = classical.ledger.get(b, sets.l);
            row.improved = improved.ledger.get(b, sets.l);
            row.exact = predict_exact(sets);
            row.asym = predict_asymptotic(sets);
            row.sets = std::move(sets);

            const std::string where = "(b=" + std::to_string(b) + ", l=" + std::to_string(row.sets.l) + ")";
            if (!row.classical_matches()) {
                report.violations.push_back("classical " + where + ": measured " +
                                            std::to_string(row.classical.total()) + " != C_exact " +
                                            std::to_string(row.exact.c_exact));
            }
            if (!row.improved_matches()) {
                report.violations.push_back("improved " + where + ": measured " + std::to_string(row.improved.total()) +
                                            " != D_exact + correction " +
                                            std::to_string(row.exact.d_exact + row.exact.correction));
            }

            report.classical_total += row.classical.total();
            report.improved_total += row.improved.total();
            report.c_exact_total += row.exact.c_exact;
            report.d_exact_total += row.exact.d_exact;
            report.correction_total += row.exact.correction;
            report.c_asym_total += row.asym.c_asym;
            report.d_asym_total += row.asym.d_asym;
            report.rows.push_back(std::move(row));
        }
    }

    // Cells booked on (b, l) with l | b would escape the per-row check.
    for (const auto* outcome : {&classical, &improved}) {
        for (const auto& [key, cell] : outcome->ledger.cells()) {
            if (key.b % key.l == 0 && cell.total() != 0) {
                report.violations.push_back(std::string(to_string(outcome->algorithm)) + " booked attempts on (b=" +
                                            std::to_string(key.b) + ", l=" + std::to_string(key.l) + ") with l | b");
            }
        }
    }
    report.c_asym_total.canonicalize();
    report.d_asym_total.canonicalize();
    return report;
}

} // namespace nfsieve
