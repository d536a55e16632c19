// oracle.hpp
//
// Brute-force set sizes and closed-form cost predictions. Nothing here uses the
// Hensel ladders or the sieve engines: every count comes from scanning the row
// and taking valuations directly, so the engine ledgers can be checked against
// it.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfsieve/arith.hpp"
#include "nfsieve/engine.hpp"
#include "nfsieve/poly.hpp"

namespace nfsieve {

class OracleMisuseError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Sizes of the hit sets for one (b, l), over |a| <= u with gcd(a, b) = 1 and
/// nonzero table entry:
///   rational[e-1] = #{a : l^e | a - bm}
///   simple[e-1]   = #{a : a/b mod l is a simple root, l^e | F(a, b)}
///   multiple[e-1] = #{a : a/b mod l is a multiple root, l^e | F(a, b)}
/// rational has rational_cap entries, simple and multiple have algebraic_cap.
struct SetFamily {
    unsigned long b = 0;
    Prime l = 0;
    std::vector<std::uint64_t> rational;
    std::vector<std::uint64_t> simple;
    std::vector<std::uint64_t> multiple;

    std::uint64_t rational_at(unsigned e) const { return e >= 1 && e <= rational.size() ? rational[e - 1] : 0; }
    std::uint64_t simple_at(unsigned e) const { return e >= 1 && e <= simple.size() ? simple[e - 1] : 0; }
    std::uint64_t multiple_at(unsigned e) const { return e >= 1 && e <= multiple.size() ? multiple[e - 1] : 0; }
    /// #A_{l^e}: all norm hits at level e
    std::uint64_t algebraic_at(unsigned e) const { return simple_at(e) + multiple_at(e); }
};

SetFamily compute_sets(const SievePolynomial& f, unsigned long u, unsigned long b, Prime l);

/// compute_sets for every prime in the list not dividing b, with the row's
/// entries evaluated once.
std::vector<SetFamily> compute_row_sets(const SievePolynomial& f, unsigned long u, unsigned long b,
                                        const PrimeList& primes);

struct ExactPrediction {
    std::uint64_t c_exact = 0;     // classical sieve attempts
    std::uint64_t d_exact = 0;     // improved sieve attempts as tallied in the closed form
    std::uint64_t correction = 0;  // #A_{l^2}^m: failed final tests the closed form leaves out

    bool operator==(const ExactPrediction&) const = default;
};

ExactPrediction predict_exact(const SetFamily& sets);

struct AsymptoticPrediction {
    Rational c_asym;
    Rational d_asym;
};

/// Geometric-series forms: level-1 sizes times (2l-1)/(l-1) or l/(l-1), with
/// the multiple-root terms kept exact.
AsymptoticPrediction predict_asymptotic(const SetFamily& sets);

struct LedgerRow {
    SetFamily sets;
    Attempts classical;
    Attempts improved;
    ExactPrediction exact;
    AsymptoticPrediction asym;

    bool classical_matches() const { return classical.total() == exact.c_exact; }
    bool improved_matches() const { return improved.total() == exact.d_exact + exact.correction; }
};

struct LedgerReport {
    std::vector<LedgerRow> rows;  // every (b, l) with l not dividing b; b, then l ascending
    std::vector<std::string> violations;

    std::uint64_t classical_total = 0;
    std::uint64_t improved_total = 0;
    std::uint64_t c_exact_total = 0;
    std::uint64_t d_exact_total = 0;
    std::uint64_t correction_total = 0;
    Rational c_asym_total;
    Rational d_asym_total;

    bool ok() const { return violations.empty(); }
    /// improved / classical; 0 when nothing was attempted.
    double ratio() const;
};

/// Checks, per (b, l): classical attempts == C_exact and improved attempts ==
/// D_exact + correction. Mismatches are listed in violations, not thrown.
LedgerReport verify_ledgers(const SieveOutcome& classical, const SieveOutcome& improved,
                            const SievePolynomial& f, unsigned long u, Prime y);

} // namespace nfsieve
