// engine.hpp
//
// The sieve table T(b, a) = (a - bm) * F(a, b) and the three sieving
// algorithms (trivial, classical, improved), each instrumented with an exact
// count of division attempts.
//
// Cost unit: one attempt is one fused test-and-divide of a table entry by l.
// A while-loop that strips l^v from an entry costs v + 1 attempts (v hits and
// the final failed test). An unconditional division costs 1. Zero entries are
// never touched and never counted.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "nfsieve/arith.hpp"
#include "nfsieve/poly.hpp"
#include "nfsieve/roots.hpp"

namespace nfsieve {

class InvariantViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

enum class Algorithm { trivial = 1, classical = 2, improved = 3 };

std::string_view to_string(Algorithm alg);

/// Grid over b in [1, u], a in [-u, u]. Entries on non-coprime pairs, and
/// entries whose product vanishes, are 0 and are skipped by every sieve.
class SieveTable {
  public:
    SieveTable() = default;
    explicit SieveTable(unsigned long u);

    unsigned long u() const { return u_; }
    std::size_t width() const { return 2 * u_ + 1; }

    Integer& at(unsigned long b, long a) { return entries_[index(b, a)]; }
    const Integer& at(unsigned long b, long a) const { return entries_[index(b, a)]; }

    std::span<Integer> row(unsigned long b) { return {entries_.data() + (b - 1) * width(), width()}; }
    std::span<const Integer> row(unsigned long b) const { return {entries_.data() + (b - 1) * width(), width()}; }

    std::size_t nonzero_count() const;

    bool operator==(const SieveTable&) const = default;

  private:
    std::size_t index(unsigned long b, long a) const;

    unsigned long u_ = 0;
    std::vector<Integer> entries_;
};

SieveTable build_table(const SievePolynomial& f, unsigned long u);

/// True when no nonzero entry is divisible by any of the primes.
bool residuals_coprime(const SieveTable& table, const PrimeList& primes);

/// Division attempts for one (b, l) cell, split by where they were spent.
/// The trivial sieve has no targeting and books everything as untargeted;
/// the classical sieve books algebraic attempts by the class of the root.
struct Attempts {
    std::uint64_t rational = 0;
    std::uint64_t algebraic_simple = 0;
    std::uint64_t algebraic_multiple = 0;
    std::uint64_t untargeted = 0;

    std::uint64_t total() const { return rational + algebraic_simple + algebraic_multiple + untargeted; }
    Attempts& operator+=(const Attempts& o);
    bool operator==(const Attempts&) const = default;
};

struct LedgerKey {
    unsigned long b;
    Prime l;
    auto operator<=>(const LedgerKey&) const = default;
};

class CostLedger {
  public:
    Attempts& cell(unsigned long b, Prime l) { return cells_[{b, l}]; }
    /// Zero counters for cells never visited.
    Attempts get(unsigned long b, Prime l) const;
    bool contains(unsigned long b, Prime l) const { return cells_.count({b, l}) != 0; }

    CostLedger& merge(const CostLedger& other);
    Attempts total() const;
    const std::map<LedgerKey, Attempts>& cells() const { return cells_; }

    bool operator==(const CostLedger&) const = default;

  private:
    std::map<LedgerKey, Attempts> cells_;
};

struct SieveOutcome {
    Algorithm algorithm;
    SieveTable table;
    CostLedger ledger;
    // Setup work (root finding, lifting, residues); not part of the ledger.
    PrecomputeStats precompute;
};

struct SieveOptions {
    // Rows are split across this many threads; results do not depend on it.
    unsigned workers = 1;
};

SieveOutcome sieve_trivial(SieveTable table, const PrimeList& primes, const SieveOptions& opts = {});
SieveOutcome sieve_classical(SieveTable table, const SievePolynomial& f, const LiftTables& tables,
                             const SieveOptions& opts = {});
SieveOutcome sieve_improved(SieveTable table, const LiftTables& tables, const SieveOptions& opts = {});

SieveOutcome sieve_trivial(const SievePolynomial& f, unsigned long u, Prime y, const SieveOptions& opts = {});
SieveOutcome sieve_classical(const SievePolynomial& f, unsigned long u, Prime y, const SieveOptions& opts = {});
SieveOutcome sieve_improved(const SievePolynomial& f, unsigned long u, Prime y, const SieveOptions& opts = {});

SieveOutcome run_sieve(Algorithm alg, const SievePolynomial& f, unsigned long u, Prime y,
                       const SieveOptions& opts = {});

} // namespace nfsieve
