// roots.hpp
//
// Roots of f mod l, their Hensel lifts, and the per-prime ladders consumed by
// the improved sieve.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nfsieve/arith.hpp"
#include "nfsieve/poly.hpp"

namespace nfsieve {

class NotSimpleRootError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class NotMultipleRootError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Residues x in [0, l) with f(x) = 0 mod l, split by whether f'(x) = 0 mod l.
/// Both lists are ascending and disjoint.
struct RootClassification {
    std::vector<Prime> simple_roots;
    std::vector<Prime> multiple_roots;

    bool empty() const { return simple_roots.empty() && multiple_roots.empty(); }
    /// Union of both classes, ascending.
    std::vector<Prime> all_roots() const;
};

RootClassification classify_roots(const Polynomial& f, Prime l);

/// The unique lift mod l^e of a simple root, computed one level at a time with
/// x <- x - f(x) * f'(root)^-1.
Integer hensel_lift_simple(const Polynomial& f, Prime l, Prime root, unsigned e);

/// Whether a multiple root mod l lifts to a root mod l^2. The answer is the same
/// for every representative of the class.
bool lift_multiple_test(const Polynomial& f, Prime l, Prime root);

/// Work done while building ladders. Kept out of the sieve ledgers.
struct PrecomputeStats {
    std::uint64_t root_scan_evaluations = 0;
    std::uint64_t hensel_steps = 0;
    std::uint64_t rational_residues = 0;
    std::uint64_t lift_tests = 0;

    PrecomputeStats& operator+=(const PrecomputeStats& o);
    bool operator==(const PrecomputeStats&) const = default;
};

struct PrimeLadder {
    Prime l = 0;
    unsigned rational_cap = 0;   // max e with l^e <= u(m+1)
    unsigned algebraic_cap = 0;  // max e with l^e <= m(d+1)u^d

    // rational[e-1] = m mod l^e
    std::vector<Integer> rational;
    // simple[e-1] = lifts mod l^e of the simple roots, in the order of roots.simple_roots
    std::vector<std::vector<Integer>> simple;
    RootClassification roots;
    // multiple roots mod l whose class lifts mod l^2 (stored as residues mod l)
    std::vector<Prime> multiple_liftable;

    Integer modulus(unsigned e) const { return power(l, e); }
};

/// Ladders for every prime l <= y, built once per (f, u, y) and shared
/// read-only by all sieve rows.
class LiftTables {
  public:
    LiftTables() = default;
    LiftTables(std::vector<PrimeLadder> ladders, PrecomputeStats stats)
        : ladders_(std::move(ladders)), stats_(stats) {}

    const std::vector<PrimeLadder>& ladders() const { return ladders_; }
    const PrimeLadder& at(Prime l) const;
    const PrecomputeStats& stats() const { return stats_; }

  private:
    std::vector<PrimeLadder> ladders_;
    PrecomputeStats stats_;
};

LiftTables build_lift_tables(const SievePolynomial& f, unsigned long u, Prime y);

} // namespace nfsieve
