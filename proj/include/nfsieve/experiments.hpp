// experiments.hpp
//
// Random-polynomial experiments on liftable multiple roots, exact enumeration
// of the per-point lift density, and improved/classical ratio sweeps.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfsieve/arith.hpp"
#include "nfsieve/poly.hpp"

namespace nfsieve {

class EnumerationTooLargeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

/// splitmix64 finalizer; turns (master seed, index) into independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Monic degree-d polynomials with c_0..c_{d-1} uniform mod M = prod_{l<=y} l^2.
/// By CRT the reductions mod l^2 are uniform and independent across l.
class RandomModel {
  public:
    RandomModel(unsigned degree, Prime y, std::uint64_t seed);

    unsigned degree() const { return degree_; }
    Prime y() const { return primes_.bound; }
    const PrimeList& primes() const { return primes_; }
    const Integer& modulus() const { return modulus_; }
    std::uint64_t seed() const { return seed_; }

  private:
    unsigned degree_;
    PrimeList primes_;
    Integer modulus_;
    std::uint64_t seed_;
};

/// Sample number `index` of the model's stream; a pure function of (model, index).
Polynomial sample_poly(const RandomModel& model, std::uint64_t index);

/// True iff some multiple root of f mod l lifts to a root mod l^2 (R_l nonempty).
bool lift_event(const Polynomial& f, Prime l);

struct LiftEventReport {
    unsigned degree = 0;
    Prime y = 0;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;  // trials with no liftable multiple root at any l <= y
    std::vector<Prime> primes;
    std::vector<std::uint64_t> failures;  // per prime, trials with a liftable multiple root
    Rational reference_product;           // prod_{l<=y} (1 - 1/l^2)
    double zeta2_inverse = 0.0;           // 6/pi^2

    double estimate() const;
    double stderr_estimate() const;
    /// estimate >= threshold - 3 * stderr
    bool passes(double threshold = 0.6) const;
};

LiftEventReport monte_carlo(const RandomModel& model, std::uint64_t trials);

/// Full enumeration of monic degree-d polynomials mod l^2.
struct EnumerationResult {
    unsigned degree = 0;
    Prime l = 0;
    std::uint64_t count_bad = 0;    // polynomials with R_l nonempty
    std::uint64_t count_total = 0;  // l^(2d)
    // per_point_counts[i]: polynomials with h(i) = 0 mod l^2 and h'(i) = 0 mod l
    std::vector<std::uint64_t> per_point_counts;
};

inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

EnumerationResult enumerate_exact(unsigned degree, Prime l);

struct SweepInstance {
    unsigned degree = 2;
    Integer m = 1;
    unsigned long u = 1;
    Prime y = 2;
    std::uint64_t seed = 0;
    // Used as-is when present; otherwise drawn from (degree, m, seed).
    std::optional<std::vector<Integer>> coeffs;
};

/// Monic degree-d polynomial with c_i uniform in [-m, m].
SievePolynomial random_sieve_polynomial(unsigned degree, const Integer& m, std::uint64_t seed);

SievePolynomial instance_polynomial(const SweepInstance& inst);

struct SweepRow {
    std::string instance;
    std::string poly;
    unsigned degree = 0;
    Integer m;
    unsigned long u = 0;
    Prime y = 0;
    std::uint64_t seed = 0;
    std::uint64_t trivial_total = 0;
    std::uint64_t classical_total = 0;
    std::uint64_t improved_total = 0;
    std::uint64_t correction_total = 0;
    double ratio = 0.0;
    bool identities_hold = false;
    bool tables_agree = false;
    bool correction_free = false;  // flagged when false
};

std::vector<SweepRow> ratio_sweep(std::span<const SweepInstance> instances, unsigned workers = 1);

} // namespace nfsieve
