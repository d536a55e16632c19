// arith.hpp
//
// Arbitrary-precision and modular arithmetic shared by the sieve modules.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace nfsieve {

using Integer = mpz_class;
using Rational = mpq_class;

// Small primes and residues mod a small prime. Everything that can grow with
// the region size is an Integer.
using Prime = unsigned long;

class EmptyRangeError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class UndefinedValuationError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class NotInvertibleError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

struct PrimeList {
    Prime bound = 0;
    std::vector<Prime> primes;

    auto begin() const { return primes.begin(); }
    auto end() const { return primes.end(); }
    std::size_t size() const { return primes.size(); }
    bool contains(Prime p) const;
};

// Sieve of Eratosthenes. Throws EmptyRangeError for y < 2.
PrimeList primes_up_to(Prime y);

// Largest e with l^e | n. n == 0 has no valuation and throws.
unsigned valuation(const Integer& n, Prime l);

// z in [0, modulus) with x*z = 1 (mod modulus).
Integer mod_inverse(const Integer& x, const Integer& modulus);

// Largest e with l^e <= bound (0 when l > bound).
unsigned max_exponent(Prime l, const Integer& bound);

// Least nonnegative residue, for any sign of x.
Integer mod_floor(const Integer& x, const Integer& modulus);

Integer power(Prime l, unsigned e);

unsigned long gcd(long a, long b);

} // namespace nfsieve
