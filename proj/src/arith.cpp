// arith.cpp

#include "nfsieve/arith.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace nfsieve {

bool PrimeList::contains(Prime p) const {
    return std::binary_search(primes.begin(), primes.end(), p);
}

PrimeList primes_up_to(Prime y) {
    if (y < 2) throw EmptyRangeError("primes_up_to: bound " + std::to_string(y) + " is below 2");

    std::vector<bool> composite(y + 1, false);
    PrimeList out;
    out.bound = y;
    for (Prime p = 2; p <= y; ++p) {
        if (composite[p]) continue;
        out.primes.push_back(p);
        for (Prime k = p * p; k <= y; k += p) composite[k] = true;
    }
    return out;
}

unsigned valuation(const Integer& n, Prime l) {
    if (n == 0) throw UndefinedValuationError("valuation: zero has no finite valuation");
    if (l < 2) throw std::invalid_argument("valuation: modulus must be a prime");
    Integer rest;
    return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), Integer(l).get_mpz_t()));
}

Integer mod_inverse(const Integer& x, const Integer& modulus) {
    if (modulus < 2) throw std::invalid_argument("mod_inverse: modulus must be at least 2");
    Integer z;
    if (mpz_invert(z.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t()) == 0) {
        throw NotInvertibleError("mod_inverse: " + x.get_str() + " is not invertible mod " + modulus.get_str());
    }
    return z;
}

unsigned max_exponent(Prime l, const Integer& bound) {
    if (l < 2) throw std::invalid_argument("max_exponent: base must be at least 2");
    unsigned e = 0;
    Integer p = l;
    while (p <= bound) {
        ++e;
        p *= l;
    }
    return e;
}

Integer mod_floor(const Integer& x, const Integer& modulus) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

Integer power(Prime l, unsigned e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), l, e);
    return r;
}

unsigned long gcd(long a, long b) {
    return std::gcd(a, b);
}

} // namespace nfsieve
