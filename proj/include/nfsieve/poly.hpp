// poly.hpp
//
// The defining polynomial f and the two sieve terms (a - bm) and Nm(a - b*theta).

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nfsieve/arith.hpp"

namespace nfsieve {

class InvalidPolynomialError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Monic integer polynomial, coefficients stored low degree first (c_0..c_d).
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Integer> coeffs);

    unsigned degree() const { return static_cast<unsigned>(coeffs_.size()) - 1; }
    const Integer& coeff(unsigned i) const { return coeffs_[i]; }
    std::span<const Integer> coeffs() const { return coeffs_; }

    Integer operator()(const Integer& x) const;
    Integer derivative(const Integer& x) const;

    std::string to_string() const;

    bool operator==(const Polynomial&) const = default;

  private:
    std::vector<Integer> coeffs_;
};

/// f together with m, which is both the coefficient bound and the rational-side
/// integer in (a - bm). Invariants: monic, degree >= 2, |c_i| <= m, m >= 1.
class SievePolynomial {
  public:
    SievePolynomial(Polynomial f, Integer m);
    SievePolynomial(std::vector<Integer> coeffs, Integer m)
        : SievePolynomial(Polynomial(std::move(coeffs)), std::move(m)) {}

    const Polynomial& poly() const { return f_; }
    const Integer& m() const { return m_; }
    unsigned degree() const { return f_.degree(); }

  private:
    Polynomial f_;
    Integer m_;
};

/// Parses "c0,c1,...,cd". Only syntax is checked here; monicity and bounds are
/// checked by the constructors.
std::vector<Integer> parse_coefficients(std::string_view text);

/// Homogenized form F(a, b) = sum c_i a^i b^(d-i); coeffs[i] multiplies a^i b^(d-i).
struct NormForm {
    std::vector<Integer> coeffs;

    unsigned degree() const { return static_cast<unsigned>(coeffs.size()) - 1; }
    bool operator==(const NormForm&) const = default;
};

NormForm norm_form(const Polynomial& f);
inline NormForm norm_form(const SievePolynomial& f) { return norm_form(f.poly()); }

Integer eval_norm(const NormForm& F, const Integer& a, const Integer& b);

/// f(x) mod modulus, in [0, modulus).
Integer eval_poly(const Polynomial& f, const Integer& x, const Integer& modulus);
inline Integer eval_poly(const SievePolynomial& f, const Integer& x, const Integer& modulus) {
    return eval_poly(f.poly(), x, modulus);
}

/// f'(x) mod modulus, in [0, modulus).
Integer eval_derivative(const Polynomial& f, const Integer& x, const Integer& modulus);
inline Integer eval_derivative(const SievePolynomial& f, const Integer& x, const Integer& modulus) {
    return eval_derivative(f.poly(), x, modulus);
}

/// u(m+1): bounds |a - bm| over the region.
Integer rational_bound(const SievePolynomial& f, unsigned long u);
/// m(d+1)u^d: bounds |F(a, b)| over the region.
Integer algebraic_bound(const SievePolynomial& f, unsigned long u);

} // namespace nfsieve
