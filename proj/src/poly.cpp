// poly.cpp

#include "nfsieve/poly.hpp"

#include <cctype>

namespace nfsieve {

Polynomial::Polynomial(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 2) throw InvalidPolynomialError("polynomial must have degree at least 1");
    if (coeffs_.back() != 1) throw InvalidPolynomialError("polynomial must be monic (leading coefficient 1)");
}

Integer Polynomial::operator()(const Integer& x) const {
    Integer acc = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

Integer Polynomial::derivative(const Integer& x) const {
    Integer acc = 0;
    for (std::size_t i = coeffs_.size() - 1; i >= 1; --i) acc = acc * x + coeffs_[i] * static_cast<unsigned long>(i);
    return acc;
}

std::string Polynomial::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ',';
        out += coeffs_[i].get_str();
    }
    return out;
}

SievePolynomial::SievePolynomial(Polynomial f, Integer m) : f_(std::move(f)), m_(std::move(m)) {
    if (m_ < 1) throw InvalidPolynomialError("m must be a positive integer");
    if (f_.degree() < 2) throw InvalidPolynomialError("sieve polynomial must have degree at least 2");
    for (unsigned i = 0; i < f_.degree(); ++i) {
        if (abs(f_.coeff(i)) > m_) {
            throw InvalidPolynomialError("coefficient c_" + std::to_string(i) + " = " + f_.coeff(i).get_str() +
                                         " exceeds the bound m = " + m_.get_str());
        }
    }
}

std::vector<Integer> parse_coefficients(std::string_view text) {
    std::vector<Integer> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = text.find(',', pos);
        std::string_view field = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
        while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
        std::string token(field);
        if (!token.empty() && token.front() == '+') token.erase(0, 1);
        Integer value;
        if (token.empty() || value.set_str(token, 10) != 0) {
            throw InvalidPolynomialError("malformed coefficient '" + std::string(field) + "'");
        }
        out.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

NormForm norm_form(const Polynomial& f) {
    return NormForm{std::vector<Integer>(f.coeffs().begin(), f.coeffs().end())};
}

Integer eval_norm(const NormForm& F, const Integer& a, const Integer& b) {
    // Horner in a, with b^(d-i) accumulated alongside.
    const unsigned d = F.degree();
    Integer acc = F.coeffs[d];
    Integer bpow = 1;
    for (unsigned i = d; i-- > 0;) {
        bpow *= b;
        acc = acc * a + F.coeffs[i] * bpow;
    }
    return acc;
}

Integer eval_poly(const Polynomial& f, const Integer& x, const Integer& modulus) {
    if (modulus < 1) throw std::invalid_argument("eval_poly: modulus must be positive");
    Integer xr = mod_floor(x, modulus);
    Integer acc = 1;
    for (std::size_t i = f.degree(); i-- > 0;) {
        acc = acc * xr + f.coeff(static_cast<unsigned>(i));
        acc = mod_floor(acc, modulus);
    }
    return acc;
}

Integer eval_derivative(const Polynomial& f, const Integer& x, const Integer& modulus) {
    if (modulus < 1) throw std::invalid_argument("eval_derivative: modulus must be positive");
    Integer xr = mod_floor(x, modulus);
    Integer acc = 0;
    for (std::size_t i = f.degree(); i >= 1; --i) {
        acc = acc * xr + f.coeff(static_cast<unsigned>(i)) * static_cast<unsigned long>(i);
        acc = mod_floor(acc, modulus);
    }
    return acc;
}

Integer rational_bound(const SievePolynomial& f, unsigned long u) {
    return Integer(u) * (f.m() + 1);
}

Integer algebraic_bound(const SievePolynomial& f, unsigned long u) {
    return f.m() * (f.degree() + 1) * power(u, f.degree());
}

} // namespace nfsieve
