#ifndef POLEPLACE_SCALAR_HPP
#define POLEPLACE_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace poleplace {

/// Exact scalar field: arbitrary-precision rationals, always in lowest
/// terms with positive denominator (the backend normalizes on every op).
using Rational = boost::multiprecision::cpp_rational;

/// Arbitrary-precision integers for the combinatorial degree formulas.
using BigInt = boost::multiprecision::cpp_int;

/// Floating scalar field used by the numerical continuation code.
using Complex = std::complex<double>;

/// Coefficients with magnitude below this are dropped when complex
/// polynomials are canonicalized, so rounding noise cannot pollute the
/// term maps.
inline constexpr double kComplexZeroEps = 1e-12;

template <class K>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool is_exact = true;
    static bool is_zero(const Rational& x) { return x.is_zero(); }
    static Rational from_rational(const Rational& q) { return q; }
    static std::string to_string(const Rational& x) { return x.str(); }
};

template <>
struct scalar_traits<Complex> {
    static constexpr bool is_exact = false;
    static bool is_zero(const Complex& x) { return std::abs(x) < kComplexZeroEps; }
    static Complex from_rational(const Rational& q) {
        return Complex(static_cast<double>(q), 0.0);
    }
    static std::string to_string(const Complex& x) {
        char buf[80];
        if (x.imag() >= 0.0 || std::isnan(x.imag()))
            std::snprintf(buf, sizeof(buf), "%.17g+%.17gi", x.real(), x.imag());
        else
            std::snprintf(buf, sizeof(buf), "%.17g-%.17gi", x.real(), -x.imag());
        return std::string(buf);
    }
};

template <class K>
K scalar_from_rational(const Rational& q) {
    return scalar_traits<K>::from_rational(q);
}

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on anything else.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_rational: malformed rational '" + text + "'");
    }
}

/// Parses "a", "bi", "a+bi" or "a-bi" with ordinary floating literals.
inline Complex parse_complex(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_complex: empty string");
    const char* s = text.c_str();
    char* end = nullptr;
    double first = std::strtod(s, &end);
    if (end == s) throw std::invalid_argument("parse_complex: malformed '" + text + "'");
    if (*end == '\0') return Complex(first, 0.0);
    if (*end == 'i' && end[1] == '\0') return Complex(0.0, first);
    if (*end != '+' && *end != '-')
        throw std::invalid_argument("parse_complex: malformed '" + text + "'");
    const char* s2 = end;
    double second = std::strtod(s2, &end);
    if (end == s2 || *end != 'i' || end[1] != '\0')
        throw std::invalid_argument("parse_complex: malformed '" + text + "'");
    return Complex(first, second);
}

}  // namespace poleplace

#endif
