#ifndef POLEPLACE_POLY_IO_HPP
#define POLEPLACE_POLY_IO_HPP

#include "poleplace/multipoly.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace poleplace {

/// Text form of a polynomial: a sum of terms `coef*z1^a*z2^b*s^c`
/// printed leading-term first in graded-lex order.  Rational
/// coefficients print as `p` or `p/q` with unit coefficients folded into
/// the sign; complex coefficients always print parenthesized as
/// `(a+bi)`.  Printing then parsing is bit-exact for exact scalars.

inline std::vector<std::string> default_var_names(int nvars) {
    std::vector<std::string> names;
    names.reserve(nvars);
    for (int i = 1; i <= nvars; ++i) names.push_back("z" + std::to_string(i));
    return names;
}

namespace detail {

template <class K>
struct CoeffFormat;

template <>
struct CoeffFormat<Rational> {
    static bool negative(const Rational& c) { return c < 0; }
    static std::string magnitude(const Rational& c) { return scalar_traits<Rational>::to_string(abs(c)); }
    static bool is_unit(const Rational& c) { return c == 1 || c == -1; }
};

template <>
struct CoeffFormat<Complex> {
    static bool negative(const Complex&) { return false; }
    static std::string magnitude(const Complex& c) {
        return "(" + scalar_traits<Complex>::to_string(c) + ")";
    }
    static bool is_unit(const Complex&) { return false; }
};

}  // namespace detail

template <class K>
std::string poly_to_string(const MultiPoly<K>& p, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != p.nvars())
        throw std::invalid_argument("poly_to_string: name list length mismatch");
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    const auto& terms = p.terms();
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string vars;
        for (int v = 0; v < p.nvars(); ++v) {
            if (e[v] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += names[v];
            if (e[v] > 1) vars += "^" + std::to_string(e[v]);
        }
        bool neg = detail::CoeffFormat<K>::negative(c);
        std::string body;
        if (vars.empty())
            body = detail::CoeffFormat<K>::magnitude(c);
        else if (detail::CoeffFormat<K>::is_unit(c))
            body = vars;
        else
            body = detail::CoeffFormat<K>::magnitude(c) + "*" + vars;
        if (first) {
            out += neg ? "-" : "";
            out += body;
            first = false;
        } else {
            out += neg ? " - " : " + ";
            out += body;
        }
    }
    return out;
}

template <class K>
std::string poly_to_string(const MultiPoly<K>& p) {
    return poly_to_string(p, default_var_names(p.nvars()));
}

namespace detail {

class PolyLexer {
   public:
    PolyLexer(const std::string& text, const std::vector<std::string>& names)
        : text_(text), names_(names) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos_) +
                                    ": " + what);
    }

    /// Maximal identifier, resolved against the variable name list.
    int read_var() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        pos_ = start;
        fail("unknown variable '" + name + "'");
    }

    bool at_identifier() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }

    unsigned read_uint() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer");
        return static_cast<unsigned>(std::stoul(text_.substr(start, pos_ - start)));
    }

    std::string read_int_digits() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
        std::size_t digits = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == digits) fail("expected integer literal");
        return text_.substr(start, pos_ - start);
    }

    double read_float() {
        skip_ws();
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) fail("expected floating literal");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    std::size_t pos_ = 0;
    const std::string& text_;
    const std::vector<std::string>& names_;
};

inline Rational read_coefficient(PolyLexer& lex, const Rational*) {
    std::string num = lex.read_int_digits();
    if (lex.accept('/')) {
        unsigned den = lex.read_uint();
        return Rational(num) / Rational(den);
    }
    return Rational(num);
}

inline Complex read_coefficient(PolyLexer& lex, const Complex*) {
    if (lex.accept('(')) {
        double re = lex.read_float();
        Complex value(re, 0.0);
        char c = lex.peek();
        if (c == '+' || c == '-') {
            double im = lex.read_float();  // strtod consumes the sign
            lex.expect('i');
            value = Complex(re, im);
        } else if (lex.accept('i')) {
            value = Complex(0.0, re);
        }
        lex.expect(')');
        return value;
    }
    double re = lex.read_float();
    if (lex.accept('i')) return Complex(0.0, re);
    return Complex(re, 0.0);
}

}  // namespace detail

template <class K>
MultiPoly<K> parse_poly(const std::string& text, const std::vector<std::string>& names) {
    detail::PolyLexer lex(text, names);
    MultiPoly<K> poly(static_cast<int>(names.size()));
    bool first = true;
    while (!lex.done()) {
        int sign = 1;
        if (lex.accept('-'))
            sign = -1;
        else if (lex.accept('+'))
            sign = 1;
        else if (!first)
            lex.fail("expected '+' or '-' between terms");
        K coeff(1);
        bool have_coeff = false;
        ExponentVec e(names.size(), 0);
        bool expect_factor = true;
        while (expect_factor) {
            if (lex.at_identifier()) {
                int var = lex.read_var();
                unsigned exp = 1;
                if (lex.accept('^')) exp = lex.read_uint();
                e[var] += exp;
            } else {
                if (have_coeff) lex.fail("unexpected second coefficient in term");
                coeff = detail::read_coefficient(lex, static_cast<const K*>(nullptr));
                have_coeff = true;
            }
            expect_factor = lex.accept('*');
        }
        if (sign < 0) coeff = K(-coeff);
        poly.add_term(std::move(e), coeff);
        first = false;
    }
    if (first) lex.fail("empty polynomial");
    return poly;
}

template <class K>
MultiPoly<K> parse_poly(const std::string& text, int nvars) {
    return parse_poly<K>(text, default_var_names(nvars));
}

}  // namespace poleplace

#endif
