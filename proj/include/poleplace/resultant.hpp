#ifndef POLEPLACE_RESULTANT_HPP
#define POLEPLACE_RESULTANT_HPP

#include "poleplace/pencil.hpp"
#include "poleplace/schubert.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace poleplace {

/// Dense univariate polynomials over the rationals, coefficient k at
/// index k, no trailing zeros.  Only what the elimination oracle needs.
using UniPoly = std::vector<Rational>;

inline void upoly_trim(UniPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline int upoly_deg(const UniPoly& p) { return static_cast<int>(p.size()) - 1; }

inline UniPoly upoly_derivative(const UniPoly& p) {
    UniPoly d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Rational(static_cast<int>(k)));
    upoly_trim(d);
    return d;
}

inline UniPoly upoly_mul(const UniPoly& a, const UniPoly& b) {
    if (a.empty() || b.empty()) return {};
    UniPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    upoly_trim(r);
    return r;
}

/// Long division: returns {quotient, remainder}.
inline std::pair<UniPoly, UniPoly> upoly_divmod(UniPoly a, const UniPoly& b) {
    if (b.empty()) throw std::invalid_argument("upoly_divmod: division by zero polynomial");
    UniPoly q;
    upoly_trim(a);
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rational(0));
    const Rational& lead = b.back();
    while (a.size() >= b.size()) {
        Rational f = a.back() / lead;
        std::size_t shift = a.size() - b.size();
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        upoly_trim(a);
        if (a.empty()) break;
        if (a.size() >= b.size() && a.back().is_zero()) upoly_trim(a);
    }
    upoly_trim(q);
    return {std::move(q), std::move(a)};
}

/// Monic greatest common divisor by the Euclidean algorithm.
inline UniPoly upoly_gcd(UniPoly a, UniPoly b) {
    upoly_trim(a);
    upoly_trim(b);
    while (!b.empty()) {
        UniPoly r = upoly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        Rational inv = Rational(1) / a.back();
        for (auto& c : a) c *= inv;
    }
    return a;
}

/// Squarefree decomposition f = prod P_i^i (Yun's algorithm); returns
/// the factors with multiplicity >= 1 and positive degree.
inline std::vector<std::pair<UniPoly, int>> upoly_squarefree(UniPoly f) {
    upoly_trim(f);
    std::vector<std::pair<UniPoly, int>> out;
    if (upoly_deg(f) < 1) return out;
    if (f.back() != 1) {
        Rational inv = Rational(1) / f.back();
        for (auto& c : f) c *= inv;
    }
    UniPoly fp = upoly_derivative(f);
    UniPoly g = upoly_gcd(f, fp);
    UniPoly w = upoly_divmod(f, g).first;
    UniPoly y = upoly_divmod(fp, g).first;
    UniPoly z;
    {
        UniPoly wp = upoly_derivative(w);
        z = y;
        z.resize(std::max(z.size(), wp.size()), Rational(0));
        for (std::size_t i = 0; i < wp.size(); ++i) z[i] -= wp[i];
        upoly_trim(z);
    }
    int i = 1;
    int guard = 0;
    while (upoly_deg(w) > 0) {
        if (++guard > 64) throw std::logic_error("upoly_squarefree: failed to terminate");
        UniPoly gi = upoly_gcd(w, z);
        if (upoly_deg(gi) > 0) out.push_back({gi, i});
        w = upoly_divmod(w, gi).first;
        y = upoly_divmod(z, gi).first;
        UniPoly wp = upoly_derivative(w);
        z = y;
        z.resize(std::max(z.size(), wp.size()), Rational(0));
        for (std::size_t j = 0; j < wp.size(); ++j) z[j] -= wp[j];
        upoly_trim(z);
        ++i;
    }
    return out;
}

/// Extracts a bivariate polynomial's coefficient list in the eliminated
/// variable as dense univariate polynomials in the kept variable.
inline std::vector<UniPoly> bivariate_rows(const MultiPoly<Rational>& p, int elim_var) {
    if (p.nvars() != 2) throw std::invalid_argument("bivariate_rows: need exactly two variables");
    const int keep = 1 - elim_var;
    auto parts = coeffs_in_var(p, elim_var);
    std::vector<UniPoly> rows;
    for (const auto& part : parts) {
        UniPoly row;
        for (const auto& [e, c] : part.terms()) {
            std::size_t k = e[keep];
            if (row.size() <= k) row.resize(k + 1, Rational(0));
            row[k] = c;
        }
        upoly_trim(row);
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Sylvester resultant of two bivariate polynomials with respect to
/// elim_var; the result is univariate in the other variable.  Both
/// inputs must have positive degree in elim_var.
inline UniPoly sylvester_resultant(const MultiPoly<Rational>& f, const MultiPoly<Rational>& g,
                                   int elim_var) {
    auto fr = bivariate_rows(f, elim_var);
    auto gr = bivariate_rows(g, elim_var);
    const int p = static_cast<int>(fr.size()) - 1;
    const int q = static_cast<int>(gr.size()) - 1;
    if (p < 1 || q < 1)
        throw std::invalid_argument("sylvester_resultant: inputs must involve the variable");
    const int side = p + q;
    PolyMatrix<Rational> S(side, side, 1);
    auto put = [&](int r, int c, const UniPoly& u) {
        MultiPoly<Rational> e(1);
        for (std::size_t k = 0; k < u.size(); ++k)
            e.add_term({static_cast<unsigned>(k)}, u[k]);
        S.set(r, c, std::move(e));
    };
    for (int i = 0; i < q; ++i)
        for (int j = 0; j <= p; ++j) put(i, i + j, fr[p - j]);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= q; ++j) put(q + i, i + j, gr[q - j]);
    MultiPoly<Rational> det = determinant(S);
    UniPoly out;
    for (const auto& [e, c] : det.terms()) {
        std::size_t k = e[0];
        if (out.size() <= k) out.resize(k + 1, Rational(0));
        out[k] = c;
    }
    upoly_trim(out);
    return out;
}

/// Substitutes z1 <- z1 + t z2 (an invertible shear), leaving z2 fixed.
inline MultiPoly<Rational> shear_first_var(const MultiPoly<Rational>& p, const Rational& t) {
    if (p.nvars() != 2) throw std::invalid_argument("shear_first_var: need two variables");
    MultiPoly<Rational> out(2);
    for (const auto& [e, c] : p.terms()) {
        const unsigned a = e[0], b = e[1];
        for (unsigned k = 0; k <= a; ++k) {
            // z1^a -> sum_k C(a,k) t^(a-k) z1^k z2^(a-k)
            Rational coeff = c * Rational(binomial(static_cast<int>(a), static_cast<int>(k)));
            for (unsigned j = 0; j < a - k; ++j) coeff *= t;
            out.add_term({k, b + (a - k)}, coeff);
        }
    }
    return out;
}

enum class OracleStatus {
    Ok,                  // count is the exact affine root count, none on the base locus
    Degenerate,          // the two equations share a factor: non-isolated roots
    BaseLocusSuspected,  // the c_k may share a zero; count includes such points
};

/// Exact elimination data for a two-variable coefficient system.
struct ResultantOracleReport {
    OracleStatus status = OracleStatus::Ok;
    int count_with_multiplicity = 0;
    int distinct_count = 0;
    MultiPoly<Rational> resultant_raw{2};  // Res_{z2}(g1, g2) in the original coordinates
    std::vector<std::pair<UniPoly, int>> squarefree;  // of the sheared resultant
    Rational shear;  // shear parameter used for the count
};

namespace detail {

/// Eliminates z2 from a pair, degenerating gracefully when one or both
/// inputs are free of it; the output vanishes at the projection of
/// every common root.
inline UniPoly eliminate_pair(const MultiPoly<Rational>& f, const MultiPoly<Rational>& g) {
    const int df = f.degree_in(1), dg = g.degree_in(1);
    auto as_uni = [](const MultiPoly<Rational>& p) {
        UniPoly u;
        for (const auto& [e, c] : p.terms()) {
            std::size_t k = e[0];
            if (u.size() <= k) u.resize(k + 1, Rational(0));
            u[k] = c;
        }
        upoly_trim(u);
        return u;
    };
    if (df <= 0 && dg <= 0) return upoly_gcd(as_uni(f), as_uni(g));
    if (dg <= 0) {
        UniPoly base = as_uni(g), acc{Rational(1)};
        for (int i = 0; i < df; ++i) acc = upoly_mul(acc, base);
        return acc;
    }
    if (df <= 0) {
        UniPoly base = as_uni(f), acc{Rational(1)};
        for (int i = 0; i < dg; ++i) acc = upoly_mul(acc, base);
        return acc;
    }
    return sylvester_resultant(f, g, 1);
}

inline Rational shear_candidate(std::uint64_t seed, int attempt) {
    if (attempt == 0) return Rational(0);
    std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt));
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    x ^= x >> 31;
    int num = static_cast<int>(x % 29) + 1;
    int den = static_cast<int>((x >> 8) % 5) + 1;
    return ((x >> 16) % 2 == 0) ? Rational(num) / den : Rational(-num) / den;
}

}  // namespace detail

/// Brute-force validation path for n = 2: eliminates z2 by Sylvester
/// resultants over exact rationals after a shear that makes the leading
/// coefficients constant, so the degree of the resultant equals the
/// number of affine common roots counted with multiplicity.
inline ResultantOracleReport resultant_oracle_2d(const CoefficientSystem<Rational>& sys,
                                                 std::uint64_t seed = 0x0A11CE) {
    if (sys.n != 2) throw std::invalid_argument("resultant_oracle_2d: system must have n = 2");
    const MultiPoly<Rational>& g1 = sys.equations[0];
    const MultiPoly<Rational>& g2 = sys.equations[1];
    ResultantOracleReport rep;
    if (g1.is_zero() || g2.is_zero()) {
        rep.status = OracleStatus::Degenerate;
        return rep;
    }
    if (g1.degree_in(1) > 0 && g2.degree_in(1) > 0) {
        UniPoly raw = sylvester_resultant(g1, g2, 1);
        for (std::size_t k = 0; k < raw.size(); ++k)
            rep.resultant_raw.add_term({static_cast<unsigned>(k), 0}, raw[k]);
    }

    // constant equations: either inconsistent (no roots) or degenerate
    if (g1.degree() == 0 || g2.degree() == 0) {
        rep.status = OracleStatus::Ok;
        rep.count_with_multiplicity = 0;
        return rep;
    }

    const int d1 = g1.degree(), d2 = g2.degree();
    bool counted = false;
    for (int attempt = 0; attempt < 24 && !counted; ++attempt) {
        Rational t = detail::shear_candidate(seed, attempt);
        auto s1 = shear_first_var(g1, t);
        auto s2 = shear_first_var(g2, t);
        if (s1.degree_in(1) != d1 || s2.degree_in(1) != d2) continue;  // shear not generic
        UniPoly R = sylvester_resultant(s1, s2, 1);
        if (R.empty()) {
            rep.status = OracleStatus::Degenerate;
            return rep;
        }
        rep.shear = t;
        rep.count_with_multiplicity = upoly_deg(R);
        rep.squarefree = upoly_squarefree(R);
        rep.distinct_count = 0;
        for (const auto& [fac, mult] : rep.squarefree) rep.distinct_count += upoly_deg(fac);
        counted = true;

        // do the charpoly coefficients share a common zero?  sound test:
        // a common root forces every pairwise elimination to vanish at
        // its projection, so a trivial joint gcd certifies emptiness.
        std::vector<MultiPoly<Rational>> cs;
        for (const auto& c : sys.charpoly_coeffs) {
            auto sc = shear_first_var(c, t);
            if (!sc.is_zero()) cs.push_back(std::move(sc));
        }
        if (cs.empty()) {
            rep.status = OracleStatus::Degenerate;
            return rep;
        }
        if (cs.size() == 1) {
            rep.status = OracleStatus::BaseLocusSuspected;
            return rep;
        }
        UniPoly joint;
        bool started = false;
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = i + 1; j < cs.size(); ++j) {
                UniPoly e = detail::eliminate_pair(cs[i], cs[j]);
                joint = started ? upoly_gcd(joint, e) : e;
                started = true;
                upoly_trim(joint);
            }
        if (!started || joint.empty() || upoly_deg(joint) > 0)
            rep.status = OracleStatus::BaseLocusSuspected;
    }
    if (!counted) throw std::runtime_error("resultant_oracle_2d: no usable shear found");
    return rep;
}

}  // namespace poleplace

#endif
