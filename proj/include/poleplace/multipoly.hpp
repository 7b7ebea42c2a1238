#ifndef POLEPLACE_MULTIPOLY_HPP
#define POLEPLACE_MULTIPOLY_HPP

#include "poleplace/scalar.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace poleplace {

/// One exponent per variable, non-negative.
using ExponentVec = std::vector<unsigned>;

inline unsigned total_degree(const ExponentVec& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

/// Graded lexicographic term order: total degree first, then lex.
/// Using it as the map comparator makes the term map a canonical form,
/// so polynomial equality is map equality.
struct GradedLexLess {
    bool operator()(const ExponentVec& a, const ExponentVec& b) const {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

/// Sparse multivariate polynomial over the scalar field K.
///
/// Invariants: no stored coefficient is zero (under the field's zero
/// test), and every exponent vector has length nvars().  degree() of the
/// zero polynomial is -1.
template <class K>
class MultiPoly {
   public:
    using TermMap = std::map<ExponentVec, K, GradedLexLess>;

    explicit MultiPoly(int nvars = 0) : nvars_(nvars) {
        if (nvars < 0) throw std::invalid_argument("MultiPoly: negative variable count");
    }

    static MultiPoly constant(int nvars, const K& c) {
        MultiPoly p(nvars);
        p.add_term(ExponentVec(nvars, 0), c);
        return p;
    }

    /// The monomial x_index.
    static MultiPoly variable(int nvars, int index) {
        MultiPoly p(nvars);
        ExponentVec e(nvars, 0);
        p.check_var(index);
        e[index] = 1;
        p.add_term(e, K(1));
        return p;
    }

    static MultiPoly monomial(ExponentVec e, const K& c) {
        MultiPoly p(static_cast<int>(e.size()));
        p.add_term(std::move(e), c);
        return p;
    }

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    /// Max total degree over stored terms; -1 for the zero polynomial.
    int degree() const {
        if (terms_.empty()) return -1;
        return static_cast<int>(total_degree(terms_.rbegin()->first));
    }

    int degree_in(int var) const {
        check_var(var);
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
        return terms_.empty() ? -1 : d;
    }

    K coeff(const ExponentVec& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? K(0) : it->second;
    }

    /// Accumulates c * x^e, dropping the entry again if it cancels.
    void add_term(ExponentVec e, const K& c) {
        if (static_cast<int>(e.size()) != nvars_)
            throw std::invalid_argument("MultiPoly: exponent vector length mismatch");
        if (scalar_traits<K>::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (scalar_traits<K>::is_zero(it->second)) terms_.erase(it);
        }
    }

    MultiPoly& operator+=(const MultiPoly& rhs) {
        check_same_ring(rhs);
        for (const auto& [e, c] : rhs.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& rhs) {
        check_same_ring(rhs);
        for (const auto& [e, c] : rhs.terms_) add_term(e, K(-c));
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    MultiPoly operator-() const {
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, K(-c));
        return r;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_same_ring(b);
        MultiPoly r(a.nvars_);
        ExponentVec e(a.nvars_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (int v = 0; v < a.nvars_; ++v) e[v] = ea[v] + eb[v];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    MultiPoly operator*(const K& c) const {
        MultiPoly r(nvars_);
        for (const auto& [e, coeff] : terms_) r.add_term(e, coeff * c);
        return r;
    }

    bool operator==(const MultiPoly& rhs) const {
        return nvars_ == rhs.nvars_ && terms_ == rhs.terms_;
    }
    bool operator!=(const MultiPoly& rhs) const { return !(*this == rhs); }

    /// Full substitution; point length must equal nvars().
    K eval(std::span<const K> point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("MultiPoly::eval: point length mismatch");
        // power tables keep repeated exponents cheap and deterministic
        std::vector<std::vector<K>> pow(nvars_);
        for (int v = 0; v < nvars_; ++v) pow[v].push_back(K(1));
        K acc(0);
        for (const auto& [e, c] : terms_) {
            K term = c;
            for (int v = 0; v < nvars_; ++v) {
                auto& pv = pow[v];
                while (pv.size() <= e[v]) pv.push_back(pv.back() * point[v]);
                term *= pv[e[v]];
            }
            acc += term;
        }
        return acc;
    }

    K eval(const std::vector<K>& point) const { return eval(std::span<const K>(point)); }

    /// Partial derivative with respect to one variable.
    MultiPoly derivative(int var) const {
        check_var(var);
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[var] == 0) continue;
            ExponentVec d = e;
            d[var] -= 1;
            r.add_term(std::move(d), c * K(static_cast<int>(e[var])));
        }
        return r;
    }

    /// Substitutes a constant for one variable; the slot stays in the
    /// ring with exponent zero everywhere.
    MultiPoly substitute(int var, const K& value) const {
        check_var(var);
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_) {
            K coeff = c;
            for (unsigned k = 0; k < e[var]; ++k) coeff *= value;
            ExponentVec d = e;
            d[var] = 0;
            r.add_term(std::move(d), coeff);
        }
        return r;
    }

    /// Homogeneous part of the given total degree.
    MultiPoly homogeneous_part(int deg) const {
        MultiPoly r(nvars_);
        for (const auto& [e, c] : terms_)
            if (static_cast<int>(total_degree(e)) == deg) r.add_term(e, c);
        return r;
    }

    void check_var(int var) const {
        if (var < 0 || var >= nvars_) throw std::invalid_argument("MultiPoly: variable index out of range");
    }

   private:
    void check_same_ring(const MultiPoly& rhs) const {
        if (nvars_ != rhs.nvars_)
            throw std::invalid_argument("MultiPoly: variable count mismatch between operands");
    }

    int nvars_;
    TermMap terms_;
};

template <class To, class From>
MultiPoly<To> convert_poly(const MultiPoly<From>& p) {
    MultiPoly<To> r(p.nvars());
    for (const auto& [e, c] : p.terms()) r.add_term(e, static_cast<To>(c));
    return r;
}

template <>
inline MultiPoly<Complex> convert_poly<Complex, Rational>(const MultiPoly<Rational>& p) {
    MultiPoly<Complex> r(p.nvars());
    for (const auto& [e, c] : p.terms()) r.add_term(e, scalar_from_rational<Complex>(c));
    return r;
}

/// Coefficients of var^0 .. var^deg as polynomials in the remaining
/// variables (the extracted slot is kept with exponent zero, so
/// sum_k coeffs[k] * var^k reassembles the input exactly).  The zero
/// polynomial yields an empty list.
template <class K>
std::vector<MultiPoly<K>> coeffs_in_var(const MultiPoly<K>& p, int var) {
    p.check_var(var);
    int dv = p.degree_in(var);
    if (dv < 0) return {};
    std::vector<MultiPoly<K>> out(dv + 1, MultiPoly<K>(p.nvars()));
    for (const auto& [e, c] : p.terms()) {
        ExponentVec d = e;
        unsigned k = d[var];
        d[var] = 0;
        out[k].add_term(std::move(d), c);
    }
    return out;
}

/// Inserts a fresh variable at new_var_index and multiplies every term by
/// it so the result is homogeneous of target_degree.
template <class K>
MultiPoly<K> homogenize(const MultiPoly<K>& p, int new_var_index, int target_degree) {
    if (new_var_index < 0 || new_var_index > p.nvars())
        throw std::invalid_argument("homogenize: new variable index out of range");
    if (target_degree < p.degree())
        throw std::invalid_argument("homogenize: target degree below polynomial degree");
    MultiPoly<K> r(p.nvars() + 1);
    for (const auto& [e, c] : p.terms()) {
        ExponentVec d;
        d.reserve(e.size() + 1);
        d.insert(d.end(), e.begin(), e.begin() + new_var_index);
        d.push_back(static_cast<unsigned>(target_degree) - total_degree(e));
        d.insert(d.end(), e.begin() + new_var_index, e.end());
        r.add_term(std::move(d), c);
    }
    return r;
}

/// Removes a variable slot the polynomial does not actually use.
template <class K>
MultiPoly<K> drop_var(const MultiPoly<K>& p, int var) {
    p.check_var(var);
    if (p.degree_in(var) > 0)
        throw std::invalid_argument("drop_var: variable still occurs");
    MultiPoly<K> r(p.nvars() - 1);
    for (const auto& [e, c] : p.terms()) {
        ExponentVec d;
        d.reserve(e.size() - 1);
        d.insert(d.end(), e.begin(), e.begin() + var);
        d.insert(d.end(), e.begin() + var + 1, e.end());
        r.add_term(std::move(d), c);
    }
    return r;
}

/// Inserts an unused variable slot at the given position.
template <class K>
MultiPoly<K> insert_var(const MultiPoly<K>& p, int var) {
    if (var < 0 || var > p.nvars())
        throw std::invalid_argument("insert_var: position out of range");
    MultiPoly<K> r(p.nvars() + 1);
    for (const auto& [e, c] : p.terms()) {
        ExponentVec d;
        d.reserve(e.size() + 1);
        d.insert(d.end(), e.begin(), e.begin() + var);
        d.push_back(0);
        d.insert(d.end(), e.begin() + var, e.end());
        r.add_term(std::move(d), c);
    }
    return r;
}

/// All k-element subsets of {0,...,n-1} in lexicographic order.
inline std::vector<std::vector<int>> subsets_lex(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("subsets_lex: bad subset size");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    if (k == 0) out.assign(1, {});
    return out;
}

/// Sign of the permutation (J, complement of J) of {0,...,n-1}:
/// (-1)^(sum of J - |J|(|J|-1)/2) with 0-based members.
inline int laplace_sign(const std::vector<int>& subset) {
    long swaps = 0;
    for (std::size_t i = 0; i < subset.size(); ++i)
        swaps += subset[i] - static_cast<long>(i);
    return (swaps % 2 == 0) ? 1 : -1;
}

/// Dense matrix of polynomials; all entries share one variable count.
template <class K>
class PolyMatrix {
   public:
    PolyMatrix(int rows, int cols, int nvars)
        : rows_(rows), cols_(cols), nvars_(nvars), entries_(rows * cols, MultiPoly<K>(nvars)) {
        if (rows <= 0 || cols <= 0) throw std::invalid_argument("PolyMatrix: non-positive dimensions");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nvars() const { return nvars_; }

    MultiPoly<K>& at(int r, int c) { return entries_[index(r, c)]; }
    const MultiPoly<K>& at(int r, int c) const { return entries_[index(r, c)]; }

    void set(int r, int c, MultiPoly<K> p) {
        if (p.nvars() != nvars_) throw std::invalid_argument("PolyMatrix: entry variable count mismatch");
        entries_[index(r, c)] = std::move(p);
    }

   private:
    int index(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
            throw std::out_of_range("PolyMatrix: index out of range");
        return r * cols_ + c;
    }

    int rows_, cols_, nvars_;
    std::vector<MultiPoly<K>> entries_;
};

/// Minors of the leading rows over column subsets: for a mask S with
/// popcount k, the value is det of the submatrix on rows 0..k-1 and the
/// columns in S.  Shared workhorse for determinants, Pluecker vectors and
/// the minor polynomials; expansion is division-free, so exact scalars
/// stay exact.
template <class K>
class LeadingMinorTable {
   public:
    explicit LeadingMinorTable(const PolyMatrix<K>& M) : M_(M) {
        if (M.cols() > 20) throw std::invalid_argument("LeadingMinorTable: too many columns");
        cache_.emplace(0u, MultiPoly<K>::constant(M.nvars(), K(1)));
    }

    const MultiPoly<K>& minor_of(const std::vector<int>& cols) {
        std::uint32_t mask = 0;
        for (int c : cols) mask |= (1u << c);
        if (static_cast<int>(cols.size()) > M_.rows())
            throw std::invalid_argument("LeadingMinorTable: more columns than rows");
        return compute(mask, static_cast<int>(cols.size()));
    }

   private:
    const MultiPoly<K>& compute(std::uint32_t mask, int k) {
        auto it = cache_.find(mask);
        if (it != cache_.end()) return it->second;
        MultiPoly<K> acc(M_.nvars());
        int pos = 0;
        int sign = (k % 2 == 0) ? -1 : 1;  // (-1)^(k-1+pos), pos = 0
        for (int c = 0; c < M_.cols(); ++c) {
            if (!(mask & (1u << c))) continue;
            const MultiPoly<K>& entry = M_.at(k - 1, c);
            if (!entry.is_zero()) {
                const MultiPoly<K>& sub = compute(mask & ~(1u << c), k - 1);
                MultiPoly<K> prod = entry * sub;
                if (sign < 0) prod = -prod;
                acc += prod;
            }
            sign = -sign;
            ++pos;
        }
        auto [ins, ok] = cache_.emplace(mask, std::move(acc));
        return ins->second;
    }

    const PolyMatrix<K>& M_;
    std::unordered_map<std::uint32_t, MultiPoly<K>> cache_;
};

/// Exact determinant by memoized cofactor expansion.  Sides above 10 are
/// rejected; the subset table grows as 2^side.
template <class K>
MultiPoly<K> determinant(const PolyMatrix<K>& M) {
    if (M.rows() != M.cols()) throw std::invalid_argument("determinant: matrix not square");
    if (M.rows() > 10) throw std::invalid_argument("determinant: side exceeds 10");
    LeadingMinorTable<K> table(M);
    std::vector<int> all(M.cols());
    std::iota(all.begin(), all.end(), 0);
    return table.minor_of(all);
}

}  // namespace poleplace

#endif
