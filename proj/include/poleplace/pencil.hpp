#ifndef POLEPLACE_PENCIL_HPP
#define POLEPLACE_PENCIL_HPP

#include "poleplace/matrix.hpp"
#include "poleplace/multipoly.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace poleplace {

/// The open-loop system E x_{t+1} + A x_t + H u_{t+1} + B u_t = 0 with
/// state dimension n and input dimension m.  E, A are n x n; H, B are
/// n x m; a feedback gain F is m x n.
template <class K>
struct MatrixPencil {
    Mat<K> E, A, H, B;
    int n = 0, m = 0;

    MatrixPencil(Mat<K> E_, Mat<K> A_, Mat<K> H_, Mat<K> B_)
        : E(std::move(E_)), A(std::move(A_)), H(std::move(H_)), B(std::move(B_)) {
        n = E.rows();
        m = H.cols();
        if (E.cols() != n || A.rows() != n || A.cols() != n)
            throw std::invalid_argument("MatrixPencil: E, A must be square of equal size");
        if (H.rows() != n || B.rows() != n || B.cols() != m)
            throw std::invalid_argument("MatrixPencil: H, B must be n x m");
        if (n < 1 || m < 1) throw std::invalid_argument("MatrixPencil: dimensions must be positive");
    }
};

inline MatrixPencil<Complex> to_complex(const MatrixPencil<Rational>& p) {
    return MatrixPencil<Complex>(to_complex(p.E), to_complex(p.A), to_complex(p.H), to_complex(p.B));
}

/// Linear space of feedback gains, spanned by basis matrices L_1..L_d.
/// The basis is stored over exact rationals regardless of the field the
/// instance is later solved in; independence is checked at construction.
struct FeedbackSubspace {
    std::vector<Mat<Rational>> basis;
    int m = 0, n = 0, d = 0;

    explicit FeedbackSubspace(std::vector<Mat<Rational>> basis_) : basis(std::move(basis_)) {
        d = static_cast<int>(basis.size());
        if (d == 0) throw std::invalid_argument("FeedbackSubspace: empty basis");
        m = basis[0].rows();
        n = basis[0].cols();
        if (m < 1 || n < 1) throw std::invalid_argument("FeedbackSubspace: degenerate matrix shape");
        if (d > m * n) throw std::invalid_argument("FeedbackSubspace: more basis matrices than dim Mat");
        Mat<Rational> flat(d, m * n);
        for (int k = 0; k < d; ++k) {
            if (basis[k].rows() != m || basis[k].cols() != n)
                throw std::invalid_argument("FeedbackSubspace: basis shape mismatch");
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) flat(k, i * n + j) = basis[k](i, j);
        }
        if (rank(flat) != d)
            throw std::invalid_argument("FeedbackSubspace: basis matrices are linearly dependent");
    }

    /// F = sum_k z_k L_k over the field K.
    template <class K>
    Mat<K> combination(const std::vector<K>& z) const {
        if (static_cast<int>(z.size()) != d)
            throw std::invalid_argument("FeedbackSubspace: coordinate length mismatch");
        Mat<K> F(m, n);
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j)
                    F(i, j) += z[k] * scalar_from_rational<K>(basis[k](i, j));
        return F;
    }
};

/// Target monic polynomial s^n + phi_{n-1} s^{n-1} + ... + phi_0,
/// stored as its n low-order coefficients.
template <class K>
struct MonicTarget {
    std::vector<K> phi;  // phi[k] multiplies s^k, k = 0..n-1

    explicit MonicTarget(std::vector<K> coeffs) : phi(std::move(coeffs)) {
        if (phi.empty()) throw std::invalid_argument("MonicTarget: degree must be positive");
    }
    int degree() const { return static_cast<int>(phi.size()); }
};

inline MonicTarget<Complex> to_complex(const MonicTarget<Rational>& t) {
    std::vector<Complex> phi;
    phi.reserve(t.phi.size());
    for (const auto& c : t.phi) phi.push_back(scalar_from_rational<Complex>(c));
    return MonicTarget<Complex>(std::move(phi));
}

/// Coefficients c_0..c_n of det(s(E+HF) + (A+BF)).  Reported raw: c_n =
/// det(E+HF) may vanish, in which case the closed loop degenerates and
/// monic normalization is the caller's problem.
template <class K>
std::vector<K> closed_loop_charpoly(const MatrixPencil<K>& pencil, const Mat<K>& F) {
    const int n = pencil.n, m = pencil.m;
    if (F.rows() != m || F.cols() != n)
        throw std::invalid_argument("closed_loop_charpoly: F must be m x n");
    Mat<K> EHF = pencil.E + pencil.H * F;
    Mat<K> ABF = pencil.A + pencil.B * F;
    PolyMatrix<K> M(n, n, 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MultiPoly<K> entry(1);
            entry.add_term({1}, EHF(i, j));
            entry.add_term({0}, ABF(i, j));
            M.set(i, j, std::move(entry));
        }
    MultiPoly<K> det = determinant(M);
    std::vector<K> out(n + 1, K(0));
    for (const auto& [e, c] : det.terms()) out[e[0]] = c;
    return out;
}

/// Point of the Grassmannian in its Pluecker embedding: all maximal
/// minors of a full-row-rank m x (m+n) matrix, ordered by
/// lexicographically increasing column subsets.
template <class K>
struct PluckerVector {
    int m = 0, n = 0;
    std::vector<K> entries;  // length C(m+n, m)
};

inline long long binomial_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

template <class K>
PluckerVector<K> plucker_coords(const Mat<K>& W, int m, int n) {
    if (W.rows() != m || W.cols() != m + n)
        throw std::invalid_argument("plucker_coords: W must be m x (m+n)");
    PolyMatrix<K> P(m, m + n, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m + n; ++j) P.set(i, j, MultiPoly<K>::constant(0, W(i, j)));
    LeadingMinorTable<K> table(P);
    PluckerVector<K> pv;
    pv.m = m;
    pv.n = n;
    bool all_zero = true;
    for (const auto& J : subsets_lex(m + n, m)) {
        const MultiPoly<K>& minor = table.minor_of(J);
        K value = minor.is_zero() ? K(0) : minor.terms().begin()->second;
        if (!scalar_traits<K>::is_zero(value)) all_zero = false;
        pv.entries.push_back(value);
    }
    if (all_zero) throw std::invalid_argument("plucker_coords: matrix is rank deficient");
    return pv;
}

/// The (n+1) x (N+1) coefficient matrix of the minor polynomials p_i(s)
/// of [-sH-B | sE+A]: row k holds the s^k coefficient of every p_i.
/// Signs follow the Laplace expansion along the top block, so that for
/// any W = [F1 F2] with Pluecker vector f,
///     sum_i f_i p_i(s) = det [[F1, F2], [-sH-B, sE+A]]
/// holds with constant factor exactly 1; in particular W = [I | F]
/// reproduces det(s(E+HF) + (A+BF)).
template <class K>
struct MinorSystem {
    int m = 0, n = 0;
    Mat<K> P;  // (n+1) rows, C(m+n, m) columns

    int coord_count() const { return P.cols(); }

    /// P . z for a coordinate vector of length N+1.
    std::vector<K> apply(const std::vector<K>& z) const {
        if (static_cast<int>(z.size()) != P.cols())
            throw std::invalid_argument("MinorSystem::apply: length mismatch");
        std::vector<K> w(P.rows(), K(0));
        for (int k = 0; k < P.rows(); ++k)
            for (int j = 0; j < P.cols(); ++j) w[k] += P(k, j) * z[j];
        return w;
    }
};

template <class K>
MinorSystem<K> minor_polys(const MatrixPencil<K>& pencil) {
    const int n = pencil.n, m = pencil.m;
    PolyMatrix<K> M(n, m + n, 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            MultiPoly<K> entry(1);
            entry.add_term({1}, K(-pencil.H(i, j)));
            entry.add_term({0}, K(-pencil.B(i, j)));
            M.set(i, j, std::move(entry));
        }
        for (int j = 0; j < n; ++j) {
            MultiPoly<K> entry(1);
            entry.add_term({1}, pencil.E(i, j));
            entry.add_term({0}, pencil.A(i, j));
            M.set(i, m + j, std::move(entry));
        }
    }
    LeadingMinorTable<K> table(M);
    auto all_subsets = subsets_lex(m + n, m);
    MinorSystem<K> ms;
    ms.m = m;
    ms.n = n;
    ms.P = Mat<K>(n + 1, static_cast<int>(all_subsets.size()));
    std::vector<int> complement;
    for (std::size_t idx = 0; idx < all_subsets.size(); ++idx) {
        const auto& J = all_subsets[idx];
        complement.clear();
        std::size_t p = 0;
        for (int c = 0; c < m + n; ++c) {
            if (p < J.size() && J[p] == c) {
                ++p;
                continue;
            }
            complement.push_back(c);
        }
        const MultiPoly<K>& minor = table.minor_of(complement);
        const int sign = laplace_sign(J);
        for (const auto& [e, c] : minor.terms())
            ms.P(static_cast<int>(e[0]), static_cast<int>(idx)) = (sign > 0) ? c : K(-c);
    }
    return ms;
}

/// Value of the characteristic map at a Pluecker point: the projective
/// coefficient vector P . f, or the base-locus marker when that product
/// vanishes (the point lies in the center and the map is undefined).
template <class K>
struct CharMapValue {
    bool base_locus = false;
    std::vector<K> coeffs;  // length n+1 when not base locus
};

template <class K>
CharMapValue<K> char_map_eval(const MinorSystem<K>& ms, const PluckerVector<K>& pv) {
    if (static_cast<int>(pv.entries.size()) != ms.coord_count())
        throw std::invalid_argument("char_map_eval: coordinate count mismatch");
    std::vector<K> w = ms.apply(pv.entries);
    bool zero;
    if constexpr (scalar_traits<K>::is_exact) {
        zero = true;
        for (const auto& v : w)
            if (!scalar_traits<K>::is_zero(v)) zero = false;
    } else {
        double scale = 0.0, top = 0.0;
        double pmax = 0.0, fmax = 0.0;
        for (int k = 0; k < ms.P.rows(); ++k)
            for (int j = 0; j < ms.P.cols(); ++j) pmax = std::max(pmax, std::abs(ms.P(k, j)));
        for (const auto& v : pv.entries) fmax = std::max(fmax, std::abs(v));
        scale = pmax * fmax * static_cast<double>(ms.coord_count());
        for (const auto& v : w) top = std::max(top, std::abs(v));
        zero = top <= kComplexZeroEps * std::max(scale, 1e-300);
    }
    CharMapValue<K> out;
    if (zero) {
        out.base_locus = true;
        return out;
    }
    out.coeffs = std::move(w);
    return out;
}

/// The square polynomial system whose roots are the pole-placing
/// feedbacks: equation k is c_k(z) - phi_k * c_n(z) for k = 0..n-1,
/// where c_k are the s-coefficients of det(s(E+HF(z)) + (A+BF(z))) and
/// F(z) = sum z_j L_j.  Every equation has total degree at most n; the
/// continuation solver tracks the structural bound n per equation.
template <class K>
struct CoefficientSystem {
    int n = 0;                                // variables z_1..z_n
    std::vector<MultiPoly<K>> equations;      // n polynomials in n variables
    MultiPoly<K> leading_coeff;               // c_n(z)
    std::vector<MultiPoly<K>> charpoly_coeffs;  // c_0..c_n

    CoefficientSystem() : leading_coeff(0) {}

    std::vector<int> path_degrees() const { return std::vector<int>(n, n); }
};

template <class K>
CoefficientSystem<K> coefficient_system(const MatrixPencil<K>& pencil,
                                        const FeedbackSubspace& subspace,
                                        const MonicTarget<K>& target) {
    const int n = pencil.n, m = pencil.m;
    if (subspace.m != m || subspace.n != n)
        throw std::invalid_argument("coefficient_system: subspace shape does not match pencil");
    if (subspace.d != n)
        throw std::invalid_argument("coefficient_system: need dim L = n for a square system");
    if (target.degree() != n)
        throw std::invalid_argument("coefficient_system: target degree must equal n");

    // ring K[s, z_1..z_n]; variable 0 is s
    const int nv = 1 + n;
    std::vector<Mat<K>> HL, BL;
    HL.reserve(n);
    BL.reserve(n);
    for (int k = 0; k < n; ++k) {
        Mat<K> Lk(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) Lk(i, j) = scalar_from_rational<K>(subspace.basis[k](i, j));
        HL.push_back(pencil.H * Lk);
        BL.push_back(pencil.B * Lk);
    }

    PolyMatrix<K> M(n, n, nv);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            MultiPoly<K> entry(nv);
            ExponentVec e(nv, 0);
            e[0] = 1;
            entry.add_term(e, pencil.E(i, j));  // s * E
            e[0] = 0;
            entry.add_term(e, pencil.A(i, j));
            for (int k = 0; k < n; ++k) {
                ExponentVec ez(nv, 0);
                ez[0] = 1;
                ez[1 + k] = 1;
                entry.add_term(ez, HL[k](i, j));  // s * z_k * (H L_k)
                ez[0] = 0;
                entry.add_term(ez, BL[k](i, j));  // z_k * (B L_k)
            }
            M.set(i, j, std::move(entry));
        }

    MultiPoly<K> det = determinant(M);
    std::vector<MultiPoly<K>> cs = coeffs_in_var(det, 0);
    CoefficientSystem<K> sys;
    sys.n = n;
    sys.charpoly_coeffs.assign(n + 1, MultiPoly<K>(n));
    for (int k = 0; k < static_cast<int>(cs.size()) && k <= n; ++k)
        sys.charpoly_coeffs[k] = drop_var(cs[k], 0);
    sys.leading_coeff = sys.charpoly_coeffs[n];
    for (int k = 0; k < n; ++k)
        sys.equations.push_back(sys.charpoly_coeffs[k] - sys.leading_coeff * target.phi[k]);
    return sys;
}

inline CoefficientSystem<Complex> to_complex(const CoefficientSystem<Rational>& sys) {
    CoefficientSystem<Complex> out;
    out.n = sys.n;
    for (const auto& e : sys.equations) out.equations.push_back(convert_poly<Complex>(e));
    out.leading_coeff = convert_poly<Complex>(sys.leading_coeff);
    for (const auto& c : sys.charpoly_coeffs) out.charpoly_coeffs.push_back(convert_poly<Complex>(c));
    return out;
}

}  // namespace poleplace

#endif
