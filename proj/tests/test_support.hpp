#ifndef POLEPLACE_TEST_SUPPORT_HPP
#define POLEPLACE_TEST_SUPPORT_HPP

#include "poleplace/matrix.hpp"
#include "poleplace/multipoly.hpp"
#include "poleplace/pencil.hpp"

#include <random>

namespace testsupport {

using poleplace::Complex;
using poleplace::Mat;
using poleplace::MultiPoly;
using poleplace::Rational;

/// Small random rationals, numerators in [-99, 99], denominators in [1, 9].
inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-99, 99);
    std::uniform_int_distribution<int> den(1, 9);
    return Rational(num(rng)) / Rational(den(rng));
}

inline Mat<Rational> random_matrix(std::mt19937_64& rng, int rows, int cols) {
    Mat<Rational> M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = random_rational(rng);
    return M;
}

inline Mat<Rational> random_invertible(std::mt19937_64& rng, int n) {
    while (true) {
        Mat<Rational> M = random_matrix(rng, n, n);
        if (poleplace::rank(M) == n) return M;
    }
}

/// Random sparse polynomial of total degree <= max_deg.
inline MultiPoly<Rational> random_poly(std::mt19937_64& rng, int nvars, int max_deg, int terms) {
    MultiPoly<Rational> p(nvars);
    std::uniform_int_distribution<int> exp(0, max_deg);
    for (int t = 0; t < terms; ++t) {
        poleplace::ExponentVec e(nvars, 0);
        int budget = max_deg;
        for (int v = 0; v < nvars; ++v) {
            int x = std::uniform_int_distribution<int>(0, budget)(rng);
            e[v] = static_cast<unsigned>(x);
            budget -= x;
        }
        p.add_term(std::move(e), random_rational(rng));
    }
    return p;
}

/// Division-based Gaussian elimination determinant: the independent
/// oracle for the expansion-based polynomial determinant.
inline Rational lu_det(Mat<Rational> M) {
    const int n = M.rows();
    if (M.cols() != n) throw std::invalid_argument("lu_det: not square");
    Rational det(1);
    for (int c = 0; c < n; ++c) {
        int pivot = -1;
        for (int i = c; i < n; ++i)
            if (!M(i, c).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0) return Rational(0);
        if (pivot != c) {
            for (int j = 0; j < n; ++j) std::swap(M(c, j), M(pivot, j));
            det = -det;
        }
        det *= M(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (M(i, c).is_zero()) continue;
            Rational f = M(i, c) / M(c, c);
            for (int j = c; j < n; ++j) M(i, j) -= f * M(c, j);
        }
    }
    return det;
}

inline poleplace::MatrixPencil<Rational> random_pencil(std::mt19937_64& rng, int n, int m) {
    return poleplace::MatrixPencil<Rational>(random_matrix(rng, n, n), random_matrix(rng, n, n),
                                             random_matrix(rng, n, m), random_matrix(rng, n, m));
}

inline poleplace::FeedbackSubspace random_subspace(std::mt19937_64& rng, int m, int n, int d) {
    while (true) {
        std::vector<Mat<Rational>> basis;
        for (int k = 0; k < d; ++k) basis.push_back(random_matrix(rng, m, n));
        try {
            return poleplace::FeedbackSubspace(std::move(basis));
        } catch (const std::invalid_argument&) {
            // dependent draw; retry
        }
    }
}

inline poleplace::MonicTarget<Rational> random_target(std::mt19937_64& rng, int n) {
    std::vector<Rational> phi;
    for (int k = 0; k < n; ++k) phi.push_back(random_rational(rng));
    return poleplace::MonicTarget<Rational>(std::move(phi));
}

}  // namespace testsupport

#endif
