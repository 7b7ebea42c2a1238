#ifndef POLEPLACE_MATRIX_HPP
#define POLEPLACE_MATRIX_HPP

#include "poleplace/scalar.hpp"

#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace poleplace {

/// Minimal dense matrix over a scalar field.  The sizes in this project
/// are tiny (n, m <= 10), so no effort is spent on anything clever.
template <class K>
class Mat {
   public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols, K(0)) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative dimensions");
    }
    Mat(int rows, int cols, std::initializer_list<K> vals) : Mat(rows, cols) {
        if (static_cast<int>(vals.size()) != rows * cols)
            throw std::invalid_argument("Mat: initializer size mismatch");
        std::copy(vals.begin(), vals.end(), data_.begin());
    }

    static Mat identity(int n) {
        Mat I(n, n);
        for (int i = 0; i < n; ++i) I(i, i) = K(1);
        return I;
    }
    static Mat zero(int rows, int cols) { return Mat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    K& operator()(int r, int c) { return data_[index(r, c)]; }
    const K& operator()(int r, int c) const { return data_[index(r, c)]; }

    friend Mat operator+(const Mat& a, const Mat& b) {
        a.check_same_shape(b);
        Mat r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
        return r;
    }
    friend Mat operator-(const Mat& a, const Mat& b) {
        a.check_same_shape(b);
        Mat r(a.rows_, a.cols_);
        for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] - b.data_[i];
        return r;
    }
    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Mat: product shape mismatch");
        Mat r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const K& aik = a(i, k);
                if (scalar_traits<K>::is_zero(aik)) continue;
                for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    Mat operator*(const K& c) const {
        Mat r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * c;
        return r;
    }

    bool operator==(const Mat& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
    }

    /// Horizontal concatenation [this | rhs].
    Mat hcat(const Mat& rhs) const {
        if (rows_ != rhs.rows_) throw std::invalid_argument("Mat::hcat: row mismatch");
        Mat r(rows_, cols_ + rhs.cols_);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
            for (int j = 0; j < rhs.cols_; ++j) r(i, cols_ + j) = rhs(i, j);
        }
        return r;
    }

    template <class K2>
    Mat<K2> cast() const {
        Mat<K2> r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(i, j) = static_cast<K2>((*this)(i, j));
        return r;
    }

   private:
    void check_same_shape(const Mat& rhs) const {
        if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
            throw std::invalid_argument("Mat: shape mismatch");
    }
    int index(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("Mat: index out of range");
        return r * cols_ + c;
    }

    int rows_, cols_;
    std::vector<K> data_;
};

inline Mat<Complex> to_complex(const Mat<Rational>& M) {
    Mat<Complex> r(M.rows(), M.cols());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) r(i, j) = scalar_from_rational<Complex>(M(i, j));
    return r;
}

/// Rank by Gauss elimination; exact over the rationals.
inline int rank(Mat<Rational> M) {
    int r = 0;
    for (int c = 0; c < M.cols() && r < M.rows(); ++c) {
        int pivot = -1;
        for (int i = r; i < M.rows(); ++i)
            if (!M(i, c).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        for (int j = 0; j < M.cols(); ++j) std::swap(M(r, j), M(pivot, j));
        for (int i = r + 1; i < M.rows(); ++i) {
            if (M(i, c).is_zero()) continue;
            Rational f = M(i, c) / M(r, c);
            for (int j = c; j < M.cols(); ++j) M(i, j) -= f * M(r, j);
        }
        ++r;
    }
    return r;
}

/// Reduced row echelon form, exact.
inline Mat<Rational> rref(Mat<Rational> M) {
    int r = 0;
    for (int c = 0; c < M.cols() && r < M.rows(); ++c) {
        int pivot = -1;
        for (int i = r; i < M.rows(); ++i)
            if (!M(i, c).is_zero()) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        for (int j = 0; j < M.cols(); ++j) std::swap(M(r, j), M(pivot, j));
        Rational inv = Rational(1) / M(r, c);
        for (int j = 0; j < M.cols(); ++j) M(r, j) *= inv;
        for (int i = 0; i < M.rows(); ++i) {
            if (i == r || M(i, c).is_zero()) continue;
            Rational f = M(i, c);
            for (int j = 0; j < M.cols(); ++j) M(i, j) -= f * M(r, j);
        }
        ++r;
    }
    return M;
}

/// Solves A x = b by partial-pivot LU; A square complex.
inline std::vector<Complex> solve_linear(Mat<Complex> A, std::vector<Complex> b) {
    const int n = A.rows();
    if (A.cols() != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("solve_linear: shape mismatch");
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        double best = std::abs(A(c, c));
        for (int i = c + 1; i < n; ++i) {
            double v = std::abs(A(i, c));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best == 0.0) throw std::runtime_error("solve_linear: singular matrix");
        if (pivot != c) {
            for (int j = 0; j < n; ++j) std::swap(A(c, j), A(pivot, j));
            std::swap(b[c], b[pivot]);
        }
        for (int i = c + 1; i < n; ++i) {
            Complex f = A(i, c) / A(c, c);
            if (f == Complex(0.0, 0.0)) continue;
            for (int j = c; j < n; ++j) A(i, j) -= f * A(c, j);
            b[i] -= f * b[c];
        }
    }
    std::vector<Complex> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Complex acc = b[i];
        for (int j = i + 1; j < n; ++j) acc -= A(i, j) * x[j];
        x[i] = acc / A(i, i);
    }
    return x;
}

}  // namespace poleplace

#endif
