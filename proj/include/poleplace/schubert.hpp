#ifndef POLEPLACE_SCHUBERT_HPP
#define POLEPLACE_SCHUBERT_HPP

#include "poleplace/pencil.hpp"
#include "poleplace/scalar.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace poleplace {

// Everything in this module is exact big-integer arithmetic; the degree
// formulas involve large factorials but no floating point.

inline BigInt factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline BigInt int_pow(BigInt base, int exp) {
    if (exp < 0) throw std::invalid_argument("int_pow: negative exponent");
    BigInt r = 1;
    while (exp-- > 0) r *= base;
    return r;  // 0^0 = 1 by this convention
}

/// Column index set nu_1 < ... < nu_m of a Schubert variety
/// S(nu) in Grass(m, K^(m+n)).
struct SchubertIndex {
    std::vector<int> nu;
    int m = 0, n = 0;

    SchubertIndex(std::vector<int> nu_, int ambient_n) : nu(std::move(nu_)), n(ambient_n) {
        m = static_cast<int>(nu.size());
        if (m < 1 || n < 0) throw std::invalid_argument("SchubertIndex: bad ambient dimensions");
        for (int i = 0; i < m; ++i) {
            if (nu[i] < 1 || nu[i] > m + n)
                throw std::invalid_argument("SchubertIndex: entry out of range");
            if (i > 0 && nu[i] <= nu[i - 1])
                throw std::invalid_argument("SchubertIndex: entries must strictly increase");
        }
    }

    int dimension() const {
        int d = 0;
        for (int i = 0; i < m; ++i) d += nu[i] - (i + 1);
        return d;
    }
};

/// The partition lambda_i = nu_{m+1-i} - (m+1-i) (zero parts dropped)
/// whose standard Young tableaux count the degree of S(nu).
inline std::vector<int> complementary_partition(const SchubertIndex& s) {
    std::vector<int> lambda;
    for (int i = 1; i <= s.m; ++i) {
        int part = s.nu[s.m - i] - (s.m + 1 - i);
        if (part > 0) lambda.push_back(part);
    }
    return lambda;
}

/// deg S(nu) = (sum_i (nu_i - i))! * prod_{j>i} (nu_j - nu_i) / prod_i (nu_i - 1)!
inline BigInt schubert_degree(const SchubertIndex& s) {
    BigInt num = factorial(s.dimension());
    for (int i = 0; i < s.m; ++i)
        for (int j = i + 1; j < s.m; ++j) num *= (s.nu[j] - s.nu[i]);
    BigInt den = 1;
    for (int i = 0; i < s.m; ++i) den *= factorial(s.nu[i] - 1);
    if (num % den != 0) throw std::logic_error("schubert_degree: formula did not divide");
    return num / den;
}

namespace detail {

inline long syt_enumerate(std::vector<int>& fill, const std::vector<int>& lambda, int placed,
                          int total) {
    if (placed == total) return 1;
    long count = 0;
    for (std::size_t r = 0; r < lambda.size(); ++r) {
        if (fill[r] >= lambda[r]) continue;
        if (r > 0 && fill[r - 1] <= fill[r]) continue;  // column would decrease
        ++fill[r];
        count += syt_enumerate(fill, lambda, placed + 1, total);
        --fill[r];
    }
    return count;
}

}  // namespace detail

/// Number of standard Young tableaux of shape lambda, computed by the
/// hook length formula and by exhaustive enumeration; the two must
/// agree.  Capped at 12 cells since the enumeration is the point.
inline BigInt syt_count(const std::vector<int>& lambda) {
    int cells = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] <= 0) throw std::invalid_argument("syt_count: parts must be positive");
        if (i > 0 && lambda[i] > lambda[i - 1])
            throw std::invalid_argument("syt_count: parts must be non-increasing");
        cells += lambda[i];
    }
    if (cells > 12) throw std::invalid_argument("syt_count: partition exceeds 12 cells");
    if (cells == 0) return 1;

    BigInt hooks = 1;
    const int rows = static_cast<int>(lambda.size());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < lambda[i]; ++j) {
            int arm = lambda[i] - j - 1;
            int leg = 0;
            for (int r = i + 1; r < rows; ++r)
                if (lambda[r] > j) ++leg;
            hooks *= (arm + leg + 1);
        }
    BigInt byhook = factorial(cells);
    if (byhook % hooks != 0) throw std::logic_error("syt_count: hook product did not divide");
    byhook /= hooks;

    std::vector<int> fill(lambda.size(), 0);
    long byenum = detail::syt_enumerate(fill, lambda, 0, cells);
    if (BigInt(byenum) != byhook)
        throw std::logic_error("syt_count: hook formula and enumeration disagree");
    return byhook;
}

/// Type mu_1 <= ... <= mu_m of a lower-left filled space in Mat_{m x n}:
/// the span of the matrix units E_{i,j} with j <= mu_i.
struct FilledType {
    std::vector<int> mu;
    int m = 0, n = 0;

    FilledType(std::vector<int> mu_, int cols) : mu(std::move(mu_)), n(cols) {
        m = static_cast<int>(mu.size());
        if (m < 1 || n < 1) throw std::invalid_argument("FilledType: bad shape");
        for (int i = 0; i < m; ++i) {
            if (mu[i] < 0 || mu[i] > n) throw std::invalid_argument("FilledType: entry out of range");
            if (i > 0 && mu[i] < mu[i - 1])
                throw std::invalid_argument("FilledType: entries must be non-decreasing");
        }
    }

    SchubertIndex schubert_index() const {
        std::vector<int> nu;
        for (int i = 0; i < m; ++i) nu.push_back(mu[i] + i + 1);
        return SchubertIndex(std::move(nu), n);
    }

    int dimension() const {
        int d = 0;
        for (int v : mu) d += v;
        return d;
    }
};

/// Block-diagonal decomposition diag(L_1, ..., L_k) of a feedback
/// subspace into lower-left filled blocks.
struct BlockDecomposition {
    std::vector<FilledType> blocks;

    explicit BlockDecomposition(std::vector<FilledType> blocks_) : blocks(std::move(blocks_)) {
        if (blocks.empty()) throw std::invalid_argument("BlockDecomposition: no blocks");
    }

    int total_m() const {
        int t = 0;
        for (const auto& b : blocks) t += b.m;
        return t;
    }
    int total_n() const {
        int t = 0;
        for (const auto& b : blocks) t += b.n;
        return t;
    }
};

struct ProductDegreePaths {
    BigInt combined;        // single factorial/product expression
    BigInt segre_of_hodge;  // per-block degrees composed with the Segre rule
};

/// Degree of the product of the blocks' Schubert varieties in the Segre
/// embedding, computed along both routes.
inline ProductDegreePaths product_degree_paths(const BlockDecomposition& dec) {
    int total = 0;
    BigInt num = 1, den = 1;
    for (const auto& b : dec.blocks) {
        for (int i = 0; i < b.m; ++i) {
            total += b.mu[i];
            den *= factorial(b.mu[i] + i);  // (mu_i + (i+1) - 1)!
            for (int j = i + 1; j < b.m; ++j) num *= (b.mu[j] + j) - (b.mu[i] + i);
        }
    }
    num *= factorial(total);
    if (num % den != 0) throw std::logic_error("product_degree: combined formula did not divide");

    BigInt segre = factorial(total);
    for (const auto& b : dec.blocks) segre /= factorial(b.dimension());
    for (const auto& b : dec.blocks) segre *= schubert_degree(b.schubert_index());

    return {num / den, segre};
}

/// The product degree with the two routes asserted equal.
inline BigInt product_degree(const BlockDecomposition& dec) {
    auto paths = product_degree_paths(dec);
    if (paths.combined != paths.segre_of_hodge)
        throw std::logic_error("product_degree: the two computation routes disagree");
    return paths.combined;
}

/// deg Grass(m1, K^(m1+n1)) = (m1 n1)! 1!2!...(m1-1)! / (n1!...(n1+m1-1)!).
inline BigInt grassmannian_degree(int m1, int n1) {
    if (m1 < 1 || n1 < 1) throw std::invalid_argument("grassmannian_degree: bad shape");
    BigInt num = factorial(m1 * n1);
    for (int i = 1; i < m1; ++i) num *= factorial(i);
    BigInt den = 1;
    for (int i = 0; i < m1; ++i) den *= factorial(n1 + i);
    if (num % den != 0) throw std::logic_error("grassmannian_degree: formula did not divide");
    return num / den;
}

/// Decides whether the subspace is, up to independent row and column
/// permutations, the span of matrix units {E_{i,j} : j <= mu_i}.  The
/// span must be a coordinate subspace (every reduced basis row a matrix
/// unit) and the row supports must form a chain under inclusion --
/// prefixes of a fixed column order are nested, and nested supports can
/// always be ordered into prefixes.  Entangled spans (entries tied
/// across positions) fail the first check.
inline std::optional<FilledType> lower_left_filled_check(const FeedbackSubspace& sub) {
    const int m = sub.m, n = sub.n, d = sub.d;
    Mat<Rational> flat(d, m * n);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) flat(k, i * n + j) = sub.basis[k](i, j);
    Mat<Rational> red = rref(flat);

    std::vector<std::set<int>> support(m);
    for (int k = 0; k < d; ++k) {
        int nonzero = 0, cell = -1;
        for (int c = 0; c < m * n; ++c)
            if (!red(k, c).is_zero()) {
                ++nonzero;
                cell = c;
            }
        if (nonzero != 1) return std::nullopt;  // not a coordinate subspace
        support[cell / n].insert(cell % n);
    }

    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return support[a].size() < support[b].size();
    });
    for (int i = 0; i + 1 < m; ++i) {
        const auto& small = support[order[i]];
        const auto& big = support[order[i + 1]];
        if (!std::includes(big.begin(), big.end(), small.begin(), small.end()))
            return std::nullopt;  // supports do not nest
    }
    std::vector<int> mu;
    for (int i = 0; i < m; ++i) mu.push_back(static_cast<int>(support[order[i]].size()));
    return FilledType(std::move(mu), n);
}

/// Closed-form intersection numbers D^(n-k) . B^k, k = 0..n, for the
/// blow-up that resolves the coordinate map of a generic n-dimensional
/// subspace: n^n, 0, then -n^(n-k+1) (n^(k-2) + ... + n + 1).
inline std::vector<BigInt> intersection_table(int n);

struct GenericDegreeCertificate {
    int n = 0;
    BigInt degree;             // n (n-1)^(n-1)
    BigInt assembled;          // n^n + alternating binomial-weighted sum
    std::vector<BigInt> table; // intersection numbers (empty for n = 1)
};

/// The generic degree n(n-1)^(n-1) together with the exact alternating
/// sum that produces it; the two sides are recomputed independently and
/// a mismatch aborts (it would mean an arithmetic bug, not bad input).
inline GenericDegreeCertificate generic_degree(int n) {
    if (n < 1) throw std::invalid_argument("generic_degree: n must be positive");
    GenericDegreeCertificate cert;
    cert.n = n;
    cert.degree = BigInt(n) * int_pow(BigInt(n - 1), n - 1);  // 0^0 = 1 covers n = 1
    BigInt acc = int_pow(BigInt(n), n);
    for (int k = 2; k <= n; ++k) {
        BigInt geo = 0;
        for (int i = 0; i <= k - 2; ++i) geo += int_pow(BigInt(n), i);
        BigInt term = binomial(n, k) * int_pow(BigInt(n), n - k + 1) * geo;
        acc += (k % 2 == 1) ? term : -term;
    }
    cert.assembled = acc;
    if (cert.assembled != cert.degree)
        throw std::logic_error("generic_degree: alternating-sum identity failed");
    if (n >= 2) cert.table = intersection_table(n);
    return cert;
}

inline std::vector<BigInt> intersection_table(int n) {
    if (n < 2) throw std::invalid_argument("intersection_table: n must be at least 2");
    std::vector<BigInt> table(n + 1);
    table[0] = int_pow(BigInt(n), n);
    table[1] = 0;
    for (int k = 2; k <= n; ++k) {
        BigInt geo = 0;
        for (int i = 0; i <= k - 2; ++i) geo += int_pow(BigInt(n), i);
        table[k] = -int_pow(BigInt(n), n - k + 1) * geo;
    }
    BigInt weighted = 0;
    for (int k = 0; k <= n; ++k) {
        BigInt term = binomial(n, k) * table[k];
        weighted += (k % 2 == 0) ? term : -term;
    }
    if (weighted != BigInt(n) * int_pow(BigInt(n - 1), n - 1))
        throw std::logic_error("intersection_table: weighted sum does not match the degree");
    return table;
}

}  // namespace poleplace

#endif
