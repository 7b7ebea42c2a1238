#include "poleplace/schubert.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

using namespace poleplace;
using testsupport::random_matrix;

namespace {

/// Reference decision by explicit search over row and column
/// permutations: is the cell set a prefix staircase in some ordering?
std::optional<std::vector<int>> brute_filled(const FeedbackSubspace& sub) {
    const int m = sub.m, n = sub.n, d = sub.d;
    Mat<Rational> flat(d, m * n);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) flat(k, i * n + j) = sub.basis[k](i, j);
    Mat<Rational> red = rref(flat);
    std::vector<std::pair<int, int>> cells;
    for (int k = 0; k < d; ++k) {
        int nonzero = 0, cell = -1;
        for (int c = 0; c < m * n; ++c)
            if (!red(k, c).is_zero()) {
                ++nonzero;
                cell = c;
            }
        if (nonzero != 1) return std::nullopt;
        cells.push_back({cell / n, cell % n});
    }
    std::vector<int> sigma(m), tau(n);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        std::iota(tau.begin(), tau.end(), 0);
        do {
            std::vector<std::vector<bool>> grid(m, std::vector<bool>(n, false));
            for (auto [i, j] : cells) grid[sigma[i]][tau[j]] = true;
            std::vector<int> mu;
            bool ok = true;
            for (int i = 0; i < m && ok; ++i) {
                int len = 0;
                while (len < n && grid[i][len]) ++len;
                for (int j = len; j < n; ++j)
                    if (grid[i][j]) ok = false;
                if (!mu.empty() && len < mu.back()) ok = false;
                mu.push_back(len);
            }
            if (ok) return mu;
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return std::nullopt;
}

FeedbackSubspace unit_span(int m, int n, const std::vector<std::pair<int, int>>& cells) {
    std::vector<Mat<Rational>> basis;
    for (auto [i, j] : cells) {
        Mat<Rational> E(m, n);
        E(i, j) = 1;
        basis.push_back(E);
    }
    return FeedbackSubspace(std::move(basis));
}

}  // namespace

TEST_CASE("degree of a Schubert variety") {
    CHECK(schubert_degree(SchubertIndex({3, 4}, 2)) == 2);
    CHECK(syt_count(complementary_partition(SchubertIndex({3, 4}, 2))) == 2);

    for (int m = 1; m <= 4; ++m) {
        std::vector<int> point;
        for (int i = 1; i <= m; ++i) point.push_back(i);
        SchubertIndex s(point, 3);
        CHECK(s.dimension() == 0);
        CHECK(schubert_degree(s) == 1);
    }

    // frozen after reconciling against the tableau count
    CHECK(schubert_degree(SchubertIndex({2, 4}, 2)) == 2);
    CHECK(syt_count(complementary_partition(SchubertIndex({2, 4}, 2))) == 2);

    CHECK_THROWS_AS(SchubertIndex({2, 2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(SchubertIndex({0, 1}, 2), std::invalid_argument);
    CHECK_THROWS_AS(SchubertIndex({3, 5}, 2), std::invalid_argument);
}

TEST_CASE("standard Young tableau counts") {
    CHECK(syt_count({2, 2}) == 2);
    CHECK(syt_count({1}) == 1);
    for (int n = 1; n <= 12; ++n) CHECK(syt_count({n}) == 1);
    CHECK(syt_count({}) == 1);
    CHECK(syt_count({3, 2}) == 5);

    CHECK_THROWS_AS(syt_count({7, 6}), std::invalid_argument);   // 13 cells
    CHECK_THROWS_AS(syt_count({1, 2}), std::invalid_argument);   // increasing
    CHECK_THROWS_AS(syt_count({2, 0}), std::invalid_argument);   // zero part
}

TEST_CASE("degree formula agrees with tableau counts over a scan") {
    int checked = 0;
    for (int total = 2; total <= 9; ++total) {
        for (int m = 1; m < total; ++m) {
            int n = total - m;
            for (const auto& cols : subsets_lex(total, m)) {
                std::vector<int> nu;
                for (int c : cols) nu.push_back(c + 1);
                SchubertIndex s(std::move(nu), n);
                if (s.dimension() > 10) continue;
                REQUIRE(schubert_degree(s) == syt_count(complementary_partition(s)));
                ++checked;
            }
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("product degrees") {
    SECTION("independent scalar blocks give n!") {
        for (int n = 1; n <= 6; ++n) {
            std::vector<FilledType> blocks(n, FilledType({1}, 1));
            CHECK(product_degree(BlockDecomposition(blocks)) == factorial(n));
        }
    }

    SECTION("single full block reproduces the Grassmannian degree") {
        for (int m1 = 1; m1 <= 3; ++m1)
            for (int n1 = 1; n1 <= 3; ++n1) {
                FilledType full(std::vector<int>(m1, n1), n1);
                CHECK(product_degree(BlockDecomposition({full})) == grassmannian_degree(m1, n1));
            }
        CHECK(grassmannian_degree(2, 2) == 2);
    }

    SECTION("invalid blocks are rejected") {
        CHECK_THROWS_AS(FilledType({2, 1}, 3), std::invalid_argument);  // decreasing
        CHECK_THROWS_AS(FilledType({1, 4}, 3), std::invalid_argument);  // exceeds n
    }

    SECTION("random decompositions run both routes") {
        std::mt19937_64 rng(61);
        for (int rep = 0; rep < 200; ++rep) {
            int k = std::uniform_int_distribution<int>(1, 3)(rng);
            std::vector<FilledType> blocks;
            int budget = 10;
            for (int l = 0; l < k; ++l) {
                int m = std::uniform_int_distribution<int>(1, 3)(rng);
                int n = std::uniform_int_distribution<int>(1, 3)(rng);
                std::vector<int> mu(m);
                for (int i = 0; i < m; ++i) mu[i] = std::uniform_int_distribution<int>(0, n)(rng);
                std::sort(mu.begin(), mu.end());
                int dim = std::accumulate(mu.begin(), mu.end(), 0);
                if (dim > budget) {
                    std::fill(mu.begin(), mu.end(), 0);
                    dim = 0;
                }
                budget -= dim;
                blocks.push_back(FilledType(std::move(mu), n));
            }
            // the internal cross-route assertion is the point
            CHECK(product_degree(BlockDecomposition(std::move(blocks))) >= 1);
        }
    }

    SECTION("Grassmannian degree is self-dual") {
        for (int m = 1; m <= 5; ++m)
            for (int p = 1; p <= 5; ++p) {
                CHECK(grassmannian_degree(m, p) == grassmannian_degree(p, m));
                std::vector<int> nu;
                for (int i = 1; i <= m; ++i) nu.push_back(p + i);
                CHECK(grassmannian_degree(m, p) == schubert_degree(SchubertIndex(nu, p)));
            }
    }
}

TEST_CASE("lower-left filled recognition") {
    SECTION("single unit") {
        auto r = lower_left_filled_check(unit_span(1, 3, {{0, 0}}));
        REQUIRE(r.has_value());
        CHECK(r->mu == std::vector<int>{1});
    }

    SECTION("diagonal spans") {
        // 1 x 1 diagonal is trivially filled
        auto r1 = lower_left_filled_check(unit_span(1, 1, {{0, 0}}));
        REQUIRE(r1.has_value());
        CHECK(r1->mu == std::vector<int>{1});
        // for n >= 2 the diagonal cells occupy n distinct columns with one
        // cell each; no row/column permutation stacks them into one
        // column, so the span is not a filled space (its closure is a
        // product of lines, not a Schubert variety)
        CHECK_FALSE(lower_left_filled_check(unit_span(2, 2, {{0, 0}, {1, 1}})).has_value());
        CHECK_FALSE(
            lower_left_filled_check(unit_span(3, 3, {{0, 0}, {1, 1}, {2, 2}})).has_value());
    }

    SECTION("entangled band subspace is not a coordinate span") {
        Mat<Rational> La(3, 3), Lb(3, 3), Lc(3, 3);
        La(0, 0) = La(1, 1) = La(2, 2) = 1;
        Lb(0, 1) = Lb(1, 2) = 1;
        Lc(1, 0) = Lc(2, 1) = 1;
        CHECK_FALSE(lower_left_filled_check(FeedbackSubspace({La, Lb, Lc})).has_value());
    }

    SECTION("recombined bases and permuted staircases are recognized") {
        // span{E11, E21} expressed through an entangled-looking basis
        Mat<Rational> A(2, 2), B(2, 2);
        A(0, 0) = 1;
        A(1, 0) = 1;
        B(1, 0) = 3;
        auto r = lower_left_filled_check(FeedbackSubspace({A, B}));
        REQUIRE(r.has_value());
        CHECK(r->mu == std::vector<int>{1, 1});

        // a staircase placed in shuffled rows/columns
        auto r2 = lower_left_filled_check(
            unit_span(2, 3, {{1, 2}, {0, 2}, {0, 0}}));  // row 0 has {0,2}, row 1 has {2}
        REQUIRE(r2.has_value());
        CHECK(r2->mu == std::vector<int>{1, 2});
    }

    SECTION("agrees with permutation search on random cell sets") {
        std::mt19937_64 rng(67);
        for (int rep = 0; rep < 60; ++rep) {
            int m = std::uniform_int_distribution<int>(1, 3)(rng);
            int n = std::uniform_int_distribution<int>(1, 3)(rng);
            int d = std::uniform_int_distribution<int>(1, m * n)(rng);
            std::vector<int> all(m * n);
            std::iota(all.begin(), all.end(), 0);
            std::shuffle(all.begin(), all.end(), rng);
            std::vector<std::pair<int, int>> cells;
            for (int k = 0; k < d; ++k) cells.push_back({all[k] / n, all[k] % n});
            auto sub = unit_span(m, n, cells);
            auto fast = lower_left_filled_check(sub);
            auto slow = brute_filled(sub);
            REQUIRE(fast.has_value() == slow.has_value());
            if (fast) REQUIRE(fast->mu == *slow);
        }
        // non-coordinate spans agree on rejection too
        for (int rep = 0; rep < 10; ++rep) {
            auto sub = testsupport::random_subspace(rng, 2, 2, 2);
            auto fast = lower_left_filled_check(sub);
            auto slow = brute_filled(sub);
            REQUIRE(fast.has_value() == slow.has_value());
        }
    }
}

TEST_CASE("generic degree and its certificate") {
    CHECK(generic_degree(3).degree == 12);
    CHECK(generic_degree(4).degree == 108);
    CHECK(generic_degree(1).degree == 1);
    CHECK(generic_degree(1).table.empty());

    for (int n = 1; n <= 25; ++n) {
        auto cert = generic_degree(n);  // throws if the identity fails
        CHECK(cert.assembled == cert.degree);
        CHECK(cert.degree == BigInt(n) * int_pow(BigInt(n - 1), n - 1));
    }

    CHECK_THROWS_AS(generic_degree(0), std::invalid_argument);
}

TEST_CASE("intersection number table") {
    auto t3 = intersection_table(3);
    REQUIRE(t3.size() == 4);
    CHECK(t3[0] == 27);
    CHECK(t3[1] == 0);
    CHECK(t3[2] == -9);
    CHECK(t3[3] == -12);

    auto t4 = intersection_table(4);
    REQUIRE(t4.size() == 5);
    CHECK(t4[0] == 256);
    CHECK(t4[1] == 0);
    CHECK(t4[2] == -64);        // -4^3
    CHECK(t4[3] == -80);        // -4^2 * 5
    CHECK(t4[4] == -84);        // -4 (4^2 + 4 + 1)

    // the weighted alternating sum is asserted inside; spot check n = 3, 4
    BigInt s3 = 0, s4 = 0;
    for (int k = 0; k <= 3; ++k) s3 += ((k % 2 == 0) ? 1 : -1) * binomial(3, k) * t3[k];
    for (int k = 0; k <= 4; ++k) s4 += ((k % 2 == 0) ? 1 : -1) * binomial(4, k) * t4[k];
    CHECK(s3 == 12);
    CHECK(s4 == 108);

    for (int n = 2; n <= 25; ++n) CHECK(intersection_table(n).size() == static_cast<std::size_t>(n + 1));
    CHECK_THROWS_AS(intersection_table(1), std::invalid_argument);
}
