#ifndef POLEPLACE_EXPERIMENT_HPP
#define POLEPLACE_EXPERIMENT_HPP

#include "poleplace/schubert.hpp"
#include "poleplace/solver.hpp"

#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace poleplace {

/// Instance families for the counting experiments.
///
/// - Generic:        random n-dimensional subspace of Mat_{n x n},
///                   random pencil, random target
/// - Diagonal:       diagonal gains, E = I, H = 0, B = I, random A
/// - OutputFeedback: gains K C with K in Mat_{m x p}, n = m p
/// - BandToeplitz:   the three-parameter banded 3x3 subspace whose
///                   closure satisfies the quadratic coordinate
///                   relations checked in the pencil tests
/// - CyclicBand:     the 3x3 band subspace with a wrapped corner entry,
///                   the worked instance of the generic degree count
enum class Family { Generic, Diagonal, OutputFeedback, BandToeplitz, CyclicBand };

struct FamilySpec {
    Family family = Family::Generic;
    int n = 0;         // Generic, Diagonal
    int m = 0, p = 0;  // OutputFeedback

    std::string name() const {
        std::ostringstream os;
        switch (family) {
            case Family::Generic: os << "generic-subspace(" << n << ")"; break;
            case Family::Diagonal: os << "diagonal(" << n << ")"; break;
            case Family::OutputFeedback: os << "output-feedback(" << m << "," << p << ")"; break;
            case Family::BandToeplitz: os << "band-toeplitz-3x3"; break;
            case Family::CyclicBand: os << "cyclic-band-3x3"; break;
        }
        return os.str();
    }

    int state_dim() const {
        switch (family) {
            case Family::Generic:
            case Family::Diagonal: return n;
            case Family::OutputFeedback: return m * p;
            case Family::BandToeplitz:
            case Family::CyclicBand: return 3;
        }
        return 0;
    }

    /// Closed-form solution count where one exists.
    std::optional<BigInt> predicted_count() const {
        switch (family) {
            case Family::Generic: return generic_degree(n).degree;
            case Family::Diagonal: {
                std::vector<FilledType> blocks(n, FilledType({1}, 1));
                return product_degree(BlockDecomposition(std::move(blocks)));
            }
            case Family::OutputFeedback: return grassmannian_degree(m, p);
            case Family::BandToeplitz: return std::nullopt;  // no closed form known here
            case Family::CyclicBand: return generic_degree(3).degree;
        }
        return std::nullopt;
    }
};

struct ProblemInstance {
    MatrixPencil<Rational> pencil;
    FeedbackSubspace subspace;
    MonicTarget<Rational> target;
};

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (salt + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Small random rationals: numerators uniform in [-99, 99], denominators
/// in [1, 9].  Heights stay small so exact preprocessing is cheap while
/// the draws remain generic with overwhelming probability.
inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-99, 99);
    std::uniform_int_distribution<int> den(1, 9);
    return Rational(num(rng)) / Rational(den(rng));
}

inline Mat<Rational> random_rational_matrix(std::mt19937_64& rng, int rows, int cols) {
    Mat<Rational> M(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) M(i, j) = random_rational(rng);
    return M;
}

inline MonicTarget<Rational> random_monic_target(std::mt19937_64& rng, int n) {
    std::vector<Rational> phi;
    for (int k = 0; k < n; ++k) phi.push_back(random_rational(rng));
    return MonicTarget<Rational>(std::move(phi));
}

namespace detail {

inline FeedbackSubspace band_toeplitz_subspace() {
    Mat<Rational> La(3, 3), Lb(3, 3), Lc(3, 3);
    La(0, 0) = La(1, 1) = La(2, 2) = 1;
    Lb(0, 1) = Lb(1, 2) = 1;
    Lc(1, 0) = Lc(2, 1) = 1;
    return FeedbackSubspace({La, Lb, Lc});
}

inline FeedbackSubspace cyclic_band_subspace() {
    Mat<Rational> L1(3, 3), L2(3, 3), L3(3, 3);
    L1(0, 0) = L1(1, 1) = L1(2, 2) = 1;
    L2(0, 1) = L2(1, 2) = 1;
    L3(0, 2) = L3(2, 0) = 1;
    return FeedbackSubspace({L1, L2, L3});
}

inline FeedbackSubspace diagonal_subspace(int n) {
    std::vector<Mat<Rational>> basis;
    for (int i = 0; i < n; ++i) {
        Mat<Rational> L(n, n);
        L(i, i) = 1;
        basis.push_back(std::move(L));
    }
    return FeedbackSubspace(std::move(basis));
}

}  // namespace detail

/// Draws one seeded instance of a family.  Identical seeds give
/// identical instances.
inline ProblemInstance draw_instance(const FamilySpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    switch (spec.family) {
        case Family::Generic: {
            const int n = spec.n;
            if (n < 1) throw std::invalid_argument("draw_instance: generic family needs n >= 1");
            MatrixPencil<Rational> pencil(random_rational_matrix(rng, n, n),
                                          random_rational_matrix(rng, n, n),
                                          random_rational_matrix(rng, n, n),
                                          random_rational_matrix(rng, n, n));
            while (true) {
                std::vector<Mat<Rational>> basis;
                for (int k = 0; k < n; ++k) basis.push_back(random_rational_matrix(rng, n, n));
                try {
                    FeedbackSubspace sub(std::move(basis));
                    return {pencil, std::move(sub), random_monic_target(rng, n)};
                } catch (const std::invalid_argument&) {
                    // dependent basis draw; redo
                }
            }
        }
        case Family::Diagonal: {
            const int n = spec.n;
            if (n < 1) throw std::invalid_argument("draw_instance: diagonal family needs n >= 1");
            MatrixPencil<Rational> pencil(Mat<Rational>::identity(n),
                                          random_rational_matrix(rng, n, n),
                                          Mat<Rational>::zero(n, n), Mat<Rational>::identity(n));
            return {pencil, detail::diagonal_subspace(n), random_monic_target(rng, n)};
        }
        case Family::OutputFeedback: {
            const int m = spec.m, p = spec.p, n = m * p;
            if (m < 1 || p < 1)
                throw std::invalid_argument("draw_instance: output feedback needs m, p >= 1");
            Mat<Rational> C(p, n);
            do {
                C = random_rational_matrix(rng, p, n);
            } while (rank(C) < p);
            std::vector<Mat<Rational>> basis;
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < p; ++l) {
                    Mat<Rational> K(m, p);
                    K(k, l) = 1;
                    basis.push_back(K * C);
                }
            MatrixPencil<Rational> pencil(Mat<Rational>::identity(n),
                                          random_rational_matrix(rng, n, n),
                                          Mat<Rational>::zero(n, m),
                                          random_rational_matrix(rng, n, m));
            return {pencil, FeedbackSubspace(std::move(basis)), random_monic_target(rng, n)};
        }
        case Family::BandToeplitz: {
            MatrixPencil<Rational> pencil(random_rational_matrix(rng, 3, 3),
                                          random_rational_matrix(rng, 3, 3),
                                          random_rational_matrix(rng, 3, 3),
                                          random_rational_matrix(rng, 3, 3));
            return {pencil, detail::band_toeplitz_subspace(), random_monic_target(rng, 3)};
        }
        case Family::CyclicBand: {
            MatrixPencil<Rational> pencil(random_rational_matrix(rng, 3, 3),
                                          random_rational_matrix(rng, 3, 3),
                                          random_rational_matrix(rng, 3, 3),
                                          random_rational_matrix(rng, 3, 3));
            return {pencil, detail::cyclic_band_subspace(), random_monic_target(rng, 3)};
        }
    }
    throw std::logic_error("draw_instance: unknown family");
}

struct TrialRecord {
    std::uint64_t seed = 0;
    int finite = 0;      // with multiplicity
    int real_roots = 0;  // with multiplicity
    int diverged = 0;    // includes failed paths
    int base_locus = 0;
    int failed = 0;
    int verified = 0;  // feedbacks passing closed-loop verification
};

struct CountTable {
    FamilySpec spec;
    std::uint64_t base_seed = 0;
    std::vector<TrialRecord> rows;
    int modal_finite = 0;
    std::optional<BigInt> predicted;

    bool matches_prediction() const {
        return predicted.has_value() && BigInt(modal_finite) == *predicted;
    }
};

/// Runs seeded trials of a family, solving each instance and recording
/// the classified path counts; the modal finite count is what the
/// degree formulas predict for nondegenerate draws.
inline CountTable count_experiment(const FamilySpec& spec, int trials, const SolverConfig& cfg) {
    if (trials < 1) throw std::invalid_argument("count_experiment: need at least one trial");
    CountTable table;
    table.spec = spec;
    table.base_seed = cfg.seed;
    table.predicted = spec.predicted_count();
    std::map<int, int> histogram;
    for (int i = 0; i < trials; ++i) {
        TrialRecord rec;
        rec.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(i));
        auto inst = draw_instance(spec, rec.seed);
        SolverConfig run_cfg = cfg;
        run_cfg.seed = mix_seed(rec.seed, 0xF00D);
        auto placed = place_poles(inst.pencil, inst.subspace, inst.target, run_cfg);
        const auto& sol = placed.solution;
        rec.finite = sol.finite_with_multiplicity();
        rec.real_roots = sol.real_count(cfg.cluster_tol);
        rec.diverged = sol.diverged_count;
        rec.base_locus = sol.base_locus_count;
        rec.failed = sol.failed_count;
        for (const auto& fb : placed.feedbacks) rec.verified += fb.multiplicity;
        histogram[rec.finite] += 1;
        table.rows.push_back(rec);
    }
    int best = -1, best_hits = 0;
    for (const auto& [count, hits] : histogram)
        if (hits > best_hits) {
            best = count;
            best_hits = hits;
        }
    table.modal_finite = best;
    return table;
}

inline std::string count_table_csv(const CountTable& table) {
    std::ostringstream os;
    os << "trial,seed,finite,real,diverged,base_locus,failed,verified\n";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        os << i << ',' << r.seed << ',' << r.finite << ',' << r.real_roots << ',' << r.diverged
           << ',' << r.base_locus << ',' << r.failed << ',' << r.verified << '\n';
    }
    return os.str();
}

}  // namespace poleplace

#endif
