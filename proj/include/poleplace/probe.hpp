#ifndef POLEPLACE_PROBE_HPP
#define POLEPLACE_PROBE_HPP

#include "poleplace/solver.hpp"

#include <string>
#include <vector>

namespace poleplace {

struct ProbeConfig {
    SolverConfig solver;
    double witness_tol = 1e-7;   // acceptance threshold when substituting a candidate back
    double artifact_tol = 1e-6;  // membership test for the indeterminacy locus
};

/// Outcome of the degeneracy search.  A witness is a projective point
/// (z_0 : ... : z_n), max-normalized, at which every homogenized
/// coefficient polynomial vanishes to witness_tol and which does not lie
/// on the indeterminacy locus of the coordinate map.  The verdict
/// without a witness is "probably nondegenerate": points hiding on the
/// blow-up's exceptional locus are not modeled, and the chart solves are
/// numerical.
struct ProbeResult {
    bool degenerate = false;
    std::vector<Complex> witness;  // length n+1 when degenerate
    int chart = -1;
    double max_residual = 0.0;
    int charts_searched = 0;
    long candidates_tested = 0;
};

namespace detail {

inline Complex probe_rand_unit(std::uint64_t seed, int salt) {
    std::uint64_t x = seed ^ (0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(salt + 7));
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    x ^= x >> 31;
    double theta = 2.0 * std::numbers::pi * uniform01(x);
    return Complex(std::cos(theta), std::sin(theta));
}

/// Largest coefficient magnitude, for relative tolerance scales.
inline double coeff_scale(const MultiPoly<Complex>& p) {
    double s = 0.0;
    for (const auto& [e, c] : p.terms()) s = std::max(s, std::abs(c));
    return std::max(s, 1e-300);
}

}  // namespace detail

/// Searches the projective closure of the gain space for a point where
/// the characteristic map is undefined (all n+1 closed-loop coefficient
/// polynomials vanish).  The coefficients are homogenized with a fresh
/// variable z_0 and the search runs chart by chart: in each affine chart
/// a square subsystem is solved by continuation and the remaining
/// polynomials are tested at its roots.  Candidates on the indeterminacy
/// locus of the coordinate map (z_0 = 0 together with the vanishing of
/// every top-degree coordinate form) are artifacts of the
/// compactification, not witnesses, and are filtered out.  A returned
/// witness is verified by direct substitution; the clean verdict is
/// one-sided.
inline ProbeResult nondegeneracy_probe(const MatrixPencil<Rational>& pencil,
                                       const FeedbackSubspace& subspace,
                                       const ProbeConfig& cfg = {}) {
    const int n = pencil.n, m = pencil.m;
    if (subspace.m != m || subspace.n != n)
        throw std::invalid_argument("nondegeneracy_probe: subspace shape does not match pencil");
    if (subspace.d != n)
        throw std::invalid_argument("nondegeneracy_probe: need dim L = n");

    // closed-loop coefficients c_0..c_n as polynomials in z_1..z_n
    MonicTarget<Rational> dummy(std::vector<Rational>(n, Rational(0)));
    auto sysQ = coefficient_system(pencil, subspace, dummy);

    // homogenized coefficient forms in (z_0, z_1, ..., z_n)
    std::vector<MultiPoly<Complex>> forms;
    for (const auto& cQ : sysQ.charpoly_coeffs) {
        MultiPoly<Rational> h =
            cQ.is_zero() ? MultiPoly<Rational>(n + 1) : homogenize(cQ, 0, n);
        forms.push_back(convert_poly<Complex>(h));
    }

    // top-degree forms of the symbolic coordinate polynomials of
    // [I | F(z)]: at z_0 = 0 the homogenized coordinates all reduce to
    // these, so their common vanishing marks the indeterminacy locus
    std::vector<MultiPoly<Complex>> top_forms;
    {
        PolyMatrix<Rational> W(m, m + n, n);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                W.set(i, j, i == j ? MultiPoly<Rational>::constant(n, Rational(1))
                                   : MultiPoly<Rational>(n));
            for (int j = 0; j < n; ++j) {
                MultiPoly<Rational> entry(n);
                for (int k = 0; k < n; ++k) {
                    ExponentVec e(n, 0);
                    e[k] = 1;
                    entry.add_term(std::move(e), subspace.basis[k](i, j));
                }
                W.set(i, m + j, std::move(entry));
            }
        }
        LeadingMinorTable<Rational> table(W);
        for (const auto& J : subsets_lex(m + n, m)) {
            auto top = table.minor_of(J).homogeneous_part(n);
            if (!top.is_zero()) top_forms.push_back(convert_poly<Complex>(top));
        }
    }

    ProbeResult out;

    auto artifact = [&](const std::vector<Complex>& proj) {
        // proj is max-normalized; z_0 is slot 0
        if (std::abs(proj[0]) > cfg.artifact_tol) return false;
        std::vector<Complex> z(proj.begin() + 1, proj.end());
        for (const auto& tf : top_forms)
            if (std::abs(tf.eval(z)) > cfg.artifact_tol * detail::coeff_scale(tf)) return false;
        return true;
    };

    for (int chart = 0; chart <= n && !out.degenerate; ++chart) {
        ++out.charts_searched;
        // restrict every form to the chart z_chart = 1
        std::vector<MultiPoly<Complex>> restricted;
        bool impossible = false;
        for (const auto& f : forms) {
            auto r = drop_var(f.substitute(chart, Complex(1.0, 0.0)), chart);
            if (r.degree() == 0) {  // nonzero constant never vanishes here
                impossible = true;
                break;
            }
            restricted.push_back(std::move(r));
        }
        if (impossible) continue;

        std::vector<int> live;  // indices with a nonzero restriction
        for (int k = 0; k <= n; ++k)
            if (!restricted[k].is_zero()) live.push_back(k);

        std::vector<MultiPoly<Complex>> square;
        std::vector<int> degrees;
        std::vector<int> leftover;
        for (int k : live) {
            if (static_cast<int>(square.size()) < n) {
                square.push_back(restricted[k]);
                degrees.push_back(std::max(restricted[k].degree(), 1));
            } else {
                leftover.push_back(k);
            }
        }
        // fill an underdetermined chart with random affine slices to
        // sample the positive-dimensional solution set
        int salt = 0;
        while (static_cast<int>(square.size()) < n) {
            MultiPoly<Complex> slice(n);
            for (int v = 0; v < n; ++v) {
                ExponentVec e(n, 0);
                e[v] = 1;
                slice.add_term(std::move(e), detail::probe_rand_unit(cfg.solver.seed, salt * 31 + v));
            }
            slice.add_term(ExponentVec(n, 0), detail::probe_rand_unit(cfg.solver.seed, salt * 31 + n));
            square.push_back(std::move(slice));
            degrees.push_back(1);
            ++salt;
        }

        SolverConfig chart_cfg = cfg.solver;
        chart_cfg.seed = cfg.solver.seed ^ (0x5851F42D4C957F2DULL + static_cast<std::uint64_t>(chart));
        auto sol = track_total_degree(square, degrees, chart_cfg);

        // a square subsystem whose equations are dependent (every path
        // fails on a singular Jacobian) hides a positive-dimensional
        // zero set; sample it instead with one equation plus slices
        if (sol.finite_roots.empty() && sol.failed_count > 0 && n >= 2) {
            std::vector<MultiPoly<Complex>> sampled;
            std::vector<int> sampled_deg;
            sampled.push_back(restricted[live.front()]);
            sampled_deg.push_back(std::max(restricted[live.front()].degree(), 1));
            for (int s = 1; s < n; ++s) {
                MultiPoly<Complex> slice(n);
                for (int v = 0; v < n; ++v) {
                    ExponentVec e(n, 0);
                    e[v] = 1;
                    slice.add_term(std::move(e),
                                   detail::probe_rand_unit(cfg.solver.seed, 977 + s * 31 + v));
                }
                slice.add_term(ExponentVec(n, 0),
                               detail::probe_rand_unit(cfg.solver.seed, 977 + s * 31 + n));
                sampled.push_back(std::move(slice));
                sampled_deg.push_back(1);
            }
            leftover = live;
            leftover.erase(leftover.begin());
            sol = track_total_degree(sampled, sampled_deg, chart_cfg);
        }

        for (const auto& root : sol.finite_roots) {
            ++out.candidates_tested;
            double zn = detail::inf_norm(root.z);
            double scale = std::pow(1.0 + zn, n);
            bool all_vanish = true;
            for (int k : leftover) {
                if (std::abs(restricted[k].eval(root.z)) >
                    cfg.witness_tol * scale * detail::coeff_scale(restricted[k])) {
                    all_vanish = false;
                    break;
                }
            }
            if (!all_vanish) continue;

            // assemble the projective point and normalize to max 1
            std::vector<Complex> proj;
            proj.reserve(n + 1);
            int at = 0;
            for (int v = 0; v <= n; ++v) {
                if (v == chart)
                    proj.push_back(Complex(1.0, 0.0));
                else
                    proj.push_back(root.z[at++]);
            }
            double top = 0.0;
            for (const auto& c : proj) top = std::max(top, std::abs(c));
            for (auto& c : proj) c /= top;

            if (artifact(proj)) continue;

            // verify by substitution into every homogenized form
            double worst = 0.0;
            for (const auto& f : forms) {
                if (f.is_zero()) continue;
                double v = std::abs(f.eval(proj)) / detail::coeff_scale(f);
                worst = std::max(worst, v);
            }
            if (worst <= cfg.witness_tol) {
                out.degenerate = true;
                out.witness = proj;
                out.chart = chart;
                out.max_residual = worst;
                break;
            }
        }
    }
    return out;
}

}  // namespace poleplace

#endif
