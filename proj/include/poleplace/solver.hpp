#ifndef POLEPLACE_SOLVER_HPP
#define POLEPLACE_SOLVER_HPP

#include "poleplace/pencil.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

namespace poleplace {

struct SolverConfig {
    std::uint64_t seed = 0;
    double step_min = 1e-7;
    double step_max = 0.05;
    double newton_tol = 1e-10;
    double diverge_threshold = 1e8;
    double cluster_tol = 1e-6;
    int max_steps = 10000;
    int max_newton_iters = 5;
    int threads = 0;  // 0 = pick from hardware; results are identical either way

    void validate() const {
        if (step_min <= 0 || step_max < step_min) throw std::invalid_argument("SolverConfig: bad step bounds");
        if (newton_tol <= 0 || diverge_threshold <= 0 || cluster_tol <= 0)
            throw std::invalid_argument("SolverConfig: tolerances must be positive");
        if (max_steps < 1 || max_newton_iters < 1) throw std::invalid_argument("SolverConfig: bad iteration limits");
    }
};

/// 53-bit uniform in [0,1) straight from the generator output, so the
/// stream is identical across standard libraries.
inline double uniform01(std::uint64_t raw) {
    return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

inline std::uint64_t split_mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// The random unit gamma of the start-system homotopy, derived from the
/// seed; nudged away from the real axis where the trick degenerates.
inline Complex gamma_from_seed(std::uint64_t seed) {
    double theta = 2.0 * std::numbers::pi * uniform01(split_mix(seed));
    if (std::abs(std::sin(theta)) < 0.05) theta += 0.3;
    return Complex(std::cos(theta), std::sin(theta));
}

enum class PathStatus { Finite, BaseLocus, Diverged, Failed };

inline const char* to_string(PathStatus s) {
    switch (s) {
        case PathStatus::Finite: return "finite";
        case PathStatus::BaseLocus: return "base-locus";
        case PathStatus::Diverged: return "diverged";
        case PathStatus::Failed: return "failed";
    }
    return "?";
}

struct PathOutcome {
    PathStatus status = PathStatus::Failed;
    std::vector<Complex> endpoint;  // affine coordinates when meaningful
    double residual = 0.0;
    double t_reached = 0.0;
    int steps = 0;
};

struct Root {
    std::vector<Complex> z;
    double residual = 0.0;
    int multiplicity = 0;
    std::vector<int> path_indices;

    bool is_real(double tol) const {
        for (const auto& c : z)
            if (std::abs(c.imag()) > tol) return false;
        return true;
    }
};

/// Endpoint bookkeeping for one continuation run.  Every tracked path
/// lands in exactly one bucket, so
///   finite (with multiplicity) + diverged + base-locus = Bezout total;
/// paths that fail outright (max-steps, early step underflow) are
/// counted under diverged for that accounting and reported separately in
/// failed_count and in the per-path log.
struct SolutionSet {
    int bezout_total = 0;
    Complex gamma;
    int gamma_restarts = 0;
    std::vector<Root> finite_roots;
    int diverged_count = 0;
    int base_locus_count = 0;
    int failed_count = 0;  // subset of diverged_count
    std::vector<PathOutcome> path_log;

    int finite_with_multiplicity() const {
        int s = 0;
        for (const auto& r : finite_roots) s += r.multiplicity;
        return s;
    }
    int real_count(double tol) const {
        int s = 0;
        for (const auto& r : finite_roots)
            if (r.is_real(tol)) s += r.multiplicity;
        return s;
    }
    bool accounting_ok() const {
        return finite_with_multiplicity() + diverged_count + base_locus_count == bezout_total;
    }
};

namespace detail {

struct CompiledTerm {
    Complex c;
    ExponentVec e;
};

struct CompiledPoly {
    std::vector<CompiledTerm> terms;

    Complex eval(const std::vector<std::vector<Complex>>& powers) const {
        Complex acc(0.0, 0.0);
        for (const auto& t : terms) {
            Complex v = t.c;
            for (std::size_t j = 0; j < t.e.size(); ++j)
                if (t.e[j] > 0) v *= powers[j][t.e[j]];
            acc += v;
        }
        return acc;
    }
};

inline double max_coeff(const MultiPoly<Complex>& p) {
    double s = 0.0;
    for (const auto& [e, c] : p.terms()) s = std::max(s, std::abs(c));
    return s;
}

inline CompiledPoly compile(const MultiPoly<Complex>& p, double scale = 1.0) {
    CompiledPoly out;
    for (const auto& [e, c] : p.terms()) out.terms.push_back({c * scale, e});
    return out;
}

inline double inf_norm(const std::vector<Complex>& z) {
    double m = 0.0;
    for (const auto& c : z) m = std::max(m, std::abs(c));
    return m;
}

/// The square target system together with its homogenized form on a
/// random projective patch.  Tracking runs in the patched homogeneous
/// coordinates (w, z_1, ..., z_n) where solutions at infinity are
/// ordinary endpoints with w = 0 instead of blowups, which keeps arcs
/// bounded and endpoints separated; everything is normalized to unit
/// max coefficient so tolerances are scale-free.
class TrackedSystem {
   public:
    TrackedSystem(const std::vector<MultiPoly<Complex>>& eqs, std::vector<int> degrees,
                  std::uint64_t patch_seed)
        : n_(static_cast<int>(eqs.size())), degrees_(std::move(degrees)) {
        max_exp_ = 1;
        for (int i = 0; i < n_; ++i) {
            if (eqs[i].nvars() != n_)
                throw std::invalid_argument("solver: equation count must match variable count");
            if (eqs[i].is_zero())
                throw std::runtime_error("solver: system contains an identically zero equation");
            if (eqs[i].degree() > degrees_[i])
                throw std::invalid_argument("solver: declared path degree below actual degree");
            if (degrees_[i] < 1) throw std::invalid_argument("solver: path degrees must be positive");
            const double scale = 1.0 / max_coeff(eqs[i]);
            affine_.push_back(compile(eqs[i], scale));
            for (int j = 0; j < n_; ++j) affine_jac_.push_back(compile(eqs[i].derivative(j), scale));
            MultiPoly<Complex> form = homogenize(eqs[i], 0, degrees_[i]);
            forms_.push_back(compile(form, scale));
            for (int j = 0; j <= n_; ++j) forms_jac_.push_back(compile(form.derivative(j), scale));
            max_exp_ = std::max(max_exp_, degrees_[i]);
            for (const auto& [e, c] : eqs[i].terms())
                for (unsigned x : e) max_exp_ = std::max(max_exp_, static_cast<int>(x));
        }
        reseed_patch(patch_seed);
    }

    void reseed_patch(std::uint64_t patch_seed) {
        patch_.assign(n_ + 1, Complex(0, 0));
        for (int j = 0; j <= n_; ++j) {
            double theta = 2.0 * std::numbers::pi *
                           uniform01(split_mix(patch_seed ^ (0xC2B2AE3D27D4EB4FULL * (j + 1))));
            patch_[j] = Complex(std::cos(theta), std::sin(theta));
        }
    }

    int n() const { return n_; }
    const std::vector<int>& degrees() const { return degrees_; }
    const std::vector<Complex>& patch() const { return patch_; }
    long total_paths() const {
        long t = 1;
        for (int d : degrees_) t *= d;
        return t;
    }

    std::vector<std::vector<Complex>> make_affine_powers() const {
        return std::vector<std::vector<Complex>>(n_, std::vector<Complex>(max_exp_ + 1));
    }
    std::vector<std::vector<Complex>> make_proj_powers() const {
        return std::vector<std::vector<Complex>>(n_ + 1, std::vector<Complex>(max_exp_ + 1));
    }

    void fill_powers(const std::vector<Complex>& z, std::vector<std::vector<Complex>>& powers) const {
        for (std::size_t v = 0; v < z.size(); ++v) {
            powers[v][0] = Complex(1.0, 0.0);
            for (int k = 1; k <= max_exp_; ++k) powers[v][k] = powers[v][k - 1] * z[v];
        }
    }

    /// Homogeneous homotopy residual and Jacobian on the patch:
    /// rows 0..n-1 are (1-t) gamma G_i + t F_i with the start forms
    /// G_i = z_i^{d_i} - w^{d_i}; row n is the patch <p, zhat> - 1.
    void eval_homotopy(const std::vector<Complex>& zh, double t, Complex gamma,
                       std::vector<std::vector<Complex>>& powers, std::vector<Complex>& H,
                       Mat<Complex>& J) const {
        fill_powers(zh, powers);
        const Complex a = gamma * (1.0 - t);
        for (int i = 0; i < n_; ++i) {
            const int d = degrees_[i];
            Complex fi = forms_[i].eval(powers);
            Complex gi = powers[i + 1][d] - powers[0][d];
            H[i] = a * gi + t * fi;
            for (int j = 0; j <= n_; ++j) J(i, j) = t * forms_jac_[i * (n_ + 1) + j].eval(powers);
            J(i, i + 1) += a * static_cast<double>(d) * powers[i + 1][d - 1];
            J(i, 0) -= a * static_cast<double>(d) * powers[0][d - 1];
        }
        Complex dot(0, 0);
        for (int j = 0; j <= n_; ++j) {
            dot += patch_[j] * zh[j];
            J(n_, j) = patch_[j];
        }
        H[n_] = dot - Complex(1.0, 0.0);
    }

    /// dz/dt from the Davidenko equation J dz = -(F - gamma G), patch row 0.
    std::vector<Complex> tangent(const std::vector<Complex>& zh, double t, Complex gamma,
                                 std::vector<std::vector<Complex>>& powers) const {
        std::vector<Complex> H(n_ + 1), rhs(n_ + 1);
        Mat<Complex> J(n_ + 1, n_ + 1);
        eval_homotopy(zh, t, gamma, powers, H, J);
        fill_powers(zh, powers);
        for (int i = 0; i < n_; ++i) {
            const int d = degrees_[i];
            Complex fi = forms_[i].eval(powers);
            Complex gi = powers[i + 1][d] - powers[0][d];
            rhs[i] = -(fi - gamma * gi);
        }
        rhs[n_] = Complex(0, 0);
        return solve_linear(J, rhs);
    }

    /// Newton on the homogeneous target-plus-patch system.
    bool polish_projective(std::vector<Complex>& zh, std::vector<std::vector<Complex>>& powers,
                           int iters) const {
        std::vector<Complex> rhs(n_ + 1);
        Mat<Complex> J(n_ + 1, n_ + 1);
        bool moved_little = false;
        for (int it = 0; it < iters; ++it) {
            fill_powers(zh, powers);
            for (int i = 0; i < n_; ++i) {
                rhs[i] = -forms_[i].eval(powers);
                for (int j = 0; j <= n_; ++j) J(i, j) = forms_jac_[i * (n_ + 1) + j].eval(powers);
            }
            Complex dot(0, 0);
            for (int j = 0; j <= n_; ++j) {
                dot += patch_[j] * zh[j];
                J(n_, j) = patch_[j];
            }
            rhs[n_] = -(dot - Complex(1.0, 0.0));
            std::vector<Complex> dz;
            try {
                dz = solve_linear(J, rhs);
            } catch (const std::runtime_error&) {
                return moved_little;
            }
            double step = 0.0;
            for (int j = 0; j <= n_; ++j) {
                zh[j] += dz[j];
                step = std::max(step, std::abs(dz[j]));
            }
            if (step <= 1e-14 * (1.0 + inf_norm(zh))) {
                moved_little = true;
                break;
            }
        }
        return moved_little;
    }

    double affine_residual(const std::vector<Complex>& z,
                           std::vector<std::vector<Complex>>& powers) const {
        fill_powers(z, powers);
        double r = 0.0;
        for (int i = 0; i < n_; ++i) r = std::max(r, std::abs(affine_[i].eval(powers)));
        return r;
    }

    /// Newton iteration on the affine target system (final cleanup of a
    /// finite endpoint; genuine endpoints move microscopically).
    void polish_affine(std::vector<Complex>& z, std::vector<std::vector<Complex>>& powers,
                       int iters) const {
        std::vector<Complex> rhs(n_);
        Mat<Complex> J(n_, n_);
        std::vector<Complex> best = z;
        double best_res = affine_residual(z, powers);
        for (int it = 0; it < iters; ++it) {
            fill_powers(z, powers);
            for (int i = 0; i < n_; ++i) {
                rhs[i] = -affine_[i].eval(powers);
                for (int j = 0; j < n_; ++j) J(i, j) = affine_jac_[i * n_ + j].eval(powers);
            }
            std::vector<Complex> dz;
            try {
                dz = solve_linear(J, rhs);
            } catch (const std::runtime_error&) {
                break;
            }
            double step = 0.0;
            for (int i = 0; i < n_; ++i) {
                z[i] += dz[i];
                step = std::max(step, std::abs(dz[i]));
            }
            double res = affine_residual(z, powers);
            if (res < best_res) {
                best_res = res;
                best = z;
            }
            if (step <= 1e-15 * (1.0 + inf_norm(z))) break;
        }
        z = best;
    }

    /// Infinity-norm condition estimate of the affine Jacobian; huge
    /// values flag a genuinely singular (multiple) root.
    double jacobian_condition(const std::vector<Complex>& z,
                              std::vector<std::vector<Complex>>& powers) const {
        fill_powers(z, powers);
        Mat<Complex> J(n_, n_);
        double jnorm = 0.0;
        for (int i = 0; i < n_; ++i) {
            double row = 0.0;
            for (int j = 0; j < n_; ++j) {
                J(i, j) = affine_jac_[i * n_ + j].eval(powers);
                row += std::abs(J(i, j));
            }
            jnorm = std::max(jnorm, row);
        }
        std::vector<double> inv_rows(n_, 0.0);
        try {
            for (int k = 0; k < n_; ++k) {
                std::vector<Complex> e(n_, Complex(0, 0));
                e[k] = Complex(1, 0);
                auto col = solve_linear(J, e);
                for (int i = 0; i < n_; ++i) inv_rows[i] += std::abs(col[i]);
            }
        } catch (const std::runtime_error&) {
            return std::numeric_limits<double>::infinity();
        }
        double inorm = 0.0;
        for (double r : inv_rows) inorm = std::max(inorm, r);
        return jnorm * inorm;
    }

   private:
    int n_;
    std::vector<int> degrees_;
    std::vector<CompiledPoly> affine_, affine_jac_;
    std::vector<CompiledPoly> forms_, forms_jac_;
    std::vector<Complex> patch_;
    int max_exp_ = 1;
};

}  // namespace detail

/// Start points of the total-degree homotopy: the exact roots-of-unity
/// grid of the start system z_i^{d_i} = 1, enumerated in mixed-radix
/// order of the path index.
inline std::vector<std::vector<Complex>> start_points(const std::vector<int>& degrees) {
    long total = 1;
    for (int d : degrees) {
        if (d < 1) throw std::invalid_argument("start_points: degrees must be positive");
        total *= d;
    }
    const int n = static_cast<int>(degrees.size());
    std::vector<std::vector<Complex>> pts;
    pts.reserve(total);
    for (long p = 0; p < total; ++p) {
        std::vector<Complex> z(n);
        long rem = p;
        for (int i = 0; i < n; ++i) {
            long digit = rem % degrees[i];
            rem /= degrees[i];
            double ang = 2.0 * std::numbers::pi * static_cast<double>(digit) / degrees[i];
            z[i] = Complex(std::cos(ang), std::sin(ang));
        }
        pts.push_back(std::move(z));
    }
    return pts;
}

/// Classifier hook: given a converged finite endpoint and the residual
/// scale (1+|z|)^n, decide whether it lies over the center (all
/// closed-loop coefficients vanishing) rather than being a solution.
using BaseLocusFilter = std::function<bool(const std::vector<Complex>&, double)>;

/// Tracks every total-degree path of the square system `eqs` with
/// per-equation degrees `degrees` and classifies the endpoints.  If
/// `is_base_locus` is given, finite endpoints it accepts are counted
/// as base-locus points rather than roots.
inline SolutionSet track_total_degree(const std::vector<MultiPoly<Complex>>& eqs,
                                      const std::vector<int>& degrees, const SolverConfig& cfg,
                                      const BaseLocusFilter& is_base_locus = {}) {
    cfg.validate();
    if (eqs.empty() || eqs.size() != degrees.size())
        throw std::invalid_argument("track_total_degree: bad system shape");
    if (eqs.size() > 5) throw std::invalid_argument("track_total_degree: more than 5 variables");

    detail::TrackedSystem sys(eqs, degrees, cfg.seed);
    const int n = sys.n();
    Complex gamma = gamma_from_seed(cfg.seed);
    auto affine_starts = start_points(degrees);
    const long total = static_cast<long>(affine_starts.size());

    // start points lifted to the patch: zhat = (1, omega) / <p, (1, omega)>;
    // if the patch is nearly orthogonal to a start ray, redraw it
    std::vector<std::vector<Complex>> starts;
    auto lift_starts = [&](std::uint64_t patch_seed) {
        for (int salt = 0;; ++salt) {
            sys.reseed_patch(patch_seed ^ (0x9E3779B97F4A7C15ULL * salt));
            starts.assign(total, {});
            bool ok = true;
            for (long p = 0; p < total && ok; ++p) {
                std::vector<Complex> zh(n + 1);
                zh[0] = Complex(1, 0);
                for (int i = 0; i < n; ++i) zh[i + 1] = affine_starts[p][i];
                Complex dot(0, 0);
                for (int j = 0; j <= n; ++j) dot += sys.patch()[j] * zh[j];
                if (std::abs(dot) < 0.05) {
                    ok = false;
                    break;
                }
                for (int j = 0; j <= n; ++j) zh[j] /= dot;
                starts[p] = std::move(zh);
            }
            if (ok) return;
        }
    };
    lift_starts(cfg.seed);

    SolutionSet out;
    out.bezout_total = static_cast<int>(total);
    out.path_log.assign(total, PathOutcome{});

    auto track_one = [&](long pidx, double step_cap) {
        PathOutcome result;
        auto powers = sys.make_proj_powers();
        auto apow = sys.make_affine_powers();
        std::vector<Complex> zh = starts[pidx];
        std::vector<Complex> H(n + 1);
        Mat<Complex> J(n + 1, n + 1);
        double t = 0.0, dt = step_cap;
        int steps = 0, streak = 0;
        bool failed_early = false;

        while (1.0 - t > 1e-14) {
            if (++steps > cfg.max_steps) {
                failed_early = true;
                break;
            }
            // approach t = 1 geometrically: endpoints separate cleanly on
            // the patch but arcs still bunch together just below t = 1
            dt = std::min(dt, 0.1 * (1.0 - t) + 1e-15);
            bool ok = true;
            int iters_used = 0;
            std::vector<Complex> znext = zh;
            try {
                // fourth-order Runge-Kutta predictor on the Davidenko field
                auto k1 = sys.tangent(zh, t, gamma, powers);
                std::vector<Complex> tmp(n + 1);
                for (int i = 0; i <= n; ++i) tmp[i] = zh[i] + 0.5 * dt * k1[i];
                auto k2 = sys.tangent(tmp, t + 0.5 * dt, gamma, powers);
                for (int i = 0; i <= n; ++i) tmp[i] = zh[i] + 0.5 * dt * k2[i];
                auto k3 = sys.tangent(tmp, t + 0.5 * dt, gamma, powers);
                for (int i = 0; i <= n; ++i) tmp[i] = zh[i] + dt * k3[i];
                auto k4 = sys.tangent(tmp, t + dt, gamma, powers);
                for (int i = 0; i <= n; ++i)
                    znext[i] = zh[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                double pred_move = 0.0;
                for (int i = 0; i <= n; ++i)
                    pred_move = std::max(pred_move, std::abs(znext[i] - zh[i]));

                // Newton corrector at t + dt
                ok = false;
                const std::vector<Complex> predicted = znext;
                for (int it = 0; it < cfg.max_newton_iters; ++it) {
                    sys.eval_homotopy(znext, t + dt, gamma, powers, H, J);
                    for (int i = 0; i <= n; ++i) H[i] = -H[i];
                    auto dz = solve_linear(J, H);
                    double step = 0.0;
                    for (int i = 0; i <= n; ++i) {
                        znext[i] += dz[i];
                        step = std::max(step, std::abs(dz[i]));
                    }
                    iters_used = it + 1;
                    if (step <= cfg.newton_tol * (1.0 + detail::inf_norm(znext))) {
                        ok = true;
                        break;
                    }
                }
                // trust region: a correction much larger than the
                // predicted motion means the iterate left its own tube
                // and was caught by a different arc's basin
                if (ok) {
                    double corr = 0.0;
                    for (int i = 0; i <= n; ++i)
                        corr = std::max(corr, std::abs(znext[i] - predicted[i]));
                    double allowance = std::max(
                        2.0 * pred_move, 100.0 * cfg.newton_tol * (1.0 + detail::inf_norm(znext)));
                    if (corr > allowance) ok = false;
                }
            } catch (const std::runtime_error&) {
                ok = false;  // singular Jacobian along the way
            }

            if (ok) {
                zh = std::move(znext);
                t += dt;
                // speed up only while corrections come easily; a hard
                // correction means the tube is tight, so back off even
                // though the step succeeded
                if (iters_used >= 4) {
                    dt = std::max(0.5 * dt, cfg.step_min);
                    streak = 0;
                } else if (iters_used <= 2 && ++streak >= 5) {
                    dt = std::min(1.5 * dt, step_cap);
                    streak = 0;
                }
            } else {
                streak = 0;
                dt *= 0.5;
                double floor = std::max(cfg.step_min * (1.0 - t), 4e-16);
                if (dt < floor) {
                    if (t > 0.9) break;  // deep enough for endpoint analysis
                    failed_early = true;
                    break;
                }
            }
        }

        result.steps = steps;
        result.t_reached = t;
        if (failed_early) {
            result.status = PathStatus::Failed;
            result.endpoint = zh;
            out.path_log[pidx] = std::move(result);
            return;
        }

        // settle on the homogeneous solution, then classify by the patch
        // coordinate: w ~ 0 is a solution at infinity
        sys.polish_projective(zh, powers, 30);
        double wmag = std::abs(zh[0]);
        double zmag = detail::inf_norm(zh);
        if (!(zmag > 0.0) || !std::isfinite(zmag)) {
            result.status = PathStatus::Failed;
            result.endpoint = zh;
            out.path_log[pidx] = std::move(result);
            return;
        }
        if (wmag <= 1e-8 * zmag) {
            result.status = PathStatus::Diverged;
            result.endpoint = zh;  // homogeneous representative of the infinite endpoint
            out.path_log[pidx] = std::move(result);
            return;
        }

        std::vector<Complex> z(n);
        for (int i = 0; i < n; ++i) z[i] = zh[i + 1] / zh[0];
        const std::vector<Complex> pre_polish = z;
        sys.polish_affine(z, apow, 30);
        double polish_move = 0.0;
        for (int i = 0; i < n; ++i)
            polish_move = std::max(polish_move, std::abs(z[i] - pre_polish[i]));
        double res = sys.affine_residual(z, apow);
        double zn = detail::inf_norm(z);
        double scale = std::pow(1.0 + zn, n);
        result.residual = res;
        result.endpoint = z;
        bool in_place = polish_move <= 1e-5 * (1.0 + detail::inf_norm(pre_polish));
        if (in_place && zn <= cfg.diverge_threshold && std::isfinite(zn) &&
            res < cfg.newton_tol * scale) {
            result.status = PathStatus::Finite;
            if (is_base_locus && is_base_locus(z, scale)) result.status = PathStatus::BaseLocus;
        } else {
            result.status = PathStatus::Diverged;
        }
        out.path_log[pidx] = std::move(result);
    };

    auto run_paths = [&](const std::vector<long>& indices, double step_cap) {
        int threads = cfg.threads > 0 ? cfg.threads
                                      : static_cast<int>(std::min<unsigned>(
                                            std::max(1u, std::thread::hardware_concurrency()), 8));
        if (threads <= 1 || static_cast<long>(indices.size()) < 8) {
            for (long p : indices) track_one(p, step_cap);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (int w = 0; w < threads; ++w)
                pool.emplace_back([&] {
                    std::size_t i;
                    while ((i = next.fetch_add(1)) < indices.size()) track_one(indices[i], step_cap);
                });
            for (auto& th : pool) th.join();
        }
    };

    // cluster the finite endpoints; multiplicity = cluster cardinality
    auto cluster_finite = [&]() {
        out.finite_roots.clear();
        std::vector<long> finite_idx;
        for (long p = 0; p < total; ++p)
            if (out.path_log[p].status == PathStatus::Finite) finite_idx.push_back(p);
        std::vector<int> parent(finite_idx.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
        std::function<int(int)> find = [&](int a) {
            return parent[a] == a ? a : parent[a] = find(parent[a]);
        };
        for (std::size_t i = 0; i < finite_idx.size(); ++i)
            for (std::size_t j = i + 1; j < finite_idx.size(); ++j) {
                const auto& zi = out.path_log[finite_idx[i]].endpoint;
                const auto& zj = out.path_log[finite_idx[j]].endpoint;
                double dist = 0.0, scale = 1.0;
                for (int v = 0; v < n; ++v) {
                    dist = std::max(dist, std::abs(zi[v] - zj[v]));
                    scale = std::max({scale, std::abs(zi[v]), std::abs(zj[v])});
                }
                if (dist <= cfg.cluster_tol * scale)
                    parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
            }
        std::map<int, Root> clusters;
        for (std::size_t i = 0; i < finite_idx.size(); ++i) {
            int rep = find(static_cast<int>(i));
            auto& root = clusters[rep];
            const auto& log = out.path_log[finite_idx[i]];
            if (root.multiplicity == 0 || log.residual < root.residual) {
                root.z = log.endpoint;
                root.residual = log.residual;
            }
            root.multiplicity += 1;
            root.path_indices.push_back(static_cast<int>(finite_idx[i]));
        }
        for (auto& [rep, root] : clusters) {
            std::sort(root.path_indices.begin(), root.path_indices.end());
            out.finite_roots.push_back(std::move(root));
        }
        std::sort(out.finite_roots.begin(), out.finite_roots.end(), [](const Root& a, const Root& b) {
            return a.path_indices.front() < b.path_indices.front();
        });
    };

    // a cluster with several members is either a genuine multiple root
    // or a pair of paths that crossed tubes at a coarse step; re-track
    // the members with tighter steps until the picture stabilizes
    auto refine_duplicates = [&]() {
        for (int round = 0; round < 2; ++round) {
            std::vector<long> suspects;
            for (const auto& root : out.finite_roots)
                if (root.multiplicity > 1)
                    for (int p : root.path_indices) suspects.push_back(p);
            if (suspects.empty()) break;
            double cap = cfg.step_max / std::pow(8.0, round + 1);
            if (cap < cfg.step_min) break;
            run_paths(suspects, cap);
            cluster_finite();
        }
    };

    // an exact homotopy arc structure puts exactly one arc on every
    // nonsingular root, so a multi-path cluster whose Jacobian is well
    // conditioned means two arcs were confused somewhere; a fresh gamma
    // and patch redraw the whole arc geometry and resolve it
    auto has_bogus_multiplicity = [&]() {
        auto apow = sys.make_affine_powers();
        for (const auto& root : out.finite_roots)
            if (root.multiplicity > 1 && sys.jacobian_condition(root.z, apow) < 1e10) return true;
        return false;
    };

    std::vector<long> all(total);
    for (long p = 0; p < total; ++p) all[p] = p;
    run_paths(all, cfg.step_max);
    cluster_finite();
    refine_duplicates();
    for (int restart = 1; restart <= 3 && has_bogus_multiplicity(); ++restart) {
        std::uint64_t salt = cfg.seed ^ (0xA24BAED4963EE407ULL * static_cast<std::uint64_t>(restart));
        gamma = gamma_from_seed(salt);
        lift_starts(salt);
        out.gamma_restarts = restart;
        run_paths(all, cfg.step_max);
        cluster_finite();
        refine_duplicates();
    }
    out.gamma = gamma;

    for (long p = 0; p < total; ++p) {
        switch (out.path_log[p].status) {
            case PathStatus::Finite: break;
            case PathStatus::BaseLocus: ++out.base_locus_count; break;
            case PathStatus::Diverged: ++out.diverged_count; break;
            case PathStatus::Failed:
                ++out.failed_count;
                ++out.diverged_count;
                break;
        }
    }
    return out;
}

inline constexpr double kPlacementVerifyTol = 1e-8;

/// Roots of the pole-placement coefficient system.  An endpoint lies
/// over the center exactly when the whole closed-loop polynomial
/// vanishes there, so the filter asks for a nearly-zero leading
/// coefficient AND failure of the monic verification: a genuine
/// solution whose c_n merely happens to be small still normalizes to
/// the target within the verification tolerance, while at a center
/// point the ratios c_k / c_n are pure noise.
inline SolutionSet solve_system(const CoefficientSystem<Complex>& sys, const SolverConfig& cfg) {
    const double cn_norm = std::max(detail::max_coeff(sys.leading_coeff), 1e-300);
    BaseLocusFilter filter = [&sys, cn_norm, &cfg](const std::vector<Complex>& z, double scale) {
        Complex cn = sys.leading_coeff.eval(z);
        if (std::abs(cn) >= cfg.newton_tol * scale * cn_norm) return false;
        double worst = 0.0;
        for (const auto& eq : sys.equations) worst = std::max(worst, std::abs(eq.eval(z)));
        return !(std::abs(cn) > 0.0 && worst / std::abs(cn) < kPlacementVerifyTol);
    };
    return track_total_degree(sys.equations, sys.path_degrees(), cfg, filter);
}

/// A feedback recovered from one finite root, together with the
/// coefficient-wise verification of the closed loop it produces.
struct PlacedFeedback {
    std::vector<Complex> z;
    Mat<Complex> F;
    double max_coeff_error = 0.0;
    bool verified = false;
    int multiplicity = 1;
};

struct PlacementResult {
    std::vector<PlacedFeedback> feedbacks;   // verified against the target
    std::vector<PlacedFeedback> unverified;  // kept for diagnosis, never merged
    SolutionSet solution;
};

/// Solves the placement problem and maps every finite root back to a
/// gain matrix, verifying each one by recomputing the closed-loop
/// polynomial and comparing monic coefficients against the target.
inline PlacementResult place_poles(const MatrixPencil<Rational>& pencil,
                                   const FeedbackSubspace& subspace,
                                   const MonicTarget<Rational>& target, const SolverConfig& cfg) {
    auto sysQ = coefficient_system(pencil, subspace, target);
    auto sysC = to_complex(sysQ);
    PlacementResult out;
    out.solution = solve_system(sysC, cfg);

    auto pencilC = to_complex(pencil);
    auto targetC = to_complex(target);
    const int n = pencil.n;
    for (const auto& root : out.solution.finite_roots) {
        PlacedFeedback fb;
        fb.z = root.z;
        fb.multiplicity = root.multiplicity;
        fb.F = subspace.combination(root.z);
        auto c = closed_loop_charpoly(pencilC, fb.F);
        double err = 0.0;
        if (std::abs(c[n]) < 1e-300) {
            err = std::numeric_limits<double>::infinity();
        } else {
            for (int k = 0; k < n; ++k) err = std::max(err, std::abs(c[k] / c[n] - targetC.phi[k]));
        }
        fb.max_coeff_error = err;
        fb.verified = err < kPlacementVerifyTol;
        (fb.verified ? out.feedbacks : out.unverified).push_back(std::move(fb));
    }
    return out;
}

}  // namespace poleplace

#endif
