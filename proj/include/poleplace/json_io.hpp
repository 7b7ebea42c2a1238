#ifndef POLEPLACE_JSON_IO_HPP
#define POLEPLACE_JSON_IO_HPP

#include "poleplace/experiment.hpp"
#include "poleplace/probe.hpp"
#include "poleplace/solver.hpp"

#include <json.hpp>

#include <cmath>
#include <string>

namespace poleplace {

using nlohmann::json;

/// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double d) {
    if (!std::isfinite(d)) throw std::invalid_argument("rational_from_double: non-finite value");
    if (d == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(d, &exp);
    long long mant = static_cast<long long>(std::ldexp(m, 53));
    int e2 = exp - 53;
    Rational r(mant);
    if (e2 > 0)
        r *= Rational(BigInt(1) << e2);
    else if (e2 < 0)
        r /= Rational(BigInt(1) << -e2);
    return r;
}

/// Scalars arrive either as JSON numbers or as "p/q" strings.
inline Rational rational_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return rational_from_double(j.get<double>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(where + ": " + e.what());
        }
    }
    throw std::invalid_argument(where + ": expected a number or a rational string");
}

inline Mat<Rational> matrix_from_json(const json& j, int rows, int cols, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw std::invalid_argument(where + ": expected " + std::to_string(rows) + " rows");
    Mat<Rational> M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw std::invalid_argument(where + "[" + std::to_string(i) + "]: expected " +
                                        std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c)
            M(i, c) = rational_from_json(row[c],
                                         where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
    }
    return M;
}

inline const json& require_field(const json& j, const std::string& name, const std::string& where) {
    auto it = j.find(name);
    if (it == j.end()) throw std::invalid_argument(where + ": missing field '" + name + "'");
    return *it;
}

/// Parses the problem schema
///   {"m":…, "n":…, "E":[[…]], "A":…, "H":…, "B":…,
///    "subspace":[[[…]]], "target":[…]}
/// with scalars as "p/q" strings or numbers.
inline ProblemInstance problem_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("problem: expected a JSON object");
    int m = require_field(j, "m", "problem").get<int>();
    int n = require_field(j, "n", "problem").get<int>();
    if (m < 1 || n < 1) throw std::invalid_argument("problem: m and n must be positive");
    Mat<Rational> E = matrix_from_json(require_field(j, "E", "problem"), n, n, "problem.E");
    Mat<Rational> A = matrix_from_json(require_field(j, "A", "problem"), n, n, "problem.A");
    Mat<Rational> H = matrix_from_json(require_field(j, "H", "problem"), n, m, "problem.H");
    Mat<Rational> B = matrix_from_json(require_field(j, "B", "problem"), n, m, "problem.B");
    const json& sub = require_field(j, "subspace", "problem");
    if (!sub.is_array() || sub.empty())
        throw std::invalid_argument("problem.subspace: expected a non-empty array of matrices");
    std::vector<Mat<Rational>> basis;
    for (std::size_t k = 0; k < sub.size(); ++k)
        basis.push_back(
            matrix_from_json(sub[k], m, n, "problem.subspace[" + std::to_string(k) + "]"));
    const json& tgt = require_field(j, "target", "problem");
    if (!tgt.is_array() || static_cast<int>(tgt.size()) != n)
        throw std::invalid_argument("problem.target: expected " + std::to_string(n) +
                                    " coefficients");
    std::vector<Rational> phi;
    for (int k = 0; k < n; ++k)
        phi.push_back(rational_from_json(tgt[k], "problem.target[" + std::to_string(k) + "]"));
    FeedbackSubspace subspace(std::move(basis));
    if (subspace.m != m || subspace.n != n)
        throw std::invalid_argument("problem.subspace: matrix shape does not match m, n");
    return ProblemInstance{MatrixPencil<Rational>(std::move(E), std::move(A), std::move(H), std::move(B)),
                           std::move(subspace), MonicTarget<Rational>(std::move(phi))};
}

inline json matrix_to_json(const Mat<Rational>& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int c = 0; c < M.cols(); ++c) row.push_back(scalar_traits<Rational>::to_string(M(i, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json problem_to_json(const ProblemInstance& inst) {
    json j;
    j["m"] = inst.pencil.m;
    j["n"] = inst.pencil.n;
    j["E"] = matrix_to_json(inst.pencil.E);
    j["A"] = matrix_to_json(inst.pencil.A);
    j["H"] = matrix_to_json(inst.pencil.H);
    j["B"] = matrix_to_json(inst.pencil.B);
    json basis = json::array();
    for (const auto& L : inst.subspace.basis) basis.push_back(matrix_to_json(L));
    j["subspace"] = std::move(basis);
    json tgt = json::array();
    for (const auto& c : inst.target.phi) tgt.push_back(scalar_traits<Rational>::to_string(c));
    j["target"] = std::move(tgt);
    return j;
}

inline json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

inline json config_to_json(const SolverConfig& cfg) {
    json j;
    j["seed"] = cfg.seed;
    j["step_min"] = cfg.step_min;
    j["step_max"] = cfg.step_max;
    j["newton_tol"] = cfg.newton_tol;
    j["diverge_threshold"] = cfg.diverge_threshold;
    j["cluster_tol"] = cfg.cluster_tol;
    j["max_steps"] = cfg.max_steps;
    j["max_newton_iters"] = cfg.max_newton_iters;
    j["threads"] = cfg.threads;
    return j;
}

inline json solution_to_json(const SolutionSet& sol, const PlacementResult* placed,
                             const SolverConfig& cfg) {
    json j;
    j["meta"] = {{"seed", cfg.seed}, {"config", config_to_json(cfg)}};
    j["paths"] = {{"total", sol.bezout_total},
                  {"finite", sol.finite_with_multiplicity()},
                  {"diverged", sol.diverged_count},
                  {"base_locus", sol.base_locus_count},
                  {"failed", sol.failed_count},
                  {"gamma", complex_to_json(sol.gamma)},
                  {"gamma_restarts", sol.gamma_restarts},
                  {"real", sol.real_count(cfg.cluster_tol)}};
    json roots = json::array();
    for (const auto& r : sol.finite_roots) {
        json z = json::array();
        for (const auto& c : r.z) z.push_back(complex_to_json(c));
        roots.push_back({{"z", std::move(z)},
                         {"residual", r.residual},
                         {"multiplicity", r.multiplicity},
                         {"paths", r.path_indices},
                         {"class", "finite"}});
    }
    j["roots"] = std::move(roots);
    json log = json::array();
    for (const auto& p : sol.path_log)
        log.push_back({{"status", to_string(p.status)}, {"steps", p.steps}, {"t", p.t_reached}});
    j["path_log"] = std::move(log);
    if (placed != nullptr) {
        auto feedback_json = [](const PlacedFeedback& fb) {
            json F = json::array();
            for (int i = 0; i < fb.F.rows(); ++i) {
                json row = json::array();
                for (int c = 0; c < fb.F.cols(); ++c) row.push_back(complex_to_json(fb.F(i, c)));
                F.push_back(std::move(row));
            }
            json z = json::array();
            for (const auto& c : fb.z) z.push_back(complex_to_json(c));
            return json{{"F", std::move(F)},
                        {"z", std::move(z)},
                        {"max_coeff_error", fb.max_coeff_error},
                        {"verified", fb.verified},
                        {"multiplicity", fb.multiplicity}};
        };
        json fbs = json::array();
        for (const auto& fb : placed->feedbacks) fbs.push_back(feedback_json(fb));
        j["feedbacks"] = std::move(fbs);
        json unv = json::array();
        for (const auto& fb : placed->unverified) unv.push_back(feedback_json(fb));
        j["unverified"] = std::move(unv);
    }
    return j;
}

inline json count_table_to_json(const CountTable& table, const SolverConfig& cfg) {
    json j;
    j["meta"] = {{"seed", table.base_seed}, {"config", config_to_json(cfg)}};
    j["family"] = table.spec.name();
    j["trials"] = table.rows.size();
    j["modal_finite"] = table.modal_finite;
    if (table.predicted.has_value()) {
        j["predicted"] = table.predicted->str();
        j["match"] = table.matches_prediction();
    } else {
        j["predicted"] = nullptr;
    }
    json rows = json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        rows.push_back({{"trial", i},
                        {"seed", r.seed},
                        {"finite", r.finite},
                        {"real", r.real_roots},
                        {"diverged", r.diverged},
                        {"base_locus", r.base_locus},
                        {"failed", r.failed},
                        {"verified", r.verified}});
    }
    j["rows"] = std::move(rows);
    return j;
}

inline json probe_to_json(const ProbeResult& verdict, const SolverConfig& cfg) {
    json j;
    j["meta"] = {{"seed", cfg.seed}, {"config", config_to_json(cfg)}};
    j["degenerate"] = verdict.degenerate;
    j["charts_searched"] = verdict.charts_searched;
    j["candidates_tested"] = verdict.candidates_tested;
    if (verdict.degenerate) {
        json w = json::array();
        for (const auto& c : verdict.witness) w.push_back(complex_to_json(c));
        j["witness"] = std::move(w);
        j["chart"] = verdict.chart;
        j["max_residual"] = verdict.max_residual;
        j["verdict"] = "degenerate-witness";
    } else {
        j["verdict"] = "probably-nondegenerate";
    }
    return j;
}

}  // namespace poleplace

#endif
