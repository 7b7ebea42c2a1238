// Command-line front end: degree formulas, placement solves, counting
// experiments, coordinate dumps, and the degeneracy probe.

#include "poleplace/json_io.hpp"
#include "poleplace/poly_io.hpp"
#include "poleplace/resultant.hpp"
#include "poleplace/schubert.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace poleplace;

struct Options {
    std::uint64_t seed = 0;
    std::string format = "text";  // text | json | csv
    std::string out;
    int trials = 10;
    SolverConfig solver;
};

void emit(const Options& opt, const std::string& text) {
    if (opt.out.empty() || opt.out == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + opt.out + "'");
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit_json(const Options& opt, const json& j) { emit(opt, j.dump(2)); }

json read_json_input(const std::string& path) {
    if (path == "-") {
        json j;
        try {
            std::cin >> j;
        } catch (const json::parse_error& e) {
            throw std::runtime_error(std::string("stdin: ") + e.what());
        }
        return j;
    }
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    try {
        json j;
        f >> j;
        return j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

/// Family tokens: generic, diagonal, output-feedback, band-toeplitz,
/// cyclic-band; the latter two also answer to their legacy instance
/// labels paper-example-2.1 and paper-example-4.2.
FamilySpec parse_family(const std::string& name, const std::vector<int>& args) {
    FamilySpec spec;
    auto need = [&](std::size_t k, const std::string& what) {
        if (args.size() != k)
            throw std::invalid_argument("family '" + name + "' expects " + what);
    };
    if (name == "generic" || name == "generic-subspace") {
        need(1, "one argument: n");
        spec.family = Family::Generic;
        spec.n = args[0];
    } else if (name == "diagonal") {
        need(1, "one argument: n");
        spec.family = Family::Diagonal;
        spec.n = args[0];
    } else if (name == "output-feedback") {
        need(2, "two arguments: m p");
        spec.family = Family::OutputFeedback;
        spec.m = args[0];
        spec.p = args[1];
    } else if (name == "band-toeplitz" || name == "paper-example-2.1") {
        need(0, "no arguments");
        spec.family = Family::BandToeplitz;
    } else if (name == "cyclic-band" || name == "paper-example-4.2") {
        need(0, "no arguments");
        spec.family = Family::CyclicBand;
    } else {
        throw std::invalid_argument("unknown family '" + name + "'");
    }
    return spec;
}

std::vector<int> parse_int_csv(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

// ---------------------------------------------------------------- degree

int cmd_degree(const Options& opt, const std::string& kind, const std::vector<std::string>& args,
               const std::string& blocks_arg) {
    json j;
    std::ostringstream text;
    if (kind == "schubert") {
        if (args.size() != 2)
            throw std::invalid_argument("usage: degree schubert <nu-csv> <ambient-n>");
        SchubertIndex idx(parse_int_csv(args[0]), std::stoi(args[1]));
        BigInt deg = schubert_degree(idx);
        auto lambda = complementary_partition(idx);
        j["kind"] = "schubert";
        j["nu"] = idx.nu;
        j["ambient"] = {{"m", idx.m}, {"n", idx.n}};
        j["dimension"] = idx.dimension();
        j["degree"] = deg.str();
        j["partition"] = lambda;
        text << "Schubert variety S(";
        for (std::size_t i = 0; i < idx.nu.size(); ++i) text << (i ? "," : "") << idx.nu[i];
        text << ") in Grass(" << idx.m << ", K^" << idx.m + idx.n << ")\n";
        text << "  dimension : " << idx.dimension() << "\n";
        text << "  degree    : " << deg.str() << "  (factorial formula)\n";
        int cells = 0;
        for (int part : lambda) cells += part;
        if (cells <= 12) {
            BigInt tableaux = syt_count(lambda);
            j["tableau_count"] = tableaux.str();
            text << "  tableaux  : " << tableaux.str() << "  (hook length + enumeration)\n";
        }
    } else if (kind == "product") {
        std::string spec_text = blocks_arg;
        if (spec_text.empty() && args.size() == 1) spec_text = args[0];
        if (spec_text.empty())
            throw std::invalid_argument(
                "usage: degree product --blocks '[{\"n\":2,\"mu\":[1,2]},...]'");
        json blocks_json = json::parse(spec_text);
        std::vector<FilledType> blocks;
        for (const auto& b : blocks_json)
            blocks.push_back(FilledType(b.at("mu").get<std::vector<int>>(), b.at("n").get<int>()));
        BlockDecomposition dec(std::move(blocks));
        auto paths = product_degree_paths(dec);
        BigInt deg = product_degree(dec);
        j["kind"] = "product";
        j["degree"] = deg.str();
        j["combined_formula"] = paths.combined.str();
        j["segre_of_hodge"] = paths.segre_of_hodge.str();
        text << "product of " << dec.blocks.size() << " filled blocks, total "
             << dec.total_m() << " x " << dec.total_n() << "\n";
        text << "  combined formula : " << paths.combined.str() << "\n";
        text << "  Segre of degrees : " << paths.segre_of_hodge.str() << "\n";
        text << "  degree           : " << deg.str() << "\n";
    } else if (kind == "grassmannian") {
        if (args.size() != 2) throw std::invalid_argument("usage: degree grassmannian <m> <p>");
        int m = std::stoi(args[0]), p = std::stoi(args[1]);
        BigInt deg = grassmannian_degree(m, p);
        std::vector<int> nu;
        for (int i = 1; i <= m; ++i) nu.push_back(p + i);
        BigInt hodge = schubert_degree(SchubertIndex(nu, p));
        j["kind"] = "grassmannian";
        j["m"] = m;
        j["p"] = p;
        j["degree"] = deg.str();
        j["hodge_route"] = hodge.str();
        text << "Grass(" << m << ", K^" << m + p << ")\n";
        text << "  closed formula : " << deg.str() << "\n";
        text << "  full index     : " << hodge.str() << "\n";
        if (deg != hodge) throw std::logic_error("grassmannian degree routes disagree");
    } else if (kind == "friedland") {
        if (args.size() != 1) throw std::invalid_argument("usage: degree friedland <n>");
        int n = std::stoi(args[0]);
        if (n < 1) throw std::invalid_argument("friedland: n must be positive");
        std::vector<FilledType> blocks(n, FilledType({1}, 1));
        BlockDecomposition dec(std::move(blocks));
        auto paths = product_degree_paths(dec);
        BigInt deg = product_degree(dec);
        j["kind"] = "friedland";
        j["n"] = n;
        j["degree"] = deg.str();
        j["combined_formula"] = paths.combined.str();
        j["segre_of_hodge"] = paths.segre_of_hodge.str();
        text << "diagonal gain space in Mat_" << n << "x" << n << " (product of " << n
             << " lines)\n";
        text << "  combined formula : " << paths.combined.str() << "\n";
        text << "  Segre of degrees : " << paths.segre_of_hodge.str() << "\n";
        text << "  degree           : " << deg.str() << "\n";
    } else if (kind == "generic") {
        if (args.size() != 1) throw std::invalid_argument("usage: degree generic <n>");
        int n = std::stoi(args[0]);
        auto cert = generic_degree(n);
        j["kind"] = "generic";
        j["n"] = n;
        j["degree"] = cert.degree.str();
        j["assembled_sum"] = cert.assembled.str();
        json table = json::array();
        for (const auto& v : cert.table) table.push_back(v.str());
        j["intersection_table"] = std::move(table);
        text << "generic " << n << "-dimensional gain space in Mat_" << n << "x" << n << "\n";
        text << "  degree n(n-1)^(n-1) : " << cert.degree.str() << "\n";
        text << "  alternating sum     : " << cert.assembled.str() << "\n";
        if (!cert.table.empty()) {
            text << "  intersection numbers D^(n-k).B^k, k = 0.." << n << ":\n";
            for (std::size_t k = 0; k < cert.table.size(); ++k)
                text << "    k=" << k << " : " << cert.table[k].str() << "\n";
        }
    } else {
        throw std::invalid_argument("unknown degree kind '" + kind +
                                    "' (schubert|product|grassmannian|friedland|generic)");
    }
    if (opt.format == "json") {
        j["meta"] = {{"seed", opt.seed}};
        emit_json(opt, j);
    } else {
        emit(opt, text.str());
    }
    return 0;
}

// ----------------------------------------------------------------- solve

std::string format_complex(const Complex& c) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", c.real(), c.imag());
    return buf;
}

ProblemInstance load_instance(const std::string& input, const std::string& builtin,
                              std::uint64_t seed, const char* who) {
    if (!builtin.empty()) {
        std::string name = builtin;
        std::vector<int> nums;
        if (auto colon = builtin.find(':'); colon != std::string::npos) {
            name = builtin.substr(0, colon);
            nums = parse_int_csv(builtin.substr(colon + 1));
        }
        return draw_instance(parse_family(name, nums), seed);
    }
    if (input.empty())
        throw std::invalid_argument(std::string(who) + ": give a problem file or --builtin");
    return problem_from_json(read_json_input(input));
}

int cmd_solve(Options& opt, const std::string& input, const std::string& builtin) {
    ProblemInstance inst = load_instance(input, builtin, opt.seed, "solve");
    opt.solver.seed = opt.seed;
    auto placed = place_poles(inst.pencil, inst.subspace, inst.target, opt.solver);
    if (opt.format == "json") {
        json j = solution_to_json(placed.solution, &placed, opt.solver);
        j["problem"] = problem_to_json(inst);
        emit_json(opt, j);
    } else {
        std::ostringstream text;
        const auto& sol = placed.solution;
        text << "paths: " << sol.bezout_total << " total, " << sol.finite_with_multiplicity()
             << " finite, " << sol.diverged_count << " diverged, " << sol.base_locus_count
             << " base-locus (failed " << sol.failed_count << ")\n";
        text << "verified feedbacks: " << placed.feedbacks.size() << " (unverified "
             << placed.unverified.size() << ")\n";
        for (std::size_t i = 0; i < placed.feedbacks.size(); ++i) {
            const auto& fb = placed.feedbacks[i];
            text << "feedback " << i << " (multiplicity " << fb.multiplicity
                 << ", max coeff error " << fb.max_coeff_error << ")\n";
            for (int r = 0; r < fb.F.rows(); ++r) {
                text << "  [";
                for (int c = 0; c < fb.F.cols(); ++c)
                    text << (c ? ", " : " ") << format_complex(fb.F(r, c));
                text << " ]\n";
            }
        }
        emit(opt, text.str());
    }
    return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(Options& opt, const std::string& family, const std::vector<int>& fam_args) {
    FamilySpec spec = parse_family(family, fam_args);
    opt.solver.seed = opt.seed;
    auto table = count_experiment(spec, opt.trials, opt.solver);
    bool mismatch = table.predicted.has_value() && !table.matches_prediction();
    if (opt.format == "json") {
        emit_json(opt, count_table_to_json(table, opt.solver));
    } else if (opt.format == "csv") {
        std::ostringstream text;
        text << "# family=" << spec.name() << " seed=" << table.base_seed << " modal="
             << table.modal_finite;
        if (table.predicted) text << " predicted=" << table.predicted->str();
        text << "\n" << count_table_csv(table);
        emit(opt, text.str());
    } else {
        std::ostringstream text;
        text << "family " << spec.name() << ", " << table.rows.size() << " trials, seed "
             << table.base_seed << "\n";
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto& r = table.rows[i];
            text << "  trial " << i << ": finite " << r.finite << " (real " << r.real_roots
                 << ", verified " << r.verified << "), diverged " << r.diverged << ", base-locus "
                 << r.base_locus << ", failed " << r.failed << "\n";
        }
        text << "modal finite count: " << table.modal_finite << "\n";
        if (table.predicted) {
            text << "predicted count   : " << table.predicted->str() << "  -> "
                 << (table.matches_prediction() ? "MATCH" : "MISMATCH") << "\n";
        } else {
            text << "predicted count   : none (no closed form for this family)\n";
        }
        emit(opt, text.str());
    }
    return mismatch ? 2 : 0;
}

// --------------------------------------------------------------- plucker

int subset_pos(int total, std::initializer_list<int> cols_1based) {
    std::vector<int> want;
    for (int c : cols_1based) want.push_back(c - 1);
    auto all = subsets_lex(total, static_cast<int>(want.size()));
    for (std::size_t i = 0; i < all.size(); ++i)
        if (all[i] == want) return static_cast<int>(i);
    throw std::logic_error("subset_pos: not found");
}

int cmd_plucker(const Options& opt, const std::string& input, bool band_example,
                const std::string& a_str, const std::string& b_str, const std::string& c_str) {
    Mat<Rational> W;
    if (band_example) {
        Rational a = parse_rational(a_str), b = parse_rational(b_str), c = parse_rational(c_str);
        W = Mat<Rational>(3, 6);
        W(0, 0) = 1;
        W(1, 1) = 1;
        W(2, 2) = 1;
        W(0, 3) = a;
        W(0, 4) = b;
        W(1, 3) = c;
        W(1, 4) = a;
        W(1, 5) = b;
        W(2, 4) = c;
        W(2, 5) = a;
    } else {
        if (input.empty())
            throw std::invalid_argument("plucker: give a matrix file or --paper-example");
        json j = read_json_input(input);
        const json& rows = j.is_object() ? require_field(j, "W", "plucker") : j;
        if (!rows.is_array() || rows.empty() || !rows[0].is_array())
            throw std::invalid_argument("plucker: expected a 2D array of scalars");
        int m = static_cast<int>(rows.size());
        int cols = static_cast<int>(rows[0].size());
        if (cols <= m) throw std::invalid_argument("plucker: need more columns than rows");
        W = matrix_from_json(rows, m, cols, "plucker.W");
    }
    const int m = W.rows(), n = W.cols() - W.rows();
    auto pv = plucker_coords(W, m, n);
    auto subsets = subsets_lex(m + n, m);

    json j;
    std::ostringstream text;
    json coords = json::array();
    for (std::size_t i = 0; i < pv.entries.size(); ++i) {
        std::string label;
        for (int c : subsets[i]) label += std::to_string(c + 1);
        coords.push_back(
            {{"columns", label}, {"value", scalar_traits<Rational>::to_string(pv.entries[i])}});
        text << "z_" << label << " = " << scalar_traits<Rational>::to_string(pv.entries[i])
             << "\n";
    }
    j["m"] = m;
    j["n"] = n;
    j["coordinates"] = std::move(coords);

    if (band_example) {
        const auto& z = pv.entries;
        auto at = [&](std::initializer_list<int> cols) { return z[subset_pos(6, cols)]; };
        Rational z234 = at({2, 3, 4}), z135 = at({1, 3, 5}), z126 = at({1, 2, 6});
        Rational z235 = at({2, 3, 5}), z136 = at({1, 3, 6}), z125 = at({1, 2, 5});
        Rational z134 = at({1, 3, 4}), z124 = at({1, 2, 4}), z236 = at({2, 3, 6});
        Rational z146 = at({1, 4, 6}), z245 = at({2, 4, 5}), z345 = at({3, 4, 5});
        Rational z156 = at({1, 5, 6}), z346 = at({3, 4, 6}), z256 = at({2, 5, 6});
        Rational z246 = at({2, 4, 6}), z356 = at({3, 5, 6}), z145 = at({1, 4, 5});
        std::vector<std::pair<const char*, Rational>> relations = {
            {"z234 + z135", z234 + z135},
            {"z234 - z126", z234 - z126},
            {"z235 + z136", z235 + z136},
            {"z125 + z134", z125 + z134},
            {"z124", z124},
            {"z236", z236},
            {"z146 + z245", z146 + z245},
            {"z345 - z156", z345 - z156},
            {"z346 + z256", z346 + z256},
            {"z346^2 + z246*z356", z346 * z346 + z246 * z356},
            {"z146^2 + z246*z145", z146 * z146 + z246 * z145},
            {"(z246+z345)^2 - z356*z145", (z246 + z345) * (z246 + z345) - z356 * z145},
            {"z246*(z246+z345) - z346*z146", z246 * (z246 + z345) - z346 * z146},
            {"z346*(z246+z345) + z356*z146", z346 * (z246 + z345) + z356 * z146},
            {"z146*(z246+z345) + z145*z346", z146 * (z246 + z345) + z145 * z346},
        };
        int satisfied = 0;
        json rel = json::array();
        text << "relations:\n";
        for (const auto& [label, value] : relations) {
            bool ok = value.is_zero();
            satisfied += ok;
            rel.push_back({{"relation", label},
                           {"value", scalar_traits<Rational>::to_string(value)},
                           {"satisfied", ok}});
            text << "  " << label << " = " << scalar_traits<Rational>::to_string(value)
                 << (ok ? "  (ok)" : "  (VIOLATED)") << "\n";
        }
        j["relations"] = std::move(rel);
        j["relations_satisfied"] = satisfied;
        text << satisfied << " of " << relations.size() << " relations satisfied\n";
    }

    if (opt.format == "json") {
        j["meta"] = {{"seed", opt.seed}};
        emit_json(opt, j);
    } else {
        emit(opt, text.str());
    }
    return 0;
}

// ----------------------------------------------------------------- probe

int cmd_probe(Options& opt, const std::string& input, const std::string& builtin) {
    ProblemInstance inst = load_instance(input, builtin, opt.seed, "probe");
    ProbeConfig cfg;
    cfg.solver = opt.solver;
    cfg.solver.seed = opt.seed;
    auto verdict = nondegeneracy_probe(inst.pencil, inst.subspace, cfg);
    if (opt.format == "json") {
        emit_json(opt, probe_to_json(verdict, cfg.solver));
    } else {
        std::ostringstream text;
        if (verdict.degenerate) {
            text << "verdict: degenerate witness found (chart " << verdict.chart << ", residual "
                 << verdict.max_residual << ")\n";
            text << "witness: [";
            for (std::size_t i = 0; i < verdict.witness.size(); ++i)
                text << (i ? " : " : " ") << format_complex(verdict.witness[i]);
            text << " ]\n";
        } else {
            text << "verdict: probably nondegenerate (" << verdict.charts_searched << " charts, "
                 << verdict.candidates_tested << " candidates tested)\n";
        }
        emit(opt, text.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "constrained pole placement: degree formulas, continuation solving, and counting"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--seed", opt.seed, "seed for every randomized draw")->capture_default_str();
    app.add_option("--format", opt.format, "output format: text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--out", opt.out, "write output to this file instead of stdout");
    app.add_option("--trials", opt.trials, "trial count for experiments")->capture_default_str();
    app.add_option("--step-max", opt.solver.step_max, "tracker max step");
    app.add_option("--newton-tol", opt.solver.newton_tol, "corrector tolerance");
    app.add_option("--cluster-tol", opt.solver.cluster_tol, "root clustering tolerance");
    app.add_option("--diverge-threshold", opt.solver.diverge_threshold, "divergence magnitude");
    app.add_option("--max-steps", opt.solver.max_steps, "per-path step budget");
    app.add_option("--threads", opt.solver.threads, "tracker threads (0 = auto)");
    app.fallthrough();

    auto* degree = app.add_subcommand("degree", "exact degrees of compactified gain spaces");
    std::string degree_kind;
    std::vector<std::string> degree_args;
    degree
        ->add_option("kind", degree_kind,
                     "schubert | product | grassmannian | friedland | generic")
        ->required();
    degree->add_option("args", degree_args, "kind-specific arguments");
    std::string degree_blocks;
    degree->add_option("--blocks", degree_blocks,
                       "block list for 'product' as JSON, e.g. [{\"n\":2,\"mu\":[1,2]}]");

    auto* solve = app.add_subcommand("solve", "solve one placement problem");
    std::string solve_input, solve_builtin;
    solve->add_option("problem", solve_input, "problem JSON file ('-' for stdin)");
    solve->add_option("--builtin", solve_builtin,
                      "seeded builtin instance, e.g. generic:3, diagonal:4, output-feedback:2,2, "
                      "band-toeplitz, cyclic-band");

    auto* verify = app.add_subcommand("verify", "count solutions over seeded trials and compare "
                                                "against the predicted degree");
    std::string verify_family;
    std::vector<int> verify_args;
    verify
        ->add_option("family", verify_family,
                     "generic | diagonal | output-feedback | band-toeplitz | cyclic-band")
        ->required();
    verify->add_option("args", verify_args, "family arguments (e.g. n, or m p)");

    auto* plucker = app.add_subcommand("plucker", "maximal minors of a wide matrix in "
                                                  "lexicographic subset order");
    std::string plucker_input, pl_a = "1", pl_b = "2", pl_c = "3";
    bool band_example = false;
    plucker->add_option("matrix", plucker_input, "JSON file with a 2D array (or {\"W\": [[..]]})");
    plucker->add_flag("--paper-example", band_example,
                      "use the built-in 3x3 band subspace section [I | L(a,b,c)]");
    plucker->add_option("--a", pl_a, "band parameter a")->capture_default_str();
    plucker->add_option("--b", pl_b, "band parameter b")->capture_default_str();
    plucker->add_option("--c", pl_c, "band parameter c")->capture_default_str();

    auto* probe = app.add_subcommand("probe", "search the compactified gain space for points "
                                              "where the characteristic map degenerates");
    std::string probe_input, probe_builtin;
    probe->add_option("problem", probe_input, "problem JSON file ('-' for stdin)");
    probe->add_option("--builtin", probe_builtin, "seeded builtin instance (as in solve)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (degree->parsed()) return cmd_degree(opt, degree_kind, degree_args, degree_blocks);
        if (solve->parsed()) return cmd_solve(opt, solve_input, solve_builtin);
        if (verify->parsed()) {
            opt.trials = std::max(opt.trials, 1);
            return cmd_verify(opt, verify_family, verify_args);
        }
        if (plucker->parsed())
            return cmd_plucker(opt, plucker_input, band_example, pl_a, pl_b, pl_c);
        if (probe->parsed()) return cmd_probe(opt, probe_input, probe_builtin);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
