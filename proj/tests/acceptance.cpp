// Acceptance suite: one line per criterion, nonzero exit on any failure.
//
//   acceptance             runs the fast criteria (1, 2, 4..11)
//   acceptance --only-slow runs only the long n = 4 counting criterion (3)
//   acceptance --all       runs everything

#include "poleplace/experiment.hpp"
#include "poleplace/probe.hpp"
#include "poleplace/resultant.hpp"
#include "poleplace/schubert.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace poleplace;

namespace {

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<bool(std::string&)> run;
    bool slow = false;
};

bool modal_counts(const FamilySpec& spec, int trials, std::uint64_t seed, int expected,
                  std::string& detail, std::vector<CountTable>* keep = nullptr) {
    SolverConfig cfg;
    cfg.seed = seed;
    auto table = count_experiment(spec, trials, cfg);
    if (keep) keep->push_back(table);
    std::ostringstream os;
    os << spec.name() << " modal=" << table.modal_finite << " (expected " << expected << ")";
    detail += os.str();
    return table.modal_finite == expected;
}

}  // namespace

int main(int argc, char** argv) {
    bool only_slow = false, all = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only-slow") == 0) only_slow = true;
        if (std::strcmp(argv[i], "--all") == 0) all = true;
    }

    std::vector<Criterion> criteria;

    criteria.push_back({1, "generic n=2: 20 runs, modal 2, every count matches the elimination oracle",
                        10.0, [](std::string& detail) {
        FamilySpec spec{Family::Generic, 2, 0, 0};
        const std::uint64_t base = 0xACC2024;
        int modal_hits = 0;
        for (int i = 0; i < 20; ++i) {
            std::uint64_t seed = mix_seed(base, i);
            auto inst = draw_instance(spec, seed);
            auto sysQ = coefficient_system(inst.pencil, inst.subspace, inst.target);
            auto oracle = resultant_oracle_2d(sysQ);
            if (oracle.status != OracleStatus::Ok) {
                detail = "oracle not clean on trial " + std::to_string(i);
                return false;
            }
            SolverConfig cfg;
            cfg.seed = mix_seed(seed, 0xF00D);
            auto sol = solve_system(to_complex(sysQ), cfg);
            if (sol.finite_with_multiplicity() != oracle.count_with_multiplicity) {
                detail = "trial " + std::to_string(i) + ": tracker " +
                         std::to_string(sol.finite_with_multiplicity()) + " vs oracle " +
                         std::to_string(oracle.count_with_multiplicity);
                return false;
            }
            if (sol.finite_with_multiplicity() == 2) ++modal_hits;
        }
        detail = "20/20 oracle matches, " + std::to_string(modal_hits) + "/20 runs at count 2";
        return modal_hits > 10;
    }});

    criteria.push_back({2, "generic n=3: 10 runs, modal 12 of 27 paths, feedbacks verified to 1e-8",
                        120.0, [](std::string& detail) {
        FamilySpec spec{Family::Generic, 3, 0, 0};
        const std::uint64_t base = 0xACC3033;
        std::map<int, int> histogram;
        for (int i = 0; i < 10; ++i) {
            std::uint64_t seed = mix_seed(base, i);
            auto inst = draw_instance(spec, seed);
            SolverConfig cfg;
            cfg.seed = mix_seed(seed, 0xF00D);
            auto placed = place_poles(inst.pencil, inst.subspace, inst.target, cfg);
            const auto& sol = placed.solution;
            if (!sol.accounting_ok() || sol.bezout_total != 27) {
                detail = "trial " + std::to_string(i) + ": path accounting broke";
                return false;
            }
            if (!placed.unverified.empty()) {
                detail = "trial " + std::to_string(i) + ": unverified feedback present";
                return false;
            }
            for (const auto& fb : placed.feedbacks)
                if (!(fb.max_coeff_error < 1e-8)) {
                    detail = "trial " + std::to_string(i) + ": coefficient error " +
                             std::to_string(fb.max_coeff_error);
                    return false;
                }
            histogram[sol.finite_with_multiplicity()] += 1;
        }
        int modal = -1, hits = 0;
        for (auto& [count, h] : histogram)
            if (h > hits) {
                modal = count;
                hits = h;
            }
        detail = "modal " + std::to_string(modal) + " over 10 runs (" + std::to_string(hits) +
                 " hits)";
        return modal == 12;
    }});

    criteria.push_back({3, "generic n=4: 3 runs, modal 108 of 256 paths", 1200.0,
                        [](std::string& detail) {
        FamilySpec spec{Family::Generic, 4, 0, 0};
        SolverConfig cfg;
        cfg.seed = 0xACC4044;
        auto table = count_experiment(spec, 3, cfg);
        std::ostringstream os;
        os << "counts:";
        bool paths_ok = true;
        for (const auto& r : table.rows) {
            os << " " << r.finite;
            if (r.finite + r.diverged + r.base_locus != 256) paths_ok = false;
        }
        os << " modal=" << table.modal_finite;
        detail = os.str();
        return paths_ok && table.modal_finite == 108;
    }, true});

    criteria.push_back({4, "diagonal gains: modal counts 2, 6, 24 for n = 2, 3, 4", 600.0,
                        [](std::string& detail) {
        bool ok = true;
        int expected[] = {2, 6, 24};
        for (int n = 2; n <= 4; ++n) {
            FamilySpec spec{Family::Diagonal, n, 0, 0};
            if (!modal_counts(spec, 5, 0xD1A6 + n, expected[n - 2], detail)) ok = false;
            detail += "; ";
        }
        return ok;
    }});

    criteria.push_back({5, "static output feedback m=p=2 (n=4): modal count equals deg Grass(2,K^4)",
                        600.0, [](std::string& detail) {
        BigInt predicted = schubert_degree(SchubertIndex({3, 4}, 2));
        if (predicted != 2) {
            detail = "degree formula did not give 2";
            return false;
        }
        FamilySpec spec{Family::OutputFeedback, 0, 2, 2};
        return modal_counts(spec, 5, 0x0F22, 2, detail);
    }});

    criteria.push_back({6, "generic-degree alternating-sum identity, n = 1..25, exact", 1.0,
                        [](std::string& detail) {
        for (int n = 1; n <= 25; ++n) {
            auto cert = generic_degree(n);  // throws on identity failure
            if (cert.assembled != cert.degree) {
                detail = "identity mismatch at n=" + std::to_string(n);
                return false;
            }
            if (n >= 2) {
                auto table = intersection_table(n);  // internally re-checks the weighted sum
                BigInt weighted = 0;
                for (int k = 0; k <= n; ++k) {
                    BigInt term = binomial(n, k) * table[k];
                    weighted += (k % 2 == 0) ? term : -term;
                }
                if (weighted != cert.degree) {
                    detail = "table sum mismatch at n=" + std::to_string(n);
                    return false;
                }
            }
        }
        detail = "25 certificates exact";
        return true;
    }});

    criteria.push_back({7, "factorial degree formula equals tableau counts, all indices of dimension <= 10",
                        30.0, [](std::string& detail) {
        long checked = 0;
        for (int total = 1; total <= 12; ++total) {
            for (int m = 1; m <= total; ++m) {
                int n = total - m;
                for (const auto& cols : subsets_lex(total, m)) {
                    std::vector<int> nu;
                    for (int c : cols) nu.push_back(c + 1);
                    SchubertIndex s(std::move(nu), n);
                    if (s.dimension() > 10) continue;
                    if (schubert_degree(s) != syt_count(complementary_partition(s))) {
                        detail = "mismatch at an index of dimension " + std::to_string(s.dimension());
                        return false;
                    }
                    ++checked;
                }
            }
        }
        detail = std::to_string(checked) + " indices agree";
        return checked > 2000;
    }});

    criteria.push_back({8, "product-degree routes agree on 200 random block decompositions", 30.0,
                        [](std::string& detail) {
        std::mt19937_64 rng(0xB10C);
        for (int rep = 0; rep < 200; ++rep) {
            int k = std::uniform_int_distribution<int>(1, 4)(rng);
            std::vector<FilledType> blocks;
            int budget = 10;
            for (int l = 0; l < k; ++l) {
                int m = std::uniform_int_distribution<int>(1, 3)(rng);
                int n = std::uniform_int_distribution<int>(1, 3)(rng);
                std::vector<int> mu(m);
                for (int i = 0; i < m; ++i) mu[i] = std::uniform_int_distribution<int>(0, n)(rng);
                std::sort(mu.begin(), mu.end());
                int dim = 0;
                for (int v : mu) dim += v;
                if (dim > budget) {
                    std::fill(mu.begin(), mu.end(), 0);
                    dim = 0;
                }
                budget -= dim;
                blocks.push_back(FilledType(std::move(mu), n));
            }
            auto paths = product_degree_paths(BlockDecomposition(std::move(blocks)));
            if (paths.combined != paths.segre_of_hodge) {
                detail = "routes disagree on decomposition " + std::to_string(rep);
                return false;
            }
        }
        detail = "200 decompositions, both routes equal";
        return true;
    }});

    criteria.push_back({9, "band-subspace coordinate relations at 25 random parameter draws, exact",
                        30.0, [](std::string& detail) {
        std::mt19937_64 rng(0xBA2D);
        for (int rep = 0; rep < 25; ++rep) {
            Rational a = random_rational(rng), b = random_rational(rng), c = random_rational(rng);
            Mat<Rational> W(3, 6);
            W(0, 0) = 1; W(1, 1) = 1; W(2, 2) = 1;
            W(0, 3) = a; W(0, 4) = b;
            W(1, 3) = c; W(1, 4) = a; W(1, 5) = b;
            W(2, 4) = c; W(2, 5) = a;
            auto pv = plucker_coords(W, 3, 3).entries;
            auto subs = subsets_lex(6, 3);
            auto at = [&](std::initializer_list<int> cols) {
                std::vector<int> want;
                for (int v : cols) want.push_back(v - 1);
                for (std::size_t i = 0; i < subs.size(); ++i)
                    if (subs[i] == want) return pv[i];
                throw std::logic_error("subset lookup");
            };
            Rational z234 = at({2, 3, 4}), z135 = at({1, 3, 5}), z126 = at({1, 2, 6});
            Rational z235 = at({2, 3, 5}), z136 = at({1, 3, 6}), z125 = at({1, 2, 5});
            Rational z134 = at({1, 3, 4}), z124 = at({1, 2, 4}), z236 = at({2, 3, 6});
            Rational z146 = at({1, 4, 6}), z245 = at({2, 4, 5}), z345 = at({3, 4, 5});
            Rational z156 = at({1, 5, 6}), z346 = at({3, 4, 6}), z256 = at({2, 5, 6});
            Rational z246 = at({2, 4, 6}), z356 = at({3, 5, 6}), z145 = at({1, 4, 5});
            bool ok = (z234 == -z135) && (z234 == z126) && (z235 == -z136) && (z125 == -z134) &&
                      z124.is_zero() && z236.is_zero() && (z146 == -z245) && (z345 == z156) &&
                      (z346 == -z256) && Rational(z346 * z346 + z246 * z356).is_zero() &&
                      Rational(z146 * z146 + z246 * z145).is_zero() &&
                      Rational((z246 + z345) * (z246 + z345) - z356 * z145).is_zero() &&
                      Rational(z246 * (z246 + z345) - z346 * z146).is_zero() &&
                      Rational(z346 * (z246 + z345) + z356 * z146).is_zero() &&
                      Rational(z146 * (z246 + z345) + z145 * z346).is_zero();
            if (!ok) {
                detail = "relation violated at draw " + std::to_string(rep);
                return false;
            }
        }
        detail = "15 relations x 25 draws, all exact";
        return true;
    }});

    criteria.push_back({10, "minor pairing reproduces the closed-loop polynomial on 50 exact instances",
                        30.0, [](std::string& detail) {
        std::mt19937_64 rng(0xDE7);
        int done = 0;
        while (done < 50) {
            int m = std::uniform_int_distribution<int>(1, 3)(rng);
            int n = std::uniform_int_distribution<int>(1, 3)(rng);
            MatrixPencil<Rational> pencil(random_rational_matrix(rng, n, n),
                                          random_rational_matrix(rng, n, n),
                                          random_rational_matrix(rng, n, m),
                                          random_rational_matrix(rng, n, m));
            Mat<Rational> F = random_rational_matrix(rng, m, n);
            auto ms = minor_polys(pencil);
            auto pv = plucker_coords(Mat<Rational>::identity(m).hcat(F), m, n);
            auto paired = char_map_eval(ms, pv);
            if (paired.base_locus || paired.coeffs != closed_loop_charpoly(pencil, F)) {
                detail = "identity failed at instance " + std::to_string(done);
                return false;
            }
            ++done;
        }
        detail = "50 instances coefficient-exact";
        return true;
    }});

    criteria.push_back({11, "property suite: path accounting, seeded determinism, conjugation closure",
                        120.0, [](std::string& detail) {
        // accounting + conjugation closure across assorted real instances
        for (std::uint64_t seed : {101u, 202u, 303u, 404u}) {
            FamilySpec spec{Family::Generic, 2, 0, 0};
            auto inst = draw_instance(spec, seed);
            auto sysC = to_complex(coefficient_system(inst.pencil, inst.subspace, inst.target));
            SolverConfig cfg;
            cfg.seed = seed;
            auto sol = solve_system(sysC, cfg);
            if (!sol.accounting_ok()) {
                detail = "accounting violated";
                return false;
            }
            for (const auto& r : sol.finite_roots) {
                bool mate = false;
                for (const auto& other : sol.finite_roots) {
                    double dist = 0.0;
                    for (std::size_t v = 0; v < r.z.size(); ++v)
                        dist = std::max(dist, std::abs(std::conj(r.z[v]) - other.z[v]));
                    if (dist <= cfg.cluster_tol) mate = true;
                }
                if (!mate) {
                    detail = "conjugate mate missing";
                    return false;
                }
            }
            if ((sol.finite_with_multiplicity() - sol.real_count(cfg.cluster_tol)) % 2 != 0) {
                detail = "real-count parity violated";
                return false;
            }
        }
        {
            FamilySpec spec{Family::Diagonal, 3, 0, 0};
            auto inst = draw_instance(spec, 777);
            auto sysC = to_complex(coefficient_system(inst.pencil, inst.subspace, inst.target));
            SolverConfig cfg;
            cfg.seed = 31337;
            auto a = solve_system(sysC, cfg);
            auto b = solve_system(sysC, cfg);
            if (a.finite_roots.size() != b.finite_roots.size()) {
                detail = "rerun changed the root list";
                return false;
            }
            for (std::size_t i = 0; i < a.finite_roots.size(); ++i)
                for (std::size_t v = 0; v < a.finite_roots[i].z.size(); ++v)
                    if (a.finite_roots[i].z[v] != b.finite_roots[i].z[v]) {
                        detail = "rerun not bit-identical";
                        return false;
                    }
            if (!a.accounting_ok() || a.bezout_total != 27) {
                detail = "accounting violated on the three-state run";
                return false;
            }
            SolverConfig st = cfg;
            st.threads = 1;
            auto c = solve_system(sysC, st);
            for (std::size_t i = 0; i < a.finite_roots.size(); ++i)
                for (std::size_t v = 0; v < a.finite_roots[i].z.size(); ++v)
                    if (a.finite_roots[i].z[v] != c.finite_roots[i].z[v]) {
                        detail = "threaded and single-threaded runs differ";
                        return false;
                    }
        }
        detail = "accounting, determinism, threading equivalence, conjugation all hold";
        return true;
    }});

    int failures = 0;
    for (auto& c : criteria) {
        if (!all && (only_slow != c.slow)) continue;
        std::string detail;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_budget = secs < c.budget_seconds;
        if (!in_budget && ok) detail += " (over time budget)";
        bool pass = ok && in_budget;
        std::printf("[%s] criterion %2d: %s  [%.2fs]%s%s\n", pass ? "PASS" : "FAIL", c.id, c.title,
                    secs, detail.empty() ? "" : " -- ", detail.c_str());
        if (!pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
