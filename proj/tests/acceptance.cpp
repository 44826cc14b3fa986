// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit when
// anything fails. The first CLI argument is the path to the nnperc binary
// (used for the exit-code checks at the end).

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <nnperc/harness.hpp>

#include "test_util.hpp"

using namespace nnperc;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_t0;

void begin() { g_t0 = std::chrono::steady_clock::now(); }

void criterion(int idx, const char* label, bool ok, const std::string& detail) {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
    std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", idx, label,
                detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

ExperimentConfig base_config(Experiment e) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    finalize_config(cfg);
    return cfg;
}

}  // namespace

// 1. Bound reproduction: k_star in [186,190] (expected exactly 188),
//    a_star in [0.88, 0.91], threshold 0.59, lambda 1.
static void criterion1() {
    begin();
    try {
        const ExperimentConfig cfg = base_config(Experiment::bound_search);
        const BoundResult res = run_bound_search(cfg);
        const bool ok = res.k_star >= 186 && res.k_star <= 190 && res.a_star >= 0.88 &&
                        res.a_star <= 0.91 && res.p_star > res.threshold;
        criterion(1, "bound reproduction", ok,
                  fmt("k_star=%d a_star=%.5f p_star=%.6f threshold=%.2f", res.k_star, res.a_star,
                      res.p_star, res.threshold));
    } catch (const std::exception& e) {
        criterion(1, "bound reproduction", false, e.what());
    }
}

// 2. Analytic vs Monte Carlo within 3 standard errors at the headline point
//    and four off-optimum settings, 1e5 trials each.
static void criterion2() {
    begin();
    try {
        const std::vector<std::pair<double, int>> settings = {
            {0.893, 188}, {0.7, 150}, {0.7, 220}, {1.1, 150}, {1.1, 220}};
        bool ok = true;
        std::string detail;
        for (size_t i = 0; i < settings.size(); ++i) {
            const auto [a, k] = settings[i];
            const double analytic = prob_At(a, k, 1.0, region_areas(a, 2000)).value;
            const EventProb mc = mc_prob_At(a, k, 1.0, 100000, 7070 + i);
            const double diff = std::fabs(analytic - mc.value);
            // sigma under the analytic value: the reported p-hat-based band
            // degenerates when the count is zero at the far-off-optimum corner
            const double sigma3 = 3.0 * std::sqrt(analytic * (1.0 - analytic) / 100000.0);
            const bool pass = diff <= sigma3;
            ok = ok && pass;
            detail += fmt("%s(%.3f,%d):|%.2e|<=%.2e", i ? " " : "", a, k, diff, sigma3);
        }
        criterion(2, "analytic/MC agreement", ok, detail);
    } catch (const std::exception& e) {
        criterion(2, "analytic/MC agreement", false, e.what());
    }
}

// 3. Oracle equivalence: grid kNN graph identical to brute force on 50
//    instances; Dijkstra equals Bellman-Ford within 1e-9 relative on 20.
static void criterion3() {
    begin();
    try {
        const int ns[5] = {60, 120, 230, 350, 500};
        const int ks[4] = {1, 3, 5, 10};
        int graph_ok = 0;
        for (int i = 0; i < 50; ++i) {
            const int n = ns[i % 5], k = ks[i % 4];
            const PointSet ps =
                sample_binomial(unit_window(std::sqrt(double(n))), n, 10'000 + uint64_t(i));
            if (oracle::edge_list(build_knn_graph(ps, k)) ==
                oracle::edge_list(brute_force_knn_graph(ps, k)))
                ++graph_ok;
        }
        int sp_ok = 0;
        for (int i = 0; i < 20; ++i) {
            const int n = 40 + (i % 4) * 53;
            const PointSet ps =
                sample_binomial(unit_window(std::sqrt(double(n))), n, 20'000 + uint64_t(i));
            const NNGraph g = build_knn_graph(ps, 2 + i % 2);
            bool inst = true;
            for (uint32_t src : {0u, uint32_t(n / 3), uint32_t(n - 1)}) {
                const auto a = sssp(g, src);
                const auto b = oracle::bellman_ford(g, src);
                for (uint32_t v = 0; v < g.n; ++v) {
                    if (std::isinf(a[v]) != std::isinf(b[v])) inst = false;
                    else if (std::isfinite(a[v]) &&
                             std::fabs(a[v] - b[v]) > 1e-9 * std::max(1.0, std::fabs(b[v])))
                        inst = false;
                }
            }
            if (inst) ++sp_ok;
        }
        criterion(3, "oracle equivalence", graph_ok == 50 && sp_ok == 20,
                  fmt("graphs %d/50 identical, shortest paths %d/20 within 1e-9", graph_ok, sp_ok));
    } catch (const std::exception& e) {
        criterion(3, "oracle equivalence", false, e.what());
    }
}

// 4. Table reproduction: mean avg distortion over 10 seeds within +/-15% of
//    the reference values, monotone decreasing in k at fixed n.
static void criterion4() {
    begin();
    try {
        const double expected[8] = {1.727, 1.364, 1.204, 1.660, 1.333, 1.172, 1.322, 1.285};
        const ExperimentConfig cfg = base_config(Experiment::table1);
        const Table1Result res = run_table1(cfg);
        bool ok = res.summaries.size() == 8;
        std::string detail;
        for (size_t i = 0; i < res.summaries.size() && i < 8; ++i) {
            const Table1Summary& s = res.summaries[i];
            const double rel = std::fabs(s.mean_avg - expected[i]) / expected[i];
            const bool pass = s.seeds_used == 10 && rel <= 0.15;
            ok = ok && pass;
            detail += fmt("%s(%d,%d):%.3f vs %.3f (%+.1f%%)", i ? " " : "", s.n, s.k, s.mean_avg,
                          expected[i], 100.0 * (s.mean_avg - expected[i]) / expected[i]);
        }
        // monotone in k for n=500 (rows 0,1,2) and n=1000 (rows 3,4,5)
        if (res.summaries.size() == 8) {
            ok = ok && res.summaries[0].mean_avg > res.summaries[1].mean_avg &&
                 res.summaries[1].mean_avg > res.summaries[2].mean_avg;
            ok = ok && res.summaries[3].mean_avg > res.summaries[4].mean_avg &&
                 res.summaries[4].mean_avg > res.summaries[5].mean_avg;
        }
        criterion(4, "distortion table reproduction", ok, detail);
    } catch (const std::exception& e) {
        criterion(4, "distortion table reproduction", false, e.what());
    }
}

// 5. Fit reproduction: two independent base seeds give a_fit in [4,6];
//    synthetic data recovers its coefficient exactly.
static void criterion5() {
    begin();
    try {
        std::vector<std::pair<int, double>> synth;
        for (int k = 3; k <= 13; ++k) synth.push_back({k, 1.0 + 5.0 / (double(k) * double(k))});
        const FitResult sf = sweep_k_fit(synth);
        bool ok = std::fabs(sf.a_fit - 5.0) <= 1e-9 && sf.rss <= 1e-18;
        std::string detail = fmt("synthetic a_fit=%.12f", sf.a_fit);
        for (uint64_t base : {11ull, 211ull}) {
            ExperimentConfig cfg;
            cfg.experiment = Experiment::fit_sweep;
            cfg.seed = base;
            finalize_config(cfg);
            const FitSweepResult res = run_fit_sweep(cfg);
            ok = ok && res.fit.a_fit >= 4.0 && res.fit.a_fit <= 6.0 && res.excluded_k.empty();
            detail += fmt(" seed%llu:a_fit=%.3f", (unsigned long long)base, res.fit.a_fit);
        }
        criterion(5, "fit reproduction", ok, detail);
    } catch (const std::exception& e) {
        criterion(5, "fit reproduction", false, e.what());
    }
}

// 6. Coupling verification at (lambda=1, a=0.893, k=188) on a 20x20 grid:
//    open fraction consistent with the analytic P(A_t) and supercritical,
//    100% mimic validity over at least 50 adjacent pairs, every hop ratio
//    under the geometric bound.
static void criterion6() {
    begin();
    try {
        ExperimentConfig cfg;
        cfg.experiment = Experiment::coupling_verify;
        cfg.seed = 1;
        cfg.pair_budget = 80;
        finalize_config(cfg);
        const CouplingRunResult res = run_coupling_verify(cfg);
        const double diff = std::fabs(res.report.open_fraction - res.p_analytic);
        const bool ok = diff <= 3.0 * res.sigma && res.report.open_fraction > 0.59 &&
                        res.p_analytic > 0.59 && res.report.adjacent_checked >= 50 &&
                        res.report.adjacent_valid == res.report.adjacent_checked &&
                        res.report.failures.empty() &&
                        res.report.max_hop_ratio <= res.report.c_tiles_estimate &&
                        res.report.rep_pairs_valid == res.report.rep_pairs_checked;
        criterion(6, "coupling verification", ok,
                  fmt("open=%.4f analytic=%.4f (3sigma=%.4f), adjacent %lld/%lld valid, "
                      "max_hop_ratio=%.3f <= c_tiles=%.3f",
                      res.report.open_fraction, res.p_analytic, 3.0 * res.sigma,
                      (long long)res.report.adjacent_valid, (long long)res.report.adjacent_checked,
                      res.report.max_hop_ratio, res.report.c_tiles_estimate));
    } catch (const std::exception& e) {
        criterion(6, "coupling verification", false, e.what());
    }
}

// 7. Geometry properties: disjointness/containment scans identical at two
//    resolutions, boundary sufficiency over 1e5 probes, area step-halving
//    under 0.5%.
static void criterion7() {
    begin();
    try {
        const TileGeometry g(1.0);
        auto scan = [&](int res) {
            bool disjoint = true, contained = true;
            const double h = 10.0 / res;
            for (int iy = 0; iy < res; ++iy)
                for (int ix = 0; ix < res; ++ix) {
                    const Point q{-5.0 + (ix + 0.5) * h, -5.0 + (iy + 0.5) * h};
                    int claims = 0;
                    for (RegionId r : all_regions) claims += g.contains(r, q) ? 1 : 0;
                    if (claims > 1) disjoint = false;
                    if (claims == 1 && (std::fabs(q.x) > 5.0 || std::fabs(q.y) > 5.0))
                        contained = false;
                }
            return std::make_pair(disjoint, contained);
        };
        const auto s400 = scan(400);
        const auto s800 = scan(800);

        CounterRng rng(99, 6);
        int violations = 0;
        for (int t = 0; t < 100000; ++t) {
            const Point q{rng.next_in(-0.5, 3.5), rng.next_in(-3.0, 3.0)};
            const double boundary_min = g.lens_boundary_margin(Dir::right, q);
            const Point c = (t % 2 == 0) ? Point{0.0, 0.0} : Point{4.0, 0.0};
            const double rr = std::sqrt(rng.next_double());
            const double th = rng.next_in(0.0, 2.0 * M_PI);
            const Point p{c.x + rr * std::cos(th), c.y + rr * std::sin(th)};
            if (g.rmax(Dir::right, p) - dist(q, p) < boundary_min - 1e-9) ++violations;
        }

        const double a500 = e_region_area(1.0, 500);
        const double a1000 = e_region_area(1.0, 1000);
        const double delta = std::fabs(a1000 - a500) / a1000;

        const bool ok = s400 == s800 && s400.first && s400.second && violations == 0 &&
                        delta < 0.005;
        criterion(7, "geometry properties", ok,
                  fmt("scans(400)=%d/%d scans(800)=%d/%d, boundary violations %d/100000, "
                      "area halving delta %.4f%%",
                      int(s400.first), int(s400.second), int(s800.first), int(s800.second),
                      violations, 100.0 * delta));
    } catch (const std::exception& e) {
        criterion(7, "geometry properties", false, e.what());
    }
}

// 8. Finite-scale tail behaviour: per-decile max mimic distortion shows no
//    statistically significant upward trend with distance (one-sided
//    Spearman critical value 0.564 at n=10, level 0.05), and alpha_hat is
//    finite and stable within +/-20% between 15x15 and 25x25 grids.
static void criterion8() {
    begin();
    try {
        auto run_grid = [&](int tiles) {
            ExperimentConfig cfg;
            cfg.experiment = Experiment::coupling_verify;
            cfg.seed = 5;
            cfg.tiles_x = tiles;
            cfg.tiles_y = tiles;
            cfg.pair_budget = 320;
            finalize_config(cfg);
            return run_coupling_verify(cfg);
        };
        const CouplingRunResult r15 = run_grid(15);
        const CouplingRunResult r25 = run_grid(25);
        const double spearman_crit = 0.564;
        const double a15 = r15.report.alpha_hat, a25 = r25.report.alpha_hat;
        const double rel = std::fabs(a25 - a15) / (0.5 * (a15 + a25));
        const bool ok = std::isfinite(a15) && std::isfinite(a25) && a15 > 0 && a25 > 0 &&
                        rel <= 0.20 && r15.report.spearman_mimic < spearman_crit &&
                        r25.report.spearman_mimic < spearman_crit &&
                        r15.report.spearman_chem < spearman_crit &&
                        r25.report.spearman_chem < spearman_crit &&
                        r15.report.deciles.size() == 10 && r25.report.deciles.size() == 10;
        criterion(8, "distance-tail stability", ok,
                  fmt("alpha_hat 15x15=%.3f 25x25=%.3f (rel %.1f%%), spearman mimic %.2f/%.2f "
                      "chem %.2f/%.2f < %.3f",
                      a15, a25, 100.0 * rel, r15.report.spearman_mimic, r25.report.spearman_mimic,
                      r15.report.spearman_chem, r25.report.spearman_chem, spearman_crit));
    } catch (const std::exception& e) {
        criterion(8, "distance-tail stability", false, e.what());
    }
}

// CLI exit codes (exercises the surfaced not-found and config errors).
static void cli_checks(const std::string& cli) {
    if (cli.empty()) {
        std::printf("[SKIP] cli exit codes: no binary path given\n");
        return;
    }
    begin();
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "nnperc_accept_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " >" + (dir / "stdout.txt").string() + " 2>" +
                                (dir / "stderr.txt").string();
        const int rc = std::system(cmd.c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    };
    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"no_such_key": 1})";
    }
    const int rc_badcfg = run("table1 --config " + (dir / "bad.json").string());
    const int rc_notfound = run("bound-search --threshold 0.999999 --k_max 260 "
                                "--e_area_resolution 500 --out " +
                                (dir / "o1").string());
    const int rc_ok =
        run("kc-probe --n 60 --k_list 5 --seed_count 2 --out " + (dir / "o2").string());
    const bool csv_exists = fs::exists(dir / "o2" / "kc_probe.csv");
    const bool ok = rc_badcfg == 2 && rc_notfound == 3 && rc_ok == 0 && csv_exists;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - g_t0).count();
    std::printf("[%s] cli exit codes: bad config=%d (want 2), not-found=%d (want 3), ok=%d "
                "(want 0), csv %s (%.1fs)\n",
                ok ? "PASS" : "FAIL", rc_badcfg, rc_notfound, rc_ok,
                csv_exists ? "written" : "missing", secs);
    if (!ok) ++g_failures;
}

int main(int argc, char** argv) {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    cli_checks(argc > 1 ? argv[1] : "");
    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
