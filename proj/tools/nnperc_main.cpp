// Command-line front end: wires the samplers, graph builders, tile coupling
// and bound search into reproducible batch experiments.
//
// Exit codes: 0 success, 2 invalid configuration, 3 bound search found no k.

#include <cstdio>
#include <deque>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <nnperc/harness.hpp>

namespace {

using nnperc::json;

struct CommonFlags {
    std::string config_path;
    json overrides = json::object();
};

// Register a flag that lands in the override document only when given, so
// config-file values survive unless explicitly overridden.
template <typename T>
void add_override(CLI::App* cmd, CommonFlags& fl, const std::string& name, const char* help) {
    auto setter = [&fl, name](const T& v) { fl.overrides[name] = v; };
    cmd->add_option_function<T>("--" + name, setter, help);
}

void add_common(CLI::App* cmd, CommonFlags& fl) {
    cmd->add_option("--config", fl.config_path, "JSON config file; unknown keys are errors");
    add_override<uint64_t>(cmd, fl, "seed", "base seed (seeds = seed..seed+seed_count-1)");
    add_override<int>(cmd, fl, "seed_count", "number of consecutive seeds");
    add_override<std::string>(cmd, fl, "out", "output directory");
    add_override<int>(cmd, fl, "threads", "worker threads (0 = hardware)");
}

int run(nnperc::Experiment exp, const CommonFlags& fl) {
    const nnperc::ExperimentConfig cfg = nnperc::load_config(exp, fl.config_path, fl.overrides);
    using nnperc::Experiment;
    switch (exp) {
        case Experiment::sample: {
            nnperc::write_sample(cfg);
            std::printf("sample: wrote %s/points.csv\n", cfg.out.c_str());
            break;
        }
        case Experiment::table1: {
            const auto res = nnperc::run_table1(cfg);
            nnperc::write_table1(cfg, res);
            for (const auto& s : res.summaries)
                std::printf("table1 n=%d k=%d: mean avg distortion %.4f (sd %.4f, %d seeds)\n",
                            s.n, s.k, s.mean_avg, s.sd_avg, s.seeds_used);
            break;
        }
        case Experiment::fit_sweep: {
            const auto res = nnperc::run_fit_sweep(cfg);
            nnperc::write_fit_sweep(cfg, res);
            std::printf("fit-sweep: a_fit=%.4f rss=%.6f over %u points\n", res.fit.a_fit,
                        res.fit.rss, res.fit.points_used);
            break;
        }
        case Experiment::bound_search: {
            const auto res = nnperc::run_bound_search(cfg);
            nnperc::write_bound_search(cfg, res);
            std::printf("bound-search: k_star=%d a_star=%.4f p_star=%.6f (threshold %.6f)\n",
                        res.k_star, res.a_star, res.p_star, res.threshold);
            break;
        }
        case Experiment::coupling_verify: {
            const auto res = nnperc::run_coupling_verify(cfg);
            nnperc::write_coupling_verify(cfg, res);
            std::printf("coupling-verify: open %.4f (analytic %.4f, sigma %.4f), "
                        "adjacent %lld/%lld valid, alpha_hat %.3f\n",
                        res.report.open_fraction, res.p_analytic, res.sigma,
                        (long long)res.report.adjacent_valid,
                        (long long)res.report.adjacent_checked, res.report.alpha_hat);
            break;
        }
        case Experiment::kc_probe: {
            const auto res = nnperc::run_kc_probe(cfg);
            nnperc::write_kc_probe(cfg, res);
            for (const auto& [k, f] : res.rows)
                std::printf("kc-probe k=%d: fraction %.4f\n", k, f);
            break;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-nearest-neighbour graphs on planar point processes: "
                 "distortion experiments, tile coupling and the critical-k bound"};
    app.require_subcommand(1);

    struct Sub {
        nnperc::Experiment exp;
        CLI::App* cmd;
        CommonFlags flags;
    };
    // deque: option callbacks hold references into elements, which must
    // survive later push_backs
    std::deque<Sub> subs;
    auto make = [&](nnperc::Experiment e, const char* help) {
        subs.push_back({e, app.add_subcommand(nnperc::experiment_name(e), help), {}});
        Sub& s = subs.back();
        add_common(s.cmd, s.flags);
        return s.cmd;
    };

    {
        CLI::App* c = make(nnperc::Experiment::sample, "sample a point set to CSV");
        Sub& s = subs.back();
        add_override<std::string>(c, s.flags, "mode", "binomial or poisson");
        add_override<int>(c, s.flags, "n", "point count (binomial)");
        add_override<double>(c, s.flags, "lambda", "intensity (poisson)");
        add_override<double>(c, s.flags, "window_size", "window side length");
        add_override<int>(c, s.flags, "export_knn", "also export the kNN graph for this k");
    }
    {
        CLI::App* c = make(nnperc::Experiment::table1, "distortion table over (n,k) cases");
        Sub& s = subs.back();
        add_override<double>(c, s.flags, "inner_fraction", "inner window side fraction");
        add_override<uint64_t>(c, s.flags, "sample_pairs", "subsample pair count (0 = all)");
        add_override<double>(c, s.flags, "window_size", "outer window side (0 = sqrt(n/lambda))");
    }
    {
        CLI::App* c = make(nnperc::Experiment::fit_sweep, "avg distortion over k, fit 1 + a/k^2");
        Sub& s = subs.back();
        add_override<int>(c, s.flags, "n", "points per sample");
        add_override<std::vector<int>>(c, s.flags, "k_list", "k values (within [3,13])");
        add_override<double>(c, s.flags, "inner_fraction", "inner window side fraction");
    }
    {
        CLI::App* c = make(nnperc::Experiment::bound_search, "smallest k with P(A_t) above threshold");
        Sub& s = subs.back();
        add_override<double>(c, s.flags, "threshold", "site percolation threshold");
        add_override<double>(c, s.flags, "lambda", "point process intensity");
        add_override<int>(c, s.flags, "k_min", "search range lower end");
        add_override<int>(c, s.flags, "k_max", "search range upper end");
        add_override<int>(c, s.flags, "e_area_resolution", "lens area integration resolution");
    }
    {
        CLI::App* c = make(nnperc::Experiment::coupling_verify, "evaluate tiles, verify mimic paths");
        Sub& s = subs.back();
        add_override<double>(c, s.flags, "a", "tile parameter (tile side 10a)");
        add_override<int>(c, s.flags, "k", "nearest neighbour count");
        add_override<double>(c, s.flags, "lambda", "point process intensity");
        add_override<int>(c, s.flags, "tiles_x", "lattice width in tiles");
        add_override<int>(c, s.flags, "tiles_y", "lattice height in tiles");
        add_override<int64_t>(c, s.flags, "pair_budget", "pairs checked per phase");
    }
    {
        CLI::App* c = make(nnperc::Experiment::kc_probe, "largest-component fraction per k");
        Sub& s = subs.back();
        add_override<int>(c, s.flags, "n", "points per sample");
        add_override<std::vector<int>>(c, s.flags, "k_list", "k values to probe");
        add_override<double>(c, s.flags, "inner_fraction", "inner window side fraction");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    for (const Sub& s : subs) {
        if (!s.cmd->parsed()) continue;
        try {
            return run(s.exp, s.flags);
        } catch (const nnperc::not_found_error& e) {
            std::fprintf(stderr, "%s\nbest seen: k=%d a=%.4f p=%.6f\n", e.what(), e.best_k,
                         e.best_a, e.best_p);
            return 3;
        } catch (const nnperc::config_error& e) {
            std::fprintf(stderr, "%s\n", e.what());
            return 2;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    }
    return 2;
}
