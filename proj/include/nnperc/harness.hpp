#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <nnperc/core.hpp>
#include <nnperc/criticalbound.hpp>
#include <nnperc/graphmetrics.hpp>
#include <nnperc/nngraph.hpp>
#include <nnperc/pointproc.hpp>
#include <nnperc/tilecoupling.hpp>

namespace nnperc {

using nlohmann::json;

struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Experiment { sample, table1, fit_sweep, bound_search, coupling_verify, kc_probe };

inline const char* experiment_name(Experiment e) {
    switch (e) {
        case Experiment::sample: return "sample";
        case Experiment::table1: return "table1";
        case Experiment::fit_sweep: return "fit-sweep";
        case Experiment::bound_search: return "bound-search";
        case Experiment::coupling_verify: return "coupling-verify";
        case Experiment::kc_probe: return "kc-probe";
    }
    return "?";
}

// One experiment's full parameter set. Every field has a default; a JSON
// config document and CLI flags of the same name override them. Unknown JSON
// keys are hard errors.
struct ExperimentConfig {
    Experiment experiment = Experiment::table1;

    uint64_t seed = 1;
    int seed_count = 10;                  // seeds = seed..seed+count-1 unless listed
    std::vector<uint64_t> seeds;

    int n = 1000;
    int k = 188;
    std::vector<int> k_list;              // fit-sweep, kc-probe
    std::vector<std::pair<int, int>> cases;  // table1 (n, k) matrix
    double lambda = 1.0;
    double window_size = 0.0;             // 0 = derive sqrt(n/lambda)
    double inner_fraction = 0.5;

    double a = 0.893;
    int tiles_x = 20;
    int tiles_y = 20;
    int64_t trials = 100000;
    double threshold = 0.59;
    double a_min = 0.5, a_max = 1.5, a_step = 0.005;
    int k_min = 18, k_max = 400;
    int64_t pair_budget = 64;
    int e_area_resolution = 2000;
    int angles = TileGeometry::default_angles;
    uint64_t sample_pairs = 0;            // 0 = all pairs

    std::string mode = "binomial";        // sample subcommand
    int export_knn = 0;                   // sample subcommand: also write the kNN graph
    std::string out = "out";
    int threads = 0;

    std::string config_hash;  // filled by finalize()

    double effective_window_side() const {
        if (window_size > 0.0) return window_size;
        return std::sqrt(double(n) / (lambda > 0.0 ? lambda : 1.0));
    }

    Window outer_window() const { return unit_window(effective_window_side()); }

    Window inner_window() const {
        const double side = effective_window_side();
        const double half = 0.5 * inner_fraction * side;
        const double c = 0.5 * side;
        return Window{c - half, c - half, c + half, c + half};
    }

    Window coupling_window() const {
        return Window{0.0, 0.0, double(tiles_x) * 10.0 * a, double(tiles_y) * 10.0 * a};
    }
};

namespace detail {

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
    return buf;
}

}  // namespace detail

inline json config_to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = experiment_name(c.experiment);
    j["seed"] = c.seed;
    j["seed_count"] = c.seed_count;
    j["seeds"] = c.seeds;
    j["n"] = c.n;
    j["k"] = c.k;
    j["k_list"] = c.k_list;
    json cases = json::array();
    for (auto& [n, k] : c.cases) cases.push_back({{"n", n}, {"k", k}});
    j["cases"] = cases;
    j["lambda"] = c.lambda;
    j["window_size"] = c.window_size;
    j["inner_fraction"] = c.inner_fraction;
    j["a"] = c.a;
    j["tiles_x"] = c.tiles_x;
    j["tiles_y"] = c.tiles_y;
    j["trials"] = c.trials;
    j["threshold"] = c.threshold;
    j["a_min"] = c.a_min;
    j["a_max"] = c.a_max;
    j["a_step"] = c.a_step;
    j["k_min"] = c.k_min;
    j["k_max"] = c.k_max;
    j["pair_budget"] = c.pair_budget;
    j["e_area_resolution"] = c.e_area_resolution;
    j["angles"] = c.angles;
    j["sample_pairs"] = c.sample_pairs;
    j["mode"] = c.mode;
    j["export_knn"] = c.export_knn;
    j["out"] = c.out;
    return j;
}

// Apply one JSON document onto the config. Unknown keys are hard errors so a
// typo cannot silently fall back to a default.
inline void apply_config_json(ExperimentConfig& c, const json& j) {
    if (!j.is_object()) throw config_error("config: top level must be a JSON object");
    for (const auto& [key, val] : j.items()) {
        try {
            if (key == "experiment") {
                const std::string name = val.get<std::string>();
                bool found = false;
                for (Experiment e : {Experiment::sample, Experiment::table1, Experiment::fit_sweep,
                                     Experiment::bound_search, Experiment::coupling_verify,
                                     Experiment::kc_probe})
                    if (name == experiment_name(e)) {
                        c.experiment = e;
                        found = true;
                    }
                if (!found) throw config_error("config: unknown experiment '" + name + "'");
            } else if (key == "seed") c.seed = val.get<uint64_t>();
            else if (key == "seed_count") c.seed_count = val.get<int>();
            else if (key == "seeds") c.seeds = val.get<std::vector<uint64_t>>();
            else if (key == "n") c.n = val.get<int>();
            else if (key == "k") c.k = val.get<int>();
            else if (key == "k_list") c.k_list = val.get<std::vector<int>>();
            else if (key == "cases") {
                c.cases.clear();
                for (const auto& e : val) c.cases.push_back({e.at("n").get<int>(), e.at("k").get<int>()});
            } else if (key == "lambda") c.lambda = val.get<double>();
            else if (key == "window_size") c.window_size = val.get<double>();
            else if (key == "inner_fraction") c.inner_fraction = val.get<double>();
            else if (key == "a") c.a = val.get<double>();
            else if (key == "tiles_x") c.tiles_x = val.get<int>();
            else if (key == "tiles_y") c.tiles_y = val.get<int>();
            else if (key == "trials") c.trials = val.get<int64_t>();
            else if (key == "threshold") c.threshold = val.get<double>();
            else if (key == "a_min") c.a_min = val.get<double>();
            else if (key == "a_max") c.a_max = val.get<double>();
            else if (key == "a_step") c.a_step = val.get<double>();
            else if (key == "k_min") c.k_min = val.get<int>();
            else if (key == "k_max") c.k_max = val.get<int>();
            else if (key == "pair_budget") c.pair_budget = val.get<int64_t>();
            else if (key == "e_area_resolution") c.e_area_resolution = val.get<int>();
            else if (key == "angles") c.angles = val.get<int>();
            else if (key == "sample_pairs") c.sample_pairs = val.get<uint64_t>();
            else if (key == "mode") c.mode = val.get<std::string>();
            else if (key == "export_knn") c.export_knn = val.get<int>();
            else if (key == "out") c.out = val.get<std::string>();
            else if (key == "threads") c.threads = val.get<int>();
            else throw config_error("config: unknown key '" + key + "'");
        } catch (const json::exception& e) {
            throw config_error("config: bad value for '" + key + "': " + e.what());
        }
    }
}

// Fill derived fields (seed list, per-experiment defaults) and validate.
inline void finalize_config(ExperimentConfig& c) {
    if (c.seeds.empty()) {
        if (c.seed_count < 1) throw config_error("config: seed_count must be >= 1");
        for (int i = 0; i < c.seed_count; ++i) c.seeds.push_back(c.seed + uint64_t(i));
    }
    if (c.k_list.empty()) {
        if (c.experiment == Experiment::fit_sweep)
            for (int k = 3; k <= 13; ++k) c.k_list.push_back(k);
        if (c.experiment == Experiment::kc_probe)
            for (int k = 1; k <= 8; ++k) c.k_list.push_back(k);
    }
    if (c.cases.empty() && c.experiment == Experiment::table1)
        c.cases = {{500, 3}, {500, 4}, {500, 5}, {1000, 3},
                   {1000, 4}, {1000, 5}, {1500, 4}, {2000, 4}};

    if (c.experiment == Experiment::fit_sweep)
        for (int k : c.k_list)
            if (k < 3 || k > 13) throw config_error("config: fit-sweep k_list must stay within [3, 13]");
    if (!(c.inner_fraction > 0.0) || !(c.inner_fraction < 1.0))
        throw config_error("config: inner_fraction must be in (0,1)");
    if (!(c.lambda >= 0.0)) throw config_error("config: lambda must be >= 0");
    if (c.experiment == Experiment::coupling_verify && (c.tiles_x < 1 || c.tiles_y < 1))
        throw config_error("config: tile grid must be at least 1x1");
    if (c.mode != "binomial" && c.mode != "poisson")
        throw config_error("config: mode must be 'binomial' or 'poisson'");

    c.config_hash.clear();
    c.config_hash = detail::hex64(detail::fnv1a(config_to_json(c).dump()));
}

inline ExperimentConfig load_config(Experiment experiment, const std::string& config_path,
                                    const json& overrides) {
    ExperimentConfig c;
    c.experiment = experiment;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw config_error("config: cannot open " + config_path);
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw config_error(std::string("config: parse error: ") + e.what());
        }
        apply_config_json(c, doc);
        if (doc.contains("experiment") && c.experiment != experiment)
            throw config_error("config: experiment in file does not match subcommand");
        c.experiment = experiment;
    }
    apply_config_json(c, overrides);
    finalize_config(c);
    return c;
}

// ---------------------------------------------------------------------------
// experiment results

struct DistortionRow {
    int n = 0, k = 0;
    uint64_t seed = 0;
    double inner_fraction = 0.0;
    bool degenerate = false;
    DistortionStats stats;
};

struct Table1Summary {
    int n = 0, k = 0;
    int seeds_used = 0;
    double mean_avg = 0.0, sd_avg = 0.0;
    double mean_max = 0.0, mean_pct_le_2 = 0.0, mean_pct_le_2x_avg = 0.0;
};

struct Table1Result {
    std::vector<DistortionRow> rows;
    std::vector<Table1Summary> summaries;
};

inline DistortionRow distortion_row_for(const ExperimentConfig& cfg, int n, int k, uint64_t seed) {
    DistortionRow row;
    row.n = n;
    row.k = k;
    row.seed = seed;
    row.inner_fraction = cfg.inner_fraction;
    const double side = cfg.window_size > 0.0
                            ? cfg.window_size
                            : std::sqrt(double(n) / (cfg.lambda > 0.0 ? cfg.lambda : 1.0));
    const Window outer = unit_window(side);
    const double half = 0.5 * cfg.inner_fraction * side, c = 0.5 * side;
    const Window inner{c - half, c - half, c + half, c + half};
    const PointSet ps = sample_binomial(outer, n, seed);
    const NNGraph g = build_knn_graph(ps, k, cfg.threads);
    const std::vector<uint32_t> obs = observation_set_induced(g, ps, inner);
    if (obs.size() < 2) {
        row.degenerate = true;
        return row;
    }
    row.stats = distortion_stats(g, ps, obs, cfg.threads, cfg.sample_pairs, seed);
    return row;
}

inline Table1Result run_table1(const ExperimentConfig& cfg) {
    Table1Result res;
    for (const auto& [n, k] : cfg.cases) {
        Table1Summary sum;
        sum.n = n;
        sum.k = k;
        std::vector<double> avgs;
        for (uint64_t seed : cfg.seeds) {
            DistortionRow row = distortion_row_for(cfg, n, k, seed);
            res.rows.push_back(row);
            if (row.degenerate) continue;
            avgs.push_back(row.stats.avg);
            sum.mean_max += row.stats.max;
            sum.mean_pct_le_2 += row.stats.pct_le_2;
            sum.mean_pct_le_2x_avg += row.stats.pct_le_2x_avg;
        }
        sum.seeds_used = int(avgs.size());
        if (!avgs.empty()) {
            for (double a : avgs) sum.mean_avg += a;
            sum.mean_avg /= double(avgs.size());
            for (double a : avgs) sum.sd_avg += (a - sum.mean_avg) * (a - sum.mean_avg);
            sum.sd_avg = avgs.size() > 1 ? std::sqrt(sum.sd_avg / double(avgs.size() - 1)) : 0.0;
            sum.mean_max /= double(avgs.size());
            sum.mean_pct_le_2 /= double(avgs.size());
            sum.mean_pct_le_2x_avg /= double(avgs.size());
        }
        res.summaries.push_back(sum);
    }
    return res;
}

struct FitSweepResult {
    FitResult fit;
    std::vector<std::pair<int, double>> points;  // (k, mean avg distortion)
    std::vector<int> excluded_k;                 // degenerate observation sets
};

inline FitSweepResult run_fit_sweep(const ExperimentConfig& cfg) {
    if (cfg.k_list.empty()) throw config_error("fit-sweep: k_list must be nonempty");
    FitSweepResult res;
    std::vector<std::vector<double>> per_k(cfg.k_list.size());
    for (uint64_t seed : cfg.seeds) {
        const Window outer = cfg.outer_window();
        const Window inner = cfg.inner_window();
        const PointSet ps = sample_binomial(outer, cfg.n, seed);
        for (size_t i = 0; i < cfg.k_list.size(); ++i) {
            const NNGraph g = build_knn_graph(ps, cfg.k_list[i], cfg.threads);
            const std::vector<uint32_t> obs = observation_set_induced(g, ps, inner);
            if (obs.size() < 2) continue;
            per_k[i].push_back(
                distortion_stats(g, ps, obs, cfg.threads, cfg.sample_pairs, seed).avg);
        }
    }
    for (size_t i = 0; i < cfg.k_list.size(); ++i) {
        if (per_k[i].empty()) {
            res.excluded_k.push_back(cfg.k_list[i]);
            continue;
        }
        double m = 0.0;
        for (double v : per_k[i]) m += v;
        res.points.push_back({cfg.k_list[i], m / double(per_k[i].size())});
    }
    res.fit = sweep_k_fit(res.points);
    return res;
}

inline BoundResult run_bound_search(const ExperimentConfig& cfg) {
    return min_k(cfg.threshold, cfg.lambda, {cfg.k_min, cfg.k_max},
                 {cfg.a_min, cfg.a_max, cfg.a_step}, cfg.e_area_resolution, cfg.angles);
}

struct CouplingRunResult {
    CouplingReport report;
    double p_analytic = 0.0;
    double sigma = 0.0;  // binomial std of the open fraction over the tile grid
    double density_ratio_c = 0.0;  // input intensity over achieved rep density
    int64_t tiles = 0;
    int64_t points = 0;
    TileLattice lattice;
};

inline CouplingRunResult run_coupling_verify(const ExperimentConfig& cfg) {
    CouplingRunResult out;
    const Window w = cfg.coupling_window();
    const PointSet ps = sample_poisson(w, cfg.lambda, cfg.seeds.at(0));
    const NNGraph g = build_knn_graph(ps, cfg.k, cfg.threads);
    TileParams params{cfg.a, cfg.k, cfg.lambda};
    out.lattice = evaluate_tiles(ps, params, cfg.angles);
    out.report = verify_coupling(g, ps, out.lattice, cfg.pair_budget, cfg.angles);
    out.p_analytic =
        prob_At(cfg.a, cfg.k, cfg.lambda, region_areas(cfg.a, cfg.e_area_resolution, cfg.angles))
            .value;
    out.tiles = int64_t(out.lattice.tiles.size());
    out.points = int64_t(ps.size());
    out.sigma = std::sqrt(out.p_analytic * (1.0 - out.p_analytic) / double(out.tiles));
    out.density_ratio_c =
        out.report.rep_density > 0.0 ? cfg.lambda / out.report.rep_density : 0.0;
    return out;
}

struct KcProbeResult {
    std::vector<std::pair<int, double>> rows;  // (k, mean fraction of inner points in chosen comp)
};

inline KcProbeResult run_kc_probe(const ExperimentConfig& cfg) {
    if (cfg.k_list.empty()) throw config_error("kc-probe: k_list must be nonempty");
    KcProbeResult res;
    std::vector<double> sums(cfg.k_list.size(), 0.0);
    std::vector<int64_t> counts(cfg.k_list.size(), 0);
    for (uint64_t seed : cfg.seeds) {
        const Window outer = cfg.outer_window();
        const Window inner = cfg.inner_window();
        const PointSet ps = sample_binomial(outer, cfg.n, seed);
        int64_t inner_points = 0;
        for (const Point& p : ps.points)
            if (inner.contains(p)) ++inner_points;
        for (size_t i = 0; i < cfg.k_list.size(); ++i) {
            const NNGraph g = build_knn_graph(ps, cfg.k_list[i], cfg.threads);
            const std::vector<uint32_t> obs = observation_set_induced(g, ps, inner);
            sums[i] += inner_points > 0 ? double(obs.size()) / double(inner_points) : 0.0;
            ++counts[i];
        }
    }
    for (size_t i = 0; i < cfg.k_list.size(); ++i)
        res.rows.push_back({cfg.k_list[i], counts[i] > 0 ? sums[i] / double(counts[i]) : 0.0});
    return res;
}

// ---------------------------------------------------------------------------
// report writers

namespace detail {

inline std::string seeds_line(const ExperimentConfig& cfg) {
    std::string s;
    for (size_t i = 0; i < cfg.seeds.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(cfg.seeds[i]);
    }
    return s;
}

inline std::string csv_prelude(const ExperimentConfig& cfg) {
    return "# config_hash=" + cfg.config_hash + "\n# seeds=" + seeds_line(cfg) + "\n";
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

inline json report_base(const ExperimentConfig& cfg) {
    json j;
    j["config_hash"] = cfg.config_hash;
    j["seeds"] = cfg.seeds;
    return j;
}

}  // namespace detail

inline std::string table1_rows_csv(const ExperimentConfig& cfg, const Table1Result& res) {
    std::string out = detail::csv_prelude(cfg);
    out += "n,k,seed,inner_fraction,pairs,avg,max,pct_le_2,pct_le_2x_avg\n";
    for (const DistortionRow& r : res.rows) {
        out += std::to_string(r.n) + ',' + std::to_string(r.k) + ',' + std::to_string(r.seed) +
               ',' + fmt_double(r.inner_fraction) + ',';
        if (r.degenerate) {
            out += "0,nan,nan,nan,nan\n";
        } else {
            out += std::to_string(r.stats.pairs) + ',' + fmt_double(r.stats.avg) + ',' +
                   fmt_double(r.stats.max) + ',' + fmt_double(r.stats.pct_le_2) + ',' +
                   fmt_double(r.stats.pct_le_2x_avg) + '\n';
        }
    }
    return out;
}

inline std::string table1_summary_csv(const ExperimentConfig& cfg, const Table1Result& res) {
    std::string out = detail::csv_prelude(cfg);
    out += "n,k,seeds_used,mean_avg,sd_avg,mean_max,mean_pct_le_2,mean_pct_le_2x_avg\n";
    for (const Table1Summary& s : res.summaries)
        out += std::to_string(s.n) + ',' + std::to_string(s.k) + ',' + std::to_string(s.seeds_used) +
               ',' + fmt_double(s.mean_avg) + ',' + fmt_double(s.sd_avg) + ',' +
               fmt_double(s.mean_max) + ',' + fmt_double(s.mean_pct_le_2) + ',' +
               fmt_double(s.mean_pct_le_2x_avg) + '\n';
    return out;
}

inline void write_table1(const ExperimentConfig& cfg, const Table1Result& res) {
    const std::filesystem::path dir(cfg.out);
    detail::write_file(dir / "table1.csv", table1_rows_csv(cfg, res));
    detail::write_file(dir / "table1_summary.csv", table1_summary_csv(cfg, res));
}

inline json fit_report_json(const ExperimentConfig& cfg, const FitSweepResult& res) {
    json j = detail::report_base(cfg);
    j["a_fit"] = res.fit.a_fit;
    j["rss"] = res.fit.rss;
    json pts = json::array();
    for (const auto& [k, avg] : res.points) pts.push_back({{"k", k}, {"avg", avg}});
    j["points"] = pts;
    j["excluded_k"] = res.excluded_k;
    return j;
}

inline void write_fit_sweep(const ExperimentConfig& cfg, const FitSweepResult& res) {
    const std::filesystem::path dir(cfg.out);
    std::string csv = detail::csv_prelude(cfg);
    csv += "k,k2,avg,fitted\n";
    for (const auto& [k, avg] : res.points) {
        const double k2 = double(k) * double(k);
        csv += std::to_string(k) + ',' + fmt_double(k2) + ',' + fmt_double(avg) + ',' +
               fmt_double(1.0 + res.fit.a_fit / k2) + '\n';
    }
    detail::write_file(dir / "fit_sweep.csv", csv);
    detail::write_file(dir / "fit_report.json", fit_report_json(cfg, res).dump(2) + "\n");

    std::string gp;
    gp += "# generated plot script; run: gnuplot fit_sweep.gp\n";
    gp += detail::csv_prelude(cfg);
    gp += "set datafile separator ','\n";
    gp += "set terminal pngcairo size 800,600\n";
    gp += "set output 'fit_sweep.png'\n";
    gp += "set xlabel 'k^2'\n";
    gp += "set ylabel 'average distortion'\n";
    gp += "a = " + fmt_double(res.fit.a_fit) + "\n";
    gp += "plot 'fit_sweep.csv' skip 3 using 2:3 with points pt 7 title 'measured', \\\n";
    gp += "     1 + a/x with lines title sprintf('1 + %.2f/k^2', a)\n";
    detail::write_file(dir / "fit_sweep.gp", gp);
}

inline json bound_report_json(const ExperimentConfig& cfg, const BoundResult& res) {
    json j = detail::report_base(cfg);
    j["k_star"] = res.k_star;
    j["a_star"] = res.a_star;
    j["p_star"] = res.p_star;
    j["threshold"] = res.threshold;
    j["lambda"] = res.lambda;
    j["e_area"] = res.e_area;
    j["e_area_unit"] = res.e_area_unit;
    j["e_area_resolution"] = res.e_area_resolution;
    j["e_area_halving_delta"] = res.e_area_halving_delta;
    json scan = json::array();
    for (const auto& s : res.scan)
        scan.push_back({{"k", s.k}, {"a_star_k", s.a_star_k}, {"p_star_k", s.p_star_k}});
    j["scan"] = scan;
    return j;
}

inline void write_bound_search(const ExperimentConfig& cfg, const BoundResult& res) {
    detail::write_file(std::filesystem::path(cfg.out) / "bound_report.json",
                       bound_report_json(cfg, res).dump(2) + "\n");
}

inline json coupling_report_json(const ExperimentConfig& cfg, const CouplingRunResult& res) {
    json j = detail::report_base(cfg);
    j["a"] = cfg.a;
    j["k"] = cfg.k;
    j["lambda"] = cfg.lambda;
    j["tiles"] = res.tiles;
    j["points"] = res.points;
    j["open_fraction"] = res.report.open_fraction;
    j["p_analytic"] = res.p_analytic;
    j["sigma"] = res.sigma;
    j["adjacent_checked"] = res.report.adjacent_checked;
    j["adjacent_valid"] = res.report.adjacent_valid;
    j["max_hop_ratio"] = res.report.max_hop_ratio;
    j["c_tiles_estimate"] = res.report.c_tiles_estimate;
    j["rep_pairs_checked"] = res.report.rep_pairs_checked;
    j["rep_pairs_valid"] = res.report.rep_pairs_valid;
    j["alpha_hat"] = res.report.alpha_hat;
    j["alpha_hat_optimal"] = res.report.alpha_hat_optimal;
    j["rho_hat"] = res.report.rho_hat;
    j["spearman_mimic"] = res.report.spearman_mimic;
    j["spearman_chem"] = res.report.spearman_chem;
    j["rep_density"] = res.report.rep_density;
    j["density_ratio_c"] = res.density_ratio_c;
    json deciles = json::array();
    for (const auto& d : res.report.deciles)
        deciles.push_back({{"max_distortion", d.max_distortion},
                           {"max_chem_ratio", d.max_chem_ratio},
                           {"pairs", d.pairs}});
    j["deciles"] = deciles;
    json failures = json::array();
    for (const auto& f : res.report.failures)
        failures.push_back({{"t1", {f.t1.tx, f.t1.ty}},
                            {"t2", {f.t2.tx, f.t2.ty}},
                            {"missing_edge", {f.miss_u, f.miss_v}}});
    j["failures"] = failures;
    return j;
}

inline void write_coupling_verify(const ExperimentConfig& cfg, const CouplingRunResult& res) {
    const std::filesystem::path dir(cfg.out);
    detail::write_file(dir / "coupling_report.json",
                       coupling_report_json(cfg, res).dump(2) + "\n");
    detail::write_file(dir / "lattice.csv", detail::csv_prelude(cfg) + lattice_to_csv(res.lattice));
}

inline void write_kc_probe(const ExperimentConfig& cfg, const KcProbeResult& res) {
    std::string csv = detail::csv_prelude(cfg);
    csv += "k,fraction\n";
    for (const auto& [k, f] : res.rows) csv += std::to_string(k) + ',' + fmt_double(f) + '\n';
    detail::write_file(std::filesystem::path(cfg.out) / "kc_probe.csv", csv);
}

inline void write_sample(const ExperimentConfig& cfg) {
    const Window w = cfg.outer_window();
    PointSet ps;
    if (cfg.mode == "poisson")
        ps = sample_poisson(w, cfg.lambda, cfg.seeds.at(0));
    else
        ps = sample_binomial(w, cfg.n, cfg.seeds.at(0));
    const std::filesystem::path dir(cfg.out);
    detail::write_file(dir / "points.csv", detail::csv_prelude(cfg) + points_to_csv(ps));
    json meta = detail::report_base(cfg);
    meta["seed"] = ps.seed;
    meta["mode"] = cfg.mode;
    if (cfg.mode == "poisson")
        meta["lambda"] = ps.lambda;
    else
        meta["n"] = ps.n_target;
    meta["window"] = {{"xmin", w.xmin}, {"ymin", w.ymin}, {"xmax", w.xmax}, {"ymax", w.ymax}};
    meta["count"] = ps.size();
    detail::write_file(dir / "points_meta.json", meta.dump(2) + "\n");
    if (cfg.export_knn > 0) {
        const NNGraph g = build_knn_graph(ps, cfg.export_knn, cfg.threads);
        detail::write_file(dir / "graph.csv", detail::csv_prelude(cfg) + graph_to_csv(g));
        detail::write_file(dir / "graph_meta.json", graph_meta_json(g, ps.seed));
    }
}

}  // namespace nnperc
