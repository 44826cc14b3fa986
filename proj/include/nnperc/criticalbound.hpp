#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <nnperc/core.hpp>
#include <nnperc/pointproc.hpp>
#include <nnperc/rng.hpp>
#include <nnperc/tilegeom.hpp>

namespace nnperc {

// P(Poisson(mu) <= K). Terms are evaluated in the log domain and accumulated
// with compensated summation; absolute error below 1e-12 over the parameter
// ranges used here.
inline double poisson_cdf(int64_t K, double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("poisson_cdf: mu must be finite and >= 0");
    if (K < 0) return 0.0;
    if (mu == 0.0) return 1.0;
    const double logmu = std::log(mu);
    double sum = 0.0, comp = 0.0;
    for (int64_t j = 0; j <= K; ++j) {
        const double term = std::exp(double(j) * logmu - mu - std::lgamma(double(j) + 1.0));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (double(j) > mu && term < 1e-22) break;
    }
    return std::min(sum, 1.0);
}

enum class ProbMethod { analytic, monte_carlo };

struct EventProb {
    double value = 0.0;
    ProbMethod method = ProbMethod::analytic;
    double ci_halfwidth = 0.0;  // 3 standard errors for Monte Carlo, 0 for analytic
    double a = 0.0;
    int k = 0;
    double lambda = 0.0;
};

// Areas of the disjoint tile regions: five congruent discs, four congruent
// trimmed lens regions.
struct RegionAreas {
    double disc = 0.0;
    double lens = 0.0;
};

inline RegionAreas region_areas(double a, int resolution = 2000,
                                int angles = TileGeometry::default_angles) {
    RegionAreas ar;
    ar.disc = M_PI * a * a;
    ar.lens = e_region_area(a, resolution, angles);
    return ar;
}

// P(A_t): the tile holds at most floor(k/2) points and each of the nine
// disjoint regions holds at least one. Inclusion-exclusion over the empty
// region subsets, grouped by symmetry: c in {0,1} central discs, j side
// discs, e lens regions. Counts in disjoint regions are independent, so a
// term with total empty area S contributes
//   exp(-lambda*S) * P(Poisson(lambda*(tile - S)) <= K).
inline EventProb prob_At(double a, int k, double lambda, const RegionAreas& areas) {
    if (!(a > 0.0)) throw std::invalid_argument("prob_At: a must be > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("prob_At: lambda must be finite and >= 0");
    if (k < 0) throw std::invalid_argument("prob_At: k must be >= 0");
    const double tile = 100.0 * a * a;
    if (!(areas.disc > 0.0) || !(areas.lens > 0.0) ||
        5.0 * areas.disc + 4.0 * areas.lens > tile)
        throw geometry_error("prob_At: region areas inconsistent with tile");
    const int64_t K = k / 2;
    static const double choose4[5] = {1, 4, 6, 4, 1};
    double p = 0.0;
    for (int c = 0; c <= 1; ++c) {
        for (int j = 0; j <= 4; ++j) {
            for (int e = 0; e <= 4; ++e) {
                const double empty = double(c + j) * areas.disc + double(e) * areas.lens;
                const double sign = ((c + j + e) % 2 == 0) ? 1.0 : -1.0;
                p += sign * choose4[j] * choose4[e] * std::exp(-lambda * empty) *
                     poisson_cdf(K, lambda * (tile - empty));
            }
        }
    }
    EventProb out;
    out.value = std::clamp(p, 0.0, 1.0);
    out.method = ProbMethod::analytic;
    out.ci_halfwidth = 0.0;
    out.a = a;
    out.k = k;
    out.lambda = lambda;
    return out;
}

// Single-tile Monte Carlo estimate of P(A_t); the oracle for prob_At.
// Trials are keyed by index so the result is independent of scheduling.
inline EventProb mc_prob_At(double a, int k, double lambda, int64_t trials, uint64_t seed,
                            int angles = TileGeometry::default_angles) {
    if (trials < 1000) throw std::invalid_argument("mc_prob_At: trials must be >= 1000");
    auto geom = shared_geometry(a, angles);
    const double side = 10.0 * a;
    const double mu = lambda * 100.0 * a * a;
    const int64_t K = k / 2;
    int64_t open = 0;
    std::vector<Point> pts;
    for (int64_t t = 0; t < trials; ++t) {
        CounterRng rng(seed, stream::mc_tile_base + uint64_t(t));
        const int64_t n = poisson_count(rng, mu);
        if (n > K) continue;
        pts.clear();
        for (int64_t i = 0; i < n; ++i) {
            const double x = (rng.next_double() - 0.5) * side;
            const double y = (rng.next_double() - 0.5) * side;
            pts.push_back({x, y});
        }
        uint32_t occupied = 0;
        for (const Point& q : pts) {
            auto r = geom->classify(q);
            if (r) occupied |= 1u << uint32_t(*r);
        }
        if (occupied == 0x1FFu) ++open;
    }
    EventProb out;
    out.value = double(open) / double(trials);
    out.method = ProbMethod::monte_carlo;
    out.ci_halfwidth = 3.0 * std::sqrt(out.value * (1.0 - out.value) / double(trials));
    out.a = a;
    out.k = k;
    out.lambda = lambda;
    return out;
}

struct ASearchSchedule {
    double a_lo = 0.5;
    double a_hi = 1.5;
    double coarse_step = 0.005;
    int refinements = 2;  // each at 10x resolution around the incumbent
};

struct AOptimum {
    double a_star = 0.0;
    double p_star = 0.0;
};

// Best tile parameter for fixed k: coarse grid scan then local refinement.
// No unimodality assumption; the refinement never migrates past the
// neighbours of the coarse optimum.
inline AOptimum optimize_a(int k, double lambda, const ASearchSchedule& sched,
                           double unit_lens_area) {
    if (!(sched.a_lo > 0.0) || !(sched.a_hi > sched.a_lo) || !(sched.coarse_step > 0.0))
        throw std::invalid_argument("optimize_a: empty or invalid a range");
    if (!(unit_lens_area > 0.0)) throw std::invalid_argument("optimize_a: unit lens area must be > 0");
    auto eval = [&](double a) {
        RegionAreas ar;
        ar.disc = M_PI * a * a;
        ar.lens = unit_lens_area * a * a;
        return prob_At(a, k, lambda, ar).value;
    };
    AOptimum best{sched.a_lo, -1.0};
    auto scan = [&](double lo, double hi, double step) {
        for (double x = lo; x <= hi + 0.5 * step; x += step) {
            const double a = std::min(x, hi);
            const double p = eval(a);
            if (p > best.p_star) best = {a, p};
        }
    };
    scan(sched.a_lo, sched.a_hi, sched.coarse_step);
    double step = sched.coarse_step;
    for (int r = 0; r < sched.refinements; ++r) {
        const double lo = std::max(sched.a_lo, best.a_star - step);
        const double hi = std::min(sched.a_hi, best.a_star + step);
        step /= 10.0;
        scan(lo, hi, step);
    }
    return best;
}

struct BoundResult {
    int k_star = 0;
    double a_star = 0.0;
    double p_star = 0.0;
    double threshold = 0.0;
    double lambda = 0.0;
    double e_area = 0.0;            // lens area at a_star
    double e_area_unit = 0.0;       // lens area at a = 1
    int e_area_resolution = 0;
    double e_area_halving_delta = 0.0;  // |area(res) - area(res/2)| / area(res)
    struct ScanEntry {
        int k;
        double a_star_k;
        double p_star_k;
    };
    std::vector<ScanEntry> scan;  // every k evaluated during the search
};

struct KSearchRange {
    int k_lo = 18;
    int k_hi = 400;
};

// Smallest k whose optimized P(A_t) exceeds the threshold. P(A_t) is
// nondecreasing in k (K = floor(k/2) only relaxes the count cap), so binary
// search applies; a linear scan of +/-3 around the candidate confirms it.
inline BoundResult min_k(double threshold, double lambda, const KSearchRange& range = {},
                         const ASearchSchedule& sched = {}, int e_area_resolution = 2000,
                         int angles = TileGeometry::default_angles) {
    if (!(threshold > 0.0) || !(threshold < 1.0))
        throw std::invalid_argument("min_k: threshold must be in (0,1)");
    if (range.k_lo < 0 || range.k_hi < range.k_lo) throw std::invalid_argument("min_k: bad k range");

    const double e_unit = e_region_area(1.0, e_area_resolution, angles);
    const double e_half = e_region_area(1.0, std::max(100, e_area_resolution / 2), angles);

    std::map<int, AOptimum> cache;
    auto opt = [&](int k) -> const AOptimum& {
        auto it = cache.find(k);
        if (it == cache.end()) it = cache.emplace(k, optimize_a(k, lambda, sched, e_unit)).first;
        return it->second;
    };

    int lo = range.k_lo, hi = range.k_hi;
    if (!(opt(hi).p_star > threshold)) {
        AOptimum best{0.0, -1.0};
        int best_k = range.k_lo;
        for (const auto& [k, o] : cache)
            if (o.p_star > best.p_star) best = o, best_k = k;
        throw not_found_error("min_k: no k in range exceeds threshold " + fmt_double(threshold),
                              best_k, best.a_star, best.p_star);
    }
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (opt(mid).p_star > threshold)
            hi = mid;
        else
            lo = mid + 1;
    }
    int k_star = lo;
    // confirmation scan: the two-step plateau of floor(k/2) makes off-by-one
    // mistakes cheap to detect
    for (int k = std::max(range.k_lo, k_star - 3); k <= std::min(range.k_hi, k_star + 3); ++k) {
        const bool above = opt(k).p_star > threshold;
        if (above && k < k_star) k_star = k;
        if (!above && k >= k_star)
            throw std::logic_error("min_k: monotonicity violated near k = " + std::to_string(k));
    }

    BoundResult res;
    res.k_star = k_star;
    res.a_star = opt(k_star).a_star;
    res.p_star = opt(k_star).p_star;
    res.threshold = threshold;
    res.lambda = lambda;
    res.e_area_unit = e_unit;
    res.e_area = e_unit * res.a_star * res.a_star;
    res.e_area_resolution = e_area_resolution;
    res.e_area_halving_delta = std::abs(e_unit - e_half) / e_unit;
    for (const auto& [k, o] : cache) res.scan.push_back({k, o.a_star, o.p_star});
    return res;
}

}  // namespace nnperc
