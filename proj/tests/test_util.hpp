#pragma once

// Test-side oracles, independent of the library implementations they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include <nnperc/nngraph.hpp>
#include <nnperc/pointproc.hpp>

namespace oracle {

// Regularized upper incomplete gamma Q(a, x) by series / continued fraction.
inline double gammq(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq: bad arguments");
    auto series_p = [&]() {  // P(a,x) by series, x < a+1
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    };
    auto contfrac_q = [&]() {  // Q(a,x) by continued fraction, x >= a+1
        const double tiny = 1e-300;
        double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
        for (int i = 1; i <= 500; ++i) {
            const double an = -double(i) * (double(i) - a);
            b += 2.0;
            d = an * d + b;
            if (std::fabs(d) < tiny) d = tiny;
            c = b + an / c;
            if (std::fabs(c) < tiny) c = tiny;
            d = 1.0 / d;
            const double del = d * c;
            h *= del;
            if (std::fabs(del - 1.0) < 1e-15) break;
        }
        return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    };
    if (x == 0.0) return 1.0;
    return (x < a + 1.0) ? 1.0 - series_p() : contfrac_q();
}

// p-value of a chi-square statistic.
inline double chi2_pvalue(double stat, int dof) { return gammq(0.5 * dof, 0.5 * stat); }

// Component labeling by breadth-first search.
inline std::vector<uint32_t> bfs_components(const nnperc::NNGraph& g) {
    std::vector<uint32_t> label(g.n, UINT32_MAX);
    uint32_t next = 0;
    for (uint32_t s = 0; s < g.n; ++s) {
        if (label[s] != UINT32_MAX) continue;
        label[s] = next;
        std::deque<uint32_t> q{s};
        while (!q.empty()) {
            const uint32_t u = q.front();
            q.pop_front();
            auto r = g.row(u);
            for (const uint32_t* p = r.nbr_begin; p != r.nbr_end; ++p)
                if (label[*p] == UINT32_MAX) {
                    label[*p] = next;
                    q.push_back(*p);
                }
        }
        ++next;
    }
    return label;
}

// Bellman-Ford shortest paths; the oracle for Dijkstra.
inline std::vector<double> bellman_ford(const nnperc::NNGraph& g, uint32_t source) {
    std::vector<double> dist(g.n, std::numeric_limits<double>::infinity());
    dist[source] = 0.0;
    for (uint32_t round = 0; round + 1 < g.n; ++round) {
        bool changed = false;
        for (uint32_t u = 0; u < g.n; ++u) {
            if (!std::isfinite(dist[u])) continue;
            auto r = g.row(u);
            for (size_t j = 0; j < size_t(r.nbr_end - r.nbr_begin); ++j) {
                const double nd = dist[u] + r.len_begin[j];
                if (nd < dist[r.nbr_begin[j]]) {
                    dist[r.nbr_begin[j]] = nd;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return dist;
}

// P(Poisson(mu) <= K) in 80-bit extended precision via a Horner-style
// evaluation of sum mu^j/j!; an independent high-precision route.
inline double poisson_cdf_highprec(int64_t K, double mu) {
    if (K < 0) return 0.0;
    if (mu == 0.0) return 1.0;
    long double acc = 1.0L;  // innermost term
    for (int64_t j = K; j >= 1; --j) acc = 1.0L + acc * (long double)(mu) / (long double)(j);
    return double(acc * expl(-(long double)mu));
}

// Directed k-nearest lists by full scan with the (distance, index) tie rule.
inline std::vector<uint32_t> brute_knn_list(const nnperc::PointSet& ps, uint32_t i, int k) {
    std::vector<std::pair<double, uint32_t>> cand;
    for (uint32_t j = 0; j < ps.size(); ++j)
        if (j != i) cand.push_back({nnperc::dist2(ps.points[i], ps.points[j]), j});
    std::sort(cand.begin(), cand.end());
    std::vector<uint32_t> out;
    for (int j = 0; j < k; ++j) out.push_back(cand[size_t(j)].second);
    return out;
}

inline std::vector<std::pair<uint32_t, uint32_t>> edge_list(const nnperc::NNGraph& g) {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (uint32_t u = 0; u < g.n; ++u) {
        auto r = g.row(u);
        for (const uint32_t* p = r.nbr_begin; p != r.nbr_end; ++p)
            if (*p > u) out.push_back({u, *p});
    }
    return out;
}

}  // namespace oracle
