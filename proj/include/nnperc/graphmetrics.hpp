#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <nnperc/core.hpp>
#include <nnperc/nngraph.hpp>
#include <nnperc/pointproc.hpp>
#include <nnperc/union_find.hpp>

namespace nnperc {

struct ComponentLabeling {
    std::vector<uint32_t> label;  // per-vertex component id, dense from 0
    std::vector<uint32_t> sizes;  // per-component vertex count

    uint32_t component_count() const { return uint32_t(sizes.size()); }
};

inline ComponentLabeling components(const NNGraph& g) {
    UnionFind uf(g.n);
    for (uint32_t u = 0; u < g.n; ++u) {
        auto r = g.row(u);
        for (const uint32_t* p = r.nbr_begin; p != r.nbr_end; ++p)
            if (*p > u) uf.merge(u, *p);
    }
    ComponentLabeling out;
    out.label.assign(g.n, 0);
    std::vector<uint32_t> root_to_id(g.n, UINT32_MAX);
    for (uint32_t v = 0; v < g.n; ++v) {
        const uint32_t root = uf.find(v);
        if (root_to_id[root] == UINT32_MAX) {
            root_to_id[root] = uint32_t(out.sizes.size());
            out.sizes.push_back(0);
        }
        out.label[v] = root_to_id[root];
        ++out.sizes[out.label[v]];
    }
    return out;
}

// Vertices inside `inner` belonging to the component with the most vertices
// inside `inner` (ties go to the smaller component id). Empty result when no
// vertex lies inside.
inline std::vector<uint32_t> observation_set(const PointSet& ps, const ComponentLabeling& labeling,
                                             const Window& inner) {
    if (labeling.label.size() != ps.size())
        throw std::invalid_argument("observation_set: labeling does not match point set");
    std::vector<uint32_t> inner_count(labeling.sizes.size(), 0);
    for (uint32_t v = 0; v < ps.size(); ++v)
        if (inner.contains(ps.points[v])) ++inner_count[labeling.label[v]];
    uint32_t best = 0;
    bool any = false;
    for (uint32_t c = 0; c < inner_count.size(); ++c) {
        if (inner_count[c] == 0) continue;
        if (!any || inner_count[c] > inner_count[best]) {
            best = c;
            any = true;
        }
    }
    std::vector<uint32_t> out;
    if (!any) return out;
    for (uint32_t v = 0; v < ps.size(); ++v)
        if (labeling.label[v] == best && inner.contains(ps.points[v])) out.push_back(v);
    return out;
}

// Largest connected component of the subgraph induced on the vertices inside
// `inner`: the component must form within the inner box, not merely reach
// into it. This is the observation protocol of the distortion experiments;
// it drops inner vertices whose only connections run far outside the box,
// whose detour ratios would otherwise dominate the statistics near the
// percolation threshold. Ties go to the component containing the smallest
// vertex index.
inline std::vector<uint32_t> observation_set_induced(const NNGraph& g, const PointSet& ps,
                                                     const Window& inner) {
    std::vector<int64_t> local(ps.size(), -1);
    std::vector<uint32_t> verts;
    for (uint32_t v = 0; v < ps.size(); ++v)
        if (inner.contains(ps.points[v])) {
            local[v] = int64_t(verts.size());
            verts.push_back(v);
        }
    if (verts.empty()) return {};
    UnionFind uf(verts.size());
    for (uint32_t i = 0; i < verts.size(); ++i) {
        auto r = g.row(verts[i]);
        for (const uint32_t* p = r.nbr_begin; p != r.nbr_end; ++p)
            if (local[*p] >= 0) uf.merge(i, uint32_t(local[*p]));
    }
    uint32_t best_root = uf.find(0);
    size_t best_size = uf.size_of(0);
    for (uint32_t i = 1; i < verts.size(); ++i) {
        if (uf.size_of(i) > best_size) {
            best_size = uf.size_of(i);
            best_root = uf.find(i);
        }
    }
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < verts.size(); ++i)
        if (uf.find(i) == best_root) out.push_back(verts[i]);
    return out;
}

// Exact single-source shortest paths (Dijkstra, binary heap); unreachable
// vertices keep +infinity.
inline std::vector<double> sssp(const NNGraph& g, uint32_t source) {
    if (source >= g.n) throw std::invalid_argument("sssp: source out of range");
    std::vector<double> dist(g.n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[source] = 0.0;
    pq.push({0.0, source});
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        auto r = g.row(u);
        for (size_t j = 0; j < size_t(r.nbr_end - r.nbr_begin); ++j) {
            const uint32_t v = r.nbr_begin[j];
            const double nd = d + r.len_begin[j];
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return dist;
}

struct DistortionStats {
    double avg = 0.0;
    double max = 0.0;
    double pct_le_2 = 0.0;       // share of pairs with ratio <= 2, percent
    double pct_le_2x_avg = 0.0;  // share of pairs with ratio <= 2*avg, percent
    uint64_t pairs = 0;
};

// Distortion of every unordered vertex pair: graph distance over Euclidean
// distance. All vertices must lie in one component; a disconnected pair is a
// precondition error naming the offending pair, not a silent skip. One
// Dijkstra per member vertex; `sample_pairs` > 0 keeps only that many pairs,
// chosen deterministically from `seed`.
inline DistortionStats distortion_stats(const NNGraph& g, const PointSet& ps,
                                        const std::vector<uint32_t>& vertices, int threads = 0,
                                        uint64_t sample_pairs = 0, uint64_t seed = 0) {
    if (vertices.size() < 2)
        throw std::invalid_argument("distortion_stats: need at least 2 vertices");
    const size_t m = vertices.size();

    // ratios for pairs (i, j>i), grouped by source i in fixed order
    std::vector<std::vector<double>> ratios(m);
    const unsigned nt = std::min<unsigned>(resolve_threads(threads), unsigned(m));
    std::vector<std::pair<uint32_t, uint32_t>> bad(nt, {UINT32_MAX, UINT32_MAX});
    parallel_run(nt, [&](unsigned t) {
        const size_t lo = m * t / nt, hi = m * (t + 1) / nt;
        for (size_t i = lo; i < hi; ++i) {
            if (i + 1 == m) continue;
            const auto dist_from = sssp(g, vertices[i]);
            auto& row = ratios[i];
            row.reserve(m - i - 1);
            for (size_t j = i + 1; j < m; ++j) {
                const double dg = dist_from[vertices[j]];
                if (!std::isfinite(dg)) {
                    if (bad[t].first == UINT32_MAX) bad[t] = {vertices[i], vertices[j]};
                    return;
                }
                const double de = dist(ps.points[vertices[i]], ps.points[vertices[j]]);
                const double ratio = de > 0.0 ? dg / de : 1.0;
                // graph distance can never undercut the straight line
                if (ratio < 1.0 - 1e-9)
                    throw std::logic_error("distortion_stats: ratio below 1 for pair " +
                                           std::to_string(vertices[i]) + "," +
                                           std::to_string(vertices[j]));
                row.push_back(ratio);
            }
        }
    });
    std::pair<uint32_t, uint32_t> worst{UINT32_MAX, UINT32_MAX};
    for (const auto& b : bad)
        if (b.first != UINT32_MAX && b < worst) worst = b;
    if (worst.first != UINT32_MAX)
        throw std::invalid_argument("distortion_stats: vertices " + std::to_string(worst.first) +
                                    " and " + std::to_string(worst.second) +
                                    " are in different components");

    std::vector<double> all;
    all.reserve(m * (m - 1) / 2);
    for (const auto& row : ratios) all.insert(all.end(), row.begin(), row.end());

    if (sample_pairs > 0 && sample_pairs < all.size()) {
        CounterRng rng(seed, stream::pair_pick);
        for (uint64_t i = 0; i < sample_pairs; ++i) {  // partial Fisher-Yates
            const uint64_t j = i + rng.next_below(all.size() - i);
            std::swap(all[i], all[j]);
        }
        all.resize(sample_pairs);
    }

    DistortionStats st;
    st.pairs = all.size();
    long double sum = 0.0;
    uint64_t le2 = 0;
    for (double r : all) {
        sum += r;
        st.max = std::max(st.max, r);
        if (r <= 2.0) ++le2;
    }
    st.avg = double(sum / (long double)(all.size()));
    uint64_t le2avg = 0;
    for (double r : all)
        if (r <= 2.0 * st.avg) ++le2avg;
    st.pct_le_2 = 100.0 * double(le2) / double(all.size());
    st.pct_le_2x_avg = 100.0 * double(le2avg) / double(all.size());
    return st;
}

struct FitResult {
    double a_fit = 0.0;
    double rss = 0.0;
    uint32_t points_used = 0;
};

// Least-squares fit of avg_k = 1 + a/k^2. Closed form:
// a = sum((avg_k - 1)/k^2) / sum(1/k^4).
inline FitResult sweep_k_fit(const std::vector<std::pair<int, double>>& samples) {
    if (samples.empty()) throw std::invalid_argument("sweep_k_fit: empty input");
    int distinct = 1;
    for (size_t i = 1; i < samples.size(); ++i)
        if (samples[i].first != samples[0].first) {
            distinct = 2;
            break;
        }
    if (distinct < 2) throw std::invalid_argument("sweep_k_fit: need at least 2 distinct k values");
    double num = 0.0, den = 0.0;
    for (const auto& [k, avg] : samples) {
        if (k <= 0) throw std::invalid_argument("sweep_k_fit: k must be positive");
        const double k2 = double(k) * double(k);
        num += (avg - 1.0) / k2;
        den += 1.0 / (k2 * k2);
    }
    FitResult fit;
    fit.a_fit = num / den;
    fit.points_used = uint32_t(samples.size());
    for (const auto& [k, avg] : samples) {
        const double r = avg - (1.0 + fit.a_fit / (double(k) * double(k)));
        fit.rss += r * r;
    }
    return fit;
}

}  // namespace nnperc
