#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nnperc/core.hpp>
#include <nnperc/grid_index.hpp>
#include <nnperc/pointproc.hpp>

namespace nnperc {

// Undirected k-nearest-neighbour graph in forward-star layout. An edge
// {u,v} exists iff v is among u's k nearest or u among v's k nearest; the
// stored length is the Euclidean distance of the endpoints. Immutable after
// construction.
struct NNGraph {
    int k = 0;
    uint32_t n = 0;
    std::vector<uint32_t> offsets;    // n+1 entries
    std::vector<uint32_t> neighbors;  // sorted by index within each row
    std::vector<double> lengths;

    size_t degree(uint32_t v) const { return offsets[v + 1] - offsets[v]; }
    size_t edge_count() const { return neighbors.size() / 2; }

    struct Row {
        const uint32_t* nbr_begin;
        const uint32_t* nbr_end;
        const double* len_begin;
    };
    Row row(uint32_t v) const {
        return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1],
                lengths.data() + offsets[v]};
    }

    bool has_edge(uint32_t u, uint32_t v) const {
        auto r = row(u);
        return std::binary_search(r.nbr_begin, r.nbr_end, v);
    }

    // Length of edge {u,v}; throws if absent.
    double edge_length(uint32_t u, uint32_t v) const {
        auto r = row(u);
        const uint32_t* it = std::lower_bound(r.nbr_begin, r.nbr_end, v);
        if (it == r.nbr_end || *it != v)
            throw std::invalid_argument("edge_length: no edge " + std::to_string(u) + "-" +
                                        std::to_string(v));
        return r.len_begin[it - r.nbr_begin];
    }
};

inline unsigned resolve_threads(int threads) {
    if (threads > 0) return unsigned(threads);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Run fn(t) on `threads` workers; fn must partition its own work by t.
inline void parallel_run(unsigned threads, const std::function<void(unsigned)>& fn) {
    if (threads <= 1) {
        fn(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(fn, t);
    for (auto& th : pool) th.join();
}

namespace detail {

// Directed k-NN lists -> symmetric forward-star graph. The per-vertex lists
// are concatenated as (min,max) pairs, sorted and deduplicated, so mutual
// nearest neighbours contribute a single undirected edge.
inline NNGraph symmetrize(const PointSet& ps, int k, const std::vector<uint32_t>& knn) {
    const uint32_t n = uint32_t(ps.size());
    std::vector<uint64_t> edges;
    edges.reserve(size_t(n) * size_t(k));
    for (uint32_t u = 0; u < n; ++u) {
        for (int j = 0; j < k; ++j) {
            const uint32_t v = knn[size_t(u) * size_t(k) + size_t(j)];
            const uint32_t lo = std::min(u, v), hi = std::max(u, v);
            edges.push_back((uint64_t(lo) << 32) | hi);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    NNGraph g;
    g.k = k;
    g.n = n;
    g.offsets.assign(size_t(n) + 1, 0);
    for (uint64_t e : edges) {
        ++g.offsets[uint32_t(e >> 32) + 1];
        ++g.offsets[uint32_t(e & 0xFFFFFFFFu) + 1];
    }
    for (size_t v = 1; v < g.offsets.size(); ++v) g.offsets[v] += g.offsets[v - 1];
    g.neighbors.resize(edges.size() * 2);
    g.lengths.resize(edges.size() * 2);
    std::vector<uint32_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
    for (uint64_t e : edges) {
        const uint32_t u = uint32_t(e >> 32), v = uint32_t(e & 0xFFFFFFFFu);
        const double len = dist(ps.points[u], ps.points[v]);
        g.neighbors[cursor[u]] = v;
        g.lengths[cursor[u]++] = len;
        g.neighbors[cursor[v]] = u;
        g.lengths[cursor[v]++] = len;
    }
    // rows come out sorted because the edge list is sorted by (lo,hi) and,
    // for the reverse direction, lo increases while scanning each hi's edges
    // in order; verify cheaply in debug builds
#ifndef NDEBUG
    for (uint32_t v = 0; v < n; ++v) {
        auto r = g.row(v);
        if (!std::is_sorted(r.nbr_begin, r.nbr_end)) throw std::logic_error("symmetrize: row not sorted");
    }
#endif
    return g;
}

}  // namespace detail

inline void validate_graph_params(const PointSet& ps, int k) {
    const int64_t n = int64_t(ps.size());
    if (n < 2) throw std::invalid_argument("build_knn_graph: need at least 2 points");
    if (k < 1 || int64_t(k) > n - 1)
        throw std::invalid_argument("build_knn_graph: need 1 <= k <= n-1 (n=" + std::to_string(n) +
                                    ", k=" + std::to_string(k) + ")");
}

inline NNGraph build_knn_graph(const PointSet& ps, int k, int threads = 0) {
    validate_graph_params(ps, k);
    const uint32_t n = uint32_t(ps.size());
    const GridIndex index(ps, default_cellsize(ps));
    std::vector<uint32_t> knn(size_t(n) * size_t(k));
    const unsigned nt = std::min<unsigned>(resolve_threads(threads), n);
    parallel_run(nt, [&](unsigned t) {
        const uint32_t lo = uint32_t(uint64_t(n) * t / nt);
        const uint32_t hi = uint32_t(uint64_t(n) * (t + 1) / nt);
        for (uint32_t i = lo; i < hi; ++i) {
            auto nb = knn_query(index, ps, i, k);
            std::copy(nb.begin(), nb.end(), knn.begin() + size_t(i) * size_t(k));
        }
    });
    return detail::symmetrize(ps, k, knn);
}

// Exhaustive O(n^2) construction with the same (distance, index) tie rule;
// the verification oracle for build_knn_graph.
inline NNGraph brute_force_knn_graph(const PointSet& ps, int k) {
    validate_graph_params(ps, k);
    const uint32_t n = uint32_t(ps.size());
    std::vector<uint32_t> knn(size_t(n) * size_t(k));
    std::vector<std::pair<double, uint32_t>> cand(n - 1);
    for (uint32_t i = 0; i < n; ++i) {
        cand.clear();
        for (uint32_t j = 0; j < n; ++j)
            if (j != i) cand.push_back({dist2(ps.points[i], ps.points[j]), j});
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (int j = 0; j < k; ++j) knn[size_t(i) * size_t(k) + size_t(j)] = cand[j].second;
    }
    return detail::symmetrize(ps, k, knn);
}

// Sidecar metadata for the edge-list export.
inline std::string graph_meta_json(const NNGraph& g, uint64_t seed) {
    return std::string("{\"n\": ") + std::to_string(g.n) + ", \"k\": " + std::to_string(g.k) +
           ", \"seed\": " + std::to_string(seed) + "}\n";
}

inline std::string graph_to_csv(const NNGraph& g) {
    std::string out = "u,v,length\n";
    for (uint32_t u = 0; u < g.n; ++u) {
        auto r = g.row(u);
        for (const uint32_t* p = r.nbr_begin; p != r.nbr_end; ++p) {
            if (*p < u) continue;  // emit each edge once, u < v
            out += std::to_string(u);
            out += ',';
            out += std::to_string(*p);
            out += ',';
            out += fmt_double(r.len_begin[p - r.nbr_begin]);
            out += '\n';
        }
    }
    return out;
}

}  // namespace nnperc
