#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nnperc/core.hpp>
#include <nnperc/graphmetrics.hpp>
#include <nnperc/nngraph.hpp>
#include <nnperc/pointproc.hpp>
#include <nnperc/tilegeom.hpp>
#include <nnperc/union_find.hpp>

namespace nnperc {

struct TileParams {
    double a = 0.893;
    int k = 188;
    double lambda = 1.0;

    int64_t K() const { return int64_t(k) / 2; }

    void validate() const {
        if (!(a > 0.0)) throw std::invalid_argument("TileParams: a must be > 0");
        if (k < 0) throw std::invalid_argument("TileParams: k must be >= 0");
        if (!(lambda > 0.0)) throw std::invalid_argument("TileParams: lambda must be > 0");
    }
};

struct TileCoord {
    int64_t tx = 0;
    int64_t ty = 0;
    bool operator==(const TileCoord& o) const { return tx == o.tx && ty == o.ty; }
};

// Site-percolation coupling state: the tile grid carved from the window,
// the per-tile open flag (event A_t), region occupancy counts, and the
// representative point of each open tile.
struct TileLattice {
    double a = 0.0;
    int64_t K = 0;
    double origin_x = 0.0;  // window corner where tile (0,0) starts
    double origin_y = 0.0;
    int64_t nx = 0;  // lattice dimensions, the bijection to Z^2 is
    int64_t ny = 0;  // (tx, ty) in [0,nx) x [0,ny)

    struct Tile {
        bool open = false;
        int64_t count = 0;                  // points inside the tile
        std::array<uint32_t, 9> region{};   // occupancy per RegionId
        int64_t rep = -1;                   // representative point index, -1 if none
    };
    std::vector<Tile> tiles;

    size_t idx(TileCoord t) const { return size_t(t.ty) * size_t(nx) + size_t(t.tx); }
    bool in_range(TileCoord t) const { return t.tx >= 0 && t.tx < nx && t.ty >= 0 && t.ty < ny; }
    const Tile& at(TileCoord t) const { return tiles[idx(t)]; }

    Point tile_center(TileCoord t) const {
        const double side = 10.0 * a;
        return {origin_x + (double(t.tx) + 0.5) * side, origin_y + (double(t.ty) + 0.5) * side};
    }

    double covered_area() const { return double(nx) * double(ny) * 100.0 * a * a; }

    int64_t open_count() const {
        int64_t n = 0;
        for (const Tile& t : tiles) n += t.open ? 1 : 0;
        return n;
    }
};

// Classify every point into its tile and evaluate the event A_t per tile:
// at most floor(k/2) points in the tile and all nine regions occupied.
// Tiles are half-open squares so each point belongs to exactly one tile;
// the window is trimmed to whole tiles, points outside the trimmed area are
// ignored. The representative is the C0 point nearest the tile centre
// (ties to the lower index).
inline TileLattice evaluate_tiles(const PointSet& ps, const TileParams& params,
                                  int angles = TileGeometry::default_angles) {
    params.validate();
    auto geom = shared_geometry(params.a, angles);
    const double side = 10.0 * params.a;

    TileLattice lat;
    lat.a = params.a;
    lat.K = params.K();
    lat.origin_x = ps.window.xmin;
    lat.origin_y = ps.window.ymin;
    lat.nx = int64_t(std::floor(ps.window.width() / side + 1e-9));
    lat.ny = int64_t(std::floor(ps.window.height() / side + 1e-9));
    if (lat.nx < 1 || lat.ny < 1)
        throw std::invalid_argument("evaluate_tiles: window smaller than one tile");
    lat.tiles.assign(size_t(lat.nx) * size_t(lat.ny), {});

    // nearest-to-centre candidate per tile: (squared distance, index)
    std::vector<std::pair<double, int64_t>> best(lat.tiles.size(),
                                                 {std::numeric_limits<double>::infinity(), -1});

    for (size_t i = 0; i < ps.size(); ++i) {
        const Point p = ps.points[i];
        const int64_t tx = int64_t(std::floor((p.x - lat.origin_x) / side));
        const int64_t ty = int64_t(std::floor((p.y - lat.origin_y) / side));
        if (tx < 0 || tx >= lat.nx || ty < 0 || ty >= lat.ny) continue;
        const size_t t = size_t(ty) * size_t(lat.nx) + size_t(tx);
        TileLattice::Tile& tile = lat.tiles[t];
        ++tile.count;
        const Point c = lat.tile_center({tx, ty});
        const Point q{p.x - c.x, p.y - c.y};
        auto r = geom->classify(q);
        if (!r) continue;
        ++tile.region[size_t(*r)];
        if (*r == RegionId::C0) {
            const std::pair<double, int64_t> cand{dist2(p, c), int64_t(i)};
            if (cand < best[t]) best[t] = cand;
        }
    }

    for (size_t t = 0; t < lat.tiles.size(); ++t) {
        TileLattice::Tile& tile = lat.tiles[t];
        bool open = tile.count <= lat.K;
        for (uint32_t c : tile.region) open = open && c >= 1;
        tile.open = open;
        tile.rep = open ? best[t].second : -1;
        if (open && tile.rep < 0) throw std::logic_error("evaluate_tiles: open tile without representative");
    }
    return lat;
}

// Connected components of open tiles under 4-adjacency. Closed tiles get
// label UINT32_MAX.
struct LatticeClusters {
    std::vector<uint32_t> label;  // per tile, UINT32_MAX when closed
    std::vector<uint32_t> sizes;

    uint32_t largest() const {
        uint32_t best = UINT32_MAX;
        for (uint32_t c = 0; c < sizes.size(); ++c)
            if (best == UINT32_MAX || sizes[c] > sizes[best]) best = c;
        return best;
    }
};

inline LatticeClusters lattice_clusters(const TileLattice& lat) {
    const size_t n = lat.tiles.size();
    UnionFind uf(n);
    for (int64_t ty = 0; ty < lat.ny; ++ty) {
        for (int64_t tx = 0; tx < lat.nx; ++tx) {
            const size_t t = lat.idx({tx, ty});
            if (!lat.tiles[t].open) continue;
            if (tx + 1 < lat.nx && lat.tiles[lat.idx({tx + 1, ty})].open)
                uf.merge(uint32_t(t), uint32_t(lat.idx({tx + 1, ty})));
            if (ty + 1 < lat.ny && lat.tiles[lat.idx({tx, ty + 1})].open)
                uf.merge(uint32_t(t), uint32_t(lat.idx({tx, ty + 1})));
        }
    }
    LatticeClusters out;
    out.label.assign(n, UINT32_MAX);
    std::vector<uint32_t> root_to_id(n, UINT32_MAX);
    for (size_t t = 0; t < n; ++t) {
        if (!lat.tiles[t].open) continue;
        const uint32_t root = uf.find(uint32_t(t));
        if (root_to_id[root] == UINT32_MAX) {
            root_to_id[root] = uint32_t(out.sizes.size());
            out.sizes.push_back(0);
        }
        out.label[t] = root_to_id[root];
        ++out.sizes[out.label[t]];
    }
    return out;
}

// Shortest open path between two open tiles by BFS (hop count equals the
// percolated-lattice distance); nullopt when the tiles are in different
// clusters. Neighbour order +x, -x, +y, -y keeps the path deterministic.
inline std::optional<std::vector<TileCoord>> lattice_path(const TileLattice& lat, TileCoord t1,
                                                          TileCoord t2) {
    if (!lat.in_range(t1) || !lat.in_range(t2))
        throw std::invalid_argument("lattice_path: tile out of range");
    if (!lat.at(t1).open || !lat.at(t2).open)
        throw std::invalid_argument("lattice_path: endpoints must be open tiles");
    const size_t n = lat.tiles.size();
    std::vector<int64_t> parent(n, -2);
    std::deque<TileCoord> queue;
    parent[lat.idx(t1)] = -1;
    queue.push_back(t1);
    while (!queue.empty()) {
        const TileCoord t = queue.front();
        queue.pop_front();
        if (t == t2) break;
        const TileCoord nbrs[4] = {{t.tx + 1, t.ty}, {t.tx - 1, t.ty}, {t.tx, t.ty + 1}, {t.tx, t.ty - 1}};
        for (const TileCoord& nb : nbrs) {
            if (!lat.in_range(nb) || !lat.at(nb).open) continue;
            if (parent[lat.idx(nb)] != -2) continue;
            parent[lat.idx(nb)] = int64_t(lat.idx(t));
            queue.push_back(nb);
        }
    }
    if (parent[lat.idx(t2)] == -2) return std::nullopt;
    std::vector<TileCoord> path;
    for (int64_t at = int64_t(lat.idx(t2)); at != -1; at = parent[at])
        path.push_back({at % lat.nx, at / lat.nx});
    std::reverse(path.begin(), path.end());
    return path;
}

struct MimicFailure {
    TileCoord t1, t2;       // the adjacent tile pair whose hop failed
    uint32_t miss_u, miss_v;  // required edge absent from the graph
};

struct MimicPath {
    bool valid = false;
    std::vector<uint32_t> vertices;
    double length = 0.0;  // Euclidean length along the graph edges
    std::optional<MimicFailure> failure;
};

namespace detail {

// Point of region `r` in tile `t` nearest to the region's reference centre
// (disc centre, or scan centroid for lens regions); -1 if the region is
// unoccupied. Linear scan over the tile's points, deterministic tie rule.
inline int64_t pick_region_point(const PointSet& ps, const TileLattice& lat,
                                 const TileGeometry& geom, TileCoord t, RegionId r) {
    const Point c = lat.tile_center(t);
    Point ref;
    switch (r) {
        case RegionId::Er: ref = geom.lens_stats(Dir::right).centroid; break;
        case RegionId::Et: ref = geom.lens_stats(Dir::top).centroid; break;
        case RegionId::El: ref = geom.lens_stats(Dir::left).centroid; break;
        case RegionId::Eb: ref = geom.lens_stats(Dir::bottom).centroid; break;
        default: ref = geom.disc_center(r); break;
    }
    const Point target{c.x + ref.x, c.y + ref.y};
    const double side = 10.0 * lat.a;
    std::pair<double, int64_t> best{std::numeric_limits<double>::infinity(), -1};
    for (size_t i = 0; i < ps.size(); ++i) {
        const Point p = ps.points[i];
        if (p.x < c.x - 0.5 * side || p.x >= c.x + 0.5 * side || p.y < c.y - 0.5 * side ||
            p.y >= c.y + 0.5 * side)
            continue;
        if (!geom.contains(r, {p.x - c.x, p.y - c.y})) continue;
        best = std::min(best, {dist2(p, target), int64_t(i)});
    }
    return best.second;
}

}  // namespace detail

// Per-tile cache of hop points so long verification runs do not rescan the
// point set: rep plus one chosen point per lens and side disc.
class HopPointCache {
  public:
    HopPointCache(const PointSet& ps, const TileLattice& lat, const TileGeometry& geom)
        : ps_(ps), lat_(lat), geom_(geom), cache_(lat.tiles.size()) {}

    int64_t get(TileCoord t, RegionId r) {
        Entry& e = cache_[lat_.idx(t)];
        const size_t ri = size_t(r);
        if (!e.done[ri]) {
            e.pt[ri] = detail::pick_region_point(ps_, lat_, geom_, t, r);
            e.done[ri] = true;
        }
        return e.pt[ri];
    }

  private:
    struct Entry {
        std::array<int64_t, 9> pt{};
        std::array<bool, 9> done{};
    };
    const PointSet& ps_;
    const TileLattice& lat_;
    const TileGeometry& geom_;
    std::vector<Entry> cache_;
};

// Walk the open lattice path from t1 to t2 and mimic it in the graph:
// rep -> lens point -> side-disc point -> neighbour's opposite side-disc
// point -> neighbour's opposite lens point -> neighbour rep, per step. Every
// consecutive pair must be a graph edge; a missing edge aborts the walk and
// is reported as a falsification witness, never repaired.
inline MimicPath mimic_path(const NNGraph& g, const PointSet& ps, const TileLattice& lat,
                            HopPointCache& hops, const std::vector<TileCoord>& tile_path) {
    MimicPath out;
    if (tile_path.empty()) throw std::invalid_argument("mimic_path: empty tile path");
    const int64_t rep0 = lat.at(tile_path.front()).rep;
    if (rep0 < 0) throw std::invalid_argument("mimic_path: start tile not open");
    out.vertices.push_back(uint32_t(rep0));
    if (tile_path.size() == 1) {
        out.valid = true;
        return out;
    }
    for (size_t s = 0; s + 1 < tile_path.size(); ++s) {
        const TileCoord t = tile_path[s], nb = tile_path[s + 1];
        Dir d;
        if (nb.tx == t.tx + 1 && nb.ty == t.ty) d = Dir::right;
        else if (nb.tx == t.tx - 1 && nb.ty == t.ty) d = Dir::left;
        else if (nb.tx == t.tx && nb.ty == t.ty + 1) d = Dir::top;
        else if (nb.tx == t.tx && nb.ty == t.ty - 1) d = Dir::bottom;
        else throw std::invalid_argument("mimic_path: tiles not adjacent in path");
        const Dir od = opposite(d);
        const RegionId hop_region[5] = {lens_region(d), side_disc_region(d),
                                        side_disc_region(od), lens_region(od), RegionId::C0};
        const int64_t hop[5] = {hops.get(t, lens_region(d)), hops.get(t, side_disc_region(d)),
                                hops.get(nb, side_disc_region(od)), hops.get(nb, lens_region(od)),
                                lat.at(nb).rep};
        for (int hi = 0; hi < 5; ++hi) {
            const int64_t h = hop[hi];
            if (h < 0)
                throw std::logic_error(std::string("mimic_path: open tile with empty region ") +
                                       region_name(hop_region[hi]));
            const uint32_t u = out.vertices.back(), v = uint32_t(h);
            if (u == v) continue;  // shared hop point between steps
            if (!g.has_edge(u, v)) {
                out.failure = MimicFailure{t, nb, u, v};
                return out;
            }
            out.length += g.edge_length(u, v);
            out.vertices.push_back(v);
        }
    }
    out.valid = true;
    return out;
}

struct CouplingReport {
    // adjacent open pairs: mimic-path validity and length ratio
    int64_t adjacent_checked = 0;
    int64_t adjacent_valid = 0;
    double max_hop_ratio = 0.0;  // mimic length / rep-point Euclidean distance
    double c_tiles_estimate = 0.0;

    // representative pairs in the largest open cluster
    int64_t rep_pairs_checked = 0;
    int64_t rep_pairs_valid = 0;
    double alpha_hat = 0.0;            // max mimic distortion
    double alpha_hat_optimal = 0.0;    // max Dijkstra distortion over the same pairs
    double rho_hat = 0.0;              // max percolated/unpercolated lattice distance ratio
    double spearman_mimic = 0.0;       // rank corr. of per-decile max mimic distortion
    double spearman_chem = 0.0;        // rank corr. of per-decile max lattice ratio
    double rep_density = 0.0;          // representatives in largest cluster per unit area
    double open_fraction = 0.0;

    std::vector<MimicFailure> failures;

    // per-decile diagnostics (by Euclidean rep distance)
    struct Decile {
        double max_distortion = 0.0;
        double max_chem_ratio = 0.0;
        int64_t pairs = 0;
    };
    std::vector<Decile> deciles;
};

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    const size_t n = xs.size();
    if (n != ys.size() || n < 2) throw std::invalid_argument("spearman: need two equal series");
    auto ranks = [](const std::vector<double>& v) {
        const size_t n = v.size();
        std::vector<size_t> order(n);
        for (size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(n);
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = 0.5 * (double(i) + double(j)) + 1.0;
            for (size_t q = i; q <= j; ++q) r[order[q]] = avg;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(xs), ry = ranks(ys);
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) mx += rx[i], my += ry[i];
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

// Representatives of the largest open cluster per unit lattice area.
inline double rep_point_density(const TileLattice& lat) {
    const LatticeClusters cl = lattice_clusters(lat);
    if (cl.sizes.empty()) return 0.0;
    const uint32_t big = cl.largest();
    int64_t reps = 0;
    for (size_t t = 0; t < lat.tiles.size(); ++t)
        if (cl.label[t] == big && lat.tiles[t].rep >= 0) ++reps;
    return double(reps) / lat.covered_area();
}

// Exercise the coupling on a concrete instance: mimic-path validity over
// adjacent open pairs, and full-path distortion over sampled representative
// pairs of the largest cluster, against Dijkstra-optimal distances.
//
// Sampled rep pairs keep a lattice separation of at least `min_l1` tiles
// (pass -1 for the default min(10, min(nx,ny)-2)). Tile-adjacent behaviour
// is measured exhaustively by the adjacent-pair phase; below a few tiles of
// separation the distortion ratio of a blocked near-pair is dominated by the
// local detour (percolated over L1 distance reaches 10 on a modest grid),
// which says nothing about the distance scaling the tail statistics are
// after. Dijkstra-optimal comparisons run on the first few dozen sources
// only; full-budget single-source searches would dominate the runtime.
inline CouplingReport verify_coupling(const NNGraph& g, const PointSet& ps, const TileLattice& lat,
                                      int64_t pair_budget,
                                      int angles = TileGeometry::default_angles,
                                      int64_t min_l1 = -1) {
    if (min_l1 < 0) min_l1 = std::min<int64_t>(10, std::max<int64_t>(1, std::min(lat.nx, lat.ny) - 2));
    if (pair_budget < 1) throw std::invalid_argument("verify_coupling: pair budget must be >= 1");
    auto geom = shared_geometry(lat.a, angles);
    HopPointCache hops(ps, lat, *geom);
    CouplingReport rep;
    rep.c_tiles_estimate = estimate_c_tiles(lat.a, angles);
    rep.open_fraction = double(lat.open_count()) / double(lat.tiles.size());
    rep.rep_density = rep_point_density(lat);

    // adjacent open pairs in tile-scan order
    for (int64_t ty = 0; ty < lat.ny && rep.adjacent_checked < pair_budget; ++ty) {
        for (int64_t tx = 0; tx < lat.nx && rep.adjacent_checked < pair_budget; ++tx) {
            const TileCoord t{tx, ty};
            if (!lat.at(t).open) continue;
            for (const TileCoord nb : {TileCoord{tx + 1, ty}, TileCoord{tx, ty + 1}}) {
                if (rep.adjacent_checked >= pair_budget) break;
                if (!lat.in_range(nb) || !lat.at(nb).open) continue;
                ++rep.adjacent_checked;
                MimicPath mp = mimic_path(g, ps, lat, hops, {t, nb});
                if (!mp.valid) {
                    rep.failures.push_back(*mp.failure);
                    continue;
                }
                ++rep.adjacent_valid;
                const double de = dist(ps.points[size_t(lat.at(t).rep)],
                                       ps.points[size_t(lat.at(nb).rep)]);
                if (de > 0.0) rep.max_hop_ratio = std::max(rep.max_hop_ratio, mp.length / de);
            }
        }
    }

    // representative pairs in the largest cluster, sampled deterministically
    const LatticeClusters cl = lattice_clusters(lat);
    std::vector<TileCoord> members;
    if (!cl.sizes.empty()) {
        const uint32_t big = cl.largest();
        for (int64_t ty = 0; ty < lat.ny; ++ty)
            for (int64_t tx = 0; tx < lat.nx; ++tx)
                if (cl.label[lat.idx({tx, ty})] == big) members.push_back({tx, ty});
    }
    if (members.size() >= 2) {
        CounterRng rng(ps.seed, stream::pair_pick);
        struct PairObs {
            double euclid;
            double mimic_ratio;
            double chem_ratio;
        };
        std::vector<PairObs> obs;
        std::vector<std::pair<uint32_t, std::vector<size_t>>> by_source;  // rep vertex -> obs rows
        std::vector<uint32_t> other_rep;
        const int64_t draws = pair_budget * 8;  // rejection slack for the separation rule
        for (int64_t it = 0; it < draws && rep.rep_pairs_checked < pair_budget; ++it) {
            const TileCoord t1 = members[rng.next_below(members.size())];
            const TileCoord t2 = members[rng.next_below(members.size())];
            if (std::abs(t1.tx - t2.tx) + std::abs(t1.ty - t2.ty) < min_l1) continue;
            auto tpath = lattice_path(lat, t1, t2);
            if (!tpath) throw std::logic_error("verify_coupling: cluster members disconnected");
            ++rep.rep_pairs_checked;
            MimicPath mp = mimic_path(g, ps, lat, hops, *tpath);
            if (!mp.valid) {
                rep.failures.push_back(*mp.failure);
                continue;
            }
            ++rep.rep_pairs_valid;
            const uint32_t r1 = uint32_t(lat.at(t1).rep), r2 = uint32_t(lat.at(t2).rep);
            const double de = dist(ps.points[r1], ps.points[r2]);
            if (de <= 0.0) continue;
            const double d_latt = double(std::abs(t1.tx - t2.tx) + std::abs(t1.ty - t2.ty));
            const double d_perc = double(tpath->size() - 1);
            PairObs o;
            o.euclid = de;
            o.mimic_ratio = mp.length / de;
            o.chem_ratio = d_latt > 0.0 ? d_perc / d_latt : 1.0;
            rep.alpha_hat = std::max(rep.alpha_hat, o.mimic_ratio);
            rep.rho_hat = std::max(rep.rho_hat, o.chem_ratio);
            obs.push_back(o);
            // group by source for the Dijkstra comparison
            bool found = false;
            for (auto& [src, rows] : by_source)
                if (src == r1) {
                    rows.push_back(obs.size() - 1);
                    found = true;
                    break;
                }
            if (!found) by_source.push_back({r1, {obs.size() - 1}});
            other_rep.push_back(r2);
        }

        constexpr size_t opt_source_cap = 48;
        for (size_t s = 0; s < std::min(by_source.size(), opt_source_cap); ++s) {
            const auto& [src, rows] = by_source[s];
            const auto d = sssp(g, src);
            for (size_t row : rows) {
                const double opt = d[other_rep[row]] / obs[row].euclid;
                rep.alpha_hat_optimal = std::max(rep.alpha_hat_optimal, opt);
                if (opt > obs[row].mimic_ratio + 1e-9)
                    throw std::logic_error("verify_coupling: mimic path shorter than Dijkstra");
            }
        }

        // deciles by Euclidean distance
        if (obs.size() >= 10) {
            std::sort(obs.begin(), obs.end(),
                      [](const PairObs& a, const PairObs& b) { return a.euclid < b.euclid; });
            rep.deciles.assign(10, {});
            for (size_t i = 0; i < obs.size(); ++i) {
                auto& dec = rep.deciles[std::min<size_t>(9, i * 10 / obs.size())];
                dec.max_distortion = std::max(dec.max_distortion, obs[i].mimic_ratio);
                dec.max_chem_ratio = std::max(dec.max_chem_ratio, obs[i].chem_ratio);
                ++dec.pairs;
            }
            std::vector<double> idx, md, mc;
            for (size_t i = 0; i < rep.deciles.size(); ++i) {
                idx.push_back(double(i));
                md.push_back(rep.deciles[i].max_distortion);
                mc.push_back(rep.deciles[i].max_chem_ratio);
            }
            rep.spearman_mimic = spearman(idx, md);
            rep.spearman_chem = spearman(idx, mc);
        }
    }
    return rep;
}

inline std::string lattice_to_csv(const TileLattice& lat) {
    std::string out = "tx,ty,open,rep_idx,count\n";
    for (int64_t ty = 0; ty < lat.ny; ++ty) {
        for (int64_t tx = 0; tx < lat.nx; ++tx) {
            const TileLattice::Tile& t = lat.at({tx, ty});
            out += std::to_string(tx) + ',' + std::to_string(ty) + ',' +
                   (t.open ? "1" : "0") + ',' + std::to_string(t.rep) + ',' +
                   std::to_string(t.count) + '\n';
        }
    }
    return out;
}

}  // namespace nnperc
