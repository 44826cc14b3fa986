#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include <nnperc/core.hpp>

namespace nnperc {

// The nine tile regions: central disc, four side discs, four lens regions.
enum class RegionId { C0, Cl, Cr, Ct, Cb, El, Er, Et, Eb };
constexpr std::array<RegionId, 9> all_regions = {
    RegionId::C0, RegionId::Cl, RegionId::Cr, RegionId::Ct, RegionId::Cb,
    RegionId::El, RegionId::Er, RegionId::Et, RegionId::Eb};

inline const char* region_name(RegionId r) {
    switch (r) {
        case RegionId::C0: return "C0";
        case RegionId::Cl: return "Cl";
        case RegionId::Cr: return "Cr";
        case RegionId::Ct: return "Ct";
        case RegionId::Cb: return "Cb";
        case RegionId::El: return "El";
        case RegionId::Er: return "Er";
        case RegionId::Et: return "Et";
        case RegionId::Eb: return "Eb";
    }
    return "?";
}

// Side directions in lattice order: +x, +y, -x, -y.
enum class Dir : int { right = 0, top = 1, left = 2, bottom = 3 };
constexpr std::array<Dir, 4> all_dirs = {Dir::right, Dir::top, Dir::left, Dir::bottom};

inline Point dir_vec(Dir d) {
    switch (d) {
        case Dir::right: return {1.0, 0.0};
        case Dir::top: return {0.0, 1.0};
        case Dir::left: return {-1.0, 0.0};
        case Dir::bottom: return {0.0, -1.0};
    }
    return {0.0, 0.0};
}

inline Dir opposite(Dir d) { return Dir((int(d) + 2) % 4); }

inline RegionId side_disc_region(Dir d) {
    switch (d) {
        case Dir::right: return RegionId::Cr;
        case Dir::top: return RegionId::Ct;
        case Dir::left: return RegionId::Cl;
        case Dir::bottom: return RegionId::Cb;
    }
    return RegionId::C0;
}

inline RegionId lens_region(Dir d) {
    switch (d) {
        case Dir::right: return RegionId::Er;
        case Dir::top: return RegionId::Et;
        case Dir::left: return RegionId::El;
        case Dir::bottom: return RegionId::Eb;
    }
    return RegionId::Er;
}

struct BBox {
    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
    bool contains(Point q) const {
        return q.x >= xmin && q.x <= xmax && q.y >= ymin && q.y <= ymax;
    }
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
};

// Largest distance between any point of box A and any point of box B.
inline double bbox_max_dist(const BBox& a, const BBox& b) {
    const double dx = std::max({b.xmax - a.xmin, a.xmax - b.xmin, 0.0});
    const double dy = std::max({b.ymax - a.ymin, a.ymax - b.ymin, 0.0});
    return std::hypot(dx, dy);
}

// Geometry of one tile of side 10a, centred at the origin, and its nine
// regions. The central disc C0 sits at the origin, side discs at (+/-4a, 0)
// and (0, +/-4a), all of radius a.
//
// The lens locus for direction d is the set of points contained in every
// maximal disc centred in C0 or C_d that stays inside the 20a x 10a
// rectangle formed by the tile and its d-neighbour. The margin
// p -> rmax(p) - |q - p| is concave in p (min of affine terms plus a concave
// term), so its minimum over each disc is attained on the boundary circle;
// membership is therefore decided by scanning the two boundary circles at a
// fixed angular resolution with tolerance -1e-12.
//
// The locus is convex (an intersection of discs) and larger than the figure
// suggests: it overlaps C0, C_d and, near the tile diagonals, the two
// perpendicular loci. The *region* E_d used for occupancy counts and the
// event probability is the locus minus the five discs, with each overlap
// between perpendicular loci assigned to the dominant axis (horizontal
// lenses keep |x| >= |y|; the overlaps are symmetric about the diagonals,
// so this splits them evenly). The nine regions are then pairwise disjoint,
// which the probability factorization requires, while E_d stays inside the
// locus so every disc-containment path argument still applies.
class TileGeometry {
  public:
    static constexpr double margin_tol = 1e-12;
    static constexpr int default_angles = 4096;

    explicit TileGeometry(double a, int angles = default_angles)
        : a_(a), angles_(angles) {
        if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("TileGeometry: a must be > 0");
        if (angles < 16) throw std::invalid_argument("TileGeometry: angles must be >= 16");
        for (Dir d : all_dirs) build_lens_cache(d);
        for (Dir d : all_dirs) scan_region_stats(d);
    }

    double a() const { return a_; }
    int angles() const { return angles_; }
    double tile_side() const { return 10.0 * a_; }
    double tile_area() const { return 100.0 * a_ * a_; }
    double disc_area() const { return M_PI * a_ * a_; }

    Point disc_center(RegionId r) const {
        switch (r) {
            case RegionId::C0: return {0.0, 0.0};
            case RegionId::Cr: return {4.0 * a_, 0.0};
            case RegionId::Ct: return {0.0, 4.0 * a_};
            case RegionId::Cl: return {-4.0 * a_, 0.0};
            case RegionId::Cb: return {0.0, -4.0 * a_};
            default: throw std::invalid_argument("disc_center: not a disc region");
        }
    }

    bool in_disc(RegionId r, Point q) const {
        const Point c = disc_center(r);
        return dist2(q, c) <= a_ * a_;
    }

    bool in_any_disc(Point q) const {
        return in_disc(RegionId::C0, q) || in_disc(RegionId::Cl, q) ||
               in_disc(RegionId::Cr, q) || in_disc(RegionId::Ct, q) ||
               in_disc(RegionId::Cb, q);
    }

    // Raw locus membership (boundary-circle scan, tolerance -1e-12).
    bool lens_locus_contains(Dir d, Point q) const {
        const LensCache& lc = lens_[int(d)];
        if (!lc.superset.contains(q)) return false;
        // quick accept: margin is 1-Lipschitz in q
        if (lc.core_margin > 0.0) {
            const double dq = dist2(q, lc.core);
            if (dq < lc.core_margin * lc.core_margin) return true;
        }
        // coarse pass rejects most outside points cheaply
        for (size_t i = 0; i < lc.coarse.size(); ++i) {
            const Constraint& c = lc.coarse[i];
            const double dx = q.x - c.px, dy = q.y - c.py;
            if (dx * dx + dy * dy > c.reach2) return false;
        }
        for (size_t i = 0; i < lc.full.size(); ++i) {
            const Constraint& c = lc.full[i];
            const double dx = q.x - c.px, dy = q.y - c.py;
            if (dx * dx + dy * dy > c.reach2) return false;
        }
        return true;
    }

    // Worst (smallest) margin of q against the cached boundary constraints.
    double lens_boundary_margin(Dir d, Point q) const {
        const LensCache& lc = lens_[int(d)];
        double m = std::numeric_limits<double>::infinity();
        for (const Constraint& c : lc.full) {
            const double dx = q.x - c.px, dy = q.y - c.py;
            m = std::min(m, c.rmax - std::sqrt(dx * dx + dy * dy));
        }
        return m;
    }

    // Radius of the largest disc centred at p inside the two-tile rectangle
    // of direction d.
    double rmax(Dir d, Point p) const {
        const BBox& r = rect_[int(d)];
        return std::min(std::min(p.x - r.xmin, r.xmax - p.x),
                        std::min(p.y - r.ymin, r.ymax - p.y));
    }

    // Disjoint region membership (discs take nothing away from each other;
    // lens regions are trimmed as described above).
    bool contains(RegionId r, Point q) const {
        switch (r) {
            case RegionId::C0:
            case RegionId::Cl:
            case RegionId::Cr:
            case RegionId::Ct:
            case RegionId::Cb:
                return in_disc(r, q);
            case RegionId::Er: return lens_trimmed_contains(Dir::right, q);
            case RegionId::Et: return lens_trimmed_contains(Dir::top, q);
            case RegionId::El: return lens_trimmed_contains(Dir::left, q);
            case RegionId::Eb: return lens_trimmed_contains(Dir::bottom, q);
        }
        throw std::invalid_argument("contains: unknown region");
    }

    bool lens_trimmed_contains(Dir d, Point q) const {
        const RegionStats& st = stats_[int(d)];
        if (!st.bbox_padded.contains(q)) return false;
        return lens_trimmed_contains_nobox(d, q);
    }

    // Region the point falls in, or none. Regions are pairwise disjoint.
    std::optional<RegionId> classify(Point q) const {
        for (RegionId r : {RegionId::C0, RegionId::Cl, RegionId::Cr, RegionId::Ct, RegionId::Cb})
            if (in_disc(r, q)) return r;
        for (Dir d : all_dirs)
            if (lens_trimmed_contains(d, q)) return lens_region(d);
        return std::nullopt;
    }

    // Trimmed-region statistics from the construction scan.
    struct RegionStats {
        BBox bbox;         // tight, from scan
        BBox bbox_padded;  // bbox padded by two scan cells; sound outer bound
        Point centroid;    // scan-cell average
        double area;       // scan estimate, construction resolution
    };
    const RegionStats& lens_stats(Dir d) const { return stats_[int(d)]; }

    BBox disc_bbox(RegionId r) const {
        const Point c = disc_center(r);
        return BBox{c.x - a_, c.y - a_, c.x + a_, c.y + a_};
    }

  private:
    struct Constraint {
        double px, py;
        double rmax;
        double reach2;  // (rmax + margin_tol)^2
    };
    struct LensCache {
        std::vector<Constraint> full;    // 2 * angles entries
        std::vector<Constraint> coarse;  // strided subset
        BBox superset;                   // analytic outer bound
        Point core;                      // probe point with positive margin
        double core_margin = 0.0;
    };

    void build_lens_cache(Dir d) {
        const Point dv = dir_vec(d);
        const double s = 5.0 * a_;
        // two-tile rectangle: tile plus neighbour in direction d
        rect_[int(d)] = BBox{-s + (dv.x > 0 ? 0.0 : dv.x * 10.0 * a_),
                             -s + (dv.y > 0 ? 0.0 : dv.y * 10.0 * a_),
                             s + (dv.x > 0 ? dv.x * 10.0 * a_ : 0.0),
                             s + (dv.y > 0 ? dv.y * 10.0 * a_ : 0.0)};
        LensCache lc;
        lc.full.reserve(size_t(2 * angles_));
        const Point centers[2] = {{0.0, 0.0}, {4.0 * a_ * dv.x, 4.0 * a_ * dv.y}};
        for (const Point& c : centers) {
            for (int j = 0; j < angles_; ++j) {
                const double th = 2.0 * M_PI * double(j) / double(angles_);
                Constraint con;
                con.px = c.x + a_ * std::cos(th);
                con.py = c.y + a_ * std::sin(th);
                con.rmax = rmax(d, {con.px, con.py});
                const double reach = con.rmax + margin_tol;
                con.reach2 = reach * reach;
                lc.full.push_back(con);
            }
        }
        const int stride = std::max(1, angles_ / 32);
        for (size_t i = 0; i < lc.full.size(); i += size_t(stride)) lc.coarse.push_back(lc.full[i]);

        // analytic outer bound, from the extreme boundary constraints:
        // nearest point of the outer side-disc boundary has rmax = 5a, the
        // far point of C0 has rmax = 4a, the top/bottom of C0 have rmax = 4a.
        const double lo = 0.0, hi = 3.0 * a_, half = 3.0 * a_;
        const double pad = 1e-9 * a_;
        BBox sb;
        if (d == Dir::right) sb = {lo - pad, -half - pad, hi + pad, half + pad};
        if (d == Dir::left) sb = {-hi - pad, -half - pad, -lo + pad, half + pad};
        if (d == Dir::top) sb = {-half - pad, lo - pad, half + pad, hi + pad};
        if (d == Dir::bottom) sb = {-half - pad, -hi - pad, half + pad, -lo + pad};
        lc.superset = sb;

        lc.core = {2.0 * a_ * dv.x, 2.0 * a_ * dv.y};
        lens_[int(d)] = std::move(lc);
        double m = lens_boundary_margin(d, lens_[int(d)].core);
        lens_[int(d)].core_margin = std::max(0.0, m);
    }

    void scan_region_stats(Dir d) {
        const BBox& sb = lens_[int(d)].superset;
        const int nx = construction_scan_res;
        const int ny = construction_scan_res;
        const double hx = sb.width() / nx, hy = sb.height() / ny;
        double sx = 0.0, sy = 0.0;
        long hits = 0;
        BBox tight{1e300, 1e300, -1e300, -1e300};
        for (int iy = 0; iy < ny; ++iy) {
            const double y = sb.ymin + (iy + 0.5) * hy;
            for (int ix = 0; ix < nx; ++ix) {
                const double x = sb.xmin + (ix + 0.5) * hx;
                if (!lens_trimmed_contains_nobox(d, {x, y})) continue;
                ++hits;
                sx += x;
                sy += y;
                tight.xmin = std::min(tight.xmin, x);
                tight.xmax = std::max(tight.xmax, x);
                tight.ymin = std::min(tight.ymin, y);
                tight.ymax = std::max(tight.ymax, y);
            }
        }
        RegionStats st;
        if (hits == 0) {
            st.bbox = st.bbox_padded = BBox{0, 0, 0, 0};
            st.centroid = {0, 0};
            st.area = 0.0;
        } else {
            st.bbox = tight;
            st.bbox_padded = BBox{tight.xmin - 2 * hx, tight.ymin - 2 * hy,
                                  tight.xmax + 2 * hx, tight.ymax + 2 * hy};
            st.centroid = {sx / hits, sy / hits};
            st.area = double(hits) * hx * hy;
        }
        stats_[int(d)] = st;
    }

    // Trimmed membership without the bbox shortcut (used during the
    // construction scan, before the stats bbox exists).
    bool lens_trimmed_contains_nobox(Dir d, Point q) const {
        if (in_any_disc(q)) return false;
        if (!lens_locus_contains(d, q)) return false;
        const bool horizontal = (d == Dir::right || d == Dir::left);
        const double ax = std::abs(q.x), ay = std::abs(q.y);
        const bool other_axis_dominates = horizontal ? (ay > ax) : (ax >= ay);
        if (other_axis_dominates) {
            const Dir p1 = Dir((int(d) + 1) % 4), p2 = Dir((int(d) + 3) % 4);
            if (lens_locus_contains(p1, q) || lens_locus_contains(p2, q)) return false;
        }
        return true;
    }

    static constexpr int construction_scan_res = 512;

    double a_;
    int angles_;
    std::array<LensCache, 4> lens_;
    std::array<BBox, 4> rect_;
    std::array<RegionStats, 4> stats_;
};

// Process-wide geometry cache; TileGeometry is immutable after construction
// and safe to share across threads.
inline std::shared_ptr<const TileGeometry> shared_geometry(double a,
                                                           int angles = TileGeometry::default_angles) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, std::shared_ptr<const TileGeometry>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(a, angles);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto geom = std::make_shared<const TileGeometry>(a, angles);
    cache.emplace(key, geom);
    return geom;
}

// Membership of a tile-local point in one of the nine regions.
inline bool region_membership(Point q, RegionId region, double a,
                              int angles = TileGeometry::default_angles) {
    return shared_geometry(a, angles)->contains(region, q);
}

// Numerical area of the lens region E_r by grid integration over its padded
// bounding box; square cells, `resolution` cells along the longer side.
inline double e_region_area(double a, int resolution,
                            int angles = TileGeometry::default_angles) {
    if (resolution < 100) throw std::invalid_argument("e_region_area: resolution must be >= 100");
    auto geom = shared_geometry(a, angles);
    const BBox box = geom->lens_stats(Dir::right).bbox_padded;
    if (box.width() <= 0 || box.height() <= 0) return 0.0;
    const double h = std::max(box.width(), box.height()) / double(resolution);
    const int nx = std::max(1, int(std::ceil(box.width() / h)));
    const int ny = std::max(1, int(std::ceil(box.height() / h)));
    long hits = 0;
    for (int iy = 0; iy < ny; ++iy) {
        const double y = box.ymin + (iy + 0.5) * h;
        for (int ix = 0; ix < nx; ++ix) {
            const double x = box.xmin + (ix + 0.5) * h;
            if (geom->lens_trimmed_contains(Dir::right, {x, y})) ++hits;
        }
    }
    return double(hits) * h * h;
}

// Conservative upper bound on the length ratio of a one-hop mimic path
// (rep -> lens -> side disc -> neighbour side disc -> neighbour lens ->
// neighbour rep) to the representative-point distance. Legs are bounded by
// maximal distances between region bounding boxes; the rep-to-rep distance
// is at least 8a. Scale-invariant in a.
inline double estimate_c_tiles(double a, int angles = TileGeometry::default_angles) {
    auto geom = shared_geometry(a, angles);
    double worst = 0.0;
    for (Dir d : all_dirs) {
        const Point dv = dir_vec(d);
        const double shift_x = 10.0 * a * dv.x, shift_y = 10.0 * a * dv.y;
        auto shifted = [&](BBox b) {
            return BBox{b.xmin + shift_x, b.ymin + shift_y, b.xmax + shift_x, b.ymax + shift_y};
        };
        const BBox c0 = geom->disc_bbox(RegionId::C0);
        const BBox e_d = geom->lens_stats(d).bbox_padded;
        const BBox c_d = geom->disc_bbox(side_disc_region(d));
        const Dir od = opposite(d);
        const BBox c_o = shifted(geom->disc_bbox(side_disc_region(od)));
        const BBox e_o = shifted(geom->lens_stats(od).bbox_padded);
        const BBox c0n = shifted(c0);
        const double legs = bbox_max_dist(c0, e_d) + bbox_max_dist(e_d, c_d) +
                            bbox_max_dist(c_d, c_o) + bbox_max_dist(c_o, e_o) +
                            bbox_max_dist(e_o, c0n);
        worst = std::max(worst, legs / (8.0 * a));
    }
    return worst;
}

}  // namespace nnperc
