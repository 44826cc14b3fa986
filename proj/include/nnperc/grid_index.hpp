#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <nnperc/core.hpp>
#include <nnperc/pointproc.hpp>

namespace nnperc {

// Uniform grid over the point-set window. Every point lands in exactly one
// bucket: cell (floor((x-xmin)/cell), floor((y-ymin)/cell)), clamped so
// points on the top/right window edge stay inside the grid.
class GridIndex {
  public:
    GridIndex(const PointSet& ps, double cellsize) : cell_(cellsize) {
        if (!(cellsize > 0.0) || !std::isfinite(cellsize))
            throw std::invalid_argument("GridIndex: cellsize must be > 0");
        const Window& w = ps.window;
        x0_ = w.xmin;
        y0_ = w.ymin;
        nx_ = std::max<int64_t>(1, int64_t(std::ceil(w.width() / cellsize)));
        ny_ = std::max<int64_t>(1, int64_t(std::ceil(w.height() / cellsize)));
        const size_t n = ps.size();
        std::vector<uint32_t> counts(size_t(nx_ * ny_) + 1, 0);
        cell_of_.resize(n);
        for (size_t i = 0; i < n; ++i) {
            cell_of_[i] = uint32_t(cell_index(ps.points[i]));
            ++counts[cell_of_[i] + 1];
        }
        for (size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
        start_ = counts;
        entries_.resize(n);
        std::vector<uint32_t> cursor(start_.begin(), start_.end() - 1);
        for (size_t i = 0; i < n; ++i) entries_[cursor[cell_of_[i]]++] = uint32_t(i);
    }

    double cellsize() const { return cell_; }
    int64_t nx() const { return nx_; }
    int64_t ny() const { return ny_; }

    int64_t cell_x(Point p) const {
        return std::clamp<int64_t>(int64_t(std::floor((p.x - x0_) / cell_)), 0, nx_ - 1);
    }
    int64_t cell_y(Point p) const {
        return std::clamp<int64_t>(int64_t(std::floor((p.y - y0_) / cell_)), 0, ny_ - 1);
    }
    int64_t cell_index(Point p) const { return cell_y(p) * nx_ + cell_x(p); }

    // Point indices in cell (cx, cy); empty span when out of range.
    std::pair<const uint32_t*, const uint32_t*> bucket(int64_t cx, int64_t cy) const {
        if (cx < 0 || cx >= nx_ || cy < 0 || cy >= ny_) return {nullptr, nullptr};
        const size_t c = size_t(cy * nx_ + cx);
        return {entries_.data() + start_[c], entries_.data() + start_[c + 1]};
    }

    size_t bucket_count_nonempty() const {
        size_t n = 0;
        for (size_t c = 0; c + 1 < start_.size(); ++c)
            if (start_[c + 1] > start_[c]) ++n;
        return n;
    }

  private:
    double cell_;
    double x0_ = 0, y0_ = 0;
    int64_t nx_ = 1, ny_ = 1;
    std::vector<uint32_t> start_;    // CSR offsets per cell
    std::vector<uint32_t> entries_;  // point indices grouped by cell
    std::vector<uint32_t> cell_of_;
};

inline GridIndex build_index(const PointSet& ps, double cellsize) { return GridIndex(ps, cellsize); }

// Default cell size: about one point per cell.
inline double default_cellsize(const PointSet& ps) {
    const double n = double(std::max<size_t>(1, ps.size()));
    return std::sqrt(ps.window.area() / n);
}

namespace detail {

struct Candidate {
    double d2;
    uint32_t idx;
    bool operator<(const Candidate& o) const {  // max-heap on (d2, idx)
        return d2 < o.d2 || (d2 == o.d2 && idx < o.idx);
    }
};

}  // namespace detail

// The k nearest points to point i (excluding i), ordered by (distance, index)
// ascending; ties broken by the smaller index. Expanding ring search over the
// grid: rings are scanned outward until the k-th best distance is no larger
// than the closest possible point in any unvisited ring, which makes the
// result exact, not heuristic.
inline std::vector<uint32_t> knn_query(const GridIndex& index, const PointSet& ps, uint32_t i,
                                       int k) {
    const int64_t n = int64_t(ps.size());
    if (k < 1 || int64_t(k) > n - 1) throw std::invalid_argument("knn_query: need 1 <= k <= n-1");
    const Point q = ps.points[i];
    const int64_t cx = index.cell_x(q), cy = index.cell_y(q);
    const double cell = index.cellsize();

    std::vector<detail::Candidate> heap;
    heap.reserve(size_t(k) + 1);
    auto offer = [&](uint32_t j) {
        if (j == i) return;
        const detail::Candidate c{dist2(q, ps.points[j]), j};
        if (int(heap.size()) < k) {
            heap.push_back(c);
            std::push_heap(heap.begin(), heap.end());
        } else if (c < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = c;
            std::push_heap(heap.begin(), heap.end());
        }
    };

    const int64_t max_ring = std::max(index.nx(), index.ny());
    for (int64_t r = 0;; ++r) {
        if (r > 0) {
            // closest possible squared distance to a point in ring r
            const double gap = (double(r) - 1.0) * cell;  // worst case: q on a cell edge
            // strict: an unscanned point at exactly the k-th distance could
            // still win its tie on index
            if (int(heap.size()) == k && gap > 0.0 && heap.front().d2 < gap * gap) break;
            if (r > max_ring) break;
        }
        const int64_t xlo = cx - r, xhi = cx + r, ylo = cy - r, yhi = cy + r;
        auto scan_cell = [&](int64_t x, int64_t y) {
            auto [b, e] = index.bucket(x, y);
            for (const uint32_t* p = b; p != e; ++p) offer(*p);
        };
        if (r == 0) {
            scan_cell(cx, cy);
        } else {
            for (int64_t x = xlo; x <= xhi; ++x) {
                scan_cell(x, ylo);
                scan_cell(x, yhi);
            }
            for (int64_t y = ylo + 1; y <= yhi - 1; ++y) {
                scan_cell(xlo, y);
                scan_cell(xhi, y);
            }
        }
    }

    std::sort(heap.begin(), heap.end(),
              [](const detail::Candidate& a, const detail::Candidate& b) {
                  return a.d2 < b.d2 || (a.d2 == b.d2 && a.idx < b.idx);
              });
    std::vector<uint32_t> out;
    out.reserve(heap.size());
    for (const auto& c : heap) out.push_back(c.idx);
    return out;
}

}  // namespace nnperc
