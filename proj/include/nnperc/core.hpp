#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace nnperc {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double dist2(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double dist(Point a, Point b) { return std::sqrt(dist2(a, b)); }

// Axis-aligned rectangle; all sampling windows and tile rectangles use this.
struct Window {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }

    bool valid() const {
        return std::isfinite(xmin) && std::isfinite(ymin) && std::isfinite(xmax) &&
               std::isfinite(ymax) && xmax > xmin && ymax > ymin;
    }

    bool contains(Point p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
};

inline Window unit_window(double side) { return Window{0.0, 0.0, side, side}; }

// Thrown by min_k when no k in the search range clears the threshold.
// Carries the best (k, a, p) triple seen so callers can report it.
struct not_found_error : std::runtime_error {
    int best_k;
    double best_a;
    double best_p;
    not_found_error(const std::string& msg, int k, double a, double p)
        : std::runtime_error(msg), best_k(k), best_a(a), best_p(p) {}
};

struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest round-trippable decimal form; used everywhere a double is
// serialized so outputs are byte-identical across runs of one build.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) {
        for (int prec = 1; prec <= 16; ++prec) {
            char shorter[40];
            std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
            std::sscanf(shorter, "%lf", &back);
            if (back == v) return shorter;
        }
    }
    return buf;
}

}  // namespace nnperc
