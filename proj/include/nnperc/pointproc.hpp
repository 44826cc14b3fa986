#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nnperc/core.hpp>
#include <nnperc/rng.hpp>

namespace nnperc {

enum class SampleMode { poisson, binomial };

// Immutable after creation; point indices 0..n-1 are stable identifiers.
struct PointSet {
    std::vector<Point> points;
    Window window;
    uint64_t seed = 0;
    SampleMode mode = SampleMode::poisson;
    double lambda = 0.0;  // intensity, poisson mode
    int64_t n_target = 0; // requested count, binomial mode

    size_t size() const { return points.size(); }
    Point operator[](size_t i) const { return points[i]; }
};

namespace stream {
// Stream ids partition the counter RNG per purpose so draws never collide.
constexpr uint64_t point_count = 1;
constexpr uint64_t point_pos = 2;
constexpr uint64_t mc_tile_base = 1000;  // + trial index
constexpr uint64_t pair_pick = 3;
}  // namespace stream

inline PointSet sample_binomial(Window window, int64_t n, uint64_t seed) {
    if (!window.valid()) throw std::invalid_argument("sample_binomial: degenerate window");
    if (n < 0) throw std::invalid_argument("sample_binomial: n must be >= 0");
    PointSet ps;
    ps.window = window;
    ps.seed = seed;
    ps.mode = SampleMode::binomial;
    ps.n_target = n;
    ps.points.reserve(size_t(n));
    CounterRng rng(seed, stream::point_pos);
    for (int64_t i = 0; i < n; ++i) {
        const double x = window.xmin + rng.next_double() * window.width();
        const double y = window.ymin + rng.next_double() * window.height();
        ps.points.push_back({x, y});
    }
    return ps;
}

inline PointSet sample_poisson(Window window, double lambda, uint64_t seed) {
    if (!window.valid()) throw std::invalid_argument("sample_poisson: degenerate window");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("sample_poisson: lambda must be finite and >= 0");
    CounterRng count_rng(seed, stream::point_count);
    const int64_t n = poisson_count(count_rng, lambda * window.area());
    PointSet ps = sample_binomial(window, n, seed);
    ps.mode = SampleMode::poisson;
    ps.lambda = lambda;
    ps.n_target = 0;
    return ps;
}

inline std::string points_to_csv(const PointSet& ps) {
    std::string out = "idx,x,y\n";
    for (size_t i = 0; i < ps.points.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += fmt_double(ps.points[i].x);
        out += ',';
        out += fmt_double(ps.points[i].y);
        out += '\n';
    }
    return out;
}

inline PointSet points_from_csv(std::istream& in, Window window) {
    PointSet ps;
    ps.window = window;
    std::string line;
    do {
        if (!std::getline(in, line)) throw std::invalid_argument("points_from_csv: missing header");
    } while (!line.empty() && line[0] == '#');
    if (line.rfind("idx,x,y", 0) != 0)
        throw std::invalid_argument("points_from_csv: missing idx,x,y header");
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t c1 = line.find(',');
        size_t c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("points_from_csv: malformed row: " + line);
        Point p;
        p.x = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        p.y = std::stod(line.substr(c2 + 1));
        ps.points.push_back(p);
    }
    return ps;
}

}  // namespace nnperc
