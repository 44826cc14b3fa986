#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include <nnperc/graphmetrics.hpp>

#include "test_util.hpp"

using namespace nnperc;

namespace {
PointSet make_points(std::vector<Point> pts) {
    PointSet ps;
    double lo = 0.0, hi = 1.0;
    for (const Point& p : pts) {
        lo = std::min({lo, p.x, p.y});
        hi = std::max({hi, p.x, p.y});
    }
    ps.window = Window{lo - 1.0, lo - 1.0, hi + 1.0, hi + 1.0};
    ps.points = std::move(pts);
    return ps;
}

bool same_partition(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return false;
    std::map<uint32_t, uint32_t> fwd, rev;
    for (size_t i = 0; i < a.size(); ++i) {
        auto f = fwd.emplace(a[i], b[i]);
        if (!f.second && f.first->second != b[i]) return false;
        auto r = rev.emplace(b[i], a[i]);
        if (!r.second && r.first->second != a[i]) return false;
    }
    return true;
}
}  // namespace

TEST_SUITE_BEGIN("graphmetrics");

TEST_CASE("chain is one component, distant clusters are two") {
    const PointSet chain = make_points({{0, 0}, {1, 0}, {2, 0}});
    const ComponentLabeling c1 = components(build_knn_graph(chain, 1));
    CHECK(c1.component_count() == 1);
    CHECK(c1.sizes[0] == 3);

    const PointSet two = make_points({{0, 0}, {1, 0}, {2, 0}, {1000, 0}, {1001, 0}, {1002, 0}});
    const ComponentLabeling c2 = components(build_knn_graph(two, 1));
    CHECK(c2.component_count() == 2);
    CHECK(c2.sizes[0] + c2.sizes[1] == 6);
}

TEST_CASE("components agree with breadth-first search") {
    for (uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const int n = 100 + int(seed) * 80;
        const PointSet ps = sample_binomial(unit_window(std::sqrt(double(n))), n, seed);
        const NNGraph g = build_knn_graph(ps, 2);
        const ComponentLabeling got = components(g);
        CHECK(same_partition(got.label, oracle::bfs_components(g)));
        uint64_t total = 0;
        for (uint32_t s : got.sizes) total += s;
        CHECK(total == uint64_t(n));
    }
}

TEST_CASE("observation set basics") {
    // all points connected: everything inside the inner window is chosen
    const PointSet chain = make_points({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    const ComponentLabeling lab = components(build_knn_graph(chain, 1));
    const Window inner{0.5, -0.5, 2.5, 0.5};
    CHECK(observation_set(chain, lab, inner) == std::vector<uint32_t>{1, 2});

    // one component entirely outside the inner window: the inside one wins
    const PointSet two = make_points({{0, 0}, {1, 0}, {100, 0}, {101, 0}, {102, 0}});
    const ComponentLabeling lab2 = components(build_knn_graph(two, 1));
    const Window inner2{-0.5, -0.5, 1.5, 0.5};
    CHECK(observation_set(two, lab2, inner2) == std::vector<uint32_t>{0, 1});

    // no vertex inside: empty result, not an error
    const Window far{50.0, 50.0, 60.0, 60.0};
    CHECK(observation_set(two, lab2, far).empty());
}

TEST_CASE("observation set picks the component with the exhaustive max count") {
    const PointSet ps = sample_binomial(unit_window(std::sqrt(1000.0)), 1000, 17);
    const NNGraph g = build_knn_graph(ps, 4);
    const ComponentLabeling lab = components(g);
    const double s = std::sqrt(1000.0);
    const Window inner{0.25 * s, 0.25 * s, 0.75 * s, 0.75 * s};
    const std::vector<uint32_t> obs = observation_set(ps, lab, inner);
    REQUIRE(!obs.empty());
    std::map<uint32_t, int> inner_count;
    for (uint32_t v = 0; v < ps.size(); ++v)
        if (inner.contains(ps.points[v])) ++inner_count[lab.label[v]];
    int best = 0;
    for (const auto& [c, n] : inner_count) best = std::max(best, n);
    CHECK(int(obs.size()) == best);
    for (uint32_t v : obs) CHECK(lab.label[v] == lab.label[obs[0]]);
}

TEST_CASE("induced observation set keeps only components formed inside the window") {
    // chain 0-1-2-3-4 with vertex 2 outside the inner window: inside it the
    // chain splits into {0,1} and {3,4}; the full-graph reading would keep
    // all four inner vertices
    const PointSet ps = make_points({{0, 0}, {1, 0}, {2, 5}, {3, 0}, {4, 0}});
    NNGraph g;
    g.k = 1;
    g.n = 5;
    // hand-built chain adjacency
    g.offsets = {0, 1, 3, 5, 7, 8};
    g.neighbors = {1, 0, 2, 1, 3, 2, 4, 3};
    g.lengths.resize(8);
    for (size_t i = 0; i < 8; ++i) {
        size_t u = 0;
        while (g.offsets[u + 1] <= i) ++u;
        g.lengths[i] = dist(ps.points[u], ps.points[g.neighbors[i]]);
    }
    const Window inner{-0.5, -0.5, 4.5, 0.5};  // excludes (2,5)
    const std::vector<uint32_t> got = observation_set_induced(g, ps, inner);
    // size tie between {0,1} and {3,4}: the component holding the smallest
    // vertex index wins
    CHECK(got == std::vector<uint32_t>{0, 1});
    const ComponentLabeling lab = components(g);
    CHECK(observation_set(ps, lab, inner) == std::vector<uint32_t>{0, 1, 3, 4});

    // fully connected inside: induced and full-graph readings coincide
    const PointSet dense = sample_binomial(unit_window(10.0), 500, 3);
    const NNGraph gd = build_knn_graph(dense, 6);
    const Window in2{2.5, 2.5, 7.5, 7.5};
    const auto a = observation_set_induced(gd, dense, in2);
    const auto b = observation_set(dense, components(gd), in2);
    CHECK(!a.empty());
    CHECK(a.size() <= b.size());
    // every induced member also belongs to the full-graph choice when the
    // giant component dominates
    size_t overlap = 0;
    for (uint32_t v : a)
        if (std::find(b.begin(), b.end(), v) != b.end()) ++overlap;
    CHECK(overlap == a.size());

    CHECK(observation_set_induced(gd, dense, Window{100, 100, 101, 101}).empty());
}

TEST_CASE("sssp on a short path and a direct edge") {
    const PointSet ps = make_points({{0, 0}, {1, 0}, {1, 1}});
    const NNGraph g = build_knn_graph(ps, 1);
    const std::vector<double> d = sssp(g, 0);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d[2] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d[1] == g.edge_length(0, 1));
}

TEST_CASE("sssp equals Bellman-Ford") {
    for (uint64_t seed : {7ull, 8ull, 9ull}) {
        const int n = 120 + int(seed) * 20;
        const PointSet ps = sample_binomial(unit_window(std::sqrt(double(n))), n, seed);
        const NNGraph g = build_knn_graph(ps, 3);
        for (uint32_t src : {0u, uint32_t(n / 2)}) {
            const auto a = sssp(g, src);
            const auto b = oracle::bellman_ford(g, src);
            for (uint32_t v = 0; v < g.n; ++v) {
                if (std::isinf(a[v]))
                    CHECK(std::isinf(b[v]));
                else
                    CHECK(a[v] == doctest::Approx(b[v]).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("sssp distance is symmetric on sampled pairs") {
    const PointSet ps = sample_binomial(unit_window(10.0), 300, 5);
    const NNGraph g = build_knn_graph(ps, 4);
    CounterRng rng(5, 99);
    for (int t = 0; t < 100; ++t) {
        const uint32_t u = uint32_t(rng.next_below(g.n)), v = uint32_t(rng.next_below(g.n));
        const double duv = sssp(g, u)[v], dvu = sssp(g, v)[u];
        if (std::isinf(duv))
            CHECK(std::isinf(dvu));
        else
            CHECK(duv == doctest::Approx(dvu).epsilon(1e-12));
    }
}

TEST_CASE("distortion on a complete graph is exactly 1") {
    const PointSet ps = sample_binomial(unit_window(2.0), 15, 11);
    const NNGraph g = build_knn_graph(ps, 14);
    std::vector<uint32_t> all(15);
    for (uint32_t i = 0; i < 15; ++i) all[i] = i;
    const DistortionStats st = distortion_stats(g, ps, all);
    CHECK(st.avg == 1.0);
    CHECK(st.max == 1.0);
    CHECK(st.pct_le_2 == 100.0);
    CHECK(st.pct_le_2x_avg == 100.0);
    CHECK(st.pairs == 15 * 14 / 2);
}

TEST_CASE("right-angle path pair has distortion sqrt(2)") {
    const PointSet ps = make_points({{0, 0}, {1, 0}, {1, 1}});
    const NNGraph g = build_knn_graph(ps, 1);
    const DistortionStats st = distortion_stats(g, ps, {0, 1, 2});
    CHECK(st.max == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(st.avg == doctest::Approx((2.0 + std::sqrt(2.0)) / 3.0).epsilon(1e-12));
    CHECK(st.pairs == 3);
}

TEST_CASE("disconnected vertices are a named precondition error") {
    const PointSet two = make_points({{0, 0}, {1, 0}, {100, 0}, {101, 0}});
    const NNGraph g = build_knn_graph(two, 1);
    CHECK_THROWS_WITH_AS(distortion_stats(g, two, {0, 1, 2}, 1),
                         doctest::Contains("different components"), std::invalid_argument);
    CHECK_THROWS_AS(distortion_stats(g, two, {0}), std::invalid_argument);
}

TEST_CASE("every pair ratio is at least 1") {
    const PointSet ps = sample_binomial(unit_window(std::sqrt(400.0)), 400, 23);
    const NNGraph g = build_knn_graph(ps, 5);
    const ComponentLabeling lab = components(g);
    const std::vector<uint32_t> obs =
        observation_set(ps, lab, Window{2.0, 2.0, 18.0, 18.0});
    REQUIRE(obs.size() >= 2);
    // direct check on a subset of sources
    for (size_t i = 0; i < std::min<size_t>(10, obs.size()); ++i) {
        const auto d = sssp(g, obs[i]);
        for (uint32_t v : obs) {
            if (v == obs[i]) continue;
            const double de = dist(ps.points[obs[i]], ps.points[v]);
            CHECK(d[v] >= de - 1e-12 * std::max(1.0, de));
        }
    }
}

TEST_CASE("graph distance obeys the triangle inequality on sampled triples") {
    const PointSet ps = sample_binomial(unit_window(8.0), 250, 29);
    const NNGraph g = build_knn_graph(ps, 4);
    CounterRng rng(3, 4);
    for (int t = 0; t < 40; ++t) {
        const uint32_t u = uint32_t(rng.next_below(g.n));
        const uint32_t v = uint32_t(rng.next_below(g.n));
        const uint32_t w = uint32_t(rng.next_below(g.n));
        const auto du = sssp(g, u), dv = sssp(g, v);
        if (std::isfinite(du[w]) && std::isfinite(du[v]) && std::isfinite(dv[w]))
            CHECK(du[w] <= du[v] + dv[w] + 1e-9);
    }
}

TEST_CASE("distortion statistics are independent of the thread count") {
    const PointSet ps = sample_binomial(unit_window(std::sqrt(600.0)), 600, 12);
    const NNGraph g = build_knn_graph(ps, 5);
    const std::vector<uint32_t> obs =
        observation_set_induced(g, ps, Window{6.0, 6.0, 18.0, 18.0});
    REQUIRE(obs.size() >= 2);
    const DistortionStats a = distortion_stats(g, ps, obs, 1);
    const DistortionStats b = distortion_stats(g, ps, obs, 4);
    CHECK(a.avg == b.avg);
    CHECK(a.max == b.max);
    CHECK(a.pct_le_2 == b.pct_le_2);
    CHECK(a.pct_le_2x_avg == b.pct_le_2x_avg);
    CHECK(a.pairs == b.pairs);
}

TEST_CASE("sampled pairs mode returns the requested pair count") {
    const PointSet ps = sample_binomial(unit_window(4.0), 80, 2);
    const NNGraph g = build_knn_graph(ps, 79);
    std::vector<uint32_t> all(80);
    for (uint32_t i = 0; i < 80; ++i) all[i] = i;
    const DistortionStats st = distortion_stats(g, ps, all, 0, 100, 42);
    CHECK(st.pairs == 100);
    CHECK(st.avg == 1.0);  // complete graph, any subsample
}

TEST_CASE("sweep_k_fit closed form") {
    std::vector<std::pair<int, double>> exact;
    for (int k = 3; k <= 13; ++k) exact.push_back({k, 1.0 + 5.0 / (double(k) * double(k))});
    const FitResult f = sweep_k_fit(exact);
    CHECK(f.a_fit == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(f.rss <= 1e-24);
    CHECK(f.points_used == 11);

    std::vector<std::pair<int, double>> flat;
    for (int k = 3; k <= 13; ++k) flat.push_back({k, 1.0});
    CHECK(sweep_k_fit(flat).a_fit == doctest::Approx(0.0));

    // feeding the fitted curve back reproduces a_fit
    std::vector<std::pair<int, double>> noisy = {{3, 1.7}, {5, 1.25}, {9, 1.08}, {13, 1.02}};
    const FitResult f1 = sweep_k_fit(noisy);
    std::vector<std::pair<int, double>> refit;
    for (const auto& [k, avg] : noisy)
        refit.push_back({k, 1.0 + f1.a_fit / (double(k) * double(k))});
    CHECK(sweep_k_fit(refit).a_fit == doctest::Approx(f1.a_fit).epsilon(1e-9));

    CHECK_THROWS_AS(sweep_k_fit({}), std::invalid_argument);
    CHECK_THROWS_AS(sweep_k_fit({{4, 1.2}, {4, 1.3}}), std::invalid_argument);
}

TEST_SUITE_END();
