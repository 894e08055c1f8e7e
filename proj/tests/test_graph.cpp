#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>

#include "rcw/graph.hpp"
#include "rcw/rng.hpp"

using namespace rcw;

TEST_CASE("lattice_box basic counts") {
    const auto g1 = WeightedGraph::lattice_box(1, 1);
    CHECK(g1.vertex_count() == 3);
    CHECK(g1.edge_count() == 2);
    CHECK(g1.degree(g1.base_point()) == 2);

    const auto g2 = WeightedGraph::lattice_box(2, 1);
    CHECK(g2.vertex_count() == 9);
    CHECK(g2.edge_count() == 12);

    const auto g3 = WeightedGraph::lattice_box(2, 64);
    CHECK(g3.vertex_count() == 129u * 129u);

    CHECK_THROWS_AS(WeightedGraph::lattice_box(4, 1000), budget_error);
    CHECK_THROWS_AS(WeightedGraph::lattice_box(0, 1), validation_error);
    CHECK_THROWS_AS(WeightedGraph::lattice_box(2, 0), validation_error);
}

TEST_CASE("lattice coordinates and numbering are lexicographic") {
    const auto g = WeightedGraph::lattice_box(2, 2);
    std::array<std::int64_t, 2> prev{-100, -100};
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        const auto c = g.coordinates(v);
        const std::array<std::int64_t, 2> cur{c[0], c[1]};
        CHECK(prev < cur);
        prev = cur;
        CHECK(g.vertex_at(std::span<const std::int64_t>(cur)) == v);
    }
    const auto base = g.coordinates(g.base_point());
    CHECK(base[0] == 0);
    CHECK(base[1] == 0);
}

TEST_CASE("gasket counts and base point") {
    const auto g1 = WeightedGraph::gasket(1);
    CHECK(g1.vertex_count() == 6);
    CHECK(g1.edge_count() == 9);
    CHECK(g1.degree(g1.base_point()) == 2);

    const auto g2 = WeightedGraph::gasket(2);
    CHECK(g2.vertex_count() == 15);
    CHECK(g2.edge_count() == 27);

    const auto base = g1.coordinates(g1.base_point());
    CHECK(base[0] == 0);
    CHECK(base[1] == 0);
    CHECK_THROWS_AS(WeightedGraph::gasket(12, 1000), budget_error);
}

TEST_CASE("gasket degrees bounded by 4") {
    const auto g = WeightedGraph::gasket(4);
    int boundary_count = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        CHECK(g.degree(v) <= 4);
        if (g.is_boundary(v)) ++boundary_count;
    }
    CHECK(boundary_count == 2);  // the two far corners of the wedge
}

TEST_CASE("adjacency lists are mutually consistent with shared edge ids") {
    for (const auto& g :
         {WeightedGraph::lattice_box(3, 2), WeightedGraph::gasket(3)}) {
        std::map<std::pair<Vertex, Vertex>, EdgeId> seen;
        std::size_t directed = 0;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            g.for_neighbors(v, [&](Vertex u, EdgeId e) {
                ++directed;
                seen[{std::min(u, v), std::max(u, v)}] = e;
                const auto [a, b] = g.edge_endpoints(e);
                CHECK(std::min(a, b) == std::min(u, v));
                CHECK(std::max(a, b) == std::max(u, v));
            });
        }
        CHECK(directed == 2 * g.edge_count());
        CHECK(seen.size() == g.edge_count());
        std::set<EdgeId> ids;
        for (const auto& [uv, e] : seen) ids.insert(e);
        CHECK(ids.size() == g.edge_count());
        CHECK(*ids.rbegin() == g.edge_count() - 1);
    }
}

TEST_CASE("graph_distance basics") {
    const auto g = WeightedGraph::lattice_box(1, 1);
    CHECK(graph_distance(g, 0, 0) == 0);
    CHECK(graph_distance(g, 0, 2) == 2);

    // Symmetry and triangle inequality on sampled triples.
    const auto gg = WeightedGraph::gasket(3);
    CounterStream rng(7, StreamTag::trial, 0, 0);
    for (int i = 0; i < 40; ++i) {
        const Vertex x = rng.next_index(static_cast<std::uint32_t>(gg.vertex_count()));
        const Vertex y = rng.next_index(static_cast<std::uint32_t>(gg.vertex_count()));
        const Vertex z = rng.next_index(static_cast<std::uint32_t>(gg.vertex_count()));
        const auto dxy = graph_distance(gg, x, y);
        CHECK(dxy == graph_distance(gg, y, x));
        CHECK(dxy <= graph_distance(gg, x, z) + graph_distance(gg, z, y));
    }
}

TEST_CASE("balls on the lattice match direct enumeration") {
    const auto g = WeightedGraph::lattice_box(2, 8);
    const Vertex c = g.base_point();
    CHECK(ball(g, {c, 0}) == std::vector<Vertex>{c});
    CHECK(ball(g, {c, 1}).size() == 5);
    CHECK(ball(g, {c, 2}).size() == 13);
    for (std::uint32_t r = 1; r <= 5; ++r) {
        // direct enumeration over coordinates: |x|+|y| <= r
        std::size_t count = 0;
        for (std::int64_t x = -8; x <= 8; ++x)
            for (std::int64_t y = -8; y <= 8; ++y)
                if (std::llabs(x) + std::llabs(y) <= r) ++count;
        const auto b = ball(g, {c, r});
        CHECK(b.size() == count);
        const auto b_next = ball(g, {c, r + 1});
        CHECK(std::includes(b_next.begin(), b_next.end(), b.begin(), b.end()));
    }
}

TEST_CASE("volume: unit weights, additivity") {
    const auto g = WeightedGraph::lattice_box(2, 8);
    CHECK(volume(g, std::span<const Vertex>{}) == 0.0);
    const auto b1 = ball(g, {g.base_point(), 1});
    CHECK(volume(g, b1) == doctest::Approx(20.0));  // 5 interior vertices * 4

    const auto b2 = ball(g, {g.base_point(), 2});
    std::vector<Vertex> shell;
    std::set_difference(b2.begin(), b2.end(), b1.begin(), b1.end(),
                        std::back_inserter(shell));
    CHECK(volume(g, b1) + volume(g, shell) == doctest::Approx(volume(g, b2)));
}

TEST_CASE("power_law_fit recovers an exact power law") {
    std::vector<double> r, v;
    for (double x : {3.0, 9.0}) {
        r.push_back(x);
        v.push_back(2.5 * std::pow(x, 1.7));
    }
    const auto fit = power_law_fit(r, v);
    CHECK(fit.exponent == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(fit.max_log_residual < 1e-12);
}

TEST_CASE("volume_growth_fit on Z^2 recovers alpha = 2") {
    const auto g = WeightedGraph::lattice_box(2, 130);
    const auto fit = volume_growth_fit(g, g.base_point(), 16, 128);
    CHECK(fit.alpha_hat == doctest::Approx(2.0).epsilon(0.025));
    CHECK(fit.table.size() == 113);
    CHECK(fit.table.front().first == 16);
}

TEST_CASE("volume_growth_fit refuses boundary contact") {
    const auto g = WeightedGraph::lattice_box(2, 16);
    CHECK_THROWS_AS(volume_growth_fit(g, g.base_point(), 2, 16),
                    boundary_error);
    CHECK_THROWS_AS(volume_growth_fit(g, g.base_point(), 4, 4),
                    validation_error);
}

TEST_CASE("distance_to_boundary") {
    const auto g = WeightedGraph::lattice_box(2, 5);
    CHECK(g.distance_to_boundary(g.base_point()) == 5);
    CHECK(g.is_boundary(0));
    CHECK(!g.is_boundary(g.base_point()));

    const auto gg = WeightedGraph::gasket(3);
    CHECK(gg.distance_to_boundary(gg.base_point()) == 8);  // side 2^3
}
