#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rcw/heat_kernel.hpp"
#include "rcw/walk.hpp"

using namespace rcw;

namespace {
constexpr std::uint64_t kSeed = 20260823ULL;

// Dense matrix-power reference for small graphs: rows[n][v] = P_n(x, v)
// over the whole vertex set.
std::vector<std::vector<double>> dense_rows(const Environment& env, Vertex x,
                                            std::uint32_t horizon) {
    const std::size_t n = env.graph.vertex_count();
    std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
    for (Vertex v = 0; v < n; ++v)
        for (const auto& [u, p] : step_distribution(env, v)) P[v][u] = p;
    std::vector<std::vector<double>> rows(horizon + 1,
                                          std::vector<double>(n, 0.0));
    rows[0][x] = 1.0;
    for (std::uint32_t s = 1; s <= horizon; ++s)
        for (Vertex v = 0; v < n; ++v) {
            const double m = rows[s - 1][v];
            if (m == 0.0) continue;
            for (Vertex u = 0; u < n; ++u)
                if (P[v][u] != 0.0) rows[s][u] += m * P[v][u];
        }
    return rows;
}

std::uint32_t local_index(const HeatKernelTable& t, Vertex v) {
    const auto it =
        std::find(t.ball_vertices.begin(), t.ball_vertices.end(), v);
    REQUIRE(it != t.ball_vertices.end());
    return static_cast<std::uint32_t>(it - t.ball_vertices.begin());
}
}  // namespace

TEST_CASE("point mass at n = 0 and the Z^1 diagonal value") {
    const auto env =
        sample_environment(WeightedGraph::lattice_box(1, 4), ModelSpec{}, kSeed, 0);
    const auto cl = extract_cluster(env);
    const auto t = heat_kernel_table(env, cl, env.graph.base_point(), 2);
    CHECK(t.rows[0][t.source_local] == 1.0);
    for (std::size_t i = 0; i < t.ball_vertices.size(); ++i)
        if (i != t.source_local) CHECK(t.rows[0][i] == 0.0);
    // p_2(0,0) = P_2(0,0)/mu(0) = (1/2)/2
    CHECK(t.diag[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.p_diag(2) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("bipartite parity zeros on the lattice") {
    const auto env = sample_environment(WeightedGraph::lattice_box(2, 14),
                                        ModelSpec{}, kSeed, 0);
    const auto cl = extract_cluster(env);
    const auto t = heat_kernel_table(env, cl, env.graph.base_point(), 10);
    for (std::uint32_t n = 0; n <= 10; ++n)
        for (std::size_t i = 0; i < t.ball_vertices.size(); ++i) {
            if ((n + t.dist[i]) % 2 == 1) CHECK(t.rows[n][i] == 0.0);
        }
}

TEST_CASE("conservation and symmetry on a sampled environment") {
    const auto env = sample_environment(
        WeightedGraph::lattice_box(2, 30),
        ModelSpec{EnvModel::uniform_elliptic, 1.0, 0.5, 2.0}, kSeed, 1);
    const auto cl = extract_cluster(env);
    const Vertex x = env.graph.base_point();
    const auto tx = heat_kernel_table(env, cl, x, 20);
    CHECK(tx.max_row_sum_error <= 1e-10);

    // reversibility: p_n(x,y) = p_n(y,x), checked via a second table from y
    int checked = 0;
    for (std::size_t i = 0; i < tx.ball_vertices.size() && checked < 100;
         i += 7) {
        const Vertex y = tx.ball_vertices[i];
        if (env.graph.distance_to_boundary(y) <= 21) continue;
        const auto ty = heat_kernel_table(env, cl, y, 20);
        const auto xi = local_index(ty, x);
        for (std::uint32_t n : {5u, 10u, 20u})
            CHECK(tx.p(n, static_cast<std::uint32_t>(i)) ==
                  doctest::Approx(ty.p(n, xi)).epsilon(1e-10));
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("iterated application equals dense matrix powers") {
    for (int half : {1}) {
        for (const auto& model :
             {ModelSpec{},
              ModelSpec{EnvModel::uniform_elliptic, 1.0, 0.5, 2.0}}) {
            // 3x3 grid: 9 vertices, horizon 8 with radius-9 support needs a
            // bigger box, so embed in half-width 12 and compare on the ball.
            const auto env = sample_environment(
                WeightedGraph::lattice_box(2, 12), model, kSeed, 2);
            const auto cl = extract_cluster(env);
            const Vertex x = env.graph.base_point();
            const std::uint32_t N = 8;
            const auto t = heat_kernel_table(env, cl, x, N);
            const auto ref = dense_rows(env, x, N);
            for (std::uint32_t n = 0; n <= N; ++n)
                for (std::size_t i = 0; i < t.ball_vertices.size(); ++i)
                    CHECK(t.rows[n][i] ==
                          doctest::Approx(ref[n][t.ball_vertices[i]])
                              .epsilon(1e-12));
            (void)half;
        }
    }
}

TEST_CASE("Chapman-Kolmogorov spot check") {
    const auto env = sample_environment(
        WeightedGraph::lattice_box(2, 12),
        ModelSpec{EnvModel::uniform_elliptic, 1.0, 0.5, 2.0}, kSeed, 3);
    const auto cl = extract_cluster(env);
    const Vertex x = env.graph.base_point();
    const std::uint32_t m = 3, n = 4;
    const auto tx = heat_kernel_table(env, cl, x, m + n);
    // P_{m+n}(x,y) = sum_z P_m(x,z) P_n(z,y), tables from every z in supp P_m
    std::int64_t target_coords[2] = {2, 1};
    const Vertex y = env.graph.vertex_at(target_coords);
    double sum = 0.0;
    for (std::size_t zi = 0; zi < tx.ball_vertices.size(); ++zi) {
        if (tx.rows[m][zi] == 0.0) continue;
        const auto tz = heat_kernel_table(env, cl, tx.ball_vertices[zi], n);
        const auto yi = std::find(tz.ball_vertices.begin(),
                                  tz.ball_vertices.end(), y);
        if (yi == tz.ball_vertices.end()) continue;
        sum += tx.rows[m][zi] *
               tz.rows[n][yi - tz.ball_vertices.begin()];
    }
    CHECK(sum == doctest::Approx(tx.rows[m + n][local_index(tx, y)])
                     .epsilon(1e-10));
}

TEST_CASE("truncation and budget guards") {
    const auto env = sample_environment(WeightedGraph::lattice_box(2, 8),
                                        ModelSpec{}, kSeed, 0);
    const auto cl = extract_cluster(env);
    const Vertex x = env.graph.base_point();
    CHECK_THROWS_AS(heat_kernel_table(env, cl, x, 8), boundary_error);

    HeatKernelOptions opt;
    opt.allow_truncated_support = true;
    const auto t = heat_kernel_table(env, cl, x, 8, opt);
    CHECK(t.truncated_support);

    HeatKernelOptions tiny;
    tiny.cell_budget = 10;
    CHECK_THROWS_AS(heat_kernel_table(env, cl, x, 4, tiny), budget_error);
}

TEST_CASE("keep_rows = false still yields the diagonal") {
    const auto env = sample_environment(WeightedGraph::lattice_box(1, 80),
                                        ModelSpec{}, kSeed, 0);
    const auto cl = extract_cluster(env);
    HeatKernelOptions opt;
    opt.keep_rows = false;
    const auto t = heat_kernel_table(env, cl, env.graph.base_point(), 64, opt);
    CHECK(!t.rows_kept);
    CHECK(t.rows.empty());
    CHECK(t.diag.size() == 65);
    CHECK(t.diag[2] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("envelope fits on the Z^2 constant environment") {
    const auto env = sample_environment(WeightedGraph::lattice_box(2, 70),
                                        ModelSpec{}, kSeed, 0);
    const auto cl = extract_cluster(env);
    const auto t = heat_kernel_table(env, cl, env.graph.base_point(), 64);

    const auto up = fit_envelope(t, EnvelopeSide::upper, 2.0, 2.0, 0.1);
    CHECK(up.c_amp == doctest::Approx(0.5545485497).epsilon(1e-6));
    CHECK(up.c_exp == doctest::Approx(0.5795288086).epsilon(1e-6));
    CHECK(up.pair_count == 93664);
    CHECK(up.violation_count == 0);

    const auto lo = fit_envelope(t, EnvelopeSide::lower, 2.0, 2.0, 0.1);
    CHECK(lo.c_amp == doctest::Approx(0.06244418852).epsilon(1e-6));
    CHECK(lo.c_exp == doctest::Approx(1.044616699).epsilon(1e-6));
    CHECK(lo.pair_count == 85455);

    // Fitted constants must actually satisfy the bound on every pair.
    const auto up_check = fit_envelope(t, EnvelopeSide::upper, 2.0, 2.0, 0.1,
                                       1, std::pair{up.c_amp, up.c_exp});
    CHECK(up_check.supplied);
    CHECK(up_check.violation_count == 0);
    const auto lo_check = fit_envelope(t, EnvelopeSide::lower, 2.0, 2.0, 0.1,
                                       1, std::pair{lo.c_amp, lo.c_exp});
    CHECK(lo_check.violation_count == 0);

    // Constants valid on a larger domain stay valid on a smaller one.
    const auto shrunk = fit_envelope(t, EnvelopeSide::upper, 2.0, 2.0, 0.1,
                                     8, std::pair{up.c_amp, up.c_exp});
    CHECK(shrunk.pair_count < up.pair_count);
    CHECK(shrunk.violation_count == 0);

    // Vacuous envelope never violates.
    const auto vac = fit_envelope(t, EnvelopeSide::upper, 2.0, 2.0, 0.1, 1,
                                  std::pair{1e300, 0.0});
    CHECK(vac.violation_count == 0);

    CHECK_THROWS_AS(fit_envelope(t, EnvelopeSide::lower, 2.0, 2.0, 1.0),
                    validation_error);  // epsilon + 1 == beta
}

TEST_CASE("on-diagonal exponent recovers alpha/beta") {
    const auto e1 = sample_environment(WeightedGraph::lattice_box(1, 150),
                                       ModelSpec{}, kSeed, 0);
    const auto c1 = extract_cluster(e1);
    const auto t1 = heat_kernel_table(e1, c1, e1.graph.base_point(), 128);
    const auto f1 = on_diagonal_exponent(t1, 16, 127);
    CHECK(f1.exponent_hat == doctest::Approx(0.5).epsilon(0.05));

    const auto e2 = sample_environment(WeightedGraph::lattice_box(2, 70),
                                       ModelSpec{}, kSeed, 0);
    const auto c2 = extract_cluster(e2);
    const auto t2 = heat_kernel_table(e2, c2, e2.graph.base_point(), 64);
    const auto f2 = on_diagonal_exponent(t2, 16, 63);
    CHECK(f2.exponent_hat == doctest::Approx(1.0).epsilon(0.05));

    CHECK_THROWS_AS(on_diagonal_exponent(t2, 1, 63), validation_error);
    CHECK_THROWS_AS(on_diagonal_exponent(t2, 16, 64), validation_error);
}
