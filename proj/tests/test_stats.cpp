#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "rcw/stats.hpp"

using namespace rcw;

namespace {
constexpr std::uint64_t kSeed = 20260823ULL;

PathSummary flat_path(std::uint32_t id, std::uint64_t n_steps) {
    PathSummary s;
    s.walk_id = id;
    s.checkpoints = checkpoint_times(n_steps, 1.5);
    s.displacement.assign(s.checkpoints.size(), 0);
    s.running_max.assign(s.checkpoints.size(), 0);
    return s;
}

PathSummary ballistic_path(std::uint32_t id, std::uint64_t n_steps) {
    PathSummary s;
    s.walk_id = id;
    s.checkpoints = checkpoint_times(n_steps, 1.5);
    for (const auto n : s.checkpoints) {
        s.displacement.push_back(static_cast<std::uint32_t>(n));
        s.running_max.push_back(static_cast<std::uint32_t>(n));
    }
    return s;
}
}  // namespace

TEST_CASE("lil_report on degenerate paths") {
    const ScalingParams params = catalog_params(GraphKind::lattice_box, 2);

    std::vector<PathSummary> flat{flat_path(0, 1000)};
    const auto rep = lil_report(flat, params);
    CHECK(rep.walks[0].c1 == 0.0);
    CHECK(rep.walks[0].c1_sup == 0.0);
    CHECK(rep.walks[0].c2 == 0.0);
    CHECK(!rep.walks[0].non_diffusive);
    CHECK(rep.non_diffusive_count == 0);

    std::vector<PathSummary> ballistic{ballistic_path(0, 1'000'000)};
    const auto brep = lil_report(ballistic, params);
    CHECK(brep.walks[0].non_diffusive);
    CHECK(brep.non_diffusive_count == 1);
    // running_max(n) = n gives n/Phi(n) = sqrt(n/log log n), far above O(1)
    CHECK(brep.c1_sup_tail_max > 100.0);
}

TEST_CASE("lil_report discard accounting and errors") {
    const ScalingParams params = catalog_params(GraphKind::lattice_box, 2);
    auto good = flat_path(0, 1000);
    auto bad = flat_path(1, 1000);
    bad.boundary_hit = true;
    std::vector<PathSummary> mixed{good, bad};
    const auto rep = lil_report(mixed, params);
    CHECK(rep.discarded == 1);
    CHECK(rep.walks.size() == 1);

    std::vector<PathSummary> all_bad{bad};
    CHECK_THROWS_AS(lil_report(all_bad, params), validation_error);
    CHECK_THROWS_AS(lil_report(std::span<const PathSummary>{}, params),
                    validation_error);
}

TEST_CASE("lil_report tail window and permutation invariance") {
    const auto env = sample_environment(WeightedGraph::lattice_box(2, 400),
                                        ModelSpec{}, kSeed, 0);
    const auto cl = extract_cluster(env);
    WalkEngine engine(env, cl);
    const ScalingParams params = catalog_params(GraphKind::lattice_box, 2);
    std::vector<PathSummary> summaries;
    for (std::uint32_t id = 0; id < 50; ++id)
        summaries.push_back(engine.simulate({env.graph.base_point(), 10'000, 1.5, id}));

    const auto rep = lil_report(summaries, params);
    CHECK(rep.discarded == 0);
    CHECK(rep.n_tail == 748);  // last decade of the largest checkpoint
    CHECK(rep.c1_sup_tail_median == doctest::Approx(1.3413).epsilon(1e-3));
    CHECK(rep.c2_tail_median == doctest::Approx(1.4686).epsilon(1e-3));
    CHECK(rep.non_diffusive_count == 0);
    CHECK(rep.c1_tail_max <= rep.c1_sup_tail_max);
    CHECK(rep.c2_tail_min > 0.0);

    // C2_hat <= C1_sup_hat * log log(n_max) at matched checkpoints.
    const double n_max = static_cast<double>(summaries[0].checkpoints.back());
    for (const auto& w : rep.walks)
        CHECK(w.c2 <= w.c1_sup * std::log(std::log(n_max)) * (1.0 + 1e-12));

    std::mt19937 g(1);
    std::shuffle(summaries.begin(), summaries.end(), g);
    const auto shuffled = lil_report(summaries, params);
    CHECK(shuffled.c1_max == rep.c1_max);
    CHECK(shuffled.c1_sup_median == rep.c1_sup_median);
    CHECK(shuffled.c2_tail_min == rep.c2_tail_min);
    CHECK(shuffled.c1_sup_tail_median == rep.c1_sup_tail_median);
}

TEST_CASE("exit_scaling_report from synthetic records") {
    std::vector<ExitRecord> recs;
    const std::uint32_t radii[3] = {2, 3, 4};
    for (const std::uint32_t r : radii)
        for (std::uint64_t tau : {4ull, 8ull, 12ull, 16ull})
            recs.push_back({0, r, tau * r, false, 0});
    ExitRecord cens{0, 2, 1000, true, 9};
    recs.push_back(cens);

    const auto rep = exit_scaling_report(recs, 2.0);
    REQUIRE(rep.radii.size() == 3);
    CHECK(rep.censored_total == 1);
    const auto& s2 = rep.radii[0];
    CHECK(s2.radius == 2);
    CHECK(s2.count == 4);
    CHECK(s2.censored == 1);
    const double norm2 = 4.0 * std::log(std::log(4.0));
    CHECK(s2.normalizer == doctest::Approx(norm2).epsilon(1e-12));
    CHECK(s2.median == doctest::Approx(20.0 / norm2).epsilon(1e-12));
    CHECK(s2.max == doctest::Approx(32.0 / norm2).epsilon(1e-12));
    CHECK(rep.band_low <= rep.band_high);
    double min_max = 1e300, max_max = 0.0;
    for (const auto& s : rep.radii) {
        min_max = std::min(min_max, s.max);
        max_max = std::max(max_max, s.max);
    }
    CHECK(rep.band_low == min_max);
    CHECK(rep.band_high == max_max);

    // fewer than 3 radii with uncensored records
    std::vector<ExitRecord> few(recs.begin(), recs.begin() + 8);
    CHECK_THROWS_AS(exit_scaling_report(few, 2.0), validation_error);
    std::vector<ExitRecord> all_censored{cens};
    CHECK_THROWS_AS(exit_scaling_report(all_censored, 2.0), validation_error);
    // r = 1 has r^beta < e
    std::vector<ExitRecord> tiny;
    for (std::uint32_t r : {1u, 3u, 4u}) tiny.push_back({0, r, 10, false, 0});
    CHECK_THROWS_AS(exit_scaling_report(tiny, 2.0), validation_error);
}

TEST_CASE("mean exit time from radius 2 on Z^1 is (r+1)^2 = 9") {
    const auto env = sample_environment(WeightedGraph::lattice_box(1, 60),
                                        ModelSpec{}, kSeed, 0);
    const auto cl = extract_cluster(env);
    WalkEngine engine(env, cl);
    double sum = 0.0;
    const int trials = 20'000;
    for (int i = 0; i < trials; ++i)
        sum += static_cast<double>(
            engine.exit_time(env.graph.base_point(), 2, 100'000, i).tau);
    CHECK(sum / trials == doctest::Approx(9.0).epsilon(0.02));
}

TEST_CASE("confinement_vs_corollary table") {
    const auto env = sample_environment(WeightedGraph::lattice_box(2, 120),
                                        ModelSpec{}, kSeed, 0);
    const auto cl = extract_cluster(env);
    WalkEngine engine(env, cl);
    const ScalingParams params = catalog_params(GraphKind::lattice_box, 2);
    const auto rows = confinement_vs_corollary(
        engine, env.graph.base_point(), params, 1, 3, 2000);
    REQUIRE(rows.size() == 3);

    // k = 1: horizon <= radius, so confinement is certain
    CHECK(rows[0].radius == 2);
    CHECK(rows[0].horizon == 2);
    CHECK(rows[0].estimate == 1.0);
    // targets (1+k)^{-2/3}
    CHECK(rows[1].target == doctest::Approx(std::pow(3.0, -2.0 / 3.0)));
    CHECK(rows[2].target == doctest::Approx(std::pow(4.0, -2.0 / 3.0)));
    // frozen Monte Carlo baselines
    CHECK(rows[1].estimate == doctest::Approx(0.4850).epsilon(1e-6));
    CHECK(rows[2].estimate == doctest::Approx(0.1885).epsilon(1e-6));
    for (const auto& r : rows) {
        CHECK(r.wilson_low <= r.estimate);
        CHECK(r.estimate <= r.wilson_high);
    }

    CHECK_THROWS_AS(confinement_vs_corollary(engine, env.graph.base_point(),
                                             params, 8, 8, 10),
                    validation_error);  // a_8 = e^32 out of range
    CHECK_THROWS_AS(confinement_vs_corollary(engine, env.graph.base_point(),
                                             params, 0, 3, 10),
                    validation_error);
}

TEST_CASE("dispersion_report") {
    SUBCASE("identical stats give zero dispersion") {
        std::vector<LabeledStat> stats;
        for (std::uint32_t env = 0; env < 5; ++env)
            for (std::uint32_t start = 0; start < 2; ++start)
                stats.push_back({env, start, 1.3, 0.8});
        const auto rep = dispersion_report(stats);
        CHECK(rep.env_count == 5);
        CHECK(rep.max_starts == 2);
        CHECK(rep.cross_env_c1 == 0.0);
        CHECK(rep.cross_env_c2 == 0.0);
        CHECK(rep.cross_start_c1 == 0.0);
        CHECK(rep.cross_start_c2 == 0.0);
    }
    SUBCASE("single-axis ensembles report NaN on the missing axis") {
        std::vector<LabeledStat> env_only;
        for (std::uint32_t env = 0; env < 5; ++env)
            env_only.push_back({env, 0, 1.0 + 0.1 * env, 0.8});
        const auto e = dispersion_report(env_only);
        CHECK(std::isfinite(e.cross_env_c1));
        CHECK(std::isnan(e.cross_start_c1));

        std::vector<LabeledStat> start_only{{0, 0, 1.0, 0.8},
                                            {0, 1, 1.2, 0.9}};
        const auto s = dispersion_report(start_only);
        CHECK(std::isnan(s.cross_env_c1));
        CHECK(std::isfinite(s.cross_start_c1));
    }
    SUBCASE("insufficient ensemble") {
        std::vector<LabeledStat> one{{0, 0, 1.0, 0.8}};
        CHECK_THROWS_AS(dispersion_report(one), validation_error);
    }
}

TEST_CASE("median helper") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK_THROWS_AS(median({}), validation_error);
}
