#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rcw/env.hpp"
#include "rcw/graph.hpp"

namespace rcw {

struct WalkConfig {
    Vertex start = 0;
    std::uint64_t n_steps = 0;
    double checkpoint_ratio = 1.5;  // checkpoints at floor(q^j), deduplicated
    std::uint32_t walk_id = 0;
    std::uint32_t boundary_margin = 0;  // 0 = derive from n_steps
};

struct PathSummary {
    std::uint32_t walk_id = 0;
    std::vector<std::uint64_t> checkpoints;
    std::vector<std::uint32_t> displacement;  // d(X_0, X_n) at checkpoints
    std::vector<std::uint32_t> running_max;   // max_{l<=n} d(X_0, X_l)
    Vertex final_position = 0;
    bool boundary_hit = false;
};

struct ExitRecord {
    Vertex center = 0;
    std::uint32_t radius = 0;
    std::uint64_t tau = 0;  // exit step, or the cap when censored
    bool censored = false;
    std::uint32_t walk_id = 0;
};

struct ConfinementEstimate {
    double estimate = 0.0;      // P(max_{s<=t} d <= r)
    double escape = 0.0;        // complement
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    std::uint64_t trials = 0;
};

std::vector<std::uint64_t> checkpoint_times(std::uint64_t n_steps, double q);

// Transition probabilities out of x: proportional to incident positive
// conductances. Throws on isolated vertices (mu = 0).
std::vector<std::pair<Vertex, double>> step_distribution(const Environment& env,
                                                         Vertex x);

// Runs walks on one environment's cluster. Caches the BFS distance field of
// the most recent start vertex, so batches should be grouped by start.
class WalkEngine {
  public:
    WalkEngine(const Environment& env, const ClusterView& cluster);

    PathSummary simulate(const WalkConfig& config);

    ExitRecord exit_time(Vertex center, std::uint32_t radius,
                         std::uint64_t cap, std::uint32_t walk_id);

    ConfinementEstimate confinement_probability(Vertex x, std::uint32_t radius,
                                                std::uint64_t t,
                                                std::uint64_t trials,
                                                std::uint32_t trial_base = 0);

    const std::vector<std::uint32_t>& distance_field(Vertex start);

  private:
    Vertex sample_step(Vertex v, class CounterStream& rng) const;

    const Environment& env_;
    const ClusterView& cluster_;
    Vertex cached_start_ = kNoVertex;
    std::vector<std::uint32_t> dist_;
};

}  // namespace rcw
