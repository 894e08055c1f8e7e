#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcw/graph.hpp"

namespace rcw {

enum class EnvModel { constant, bernoulli, uniform_elliptic };

struct ModelSpec {
    EnvModel kind = EnvModel::constant;
    double p = 1.0;        // bernoulli retention probability
    double c_low = 1.0;    // uniform_elliptic bounds
    double c_high = 1.0;

    void validate() const;
    std::string name() const;
};

// One sampled conductance configuration. The graph's conductance array is
// overwritten by the sampler; resampling with the same (model, master_seed,
// env_id) is bit-for-bit reproducible because each edge draw is keyed by its
// edge id.
struct Environment {
    WeightedGraph graph;
    ModelSpec model;
    std::uint64_t master_seed = 0;
    std::uint32_t env_id = 0;
};

Environment sample_environment(WeightedGraph graph, const ModelSpec& model,
                               std::uint64_t master_seed, std::uint32_t env_id);

// Positive-conductance component of the base point.
struct ClusterView {
    std::vector<bool> member;
    std::size_t cluster_size = 0;
    bool contains_base = true;
};

ClusterView extract_cluster(const Environment& env);

struct RegularityEstimate {
    Vertex x = 0;
    double epsilon = 0.0;  // carried as metadata only
    std::optional<std::uint32_t> n_hat;
    double c_low_vol = 0.0;
    double c_high_vol = 0.0;
};

// Smallest r0 such that c_low_vol * r^alpha <= V(x,r) <= c_high_vol * r^alpha
// for every integer r in [r0, R_max]; empty when no such r0 exists.
RegularityEstimate estimate_regularity_scale(const Environment& env,
                                             const ClusterView& cluster,
                                             Vertex x, double alpha,
                                             double c_low_vol,
                                             double c_high_vol,
                                             std::uint32_t r_max,
                                             double epsilon = 0.0);

struct RegularityTail {
    // survival[n-1] = fraction of environments with N_hat >= n, n = 1..R_max+1
    std::vector<double> survival;
    std::size_t not_found_count = 0;  // counted as exceeding every n
    std::size_t env_count = 0;
};

RegularityTail regularity_tail(const WeightedGraph& base_graph,
                               const ModelSpec& model,
                               std::uint64_t master_seed,
                               const std::vector<std::uint32_t>& env_ids,
                               double alpha, double c_low_vol,
                               double c_high_vol, std::uint32_t r_max);

}  // namespace rcw
