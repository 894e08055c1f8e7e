#include "rcw/env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rcw/rng.hpp"

namespace rcw {

void ModelSpec::validate() const {
    switch (kind) {
        case EnvModel::constant:
            break;
        case EnvModel::bernoulli:
            if (p < 0.0 || p > 1.0)
                throw validation_error("model: bernoulli p must be in [0, 1]");
            break;
        case EnvModel::uniform_elliptic:
            if (!(c_low > 0.0) || c_low > c_high)
                throw validation_error(
                    "model: uniform_elliptic needs 0 < c_low <= c_high");
            break;
    }
}

std::string ModelSpec::name() const {
    switch (kind) {
        case EnvModel::constant: return "constant";
        case EnvModel::bernoulli: return "bernoulli";
        case EnvModel::uniform_elliptic: return "uniform_elliptic";
    }
    return "?";
}

Environment sample_environment(WeightedGraph graph, const ModelSpec& model,
                               std::uint64_t master_seed,
                               std::uint32_t env_id) {
    model.validate();
    Environment env{std::move(graph), model, master_seed, env_id};
    if (model.kind == EnvModel::constant) return env;  // implicit all-ones

    auto& cond = env.graph.mutable_conductances();
    const std::size_t m = cond.size();
    for (std::size_t e = 0; e < m; ++e) {
        const double u =
            keyed_uniform01(master_seed, StreamTag::edge, env_id, e);
        cond[e] = model.kind == EnvModel::bernoulli
                      ? (u < model.p ? 1.0 : 0.0)
                      : model.c_low + (model.c_high - model.c_low) * u;
    }
    return env;
}

ClusterView extract_cluster(const Environment& env) {
    const auto& g = env.graph;
    ClusterView view;
    view.member.assign(g.vertex_count(), false);
    const Vertex base = g.base_point();
    view.member[base] = true;
    view.cluster_size = 1;
    std::vector<Vertex> frontier{base};
    std::vector<Vertex> next;
    const bool sampled = g.has_sampled_conductances();
    while (!frontier.empty()) {
        next.clear();
        for (const Vertex v : frontier) {
            if (sampled) {
                g.for_neighbors(v, [&](Vertex u, EdgeId e) {
                    if (g.conductance(e) > 0.0 && !view.member[u]) {
                        view.member[u] = true;
                        next.push_back(u);
                    }
                });
            } else {
                g.for_neighbor_vertices(v, [&](Vertex u) {
                    if (!view.member[u]) {
                        view.member[u] = true;
                        next.push_back(u);
                    }
                });
            }
        }
        view.cluster_size += next.size();
        frontier.swap(next);
    }
    return view;
}

RegularityEstimate estimate_regularity_scale(const Environment& env,
                                             const ClusterView& cluster,
                                             Vertex x, double alpha,
                                             double c_low_vol,
                                             double c_high_vol,
                                             std::uint32_t r_max,
                                             double epsilon) {
    const auto& g = env.graph;
    g.check_vertex(x, "estimate_regularity_scale");
    if (!cluster.member[x])
        throw validation_error(
            "estimate_regularity_scale: x is not in the base-point cluster");
    if (r_max < 1)
        throw validation_error("estimate_regularity_scale: R_max must be >= 1");
    if (!(c_low_vol > 0.0) || c_low_vol > c_high_vol)
        throw validation_error(
            "estimate_regularity_scale: need 0 < c_low_vol <= c_high_vol");

    const auto dist = bfs_distances(g, x, /*positive_only=*/false, r_max);
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (dist[v] <= r_max && g.is_boundary(v))
            throw boundary_error(
                "estimate_regularity_scale: ball reaches the truncation "
                "boundary");

    std::vector<double> vol_at(r_max + 1, 0.0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (dist[v] > r_max || !cluster.member[v]) continue;
        vol_at[dist[v]] += g.vertex_weight(v);
    }
    std::partial_sum(vol_at.begin(), vol_at.end(), vol_at.begin());

    RegularityEstimate est;
    est.x = x;
    est.epsilon = epsilon;
    est.c_low_vol = c_low_vol;
    est.c_high_vol = c_high_vol;
    // Scan down from R_max; the sandwich must hold on the whole suffix.
    std::uint32_t first_ok = r_max + 1;
    for (std::uint32_t r = r_max; r >= 1; --r) {
        const double ra = std::pow(static_cast<double>(r), alpha);
        if (c_low_vol * ra <= vol_at[r] && vol_at[r] <= c_high_vol * ra)
            first_ok = r;
        else
            break;
    }
    if (first_ok <= r_max) est.n_hat = first_ok;
    return est;
}

RegularityTail regularity_tail(const WeightedGraph& base_graph,
                               const ModelSpec& model,
                               std::uint64_t master_seed,
                               const std::vector<std::uint32_t>& env_ids,
                               double alpha, double c_low_vol,
                               double c_high_vol, std::uint32_t r_max) {
    if (env_ids.size() < 10)
        throw validation_error("regularity_tail: need at least 10 seeds");
    RegularityTail tail;
    tail.env_count = env_ids.size();
    // exceed_count[n-1] = #envs with N_hat >= n
    std::vector<std::size_t> exceed(r_max + 1, 0);
    for (const std::uint32_t id : env_ids) {
        const auto env = sample_environment(base_graph, model, master_seed, id);
        const auto cluster = extract_cluster(env);
        const auto est = estimate_regularity_scale(
            env, cluster, env.graph.base_point(), alpha, c_low_vol, c_high_vol,
            r_max);
        const std::uint32_t n_hat =
            est.n_hat ? *est.n_hat : r_max + 1;  // not-found exceeds every n
        if (!est.n_hat) ++tail.not_found_count;
        for (std::uint32_t n = 1; n <= r_max + 1 && n <= n_hat; ++n)
            ++exceed[n - 1];
    }
    tail.survival.resize(r_max + 1);
    for (std::size_t i = 0; i < tail.survival.size(); ++i)
        tail.survival[i] =
            static_cast<double>(exceed[i]) / static_cast<double>(tail.env_count);
    return tail;
}

}  // namespace rcw
