#include "rcw/walk.hpp"

#include <algorithm>
#include <cmath>

#include "rcw/rng.hpp"

namespace rcw {

std::vector<std::uint64_t> checkpoint_times(std::uint64_t n_steps, double q) {
    if (!(q > 1.0))
        throw validation_error("checkpoint_times: ratio must be > 1");
    std::vector<std::uint64_t> times;
    double t = 1.0;
    while (true) {
        const auto ft = static_cast<std::uint64_t>(t);
        if (ft > n_steps) break;
        if (times.empty() || times.back() != ft) times.push_back(ft);
        if (t > 2.0 * static_cast<double>(n_steps)) break;
        t *= q;
    }
    return times;
}

std::vector<std::pair<Vertex, double>> step_distribution(const Environment& env,
                                                         Vertex x) {
    const auto& g = env.graph;
    g.check_vertex(x, "step_distribution");
    std::vector<std::pair<Vertex, double>> out;
    double mu = 0.0;
    g.for_neighbors(x, [&](Vertex u, EdgeId e) {
        const double w = g.conductance(e);
        if (w > 0.0) {
            out.emplace_back(u, w);
            mu += w;
        }
    });
    if (mu <= 0.0)
        throw validation_error("step_distribution: vertex is isolated (mu = 0)");
    for (auto& [u, w] : out) w /= mu;
    return out;
}

WalkEngine::WalkEngine(const Environment& env, const ClusterView& cluster)
    : env_(env), cluster_(cluster) {}

const std::vector<std::uint32_t>& WalkEngine::distance_field(Vertex start) {
    if (cached_start_ != start) {
        dist_ = bfs_distances(env_.graph, start, /*positive_only=*/true);
        cached_start_ = start;
    }
    return dist_;
}

Vertex WalkEngine::sample_step(Vertex v, CounterStream& rng) const {
    const auto& g = env_.graph;
    Vertex nbr[8];
    if (!g.has_sampled_conductances()) {
        std::uint32_t m = 0;
        g.for_neighbor_vertices(v, [&](Vertex u) { nbr[m++] = u; });
        return nbr[rng.next_index(m)];
    }
    double wts[8];
    std::uint32_t m = 0;
    double mu = 0.0;
    g.for_neighbors(v, [&](Vertex u, EdgeId e) {
        const double w = g.conductance(e);
        if (w > 0.0) {
            nbr[m] = u;
            wts[m] = w;
            ++m;
            mu += w;
        }
    });
    double pick = rng.next_double() * mu;
    for (std::uint32_t i = 0; i + 1 < m; ++i) {
        pick -= wts[i];
        if (pick < 0.0) return nbr[i];
    }
    return nbr[m - 1];
}

PathSummary WalkEngine::simulate(const WalkConfig& config) {
    const auto& g = env_.graph;
    g.check_vertex(config.start, "simulate_walk");
    if (!cluster_.member[config.start])
        throw validation_error("simulate_walk: start is not in the cluster");

    PathSummary summary;
    summary.walk_id = config.walk_id;
    summary.checkpoints =
        checkpoint_times(config.n_steps, config.checkpoint_ratio);
    summary.final_position = config.start;
    if (config.n_steps == 0) {
        summary.displacement.assign(summary.checkpoints.size(), 0);
        summary.running_max.assign(summary.checkpoints.size(), 0);
        return summary;
    }
    if (g.distance_to_boundary(config.start) <= config.boundary_margin)
        throw validation_error(
            "simulate_walk: start is within boundary_margin of the truncation "
            "boundary");
    if (g.has_sampled_conductances() && !(g.vertex_weight(config.start) > 0.0))
        throw validation_error("simulate_walk: start is isolated (mu = 0)");

    const auto& dist = distance_field(config.start);
    CounterStream rng(env_.master_seed, StreamTag::walk, env_.env_id,
                      config.walk_id);

    Vertex v = config.start;
    std::uint32_t running_max = 0;
    std::size_t next_cp = 0;
    for (std::uint64_t step = 1; step <= config.n_steps; ++step) {
        v = sample_step(v, rng);
        const std::uint32_t d = dist[v];
        running_max = std::max(running_max, d);
        if (!summary.boundary_hit && g.is_boundary(v))
            summary.boundary_hit = true;
        while (next_cp < summary.checkpoints.size() &&
               summary.checkpoints[next_cp] == step) {
            summary.displacement.push_back(d);
            summary.running_max.push_back(running_max);
            ++next_cp;
        }
    }
    summary.final_position = v;
    return summary;
}

ExitRecord WalkEngine::exit_time(Vertex center, std::uint32_t radius,
                                 std::uint64_t cap, std::uint32_t walk_id) {
    const auto& g = env_.graph;
    g.check_vertex(center, "exit_time");
    if (!cluster_.member[center])
        throw validation_error("exit_time: center is not in the cluster");
    if (g.distance_to_boundary(center) <= radius + 1)
        throw boundary_error(
            "exit_time: ball(center, r+1) reaches the truncation boundary");
    if (cap == 0) throw validation_error("exit_time: cap must be >= 1");

    const auto& dist = distance_field(center);
    CounterStream rng(env_.master_seed, StreamTag::trial, env_.env_id, walk_id);

    ExitRecord rec;
    rec.center = center;
    rec.radius = radius;
    rec.walk_id = walk_id;
    Vertex v = center;
    for (std::uint64_t step = 1; step <= cap; ++step) {
        v = sample_step(v, rng);
        if (dist[v] > radius) {
            rec.tau = step;
            return rec;
        }
    }
    rec.tau = cap;
    rec.censored = true;
    return rec;
}

ConfinementEstimate WalkEngine::confinement_probability(
    Vertex x, std::uint32_t radius, std::uint64_t t, std::uint64_t trials,
    std::uint32_t trial_base) {
    const auto& g = env_.graph;
    g.check_vertex(x, "confinement_probability");
    if (trials < 1)
        throw validation_error("confinement_probability: trials must be >= 1");
    if (!cluster_.member[x])
        throw validation_error("confinement_probability: x not in cluster");

    ConfinementEstimate est;
    est.trials = trials;
    // Trajectories are 1-Lipschitz in the cluster metric, so r >= t (and
    // t = 0) confine with probability one; no sampling needed.
    if (t == 0 || radius >= t) {
        est.estimate = 1.0;
        est.escape = 0.0;
        est.wilson_low = est.wilson_high = 1.0;
        return est;
    }
    if (g.distance_to_boundary(x) <= radius + 1)
        throw boundary_error(
            "confinement_probability: ball(x, r+1) reaches the truncation "
            "boundary");

    const auto& dist = distance_field(x);
    std::uint64_t confined = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        CounterStream rng(env_.master_seed, StreamTag::trial, env_.env_id,
                          trial_base + trial);
        Vertex v = x;
        bool stayed = true;
        for (std::uint64_t step = 1; step <= t; ++step) {
            v = sample_step(v, rng);
            if (dist[v] > radius) {
                stayed = false;
                break;
            }
        }
        if (stayed) ++confined;
    }
    est.estimate =
        static_cast<double>(confined) / static_cast<double>(trials);
    est.escape = 1.0 - est.estimate;
    // Wilson 95% interval.
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double ph = est.estimate;
    const double denom = 1.0 + z * z / n;
    const double center_w = (ph + z * z / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(ph * (1.0 - ph) / n + z * z / (4.0 * n * n)) / denom;
    est.wilson_low = std::max(0.0, center_w - half);
    est.wilson_high = std::min(1.0, center_w + half);
    return est;
}

}  // namespace rcw
