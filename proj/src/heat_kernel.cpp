#include "rcw/heat_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace rcw {

namespace {

// Neumaier-compensated sum.
double compensated_sum(const std::vector<double>& v) {
    double sum = 0.0, comp = 0.0;
    for (const double x : v) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

constexpr double kFlushThreshold = 1e-300;

}  // namespace

HeatKernelTable heat_kernel_table(const Environment& env,
                                  const ClusterView& cluster, Vertex x,
                                  std::uint32_t horizon,
                                  const HeatKernelOptions& options) {
    const auto& g = env.graph;
    g.check_vertex(x, "heat_kernel_table");
    if (!cluster.member[x])
        throw validation_error("heat_kernel_table: x is not in the cluster");
    if (!(g.vertex_weight(x) > 0.0))
        throw validation_error("heat_kernel_table: x is isolated (mu = 0)");

    HeatKernelTable table;
    table.source = x;
    table.horizon = horizon;
    table.support_radius = horizon + 1;
    table.rows_kept = options.keep_rows;

    const auto dist_full =
        bfs_distances(g, x, /*positive_only=*/true, table.support_radius);
    std::vector<std::uint32_t> local_of(g.vertex_count(), kUnreachable);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (dist_full[v] > table.support_radius) continue;
        if (g.is_boundary(v)) {
            if (!options.allow_truncated_support)
                throw boundary_error(
                    "heat_kernel_table: ball(x, N+1) reaches the truncation "
                    "boundary");
            table.truncated_support = true;
        }
        local_of[v] = static_cast<std::uint32_t>(table.ball_vertices.size());
        table.ball_vertices.push_back(v);
        table.dist.push_back(dist_full[v]);
    }
    const std::size_t ball = table.ball_vertices.size();
    if (options.keep_rows &&
        static_cast<std::uint64_t>(horizon + 1) * ball > options.cell_budget)
        throw budget_error("heat_kernel_table: (N+1)*|ball| exceeds budget");

    table.mu.resize(ball);
    for (std::size_t i = 0; i < ball; ++i)
        table.mu[i] = g.vertex_weight(table.ball_vertices[i]);
    table.source_local = local_of[x];

    // Local transition CSR: P(z, y) for positive-conductance edges with both
    // ends in the ball. Support after n <= N steps has radius <= N < N+1, so
    // no mass can cross the ball's outer shell within the horizon.
    std::vector<std::uint32_t> off(ball + 1, 0);
    std::vector<std::uint32_t> to;
    std::vector<double> prob;
    for (std::size_t z = 0; z < ball; ++z) {
        const Vertex gz = table.ball_vertices[z];
        const double mu_z = table.mu[z];
        g.for_neighbors(gz, [&](Vertex u, EdgeId e) {
            const double w = g.conductance(e);
            if (w > 0.0 && local_of[u] != kUnreachable) {
                to.push_back(local_of[u]);
                prob.push_back(w / mu_z);
            }
        });
        off[z + 1] = static_cast<std::uint32_t>(to.size());
    }

    std::vector<double> prev(ball, 0.0), next(ball, 0.0);
    prev[table.source_local] = 1.0;
    table.diag.resize(horizon + 1);
    table.diag[0] = 1.0;
    if (options.keep_rows) table.rows.push_back(prev);

    for (std::uint32_t n = 1; n <= horizon; ++n) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t z = 0; z < ball; ++z) {
            const double mass = prev[z];
            if (mass == 0.0) continue;
            for (std::uint32_t i = off[z]; i < off[z + 1]; ++i)
                next[to[i]] += mass * prob[i];
        }
        for (double& v : next)
            if (v != 0.0 && v < kFlushThreshold) v = 0.0;
        table.diag[n] = next[table.source_local];
        table.max_row_sum_error = std::max(
            table.max_row_sum_error, std::abs(compensated_sum(next) - 1.0));
        if (options.keep_rows) table.rows.push_back(next);
        prev.swap(next);
    }
    return table;
}

namespace {

struct PairPoint {
    double s;  // (d / n^{1/beta})^{beta/(beta-1)}
    double l;  // log p + (alpha/beta) log n
};

// Convex hull in the (s, l) plane so that max/min over i of l_i + c*s_i can
// be evaluated from few points for any c >= 0.
std::vector<PairPoint> hull(std::vector<PairPoint> pts, bool upper) {
    std::sort(pts.begin(), pts.end(),
              [](const PairPoint& a, const PairPoint& b) {
                  return a.s < b.s || (a.s == b.s && a.l < b.l);
              });
    std::vector<PairPoint> ded;
    for (const auto& p : pts) {
        if (!ded.empty() && ded.back().s == p.s) {
            if (upper ? p.l > ded.back().l : p.l < ded.back().l) ded.back() = p;
        } else {
            ded.push_back(p);
        }
    }
    std::vector<PairPoint> h;
    for (const auto& p : ded) {
        while (h.size() >= 2) {
            const auto& a = h[h.size() - 2];
            const auto& b = h.back();
            const double v =
                (b.s - a.s) * (p.l - a.l) - (b.l - a.l) * (p.s - a.s);
            if (upper ? v >= 0.0 : v <= 0.0)
                h.pop_back();
            else
                break;
        }
        h.push_back(p);
    }
    return h;
}

double extreme(const std::vector<PairPoint>& h, double c, bool upper) {
    double best = upper ? -1e308 : 1e308;
    for (const auto& p : h) {
        const double v = p.l + c * p.s;
        best = upper ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

}  // namespace

EnvelopeFit fit_envelope(const HeatKernelTable& table, EnvelopeSide side,
                         double alpha, double beta, double epsilon,
                         std::uint32_t n_hat,
                         std::optional<std::pair<double, double>> supplied) {
    if (!table.rows_kept)
        throw validation_error("fit_envelope: table was built without rows");
    if (!(beta > 1.0)) throw validation_error("fit_envelope: beta must be > 1");
    if (side == EnvelopeSide::lower && !(epsilon + 1.0 < beta))
        throw validation_error("fit_envelope: need epsilon + 1 < beta");
    if (table.horizon < 1)
        throw validation_error("fit_envelope: degenerate table");

    const double shape_exp = beta / (beta - 1.0);
    const double dim_exp = alpha / beta;
    const std::uint32_t n_max =
        side == EnvelopeSide::upper ? table.horizon : table.horizon - 1;

    std::vector<PairPoint> pts;
    double sum_l = 0.0, sum_s = 0.0;
    for (std::uint32_t n = std::max(n_hat, 1u); n <= n_max; ++n) {
        const double nb = std::pow(static_cast<double>(n), 1.0 / beta);
        for (std::size_t y = 0; y < table.ball_vertices.size(); ++y) {
            const double d = static_cast<double>(table.dist[y]);
            if (side == EnvelopeSide::upper) {
                if (d > n) continue;
            } else {
                if (std::pow(d, 1.0 + epsilon) > n) continue;
            }
            double value = table.rows[n][y];
            if (side == EnvelopeSide::lower) value += table.rows[n + 1][y];
            value /= table.mu[y];
            if (value < kFlushThreshold) continue;
            PairPoint p;
            p.s = std::pow(d / nb, shape_exp);
            p.l = std::log(value) + dim_exp * std::log(static_cast<double>(n));
            pts.push_back(p);
            sum_l += p.l;
            sum_s += p.s;
        }
    }
    if (pts.empty())
        throw validation_error("fit_envelope: empty side-condition domain");

    EnvelopeFit fit;
    fit.side = side;
    fit.pair_count = pts.size();
    const bool upper = side == EnvelopeSide::upper;

    if (supplied) {
        fit.supplied = true;
        fit.c_amp = supplied->first;
        fit.c_exp = supplied->second;
        const double log_amp = std::log(fit.c_amp);
        for (const auto& p : pts) {
            // envelope in hull coordinates: log c_amp - c_exp * s vs l
            const double bound = log_amp - fit.c_exp * p.s;
            const bool bad = upper ? p.l > bound + 1e-12 : p.l < bound - 1e-12;
            if (bad) ++fit.violation_count;
        }
        return fit;
    }

    // For a given c_exp the tight amplitude is exp(max_i(l_i + c_exp s_i))
    // (upper) resp. exp(min_i ...) (lower); pick c_exp minimizing the mean
    // log-slack of the envelope over the domain.
    const auto h = hull(pts, upper);
    const double mean_l = sum_l / static_cast<double>(pts.size());
    const double mean_s = sum_s / static_cast<double>(pts.size());
    auto objective = [&](double c) {
        const double anchor = extreme(h, c, upper);
        return upper ? anchor - mean_l - c * mean_s
                     : mean_l + c * mean_s - anchor;
    };
    double lo = 0.0, hi = 64.0, best_c = 0.0, best_obj = objective(0.0);
    for (int pass = 0; pass < 4; ++pass) {
        const int steps = 64;
        for (int i = 0; i <= steps; ++i) {
            const double c = lo + (hi - lo) * i / steps;
            const double obj = objective(c);
            if (obj < best_obj) {
                best_obj = obj;
                best_c = c;
            }
        }
        const double width = (hi - lo) / steps;
        lo = std::max(0.0, best_c - 2.0 * width);
        hi = best_c + 2.0 * width;
    }
    fit.c_exp = best_c;
    fit.c_amp = std::exp(extreme(h, best_c, upper));
    fit.mean_log_slack = best_obj;
    return fit;
}

ExponentFit on_diagonal_exponent(const HeatKernelTable& table,
                                 std::uint32_t n_min, std::uint32_t n_max) {
    if (n_min < 2)
        throw validation_error("on_diagonal_exponent: n_min must be >= 2");
    if (n_max + 1 > table.horizon || n_min >= n_max)
        throw validation_error(
            "on_diagonal_exponent: need n_min < n_max and n_max + 1 <= N");
    std::vector<double> ns, vals;
    for (std::uint32_t n = n_min; n <= n_max; ++n) {
        const double v = table.p_diag(n) + table.p_diag(n + 1);
        if (v < kFlushThreshold)
            throw validation_error("on_diagonal_exponent: vanishing diagonal");
        ns.push_back(static_cast<double>(n));
        vals.push_back(v);
    }
    const auto fit = power_law_fit(ns, vals);
    return {-fit.exponent, fit.max_log_residual};
}

}  // namespace rcw
