#include "rcw/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace rcw {

WeightedGraph WeightedGraph::lattice_box(int d, std::int64_t half_width,
                                         std::size_t vertex_budget) {
    if (d < 1 || d > 4)
        throw validation_error("lattice_box: dimension must be in [1, 4]");
    if (half_width < 1)
        throw validation_error("lattice_box: half_width must be >= 1");
    const std::uint64_t side = 2 * static_cast<std::uint64_t>(half_width) + 1;
    std::uint64_t nvert = 1;
    for (int i = 0; i < d; ++i) {
        if (nvert > vertex_budget / side + 1)
            throw budget_error("lattice_box: (2L+1)^d exceeds vertex budget");
        nvert *= side;
    }
    if (nvert > vertex_budget)
        throw budget_error("lattice_box: (2L+1)^d exceeds vertex budget");

    WeightedGraph g;
    g.kind_ = GraphKind::lattice_box;
    g.dim_ = d;
    g.half_ = half_width;
    g.side_ = side;
    g.nvert_ = nvert;
    // Lexicographic vertex order: first coordinate most significant.
    std::uint64_t stride = 1;
    for (int a = d - 1; a >= 0; --a) {
        g.vstride_[a] = stride;
        stride *= side;
    }
    const std::uint64_t edges_per_axis = (side - 1) * (nvert / side);
    g.nedge_ = edges_per_axis * d;
    for (int a = 0; a < d; ++a) {
        g.eblock_[a] = edges_per_axis * static_cast<std::uint64_t>(a);
        std::uint64_t es = 1;
        for (int i = d - 1; i >= 0; --i) {
            g.estride_[a][i] = es;
            es *= (i == a) ? side - 1 : side;
        }
    }
    // Origin: all digits equal to L.
    std::uint64_t base = 0;
    for (int a = 0; a < d; ++a)
        base += static_cast<std::uint64_t>(half_width) * g.vstride_[a];
    g.base_ = static_cast<Vertex>(base);
    return g;
}

namespace {

using GasketCoord = std::array<std::int64_t, 2>;

void subdivide(const GasketCoord& c1, const GasketCoord& c2,
               const GasketCoord& c3, int depth,
               std::map<std::pair<GasketCoord, GasketCoord>, int>& edges) {
    if (depth == 0) {
        auto add = [&edges](GasketCoord a, GasketCoord b) {
            if (b < a) std::swap(a, b);
            edges.emplace(std::make_pair(a, b), 0);
        };
        add(c1, c2);
        add(c2, c3);
        add(c1, c3);
        return;
    }
    const GasketCoord m12{(c1[0] + c2[0]) / 2, (c1[1] + c2[1]) / 2};
    const GasketCoord m23{(c2[0] + c3[0]) / 2, (c2[1] + c3[1]) / 2};
    const GasketCoord m13{(c1[0] + c3[0]) / 2, (c1[1] + c3[1]) / 2};
    subdivide(c1, m12, m13, depth - 1, edges);
    subdivide(m12, c2, m23, depth - 1, edges);
    subdivide(m13, m23, c3, depth - 1, edges);
}

}  // namespace

WeightedGraph WeightedGraph::gasket(int level, std::size_t vertex_budget) {
    if (level < 1 || level > 16)
        throw validation_error("gasket: level must be in [1, 16]");
    std::uint64_t pow3 = 1;  // 3^(level+1)
    for (int i = 0; i <= level; ++i) pow3 *= 3;
    if ((pow3 + 3) / 2 > vertex_budget)
        throw budget_error("gasket: vertex count exceeds budget");

    // Side 2^level triangle; x stored in half-units, y in units of sqrt(3)/2,
    // so corners are (0,0), (2*2^level, 0), (2^level, 2^level).
    const std::int64_t s = std::int64_t{1} << level;
    std::map<std::pair<GasketCoord, GasketCoord>, int> edge_map;
    subdivide({0, 0}, {2 * s, 0}, {s, s}, level, edge_map);

    WeightedGraph g;
    g.kind_ = GraphKind::gasket_level;
    g.dim_ = 2;
    g.level_ = level;

    std::map<GasketCoord, Vertex> vid;
    for (const auto& [e, unused] : edge_map) {
        vid.emplace(e.first, 0);
        vid.emplace(e.second, 0);
    }
    Vertex next = 0;
    for (auto& [coord, id] : vid) id = next++;  // lexicographic numbering
    g.nvert_ = vid.size();
    g.nedge_ = edge_map.size();
    g.gcoords_.reserve(g.nvert_);
    for (const auto& [coord, id] : vid) g.gcoords_.push_back(coord);

    g.gedges_.reserve(g.nedge_);
    for (const auto& [e, unused] : edge_map) {
        Vertex u = vid.at(e.first);
        Vertex v = vid.at(e.second);
        if (v < u) std::swap(u, v);
        g.gedges_.emplace_back(u, v);
    }
    std::sort(g.gedges_.begin(), g.gedges_.end());

    std::vector<std::uint32_t> deg(g.nvert_, 0);
    for (const auto& [u, v] : g.gedges_) {
        ++deg[u];
        ++deg[v];
    }
    g.adj_off_.assign(g.nvert_ + 1, 0);
    for (std::size_t v = 0; v < g.nvert_; ++v)
        g.adj_off_[v + 1] = g.adj_off_[v] + deg[v];
    g.adj_nbr_.resize(2 * g.nedge_);
    g.adj_edge_.resize(2 * g.nedge_);
    std::vector<std::uint32_t> cursor(g.adj_off_.begin(), g.adj_off_.end() - 1);
    for (std::uint32_t e = 0; e < g.nedge_; ++e) {
        const auto [u, v] = g.gedges_[e];
        g.adj_nbr_[cursor[u]] = v;
        g.adj_edge_[cursor[u]++] = e;
        g.adj_nbr_[cursor[v]] = u;
        g.adj_edge_[cursor[v]++] = e;
    }

    g.base_ = vid.at(GasketCoord{0, 0});
    g.gasket_far_corners_ = {vid.at(GasketCoord{2 * s, 0}),
                             vid.at(GasketCoord{s, s})};
    return g;
}

std::array<std::int64_t, 4> WeightedGraph::coordinates(Vertex v) const {
    check_vertex(v, "coordinates");
    std::array<std::int64_t, 4> out{};
    if (kind_ == GraphKind::lattice_box) {
        std::uint64_t rem = v;
        for (int a = 0; a < dim_; ++a) {
            out[a] = static_cast<std::int64_t>(rem / vstride_[a]) - half_;
            rem %= vstride_[a];
        }
    } else {
        out[0] = gcoords_[v][0];
        out[1] = gcoords_[v][1];
    }
    return out;
}

Vertex WeightedGraph::vertex_at(std::span<const std::int64_t> coords) const {
    if (kind_ == GraphKind::lattice_box) {
        if (coords.size() != static_cast<std::size_t>(dim_)) return kNoVertex;
        std::uint64_t v = 0;
        for (int a = 0; a < dim_; ++a) {
            if (coords[a] < -half_ || coords[a] > half_) return kNoVertex;
            v += static_cast<std::uint64_t>(coords[a] + half_) * vstride_[a];
        }
        return static_cast<Vertex>(v);
    }
    if (coords.size() != 2) return kNoVertex;
    const GasketCoord c{coords[0], coords[1]};
    const auto it = std::lower_bound(gcoords_.begin(), gcoords_.end(), c);
    if (it == gcoords_.end() || *it != c) return kNoVertex;
    return static_cast<Vertex>(it - gcoords_.begin());
}

bool WeightedGraph::is_boundary(Vertex v) const {
    check_vertex(v, "is_boundary");
    if (kind_ == GraphKind::lattice_box) {
        std::uint64_t rem = v;
        for (int a = 0; a < dim_; ++a) {
            const std::uint64_t c = rem / vstride_[a];
            rem %= vstride_[a];
            if (c == 0 || c + 1 == side_) return true;
        }
        return false;
    }
    return v == gasket_far_corners_[0] || v == gasket_far_corners_[1];
}

std::uint32_t WeightedGraph::distance_to_boundary(Vertex v) const {
    check_vertex(v, "distance_to_boundary");
    if (kind_ == GraphKind::lattice_box) {
        std::uint64_t rem = v;
        std::uint64_t best = kUnreachable;
        for (int a = 0; a < dim_; ++a) {
            const std::uint64_t c = rem / vstride_[a];
            rem %= vstride_[a];
            best = std::min({best, c, side_ - 1 - c});
        }
        return static_cast<std::uint32_t>(best);
    }
    return std::min(graph_distance(*this, v, gasket_far_corners_[0]),
                    graph_distance(*this, v, gasket_far_corners_[1]));
}

int WeightedGraph::degree(Vertex v) const {
    check_vertex(v, "degree");
    if (kind_ == GraphKind::lattice_box) {
        int deg = 0;
        std::uint64_t rem = v;
        for (int a = 0; a < dim_; ++a) {
            const std::uint64_t c = rem / vstride_[a];
            rem %= vstride_[a];
            if (c > 0) ++deg;
            if (c + 1 < side_) ++deg;
        }
        return deg;
    }
    return static_cast<int>(adj_off_[v + 1] - adj_off_[v]);
}

std::pair<Vertex, Vertex> WeightedGraph::edge_endpoints(EdgeId e) const {
    if (e >= nedge_) throw validation_error("edge_endpoints: edge id out of range");
    if (kind_ == GraphKind::gasket_level)
        return gedges_[static_cast<std::size_t>(e)];
    const std::uint64_t per_axis = nedge_ / dim_;
    const int axis = static_cast<int>(e / per_axis);
    std::uint64_t rem = e - eblock_[axis];
    std::uint64_t u = 0;
    for (int i = 0; i < dim_; ++i) {
        const std::uint64_t digit = rem / estride_[axis][i];
        rem %= estride_[axis][i];
        u += digit * vstride_[i];
    }
    return {static_cast<Vertex>(u),
            static_cast<Vertex>(u + vstride_[axis])};
}

std::vector<double>& WeightedGraph::mutable_conductances() {
    if (cond_.empty()) cond_.assign(nedge_, 1.0);
    return cond_;
}

double WeightedGraph::vertex_weight(Vertex v) const {
    check_vertex(v, "vertex_weight");
    if (cond_.empty()) return static_cast<double>(degree(v));
    double mu = 0.0;
    for_neighbors(v, [&](Vertex, EdgeId e) { mu += cond_[e]; });
    return mu;
}

void WeightedGraph::check_vertex(Vertex v, const std::string& what) const {
    if (v >= nvert_)
        throw validation_error(what + ": vertex index out of range");
}

std::vector<std::uint32_t> bfs_distances(const WeightedGraph& g, Vertex source,
                                         bool positive_only,
                                         std::uint32_t radius_cap) {
    g.check_vertex(source, "bfs_distances");
    std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
    dist[source] = 0;
    std::vector<Vertex> frontier{source};
    std::vector<Vertex> next;
    std::uint32_t d = 0;
    const bool use_edges = positive_only && g.has_sampled_conductances();
    while (!frontier.empty() && d < radius_cap) {
        next.clear();
        for (const Vertex v : frontier) {
            if (use_edges) {
                g.for_neighbors(v, [&](Vertex u, EdgeId e) {
                    if (g.conductance(e) > 0.0 && dist[u] == kUnreachable) {
                        dist[u] = d + 1;
                        next.push_back(u);
                    }
                });
            } else {
                g.for_neighbor_vertices(v, [&](Vertex u) {
                    if (dist[u] == kUnreachable) {
                        dist[u] = d + 1;
                        next.push_back(u);
                    }
                });
            }
        }
        frontier.swap(next);
        ++d;
    }
    return dist;
}

std::uint32_t graph_distance(const WeightedGraph& g, Vertex x, Vertex y,
                             bool positive_only) {
    g.check_vertex(x, "graph_distance");
    g.check_vertex(y, "graph_distance");
    if (x == y) return 0;
    // Plain frontier BFS with early exit; fine for the sizes we query.
    std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
    dist[x] = 0;
    std::vector<Vertex> frontier{x};
    std::vector<Vertex> next;
    std::uint32_t d = 0;
    const bool use_edges = positive_only && g.has_sampled_conductances();
    while (!frontier.empty()) {
        next.clear();
        for (const Vertex v : frontier) {
            bool found = false;
            auto visit = [&](Vertex u, double w) {
                if (w <= 0.0 || dist[u] != kUnreachable) return;
                dist[u] = d + 1;
                if (u == y) found = true;
                next.push_back(u);
            };
            if (use_edges) {
                g.for_neighbors(v, [&](Vertex u, EdgeId e) {
                    visit(u, g.conductance(e));
                });
            } else {
                g.for_neighbor_vertices(v, [&](Vertex u) { visit(u, 1.0); });
            }
            if (found) return d + 1;
        }
        frontier.swap(next);
        ++d;
    }
    return kUnreachable;
}

std::vector<Vertex> ball(const WeightedGraph& g, const BallSpec& spec,
                         bool positive_only) {
    const auto dist = bfs_distances(g, spec.center, positive_only, spec.radius);
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (dist[v] <= spec.radius) out.push_back(v);
    return out;
}

bool touches_boundary(const WeightedGraph& g,
                      std::span<const Vertex> vertices) {
    for (const Vertex v : vertices)
        if (g.is_boundary(v)) return true;
    return false;
}

double volume(const WeightedGraph& g, std::span<const Vertex> vertices,
              const std::vector<bool>* in_cluster) {
    std::vector<Vertex> sorted(vertices.begin(), vertices.end());
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    for (const Vertex v : sorted) {
        if (in_cluster && !(*in_cluster)[v]) continue;
        total += g.vertex_weight(v);
    }
    return total;
}

PowerLawFit power_law_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw validation_error("power_law_fit: need at least two points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0)
            throw validation_error("power_law_fit: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw validation_error("power_law_fit: degenerate abscissae");
    PowerLawFit fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.exponent * sx) / n;
    for (std::size_t i = 0; i < n; ++i)
        fit.max_log_residual =
            std::max(fit.max_log_residual,
                     std::abs(ly[i] - fit.exponent * lx[i] - intercept));
    return fit;
}

VolumeGrowthFit volume_growth_fit(const WeightedGraph& g, Vertex center,
                                  std::uint32_t r_min, std::uint32_t r_max,
                                  const std::vector<bool>* in_cluster) {
    if (r_min < 1 || r_min >= r_max)
        throw validation_error("volume_growth_fit: need 1 <= r_min < r_max");
    const auto dist = bfs_distances(g, center, /*positive_only=*/false,
                                    r_max + 1);
    // Boundary contact at r_max+1 would already bias the largest ball.
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (dist[v] <= r_max + 1 && g.is_boundary(v))
            throw boundary_error(
                "volume_growth_fit: ball reaches the truncation boundary");

    std::vector<double> vol_at(r_max + 1, 0.0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (dist[v] > r_max) continue;
        if (in_cluster && !(*in_cluster)[v]) continue;
        vol_at[dist[v]] += g.vertex_weight(v);
    }
    std::partial_sum(vol_at.begin(), vol_at.end(), vol_at.begin());

    VolumeGrowthFit out;
    std::vector<double> rs, vs;
    for (std::uint32_t r = r_min; r <= r_max; ++r) {
        out.table.emplace_back(r, vol_at[r]);
        rs.push_back(static_cast<double>(r));
        vs.push_back(vol_at[r]);
    }
    const auto fit = power_law_fit(rs, vs);
    out.alpha_hat = fit.exponent;
    out.max_log_residual = fit.max_log_residual;
    return out;
}

}  // namespace rcw
