#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rcw/errors.hpp"

namespace rcw {

using Vertex = std::uint32_t;
using EdgeId = std::uint64_t;

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();
inline constexpr std::uint32_t kUnreachable =
    std::numeric_limits<std::uint32_t>::max();

enum class GraphKind { lattice_box, gasket_level };

struct BallSpec {
    Vertex center = 0;
    std::uint32_t radius = 0;
};

// Finite truncation of Z^d (box [-L, L]^d) or of the 2-d pre-Sierpinski
// gasket (one corner wedge of side 2^level). Vertices are numbered
// lexicographically by coordinate. Lattice adjacency and edge ids are
// implicit (computed from the index), which keeps boxes with ~10^8 vertices
// affordable; the gasket stores an explicit CSR.
//
// Gasket coordinates are integer pairs (x, y) with x in units of 1/2 and y
// in units of sqrt(3)/2, so every subdivision midpoint is exact. The corner
// a1 sits at (0, 0) and is the base point.
class WeightedGraph {
  public:
    static constexpr std::size_t kDefaultVertexBudget = 300'000'000;

    static WeightedGraph lattice_box(int d, std::int64_t half_width,
                                     std::size_t vertex_budget = kDefaultVertexBudget);
    static WeightedGraph gasket(int level,
                                std::size_t vertex_budget = kDefaultVertexBudget);

    GraphKind kind() const { return kind_; }
    int dim() const { return dim_; }
    std::int64_t half_width() const { return half_; }
    int level() const { return level_; }

    std::size_t vertex_count() const { return nvert_; }
    std::size_t edge_count() const { return nedge_; }
    Vertex base_point() const { return base_; }
    int max_degree() const {
        return kind_ == GraphKind::lattice_box ? 2 * dim_ : 4;
    }
    int coordinate_count() const {
        return kind_ == GraphKind::lattice_box ? dim_ : 2;
    }

    std::array<std::int64_t, 4> coordinates(Vertex v) const;
    // Inverse of coordinates(); kNoVertex when outside the graph.
    Vertex vertex_at(std::span<const std::int64_t> coords) const;

    // True for vertices where the finite truncation cuts off adjacency the
    // infinite graph would have: the faces of the box, or the two far
    // corners of the gasket wedge.
    bool is_boundary(Vertex v) const;
    // Hop distance from v to the nearest boundary vertex.
    std::uint32_t distance_to_boundary(Vertex v) const;

    int degree(Vertex v) const;

    template <class F>
    void for_neighbors(Vertex v, F&& f) const {  // f(Vertex u, EdgeId e)
        if (kind_ == GraphKind::lattice_box) {
            std::uint64_t rem = v;
            for (int a = 0; a < dim_; ++a) {
                const std::uint64_t c = rem / vstride_[a];
                rem %= vstride_[a];
                if (c > 0)
                    f(static_cast<Vertex>(v - vstride_[a]),
                      lattice_edge_id(static_cast<Vertex>(v - vstride_[a]), a));
                if (c + 1 < side_)
                    f(static_cast<Vertex>(v + vstride_[a]),
                      lattice_edge_id(v, a));
            }
        } else {
            for (std::uint32_t i = adj_off_[v]; i < adj_off_[v + 1]; ++i)
                f(adj_nbr_[i], static_cast<EdgeId>(adj_edge_[i]));
        }
    }

    // Neighbor vertices only; cheaper on lattices (no edge-id arithmetic).
    template <class F>
    void for_neighbor_vertices(Vertex v, F&& f) const {
        if (kind_ == GraphKind::lattice_box) {
            std::uint64_t rem = v;
            for (int a = 0; a < dim_; ++a) {
                const std::uint64_t c = rem / vstride_[a];
                rem %= vstride_[a];
                if (c > 0) f(static_cast<Vertex>(v - vstride_[a]));
                if (c + 1 < side_) f(static_cast<Vertex>(v + vstride_[a]));
            }
        } else {
            for (std::uint32_t i = adj_off_[v]; i < adj_off_[v + 1]; ++i)
                f(adj_nbr_[i]);
        }
    }

    std::pair<Vertex, Vertex> edge_endpoints(EdgeId e) const;

    double conductance(EdgeId e) const {
        return cond_.empty() ? 1.0 : cond_[e];
    }
    bool has_sampled_conductances() const { return !cond_.empty(); }
    // Materializes the per-edge array (all ones) on first use.
    std::vector<double>& mutable_conductances();

    // mu(v) = sum of incident conductances.
    double vertex_weight(Vertex v) const;

    void check_vertex(Vertex v, const std::string& what) const;

  private:
    WeightedGraph() = default;

    EdgeId lattice_edge_id(Vertex low_endpoint, int axis) const {
        // Edges are numbered in per-axis blocks; within a block
        // lexicographically by the lower endpoint, whose digit on `axis`
        // ranges over side-1 values.
        std::uint64_t rem = low_endpoint;
        std::uint64_t idx = 0;
        for (int i = 0; i < dim_; ++i) {
            const std::uint64_t digit = rem / vstride_[i];
            rem %= vstride_[i];
            idx += digit * estride_[axis][i];
        }
        return eblock_[axis] + idx;
    }

    GraphKind kind_ = GraphKind::lattice_box;
    int dim_ = 0;
    std::int64_t half_ = 0;
    int level_ = 0;
    std::uint64_t side_ = 0;  // 2L+1 (lattice only)
    std::array<std::uint64_t, 4> vstride_{};
    std::array<std::array<std::uint64_t, 4>, 4> estride_{};
    std::array<std::uint64_t, 4> eblock_{};
    std::size_t nvert_ = 0;
    std::size_t nedge_ = 0;
    Vertex base_ = 0;

    // gasket storage
    std::vector<std::uint32_t> adj_off_;
    std::vector<Vertex> adj_nbr_;
    std::vector<std::uint32_t> adj_edge_;
    std::vector<std::array<std::int64_t, 2>> gcoords_;
    std::vector<std::pair<Vertex, Vertex>> gedges_;
    std::array<Vertex, 2> gasket_far_corners_{};

    std::vector<double> cond_;
};

// BFS distance field from `source`; kUnreachable marks vertices with no
// admissible path. With positive_only set, only edges of positive
// conductance are traversed. Distances above `radius_cap` are left
// unreachable.
std::vector<std::uint32_t> bfs_distances(
    const WeightedGraph& g, Vertex source, bool positive_only,
    std::uint32_t radius_cap = kUnreachable);

std::uint32_t graph_distance(const WeightedGraph& g, Vertex x, Vertex y,
                             bool positive_only = false);

std::vector<Vertex> ball(const WeightedGraph& g, const BallSpec& spec,
                         bool positive_only = false);

bool touches_boundary(const WeightedGraph& g, std::span<const Vertex> vertices);

// V(A) = sum of mu over the given vertices; when `in_cluster` is supplied,
// vertices outside the base-point cluster contribute zero. Summation is in
// ascending vertex order.
double volume(const WeightedGraph& g, std::span<const Vertex> vertices,
              const std::vector<bool>* in_cluster = nullptr);

struct PowerLawFit {
    double exponent = 0.0;
    double max_log_residual = 0.0;
};

// Least-squares slope of log y against log x.
PowerLawFit power_law_fit(std::span<const double> x, std::span<const double> y);

struct VolumeGrowthFit {
    double alpha_hat = 0.0;
    double max_log_residual = 0.0;
    std::vector<std::pair<std::uint32_t, double>> table;  // (r, V)
};

VolumeGrowthFit volume_growth_fit(const WeightedGraph& g, Vertex center,
                                  std::uint32_t r_min, std::uint32_t r_max,
                                  const std::vector<bool>* in_cluster = nullptr);

}  // namespace rcw
