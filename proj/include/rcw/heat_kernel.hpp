#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rcw/env.hpp"
#include "rcw/graph.hpp"

namespace rcw {

struct HeatKernelOptions {
    bool keep_rows = true;
    // Permit the support ball to contain truncation-boundary vertices. The
    // table then describes the finite chain exactly; callers opt in when the
    // mass reaching the boundary within N steps is negligible (gasket wedges
    // at large horizons).
    bool allow_truncated_support = false;
    std::uint64_t cell_budget = 2'000'000'000;  // (N+1) * |ball| when kept
};

// Exact n-step distributions P_n(x, .) for n = 0..N on the positive-
// conductance ball B(x, N+1), computed by iterated sparse application of the
// transition operator.
struct HeatKernelTable {
    Vertex source = 0;
    std::uint32_t horizon = 0;
    std::uint32_t support_radius = 0;
    bool rows_kept = false;
    bool truncated_support = false;

    std::vector<Vertex> ball_vertices;       // local index -> vertex id
    std::vector<std::uint32_t> dist;         // cluster distance from source
    std::vector<double> mu;                  // vertex weights on the ball
    std::uint32_t source_local = 0;

    std::vector<std::vector<double>> rows;   // P_n rows, if rows_kept
    std::vector<double> diag;                // P_n(x, x), n = 0..N
    double max_row_sum_error = 0.0;          // |sum - 1| over all rows

    double p(std::uint32_t n, std::uint32_t local) const {
        return rows[n][local] / mu[local];
    }
    double p_diag(std::uint32_t n) const { return diag[n] / mu[source_local]; }
};

HeatKernelTable heat_kernel_table(const Environment& env,
                                 const ClusterView& cluster, Vertex x,
                                 std::uint32_t horizon,
                                 const HeatKernelOptions& options = {});

enum class EnvelopeSide { upper, lower };

struct EnvelopeFit {
    EnvelopeSide side = EnvelopeSide::upper;
    double c_amp = 0.0;
    double c_exp = 0.0;
    std::size_t pair_count = 0;
    std::size_t violation_count = 0;  // under supplied constants
    double mean_log_slack = 0.0;
    bool supplied = false;
};

// Fits (or checks) the sub-Gaussian envelope
//   c_amp * n^{-alpha/beta} * exp(-c_exp * (d / n^{1/beta})^{beta/(beta-1)})
// against p_n(x, y) (upper side) or p_n + p_{n+1} (lower side), over the
// side-condition domain d ∨ n_hat <= n resp. d^{1+eps} ∨ n_hat <= n.
// When `supplied` constants are given, only violations are counted.
EnvelopeFit fit_envelope(const HeatKernelTable& table, EnvelopeSide side,
                         double alpha, double beta, double epsilon,
                         std::uint32_t n_hat = 1,
                         std::optional<std::pair<double, double>> supplied = {});

struct ExponentFit {
    double exponent_hat = 0.0;
    double max_log_residual = 0.0;
};

// Least-squares slope of log(p_n(x,x) + p_{n+1}(x,x)) against log n,
// negated; the p_n + p_{n+1} combination cancels bipartite parity.
ExponentFit on_diagonal_exponent(const HeatKernelTable& table,
                                 std::uint32_t n_min, std::uint32_t n_max);

}  // namespace rcw
