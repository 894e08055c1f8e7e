#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rcw/heat_kernel.hpp"
#include "rcw/scaling.hpp"
#include "rcw/stats.hpp"

namespace py = pybind11;
using namespace rcw;

PYBIND11_MODULE(_rcwalk, m) {
    m.doc() = "random conductance model walks: graphs, environments, kernels, "
              "LIL statistics";

    py::register_exception<validation_error>(m, "ValidationError");
    py::register_exception<budget_error>(m, "BudgetError");
    py::register_exception<boundary_error>(m, "BoundaryError");

    py::class_<WeightedGraph>(m, "WeightedGraph")
        .def_static("lattice_box", &WeightedGraph::lattice_box, py::arg("d"),
                    py::arg("half_width"),
                    py::arg("vertex_budget") = WeightedGraph::kDefaultVertexBudget)
        .def_static("gasket", &WeightedGraph::gasket, py::arg("level"),
                    py::arg("vertex_budget") = WeightedGraph::kDefaultVertexBudget)
        .def_property_readonly("vertex_count", &WeightedGraph::vertex_count)
        .def_property_readonly("edge_count", &WeightedGraph::edge_count)
        .def_property_readonly("base_point", &WeightedGraph::base_point)
        .def("degree", &WeightedGraph::degree)
        .def("is_boundary", &WeightedGraph::is_boundary)
        .def("distance_to_boundary", &WeightedGraph::distance_to_boundary)
        .def("conductance", &WeightedGraph::conductance)
        .def("coordinates",
             [](const WeightedGraph& g, Vertex v) {
                 const auto c = g.coordinates(v);
                 return std::vector<std::int64_t>(
                     c.begin(), c.begin() + g.coordinate_count());
             })
        .def("vertex_at", [](const WeightedGraph& g,
                             const std::vector<std::int64_t>& coords) {
            return g.vertex_at(coords);
        });

    m.def("graph_distance", &graph_distance, py::arg("graph"), py::arg("x"),
          py::arg("y"), py::arg("positive_only") = false);
    m.def(
        "ball",
        [](const WeightedGraph& g, Vertex center, std::uint32_t radius,
           bool positive_only) {
            return ball(g, {center, radius}, positive_only);
        },
        py::arg("graph"), py::arg("center"), py::arg("radius"),
        py::arg("positive_only") = false);
    m.def(
        "volume",
        [](const WeightedGraph& g, const std::vector<Vertex>& vertices) {
            return volume(g, vertices);
        },
        py::arg("graph"), py::arg("vertices"));

    py::class_<VolumeGrowthFit>(m, "VolumeGrowthFit")
        .def_readonly("alpha_hat", &VolumeGrowthFit::alpha_hat)
        .def_readonly("max_log_residual", &VolumeGrowthFit::max_log_residual)
        .def_readonly("table", &VolumeGrowthFit::table);
    m.def(
        "volume_growth_fit",
        [](const WeightedGraph& g, Vertex center, std::uint32_t r_min,
           std::uint32_t r_max) {
            return volume_growth_fit(g, center, r_min, r_max);
        },
        py::arg("graph"), py::arg("center"), py::arg("r_min"), py::arg("r_max"));

    py::enum_<EnvModel>(m, "EnvModel")
        .value("constant", EnvModel::constant)
        .value("bernoulli", EnvModel::bernoulli)
        .value("uniform_elliptic", EnvModel::uniform_elliptic);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init([](EnvModel kind, double p, double c_low, double c_high) {
                 ModelSpec s{kind, p, c_low, c_high};
                 s.validate();
                 return s;
             }),
             py::arg("kind") = EnvModel::constant, py::arg("p") = 1.0,
             py::arg("c_low") = 1.0, py::arg("c_high") = 1.0)
        .def_readonly("kind", &ModelSpec::kind)
        .def_readonly("p", &ModelSpec::p)
        .def_readonly("c_low", &ModelSpec::c_low)
        .def_readonly("c_high", &ModelSpec::c_high);

    py::class_<Environment>(m, "Environment")
        .def_readonly("model", &Environment::model)
        .def_readonly("master_seed", &Environment::master_seed)
        .def_readonly("env_id", &Environment::env_id)
        .def_property_readonly(
            "graph", [](const Environment& e) -> const WeightedGraph& {
                return e.graph;
            },
            py::return_value_policy::reference_internal);
    m.def("sample_environment", &sample_environment, py::arg("graph"),
          py::arg("model"), py::arg("master_seed"), py::arg("env_id"));

    py::class_<ClusterView>(m, "ClusterView")
        .def_readonly("cluster_size", &ClusterView::cluster_size)
        .def_readonly("contains_base", &ClusterView::contains_base)
        .def("member", [](const ClusterView& c, Vertex v) {
            return c.member.at(v);
        });
    m.def("extract_cluster", &extract_cluster);

    py::class_<RegularityEstimate>(m, "RegularityEstimate")
        .def_readonly("x", &RegularityEstimate::x)
        .def_readonly("n_hat", &RegularityEstimate::n_hat)
        .def_readonly("c_low_vol", &RegularityEstimate::c_low_vol)
        .def_readonly("c_high_vol", &RegularityEstimate::c_high_vol);
    m.def("estimate_regularity_scale", &estimate_regularity_scale,
          py::arg("env"), py::arg("cluster"), py::arg("x"), py::arg("alpha"),
          py::arg("c_low_vol"), py::arg("c_high_vol"), py::arg("r_max"),
          py::arg("epsilon") = 0.0);

    py::class_<RegularityTail>(m, "RegularityTail")
        .def_readonly("survival", &RegularityTail::survival)
        .def_readonly("not_found_count", &RegularityTail::not_found_count)
        .def_readonly("env_count", &RegularityTail::env_count);
    m.def("regularity_tail", &regularity_tail, py::arg("graph"),
          py::arg("model"), py::arg("master_seed"), py::arg("env_ids"),
          py::arg("alpha"), py::arg("c_low_vol"), py::arg("c_high_vol"),
          py::arg("r_max"));

    m.def("checkpoint_times", &checkpoint_times, py::arg("n_steps"),
          py::arg("q"));
    m.def("step_distribution", &step_distribution, py::arg("env"),
          py::arg("x"));

    py::class_<PathSummary>(m, "PathSummary")
        .def_readonly("walk_id", &PathSummary::walk_id)
        .def_readonly("checkpoints", &PathSummary::checkpoints)
        .def_readonly("displacement", &PathSummary::displacement)
        .def_readonly("running_max", &PathSummary::running_max)
        .def_readonly("final_position", &PathSummary::final_position)
        .def_readonly("boundary_hit", &PathSummary::boundary_hit);

    py::class_<ExitRecord>(m, "ExitRecord")
        .def_readonly("center", &ExitRecord::center)
        .def_readonly("radius", &ExitRecord::radius)
        .def_readonly("tau", &ExitRecord::tau)
        .def_readonly("censored", &ExitRecord::censored)
        .def_readonly("walk_id", &ExitRecord::walk_id);

    py::class_<ConfinementEstimate>(m, "ConfinementEstimate")
        .def_readonly("estimate", &ConfinementEstimate::estimate)
        .def_readonly("escape", &ConfinementEstimate::escape)
        .def_readonly("wilson_low", &ConfinementEstimate::wilson_low)
        .def_readonly("wilson_high", &ConfinementEstimate::wilson_high)
        .def_readonly("trials", &ConfinementEstimate::trials);

    py::class_<WalkEngine>(m, "WalkEngine")
        .def(py::init<const Environment&, const ClusterView&>(),
             py::keep_alive<1, 2>(), py::keep_alive<1, 3>())
        .def(
            "simulate",
            [](WalkEngine& e, Vertex start, std::uint64_t n_steps,
               double checkpoint_ratio, std::uint32_t walk_id,
               std::uint32_t boundary_margin) {
                return e.simulate({start, n_steps, checkpoint_ratio, walk_id,
                                   boundary_margin});
            },
            py::arg("start"), py::arg("n_steps"),
            py::arg("checkpoint_ratio") = 1.5, py::arg("walk_id") = 0,
            py::arg("boundary_margin") = 0)
        .def("exit_time", &WalkEngine::exit_time, py::arg("center"),
             py::arg("radius"), py::arg("cap"), py::arg("walk_id"))
        .def("confinement_probability", &WalkEngine::confinement_probability,
             py::arg("x"), py::arg("radius"), py::arg("t"), py::arg("trials"),
             py::arg("trial_base") = 0);

    py::class_<HeatKernelOptions>(m, "HeatKernelOptions")
        .def(py::init<>())
        .def_readwrite("keep_rows", &HeatKernelOptions::keep_rows)
        .def_readwrite("allow_truncated_support",
                       &HeatKernelOptions::allow_truncated_support)
        .def_readwrite("cell_budget", &HeatKernelOptions::cell_budget);

    py::class_<HeatKernelTable>(m, "HeatKernelTable")
        .def_readonly("source", &HeatKernelTable::source)
        .def_readonly("horizon", &HeatKernelTable::horizon)
        .def_readonly("rows_kept", &HeatKernelTable::rows_kept)
        .def_readonly("truncated_support", &HeatKernelTable::truncated_support)
        .def_readonly("ball_vertices", &HeatKernelTable::ball_vertices)
        .def_readonly("dist", &HeatKernelTable::dist)
        .def_readonly("mu", &HeatKernelTable::mu)
        .def_readonly("diag", &HeatKernelTable::diag)
        .def_readonly("max_row_sum_error", &HeatKernelTable::max_row_sum_error)
        .def("P", [](const HeatKernelTable& t, std::uint32_t n,
                     std::uint32_t local) { return t.rows.at(n).at(local); })
        .def("p", &HeatKernelTable::p, py::arg("n"), py::arg("local"))
        .def("p_diag", &HeatKernelTable::p_diag, py::arg("n"));
    m.def("heat_kernel_table", &heat_kernel_table, py::arg("env"),
          py::arg("cluster"), py::arg("x"), py::arg("horizon"),
          py::arg("options") = HeatKernelOptions{});

    py::enum_<EnvelopeSide>(m, "EnvelopeSide")
        .value("upper", EnvelopeSide::upper)
        .value("lower", EnvelopeSide::lower);
    py::class_<EnvelopeFit>(m, "EnvelopeFit")
        .def_readonly("side", &EnvelopeFit::side)
        .def_readonly("c_amp", &EnvelopeFit::c_amp)
        .def_readonly("c_exp", &EnvelopeFit::c_exp)
        .def_readonly("pair_count", &EnvelopeFit::pair_count)
        .def_readonly("violation_count", &EnvelopeFit::violation_count)
        .def_readonly("mean_log_slack", &EnvelopeFit::mean_log_slack)
        .def_readonly("supplied", &EnvelopeFit::supplied);
    m.def("fit_envelope", &fit_envelope, py::arg("table"), py::arg("side"),
          py::arg("alpha"), py::arg("beta"), py::arg("epsilon"),
          py::arg("n_hat") = 1, py::arg("supplied") = std::nullopt);

    py::class_<ExponentFit>(m, "ExponentFit")
        .def_readonly("exponent_hat", &ExponentFit::exponent_hat)
        .def_readonly("max_log_residual", &ExponentFit::max_log_residual);
    m.def("on_diagonal_exponent", &on_diagonal_exponent, py::arg("table"),
          py::arg("n_min"), py::arg("n_max"));

    py::class_<ScalingParams>(m, "ScalingParams")
        .def(py::init([](double alpha, double beta, double epsilon, double c5,
                         double c6) {
                 ScalingParams p{alpha, beta, epsilon, c5, c6};
                 p.validate();
                 return p;
             }),
             py::arg("alpha") = 2.0, py::arg("beta") = 2.0,
             py::arg("epsilon") = 0.0, py::arg("c5") = 1.0,
             py::arg("c6") = 1.0)
        .def_readonly("alpha", &ScalingParams::alpha)
        .def_readonly("beta", &ScalingParams::beta)
        .def_readonly("epsilon", &ScalingParams::epsilon)
        .def_readonly("c5", &ScalingParams::c5)
        .def_readonly("c6", &ScalingParams::c6);
    m.def("catalog_params",
          [](const WeightedGraph& g, int dim) {
              return catalog_params(g.kind(), dim);
          },
          py::arg("graph"), py::arg("dim"));
    m.def("phi", &phi, py::arg("q"), py::arg("beta"));
    m.def("psi", &psi, py::arg("n"), py::arg("beta"));

    py::class_<SequenceTable>(m, "SequenceTable")
        .def_readonly("k", &SequenceTable::k)
        .def_readonly("a", &SequenceTable::a)
        .def_readonly("b", &SequenceTable::b)
        .def_readonly("lam", &SequenceTable::lambda)
        .def_readonly("u", &SequenceTable::u)
        .def_readonly("sigma", &SequenceTable::sigma);
    m.def("sequence_table", &sequence_table, py::arg("k_max"),
          py::arg("params"));

    py::class_<WalkStatistics>(m, "WalkStatistics")
        .def_readonly("walk_id", &WalkStatistics::walk_id)
        .def_readonly("c1", &WalkStatistics::c1)
        .def_readonly("c1_sup", &WalkStatistics::c1_sup)
        .def_readonly("c2", &WalkStatistics::c2)
        .def_readonly("c1_tail", &WalkStatistics::c1_tail)
        .def_readonly("c1_sup_tail", &WalkStatistics::c1_sup_tail)
        .def_readonly("c2_tail", &WalkStatistics::c2_tail)
        .def_readonly("non_diffusive", &WalkStatistics::non_diffusive);
    py::class_<LILReport>(m, "LILReport")
        .def_readonly("walks", &LILReport::walks)
        .def_readonly("discarded", &LILReport::discarded)
        .def_readonly("non_diffusive_count", &LILReport::non_diffusive_count)
        .def_readonly("n_tail", &LILReport::n_tail)
        .def_readonly("c1_max", &LILReport::c1_max)
        .def_readonly("c1_median", &LILReport::c1_median)
        .def_readonly("c1_sup_max", &LILReport::c1_sup_max)
        .def_readonly("c1_sup_median", &LILReport::c1_sup_median)
        .def_readonly("c2_min", &LILReport::c2_min)
        .def_readonly("c2_median", &LILReport::c2_median)
        .def_readonly("c1_sup_tail_max", &LILReport::c1_sup_tail_max)
        .def_readonly("c1_sup_tail_median", &LILReport::c1_sup_tail_median)
        .def_readonly("c2_tail_min", &LILReport::c2_tail_min)
        .def_readonly("c2_tail_median", &LILReport::c2_tail_median);
    m.def(
        "lil_report",
        [](const std::vector<PathSummary>& summaries,
           const ScalingParams& params, std::uint64_t n_tail,
           double threshold) {
            return lil_report(summaries, params, n_tail, threshold);
        },
        py::arg("summaries"), py::arg("params"), py::arg("n_tail") = 0,
        py::arg("non_diffusive_threshold") = 10.0);

    py::class_<RadiusSummary>(m, "RadiusSummary")
        .def_readonly("radius", &RadiusSummary::radius)
        .def_readonly("count", &RadiusSummary::count)
        .def_readonly("censored", &RadiusSummary::censored)
        .def_readonly("normalizer", &RadiusSummary::normalizer)
        .def_readonly("q25", &RadiusSummary::q25)
        .def_readonly("median", &RadiusSummary::median)
        .def_readonly("q75", &RadiusSummary::q75)
        .def_readonly("max", &RadiusSummary::max);
    py::class_<ExitScalingReport>(m, "ExitScalingReport")
        .def_readonly("radii", &ExitScalingReport::radii)
        .def_readonly("band_low", &ExitScalingReport::band_low)
        .def_readonly("band_high", &ExitScalingReport::band_high)
        .def_readonly("censored_total", &ExitScalingReport::censored_total);
    m.def(
        "exit_scaling_report",
        [](const std::vector<ExitRecord>& records, double beta) {
            return exit_scaling_report(records, beta);
        },
        py::arg("records"), py::arg("beta"));

    py::class_<CorollaryRow>(m, "CorollaryRow")
        .def_readonly("k", &CorollaryRow::k)
        .def_readonly("a_k", &CorollaryRow::a_k)
        .def_readonly("u_k", &CorollaryRow::u_k)
        .def_readonly("radius", &CorollaryRow::radius)
        .def_readonly("horizon", &CorollaryRow::horizon)
        .def_readonly("target", &CorollaryRow::target)
        .def_readonly("estimate", &CorollaryRow::estimate)
        .def_readonly("wilson_low", &CorollaryRow::wilson_low)
        .def_readonly("wilson_high", &CorollaryRow::wilson_high);
    m.def("confinement_vs_corollary", &confinement_vs_corollary,
          py::arg("engine"), py::arg("base"), py::arg("params"),
          py::arg("k_min"), py::arg("k_max"), py::arg("trials"));

    py::class_<LabeledStat>(m, "LabeledStat")
        .def(py::init([](std::uint32_t env_id, std::uint32_t start_key,
                         double c1_sup_tail, double c2_tail) {
                 return LabeledStat{env_id, start_key, c1_sup_tail, c2_tail};
             }),
             py::arg("env_id"), py::arg("start_key"), py::arg("c1_sup_tail"),
             py::arg("c2_tail"))
        .def_readonly("env_id", &LabeledStat::env_id)
        .def_readonly("start_key", &LabeledStat::start_key)
        .def_readonly("c1_sup_tail", &LabeledStat::c1_sup_tail)
        .def_readonly("c2_tail", &LabeledStat::c2_tail);
    py::class_<DispersionSummary>(m, "DispersionSummary")
        .def_readonly("cross_env_c1", &DispersionSummary::cross_env_c1)
        .def_readonly("cross_env_c2", &DispersionSummary::cross_env_c2)
        .def_readonly("cross_start_c1", &DispersionSummary::cross_start_c1)
        .def_readonly("cross_start_c2", &DispersionSummary::cross_start_c2)
        .def_readonly("env_count", &DispersionSummary::env_count)
        .def_readonly("max_starts", &DispersionSummary::max_starts);
    m.def(
        "dispersion_report",
        [](const std::vector<LabeledStat>& stats) {
            return dispersion_report(stats);
        },
        py::arg("stats"));
}
