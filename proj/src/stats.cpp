#include "rcw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace rcw {

double median(std::vector<double> values) {
    if (values.empty())
        throw validation_error("median: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2]
                      : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

double quantile(std::vector<double> sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

// MAD / median; zero spread maps to zero even at median zero.
double relative_mad(const std::vector<double>& values) {
    const double med = median(values);
    std::vector<double> dev;
    dev.reserve(values.size());
    for (const double v : values) dev.push_back(std::abs(v - med));
    const double mad = median(dev);
    if (mad == 0.0) return 0.0;
    if (med == 0.0) return std::numeric_limits<double>::infinity();
    return mad / std::abs(med);
}

constexpr double kEulerE = 2.718281828459045;

}  // namespace

LILReport lil_report(std::span<const PathSummary> summaries,
                     const ScalingParams& params, std::uint64_t n_tail,
                     double non_diffusive_threshold) {
    params.validate();
    if (summaries.empty())
        throw validation_error("lil_report: no path summaries");

    std::uint64_t max_cp = 0;
    for (const auto& s : summaries)
        if (!s.boundary_hit && !s.checkpoints.empty())
            max_cp = std::max(max_cp, s.checkpoints.back());
    if (n_tail == 0) n_tail = std::max<std::uint64_t>(3, max_cp / 10);
    if (!(static_cast<double>(n_tail) > kEulerE))
        throw validation_error("lil_report: n_tail must be > e");

    LILReport report;
    report.n_tail = n_tail;
    std::vector<double> c1s, c1sups, c2s, c1ts, c1supts, c2ts;
    for (const auto& s : summaries) {
        if (s.boundary_hit) {
            ++report.discarded;
            continue;
        }
        WalkStatistics w;
        w.walk_id = s.walk_id;
        w.c2 = w.c2_tail = std::numeric_limits<double>::infinity();
        bool any = false, any_tail = false;
        for (std::size_t i = 0; i < s.checkpoints.size(); ++i) {
            const double n = static_cast<double>(s.checkpoints[i]);
            if (!(n > kEulerE)) continue;
            const double ph = phi(n, params.beta);
            const double ps = psi(n, params.beta);
            const double c1 = static_cast<double>(s.displacement[i]) / ph;
            const double c1s_v = static_cast<double>(s.running_max[i]) / ph;
            const double c2 = static_cast<double>(s.running_max[i]) / ps;
            w.c1 = std::max(w.c1, c1);
            w.c1_sup = std::max(w.c1_sup, c1s_v);
            w.c2 = std::min(w.c2, c2);
            any = true;
            if (s.checkpoints[i] >= n_tail) {
                w.c1_tail = std::max(w.c1_tail, c1);
                w.c1_sup_tail = std::max(w.c1_sup_tail, c1s_v);
                w.c2_tail = std::min(w.c2_tail, c2);
                any_tail = true;
            }
        }
        if (!any)
            throw validation_error(
                "lil_report: a path has no checkpoints above e");
        if (!any_tail) w.c2_tail = 0.0;
        w.non_diffusive = w.c1_sup_tail > non_diffusive_threshold;
        if (w.non_diffusive) ++report.non_diffusive_count;
        c1s.push_back(w.c1);
        c1sups.push_back(w.c1_sup);
        c2s.push_back(w.c2);
        c1ts.push_back(w.c1_tail);
        c1supts.push_back(w.c1_sup_tail);
        c2ts.push_back(w.c2_tail);
        report.walks.push_back(w);
    }
    if (report.walks.empty())
        throw validation_error("lil_report: all paths were discarded");

    report.c1_max = *std::max_element(c1s.begin(), c1s.end());
    report.c1_median = median(c1s);
    report.c1_sup_max = *std::max_element(c1sups.begin(), c1sups.end());
    report.c1_sup_median = median(c1sups);
    report.c2_min = *std::min_element(c2s.begin(), c2s.end());
    report.c2_median = median(c2s);
    report.c1_tail_max = *std::max_element(c1ts.begin(), c1ts.end());
    report.c1_tail_median = median(c1ts);
    report.c1_sup_tail_max = *std::max_element(c1supts.begin(), c1supts.end());
    report.c1_sup_tail_median = median(c1supts);
    report.c2_tail_min = *std::min_element(c2ts.begin(), c2ts.end());
    report.c2_tail_median = median(c2ts);
    return report;
}

ExitScalingReport exit_scaling_report(std::span<const ExitRecord> records,
                                      double beta) {
    if (!(beta > 1.0))
        throw validation_error("exit_scaling_report: beta must be > 1");
    std::map<std::uint32_t, std::vector<double>> by_radius;
    ExitScalingReport report;
    std::map<std::uint32_t, std::size_t> censored;
    for (const auto& rec : records) {
        if (rec.censored) {
            ++censored[rec.radius];
            ++report.censored_total;
            continue;
        }
        by_radius[rec.radius].push_back(static_cast<double>(rec.tau));
    }
    if (by_radius.size() < 3)
        throw validation_error(
            "exit_scaling_report: need uncensored records for >= 3 radii");

    report.band_low = std::numeric_limits<double>::infinity();
    report.band_high = 0.0;
    for (auto& [r, taus] : by_radius) {
        const double rb = std::pow(static_cast<double>(r), beta);
        if (!(rb > kEulerE))
            throw validation_error(
                "exit_scaling_report: radius too small, need r^beta > e");
        RadiusSummary s;
        s.radius = r;
        s.count = taus.size();
        s.censored = censored.count(r) ? censored[r] : 0;
        s.normalizer = rb * std::log(std::log(rb));
        for (double& t : taus) t /= s.normalizer;
        std::sort(taus.begin(), taus.end());
        s.q25 = quantile(taus, 0.25);
        s.median = quantile(taus, 0.5);
        s.q75 = quantile(taus, 0.75);
        s.max = taus.back();
        report.band_low = std::min(report.band_low, s.max);
        report.band_high = std::max(report.band_high, s.max);
        report.radii.push_back(s);
    }
    return report;
}

std::vector<CorollaryRow> confinement_vs_corollary(WalkEngine& engine,
                                                   Vertex base,
                                                   const ScalingParams& params,
                                                   std::uint32_t k_min,
                                                   std::uint32_t k_max,
                                                   std::uint64_t trials) {
    if (k_min < 1 || k_min > k_max)
        throw validation_error(
            "confinement_vs_corollary: need 1 <= k_min <= k_max");
    const auto table = sequence_table(k_max, params);
    std::vector<CorollaryRow> rows;
    std::uint32_t trial_base = 0;
    for (std::uint32_t k = k_min; k <= k_max; ++k) {
        CorollaryRow row;
        row.k = k;
        row.a_k = table.a[k - 1];
        row.u_k = table.u[k - 1];
        if (row.a_k > 1e6 || row.u_k > 1e9)
            throw validation_error(
                "confinement_vs_corollary: a_k/u_k beyond simulable range");
        row.radius = static_cast<std::uint32_t>(std::ceil(row.a_k));
        row.horizon = static_cast<std::uint64_t>(std::ceil(row.u_k));
        row.target = std::pow(1.0 + static_cast<double>(k), -2.0 / 3.0);
        const auto est = engine.confinement_probability(
            base, row.radius, row.horizon, trials, trial_base);
        trial_base += static_cast<std::uint32_t>(trials);
        row.estimate = est.estimate;
        row.wilson_low = est.wilson_low;
        row.wilson_high = est.wilson_high;
        rows.push_back(row);
    }
    return rows;
}

DispersionSummary dispersion_report(std::span<const LabeledStat> stats) {
    std::map<std::uint32_t, std::vector<LabeledStat>> by_env;
    for (const auto& s : stats) by_env[s.env_id].push_back(s);
    DispersionSummary out;
    out.env_count = by_env.size();
    for (const auto& [env, group] : by_env)
        out.max_starts = std::max(out.max_starts, group.size());
    const bool env_axis = out.env_count >= 5;
    const bool start_axis = out.max_starts >= 2;
    if (!env_axis && !start_axis)
        throw validation_error(
            "dispersion_report: need >= 5 environments or >= 2 starts per "
            "environment");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.cross_env_c1 = out.cross_env_c2 = nan;
    out.cross_start_c1 = out.cross_start_c2 = nan;

    if (env_axis) {
        std::vector<double> env_c1, env_c2;
        for (const auto& [env, group] : by_env) {
            std::vector<double> c1, c2;
            for (const auto& s : group) {
                c1.push_back(s.c1_sup_tail);
                c2.push_back(s.c2_tail);
            }
            env_c1.push_back(median(c1));
            env_c2.push_back(median(c2));
        }
        out.cross_env_c1 = relative_mad(env_c1);
        out.cross_env_c2 = relative_mad(env_c2);
    }
    if (start_axis) {
        std::vector<double> mads_c1, mads_c2;
        for (const auto& [env, group] : by_env) {
            if (group.size() < 2) continue;
            std::vector<double> c1, c2;
            for (const auto& s : group) {
                c1.push_back(s.c1_sup_tail);
                c2.push_back(s.c2_tail);
            }
            mads_c1.push_back(relative_mad(c1));
            mads_c2.push_back(relative_mad(c2));
        }
        out.cross_start_c1 = median(mads_c1);
        out.cross_start_c2 = median(mads_c2);
    }
    return out;
}

}  // namespace rcw
