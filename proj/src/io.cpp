#include "rcw/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rcw {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw error("atomic_write: cannot open " + tmp.string());
        out << content;
        if (!out) throw error("atomic_write: short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_graph_csv(const WeightedGraph& g, const fs::path& vertices_path,
                     const fs::path& edges_path) {
    std::ostringstream vs;
    vs << "vertex_id";
    for (int i = 0; i < g.coordinate_count(); ++i) vs << ",c" << i;
    vs << "\n";
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        vs << v;
        const auto c = g.coordinates(v);
        for (int i = 0; i < g.coordinate_count(); ++i) vs << "," << c[i];
        vs << "\n";
    }
    atomic_write(vertices_path, vs.str());

    std::ostringstream es;
    es << "edge_id,u,v,conductance\n";
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const auto [u, v] = g.edge_endpoints(e);
        es << e << "," << u << "," << v << ","
           << format_double(g.conductance(e)) << "\n";
    }
    atomic_write(edges_path, es.str());
}

nlohmann::json environment_sidecar(const Environment& env) {
    nlohmann::json j;
    const auto& g = env.graph;
    if (g.kind() == GraphKind::lattice_box) {
        j["graph"] = {{"kind", "lattice"},
                      {"dim", g.dim()},
                      {"half_width", g.half_width()}};
    } else {
        j["graph"] = {{"kind", "gasket"}, {"level", g.level()}};
    }
    j["model"] = {{"kind", env.model.name()},
                  {"p", env.model.p},
                  {"c_low", env.model.c_low},
                  {"c_high", env.model.c_high}};
    j["master_seed"] = env.master_seed;
    j["env_id"] = env.env_id;
    return j;
}

Environment environment_from_sidecar(const nlohmann::json& j,
                                     std::size_t vertex_budget) {
    const auto& jg = j.at("graph");
    WeightedGraph g =
        jg.at("kind") == "lattice"
            ? WeightedGraph::lattice_box(jg.at("dim").get<int>(),
                                         jg.at("half_width").get<std::int64_t>(),
                                         vertex_budget)
            : WeightedGraph::gasket(jg.at("level").get<int>(), vertex_budget);
    ModelSpec model;
    const std::string kind = j.at("model").at("kind").get<std::string>();
    if (kind == "constant")
        model.kind = EnvModel::constant;
    else if (kind == "bernoulli")
        model.kind = EnvModel::bernoulli;
    else if (kind == "uniform_elliptic")
        model.kind = EnvModel::uniform_elliptic;
    else
        throw validation_error("sidecar: unknown model kind " + kind);
    model.p = j.at("model").at("p").get<double>();
    model.c_low = j.at("model").at("c_low").get<double>();
    model.c_high = j.at("model").at("c_high").get<double>();
    return sample_environment(std::move(g), model,
                              j.at("master_seed").get<std::uint64_t>(),
                              j.at("env_id").get<std::uint32_t>());
}

void write_paths_csv(const fs::path& path, std::uint32_t env_id,
                     std::uint32_t start_key,
                     std::span<const PathSummary> summaries) {
    std::ostringstream os;
    os << "env_id,start_key,walk_id,checkpoint_n,displacement,running_max,"
          "boundary_hit\n";
    for (const auto& s : summaries) {
        for (std::size_t i = 0; i < s.checkpoints.size(); ++i)
            os << env_id << "," << start_key << "," << s.walk_id << ","
               << s.checkpoints[i] << "," << s.displacement[i] << ","
               << s.running_max[i] << "," << (s.boundary_hit ? 1 : 0) << "\n";
    }
    atomic_write(path, os.str());
}

PathsFile read_paths_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw error("read_paths_csv: cannot open " + path.string());
    PathsFile file;
    std::string line;
    std::getline(in, line);  // header
    PathSummary* current = nullptr;
    std::uint32_t current_id = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::uint64_t f[7];
        std::size_t pos = 0;
        for (int i = 0; i < 7; ++i) {
            const std::size_t comma = line.find(',', pos);
            const std::string_view tok =
                std::string_view(line).substr(pos, comma - pos);
            std::from_chars(tok.data(), tok.data() + tok.size(), f[i]);
            pos = comma == std::string::npos ? line.size() : comma + 1;
        }
        file.env_id = static_cast<std::uint32_t>(f[0]);
        file.start_key = static_cast<std::uint32_t>(f[1]);
        const auto walk_id = static_cast<std::uint32_t>(f[2]);
        if (first || walk_id != current_id) {
            file.summaries.emplace_back();
            current = &file.summaries.back();
            current->walk_id = walk_id;
            current_id = walk_id;
            first = false;
        }
        current->checkpoints.push_back(f[3]);
        current->displacement.push_back(static_cast<std::uint32_t>(f[4]));
        current->running_max.push_back(static_cast<std::uint32_t>(f[5]));
        current->boundary_hit = f[6] != 0;
    }
    return file;
}

void write_exit_csv(const fs::path& path, std::uint32_t env_id,
                    std::span<const ExitRecord> records) {
    std::ostringstream os;
    os << "env_id,walk_id,r,tau,censored\n";
    for (const auto& r : records)
        os << env_id << "," << r.walk_id << "," << r.radius << "," << r.tau
           << "," << (r.censored ? 1 : 0) << "\n";
    atomic_write(path, os.str());
}

void write_heat_kernel_csv(const fs::path& path, const HeatKernelTable& table) {
    if (!table.rows_kept)
        throw validation_error("write_heat_kernel_csv: rows were not kept");
    std::ostringstream os;
    os << "n,vertex_id,distance_from_x,P_n,p_n\n";
    for (std::uint32_t n = 0; n <= table.horizon; ++n) {
        for (std::size_t i = 0; i < table.ball_vertices.size(); ++i) {
            const double P = table.rows[n][i];
            if (P == 0.0) continue;
            os << n << "," << table.ball_vertices[i] << "," << table.dist[i]
               << "," << format_double(P) << ","
               << format_double(P / table.mu[i]) << "\n";
        }
    }
    atomic_write(path, os.str());
}

nlohmann::json to_json(const LILReport& r) {
    nlohmann::json walks = nlohmann::json::array();
    for (const auto& w : r.walks)
        walks.push_back({{"walk_id", w.walk_id},
                         {"c1", w.c1},
                         {"c1_sup", w.c1_sup},
                         {"c2", w.c2},
                         {"c1_tail", w.c1_tail},
                         {"c1_sup_tail", w.c1_sup_tail},
                         {"c2_tail", w.c2_tail},
                         {"non_diffusive", w.non_diffusive}});
    return {{"walks", walks},
            {"discarded", r.discarded},
            {"non_diffusive_count", r.non_diffusive_count},
            {"n_tail", r.n_tail},
            {"c1_max", r.c1_max},
            {"c1_median", r.c1_median},
            {"c1_sup_max", r.c1_sup_max},
            {"c1_sup_median", r.c1_sup_median},
            {"c2_min", r.c2_min},
            {"c2_median", r.c2_median},
            {"c1_tail_max", r.c1_tail_max},
            {"c1_tail_median", r.c1_tail_median},
            {"c1_sup_tail_max", r.c1_sup_tail_max},
            {"c1_sup_tail_median", r.c1_sup_tail_median},
            {"c2_tail_min", r.c2_tail_min},
            {"c2_tail_median", r.c2_tail_median}};
}

nlohmann::json to_json(const ExitScalingReport& r) {
    nlohmann::json radii = nlohmann::json::array();
    for (const auto& s : r.radii)
        radii.push_back({{"radius", s.radius},
                         {"count", s.count},
                         {"censored", s.censored},
                         {"normalizer", s.normalizer},
                         {"q25", s.q25},
                         {"median", s.median},
                         {"q75", s.q75},
                         {"max", s.max}});
    return {{"radii", radii},
            {"band_low", r.band_low},
            {"band_high", r.band_high},
            {"censored_total", r.censored_total}};
}

nlohmann::json to_json(const DispersionSummary& s) {
    auto opt = [](double v) -> nlohmann::json {
        return std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
    };
    return {{"cross_env_c1", opt(s.cross_env_c1)},
            {"cross_env_c2", opt(s.cross_env_c2)},
            {"cross_start_c1", opt(s.cross_start_c1)},
            {"cross_start_c2", opt(s.cross_start_c2)},
            {"env_count", s.env_count},
            {"max_starts", s.max_starts}};
}

nlohmann::json to_json(const EnvelopeFit& f) {
    return {{"side", f.side == EnvelopeSide::upper ? "upper" : "lower"},
            {"c_amp", f.c_amp},
            {"c_exp", f.c_exp},
            {"pair_count", f.pair_count},
            {"violation_count", f.violation_count},
            {"mean_log_slack", f.mean_log_slack},
            {"supplied", f.supplied}};
}

nlohmann::json to_json(const RegularityTail& t) {
    return {{"survival", t.survival},
            {"not_found_count", t.not_found_count},
            {"env_count", t.env_count}};
}

}  // namespace rcw
