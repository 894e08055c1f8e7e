// rcwalk: config-driven experiment harness.
//
// Subcommands wire the library modules into reproducible pipelines:
//   env    sample environments, write regenerable sidecars
//   walk   run the walk ensemble, stream path summaries to CSV
//   hk     exact heat-kernel table + envelope fits
//   exit   exit-time records and the scaling report
//   lil    LIL functionals over previously written path files
//   report merge lil outputs into the dispersion summary
//   run    env -> walk -> [hk] -> [exit] -> lil -> [report]
//
// Exit codes: 2 validation, 3 budget/boundary, 1 anything else; errors are
// emitted as JSON on stderr.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rcw/heat_kernel.hpp"
#include "rcw/io.hpp"
#include "rcw/scaling.hpp"
#include "rcw/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rcw;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Config {
    int schema = 1;

    std::string graph_kind = "lattice";
    int dim = 2;
    std::int64_t half_width = 64;
    int level = 5;

    ModelSpec model;

    std::uint64_t seed = 1;
    std::uint32_t envs = 1;

    std::uint32_t walk_count = 10;
    std::uint64_t walk_steps = 100;
    double walk_ratio = 1.5;
    std::string starts = "base";

    std::optional<double> alpha, beta;
    double epsilon = 0.0;
    double c5 = 1.0, c6 = 1.0;

    std::uint32_t hk_horizon = 0;
    bool hk_keep_rows = true;
    bool hk_allow_truncated = false;
    std::uint32_t hk_n_hat = 1;

    std::vector<std::uint32_t> exit_radii;
    std::uint64_t exit_cap = 1'000'000;
    std::uint32_t exit_trials = 100;

    double lil_threshold = 10.0;

    std::string out;
    unsigned jobs = 1;

    std::string raw_text;  // verbatim config file, for the manifest
};

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw validation_error("config: " + key + " must be true or false");
}

template <class T>
T parse_num(const std::string& key, const std::string& v) {
    std::istringstream is(v);
    T out;
    is >> out;
    if (is.fail() || !is.eof())
        throw validation_error("config: cannot parse value for " + key);
    return out;
}

std::vector<std::uint32_t> parse_u32_list(const std::string& key,
                                          const std::string& v) {
    std::vector<std::uint32_t> out;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ','))
        out.push_back(parse_num<std::uint32_t>(key, tok));
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Config parse_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open " + path.string());
    std::ostringstream raw;
    raw << in.rdbuf();

    Config cfg;
    cfg.raw_text = raw.str();
    if (const char* root = std::getenv("RCWALK_OUT")) cfg.out = root;
    if (cfg.out.empty()) cfg.out = "rcwalk_out";

    std::istringstream is(cfg.raw_text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "schema") cfg.schema = parse_num<int>(key, val);
        else if (key == "graph.kind") cfg.graph_kind = val;
        else if (key == "graph.dim") cfg.dim = parse_num<int>(key, val);
        else if (key == "graph.half_width")
            cfg.half_width = parse_num<std::int64_t>(key, val);
        else if (key == "graph.level") cfg.level = parse_num<int>(key, val);
        else if (key == "model.kind") {
            if (val == "constant") cfg.model.kind = EnvModel::constant;
            else if (val == "bernoulli") cfg.model.kind = EnvModel::bernoulli;
            else if (val == "uniform_elliptic")
                cfg.model.kind = EnvModel::uniform_elliptic;
            else
                throw validation_error("config: unknown model.kind " + val);
        } else if (key == "model.p") cfg.model.p = parse_num<double>(key, val);
        else if (key == "model.c_low")
            cfg.model.c_low = parse_num<double>(key, val);
        else if (key == "model.c_high")
            cfg.model.c_high = parse_num<double>(key, val);
        else if (key == "seed") cfg.seed = parse_num<std::uint64_t>(key, val);
        else if (key == "envs") cfg.envs = parse_num<std::uint32_t>(key, val);
        else if (key == "walks.count")
            cfg.walk_count = parse_num<std::uint32_t>(key, val);
        else if (key == "walks.steps")
            cfg.walk_steps = parse_num<std::uint64_t>(key, val);
        else if (key == "walks.ratio")
            cfg.walk_ratio = parse_num<double>(key, val);
        else if (key == "walks.starts") cfg.starts = val;
        else if (key == "scaling.alpha") cfg.alpha = parse_num<double>(key, val);
        else if (key == "scaling.beta") cfg.beta = parse_num<double>(key, val);
        else if (key == "scaling.epsilon")
            cfg.epsilon = parse_num<double>(key, val);
        else if (key == "scaling.c5") cfg.c5 = parse_num<double>(key, val);
        else if (key == "scaling.c6") cfg.c6 = parse_num<double>(key, val);
        else if (key == "hk.horizon")
            cfg.hk_horizon = parse_num<std::uint32_t>(key, val);
        else if (key == "hk.keep_rows") cfg.hk_keep_rows = parse_bool(key, val);
        else if (key == "hk.allow_truncated")
            cfg.hk_allow_truncated = parse_bool(key, val);
        else if (key == "hk.n_hat")
            cfg.hk_n_hat = parse_num<std::uint32_t>(key, val);
        else if (key == "exit.radii") cfg.exit_radii = parse_u32_list(key, val);
        else if (key == "exit.cap")
            cfg.exit_cap = parse_num<std::uint64_t>(key, val);
        else if (key == "exit.trials")
            cfg.exit_trials = parse_num<std::uint32_t>(key, val);
        else if (key == "lil.threshold")
            cfg.lil_threshold = parse_num<double>(key, val);
        else if (key == "out") cfg.out = val;
        else if (key == "jobs") cfg.jobs = parse_num<unsigned>(key, val);
        else
            throw validation_error("config: unknown key " + key);
    }
    if (cfg.schema != 1)
        throw validation_error("config: unsupported schema version " +
                               std::to_string(cfg.schema));
    cfg.model.validate();
    if (cfg.graph_kind != "lattice" && cfg.graph_kind != "gasket")
        throw validation_error("config: graph.kind must be lattice or gasket");
    if (cfg.envs < 1) throw validation_error("config: envs must be >= 1");
    if (cfg.walk_count < 1)
        throw validation_error("config: walks.count must be >= 1");
    if (cfg.jobs < 1) throw validation_error("config: jobs must be >= 1");
    return cfg;
}

WeightedGraph make_graph(const Config& cfg) {
    return cfg.graph_kind == "lattice"
               ? WeightedGraph::lattice_box(cfg.dim, cfg.half_width)
               : WeightedGraph::gasket(cfg.level);
}

ScalingParams make_scaling(const Config& cfg, const WeightedGraph& g,
                           bool override_exponents) {
    ScalingParams p = catalog_params(g.kind(), cfg.dim);
    if (cfg.alpha || cfg.beta) {
        const double a = cfg.alpha.value_or(p.alpha);
        const double b = cfg.beta.value_or(p.beta);
        const bool differs = std::abs(a - p.alpha) > 1e-12 ||
                             std::abs(b - p.beta) > 1e-12;
        if (differs && !override_exponents)
            throw validation_error(
                "scaling.alpha/scaling.beta differ from the model catalog; "
                "pass --override-exponents to use them");
        p.alpha = a;
        p.beta = b;
    }
    p.epsilon = cfg.epsilon;
    p.c5 = cfg.c5;
    p.c6 = cfg.c6;
    p.validate();
    return p;
}

std::vector<std::vector<std::int64_t>> parse_starts(const Config& cfg) {
    std::vector<std::vector<std::int64_t>> out;
    if (cfg.starts == "base") {
        out.push_back({});  // empty = base point
        return out;
    }
    std::istringstream is(cfg.starts);
    std::string tuple;
    while (std::getline(is, tuple, ';')) {
        std::vector<std::int64_t> coords;
        std::istringstream ts(tuple);
        std::string tok;
        while (std::getline(ts, tok, ','))
            coords.push_back(parse_num<std::int64_t>("walks.starts", tok));
        if (coords.empty())
            throw validation_error("config: empty start tuple");
        out.push_back(std::move(coords));
    }
    return out;
}

Vertex resolve_start(const WeightedGraph& g,
                     const std::vector<std::int64_t>& coords) {
    if (coords.empty()) return g.base_point();
    const Vertex v = g.vertex_at(coords);
    if (v == kNoVertex)
        throw validation_error("walks.starts: coordinates outside the graph");
    return v;
}

void write_manifest(const Config& cfg, const std::string& command) {
    json j;
    j["schema"] = cfg.schema;
    j["tool_version"] = kVersion;
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["jobs"] = cfg.jobs;
    j["config_hash"] = fnv1a_hash(cfg.raw_text);
    j["config_text"] = cfg.raw_text;
    atomic_write(fs::path(cfg.out) / "manifest.json", j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

void cmd_env(const Config& cfg) {
    const auto g = make_graph(cfg);
    for (std::uint32_t id = 0; id < cfg.envs; ++id) {
        const auto env = sample_environment(g, cfg.model, cfg.seed, id);
        atomic_write(fs::path(cfg.out) /
                         ("env_" + std::to_string(id) + ".json"),
                     environment_sidecar(env).dump(2) + "\n");
        if (g.vertex_count() <= 20'000) {
            write_graph_csv(
                env.graph,
                fs::path(cfg.out) /
                    ("env_" + std::to_string(id) + "_vertices.csv"),
                fs::path(cfg.out) / ("env_" + std::to_string(id) + "_edges.csv"));
        }
    }
}

// Runs one (environment, start) ensemble, splitting walk ids across jobs.
// Each worker owns a WalkEngine (the BFS distance field is per-thread);
// per-walk streams are keyed by walk_id so the partition does not affect
// values.
std::vector<PathSummary> run_ensemble(const Environment& env,
                                      const ClusterView& cluster, Vertex start,
                                      const Config& cfg) {
    std::vector<PathSummary> summaries(cfg.walk_count);
    const unsigned jobs =
        std::min<unsigned>(cfg.jobs, std::max<std::uint32_t>(1, cfg.walk_count));
    std::vector<std::thread> workers;
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex error_mu;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                WalkEngine engine(env, cluster);
                for (std::uint32_t id = w; id < cfg.walk_count; id += jobs) {
                    summaries[id] = engine.simulate(
                        {start, cfg.walk_steps, cfg.walk_ratio, id});
                }
            } catch (const std::exception& e) {
                std::scoped_lock lk(error_mu);
                failed = true;
                if (error_msg.empty()) error_msg = e.what();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failed) throw error(error_msg);
    return summaries;
}

void cmd_walk(const Config& cfg) {
    const auto starts = parse_starts(cfg);
    Config effective = cfg;  // half_width may grow on discard overflow
    for (int attempt = 0;; ++attempt) {
        const auto g = make_graph(effective);
        std::size_t discarded = 0, total = 0;
        std::vector<std::tuple<std::uint32_t, std::uint32_t,
                               std::vector<PathSummary>>>
            outputs;
        for (std::uint32_t id = 0; id < cfg.envs; ++id) {
            const auto env = sample_environment(g, cfg.model, cfg.seed, id);
            const auto cluster = extract_cluster(env);
            for (std::uint32_t k = 0; k < starts.size(); ++k) {
                const Vertex start = resolve_start(env.graph, starts[k]);
                auto summaries = run_ensemble(env, cluster, start, effective);
                for (const auto& s : summaries)
                    if (s.boundary_hit) ++discarded;
                total += summaries.size();
                outputs.emplace_back(id, k, std::move(summaries));
            }
        }
        const double frac =
            static_cast<double>(discarded) / static_cast<double>(total);
        if (frac > 0.001 && cfg.graph_kind == "lattice") {
            if (attempt >= 3)
                throw budget_error(
                    "walk: discard fraction still above 0.1% after 3 box "
                    "enlargements");
            effective.half_width *= 2;
            std::cerr << json{{"warning",
                               "discard fraction " + std::to_string(frac) +
                                   " above 0.1%; enlarging half_width to " +
                                   std::to_string(effective.half_width)}}
                             .dump()
                      << "\n";
            continue;
        }
        for (auto& [id, k, summaries] : outputs)
            write_paths_csv(fs::path(cfg.out) /
                                ("paths_env" + std::to_string(id) + "_s" +
                                 std::to_string(k) + ".csv"),
                            id, k, summaries);
        return;
    }
}

void cmd_hk(const Config& cfg, bool override_exponents) {
    if (cfg.hk_horizon < 2)
        throw validation_error("hk: set hk.horizon >= 2 in the config");
    const auto g = make_graph(cfg);
    const auto params = make_scaling(cfg, g, override_exponents);
    const auto env = sample_environment(g, cfg.model, cfg.seed, 0);
    const auto cluster = extract_cluster(env);
    HeatKernelOptions opt;
    opt.keep_rows = cfg.hk_keep_rows;
    opt.allow_truncated_support = cfg.hk_allow_truncated;
    const auto table =
        heat_kernel_table(env, cluster, env.graph.base_point(), cfg.hk_horizon, opt);

    json report;
    report["horizon"] = table.horizon;
    report["max_row_sum_error"] = table.max_row_sum_error;
    const std::uint32_t n_min = std::max<std::uint32_t>(2, cfg.hk_horizon / 8);
    const auto diag = on_diagonal_exponent(table, n_min, cfg.hk_horizon - 1);
    report["on_diagonal"] = {{"exponent_hat", diag.exponent_hat},
                             {"n_min", n_min},
                             {"n_max", cfg.hk_horizon - 1},
                             {"catalog_ratio", params.alpha / params.beta}};
    if (cfg.hk_keep_rows) {
        write_heat_kernel_csv(fs::path(cfg.out) / "hk_env0.csv", table);
        report["upper"] =
            to_json(fit_envelope(table, EnvelopeSide::upper, params.alpha,
                                 params.beta, params.epsilon, cfg.hk_n_hat));
        report["lower"] =
            to_json(fit_envelope(table, EnvelopeSide::lower, params.alpha,
                                 params.beta, params.epsilon, cfg.hk_n_hat));
    }
    atomic_write(fs::path(cfg.out) / "hk_report.json", report.dump(2) + "\n");
}

void cmd_exit(const Config& cfg, bool override_exponents) {
    if (cfg.exit_radii.empty())
        throw validation_error("exit: set exit.radii in the config");
    const auto g = make_graph(cfg);
    const auto params = make_scaling(cfg, g, override_exponents);
    for (std::uint32_t id = 0; id < cfg.envs; ++id) {
        const auto env = sample_environment(g, cfg.model, cfg.seed, id);
        const auto cluster = extract_cluster(env);
        WalkEngine engine(env, cluster);
        std::vector<ExitRecord> records;
        std::uint32_t walk_id = 0;
        for (const std::uint32_t r : cfg.exit_radii)
            for (std::uint32_t t = 0; t < cfg.exit_trials; ++t)
                records.push_back(engine.exit_time(env.graph.base_point(), r,
                                                   cfg.exit_cap, walk_id++));
        write_exit_csv(fs::path(cfg.out) /
                           ("exit_env" + std::to_string(id) + ".csv"),
                       id, records);
        atomic_write(fs::path(cfg.out) /
                         ("exit_scaling_env" + std::to_string(id) + ".json"),
                     to_json(exit_scaling_report(records, params.beta)).dump(2) +
                         "\n");
    }
}

void cmd_lil(const Config& cfg, bool override_exponents) {
    const auto g = make_graph(cfg);
    const auto params = make_scaling(cfg, g, override_exponents);
    bool any = false;
    for (const auto& entry : fs::directory_iterator(cfg.out)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("paths_env", 0) != 0 ||
            entry.path().extension() != ".csv")
            continue;
        const auto file = read_paths_csv(entry.path());
        auto j = to_json(
            lil_report(file.summaries, params, 0, cfg.lil_threshold));
        j["env_id"] = file.env_id;
        j["start_key"] = file.start_key;
        atomic_write(fs::path(cfg.out) /
                         ("lil_env" + std::to_string(file.env_id) + "_s" +
                          std::to_string(file.start_key) + ".json"),
                     j.dump(2) + "\n");
        any = true;
    }
    if (!any)
        throw validation_error("lil: no paths_env*.csv files under " + cfg.out);
}

void cmd_report(const Config& cfg) {
    std::vector<LabeledStat> stats;
    if (fs::exists(cfg.out)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(cfg.out)) {
            const std::string name = entry.path().filename().string();
            if (name.rfind("lil_env", 0) == 0 &&
                entry.path().extension() == ".json")
                files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            std::ifstream in(path);
            json j;
            in >> j;
            stats.push_back({j.at("env_id").get<std::uint32_t>(),
                             j.at("start_key").get<std::uint32_t>(),
                             j.at("c1_sup_tail_median").get<double>(),
                             j.at("c2_tail_median").get<double>()});
        }
    }
    if (stats.empty())
        throw validation_error("report: no lil_env*.json files under " +
                               cfg.out);
    atomic_write(fs::path(cfg.out) / "dispersion.json",
                 to_json(dispersion_report(stats)).dump(2) + "\n");
}

void cmd_run(const Config& cfg, bool override_exponents) {
    cmd_env(cfg);
    cmd_walk(cfg);
    if (cfg.hk_horizon >= 2) cmd_hk(cfg, override_exponents);
    if (!cfg.exit_radii.empty()) cmd_exit(cfg, override_exponents);
    cmd_lil(cfg, override_exponents);
    const bool multi_axis = cfg.envs >= 5 || parse_starts(cfg).size() >= 2;
    if (multi_axis) cmd_report(cfg);
}

int emit_error(const char* type, const std::string& message, int code) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump()
              << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random conductance walk experiment harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed_flag;
    std::optional<unsigned> jobs_flag;
    std::string out_flag;
    bool override_exponents = false;

    app.add_option("--config", config_path, "experiment config file")
        ->required();
    app.add_option("--seed", seed_flag, "override the config master seed");
    app.add_option("--jobs", jobs_flag, "parallel worker count");
    app.add_option("--out", out_flag, "output directory");
    app.add_flag("--override-exponents", override_exponents,
                 "permit scaling.alpha/beta to differ from the model catalog");

    std::string command;
    for (const char* name :
         {"run", "env", "walk", "hk", "exit", "lil", "report"}) {
        auto* sub = app.add_subcommand(name);
        sub->callback([&command, name] { command = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = parse_config(config_path);
        if (seed_flag) cfg.seed = *seed_flag;
        if (jobs_flag) cfg.jobs = *jobs_flag;
        if (!out_flag.empty()) cfg.out = out_flag;
        fs::create_directories(cfg.out);
        write_manifest(cfg, command);

        if (command == "run") cmd_run(cfg, override_exponents);
        else if (command == "env") cmd_env(cfg);
        else if (command == "walk") cmd_walk(cfg);
        else if (command == "hk") cmd_hk(cfg, override_exponents);
        else if (command == "exit") cmd_exit(cfg, override_exponents);
        else if (command == "lil") cmd_lil(cfg, override_exponents);
        else if (command == "report") cmd_report(cfg);
        return 0;
    } catch (const validation_error& e) {
        return emit_error("validation", e.what(), 2);
    } catch (const budget_error& e) {
        return emit_error("budget", e.what(), 3);
    } catch (const boundary_error& e) {
        return emit_error("boundary", e.what(), 3);
    } catch (const std::exception& e) {
        return emit_error("runtime", e.what(), 1);
    }
}
