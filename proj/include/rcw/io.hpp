#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "rcw/env.hpp"
#include "rcw/heat_kernel.hpp"
#include "rcw/stats.hpp"
#include "rcw/walk.hpp"

namespace rcw {

// Writes to a sibling temp file and renames, so readers never observe a
// partially written artifact.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);

std::uint64_t fnv1a_hash(const std::string& text);

void write_graph_csv(const WeightedGraph& g,
                     const std::filesystem::path& vertices_path,
                     const std::filesystem::path& edges_path);

// JSON sidecar sufficient to regenerate the environment bit-for-bit.
nlohmann::json environment_sidecar(const Environment& env);
Environment environment_from_sidecar(const nlohmann::json& sidecar,
                                     std::size_t vertex_budget =
                                         WeightedGraph::kDefaultVertexBudget);

void write_paths_csv(const std::filesystem::path& path, std::uint32_t env_id,
                     std::uint32_t start_key,
                     std::span<const PathSummary> summaries);

struct PathsFile {
    std::uint32_t env_id = 0;
    std::uint32_t start_key = 0;
    std::vector<PathSummary> summaries;
};
PathsFile read_paths_csv(const std::filesystem::path& path);

void write_exit_csv(const std::filesystem::path& path, std::uint32_t env_id,
                    std::span<const ExitRecord> records);

void write_heat_kernel_csv(const std::filesystem::path& path,
                           const HeatKernelTable& table);

nlohmann::json to_json(const LILReport& report);
nlohmann::json to_json(const ExitScalingReport& report);
nlohmann::json to_json(const DispersionSummary& summary);
nlohmann::json to_json(const EnvelopeFit& fit);
nlohmann::json to_json(const RegularityTail& tail);

}  // namespace rcw
