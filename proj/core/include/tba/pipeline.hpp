#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tba/embedding_cache.hpp"
#include "tba/evaluation.hpp"
#include "tba/mds.hpp"
#include "tba/som.hpp"
#include "tba/triangulation.hpp"

namespace tba {

struct RunConfig {
  std::filesystem::path map_path;
  std::filesystem::path goals_path;
  std::size_t m = 5;
  std::uint64_t seed = 1;
  std::size_t runs = 10;
  SomParams som;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> out_json;
  std::optional<std::filesystem::path> svg;
  bool svg_triangulation = false;                            // overlay the CDT in the SVG
  std::optional<std::filesystem::path> triangulation_json;  // {"triangles": [[a,b,c], ...]}

  void validate() const;
  MdsOptions mds_options() const;
};

/// --cache if given, otherwise $TBA_CACHE_DIR, otherwise none.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::filesystem::path>& flag);

/// Goal-independent part of the pipeline: map, visibility graph, vertex
/// embedding and triangulation.
struct PreparedMap {
  ContentHash hash{};
  PolygonalMap map;
  VisibilityGraph graph;
  Embedding embedding;
  Triangulation triangulation;
  std::optional<DistanceMatrix> distances;
  bool cache_hit = false;
  std::optional<std::filesystem::path> cache_path;
};

PreparedMap prepare_map(const RunConfig& config);

struct EmbedResult {
  std::filesystem::path cache_path;
  bool cache_hit = false;
  std::size_t vertices = 0;
  std::size_t m = 0;
  double stress = 0.0;
  std::size_t iterations = 0;

  nlohmann::json to_json() const;
};

struct RunRecord {
  std::uint64_t seed = 0;
  double length = 0.0;
  Ordering ordering;
  std::size_t epochs = 0;
  bool converged = false;
};

struct RunReport {
  RunConfig config;
  std::size_t goals = 0;
  std::size_t vertices = 0;
  bool cache_hit = false;
  double stress = 0.0;
  std::optional<double> max_relative_distortion;
  std::vector<double> lift_distortion;
  std::vector<RunRecord> runs;
  double mean_length = 0.0;
  double best_length = 0.0;
  Ordering best_ordering;
  Metrics metrics;
  double t_eval = 0.0;
  std::uint64_t geodesic_calls_during_som = 0;

  /// Field names are stable; timing lives under "metrics" (T, T_MDS, T_SOM, T_eval).
  nlohmann::json to_json() const;
};

struct OracleReport {
  std::size_t goals = 0;
  Ordering ordering;
  double l_opt = 0.0;

  nlohmann::json to_json() const;
};

struct EvalReport {
  Ordering ordering;
  double length = 0.0;
  Metrics metrics;

  nlohmann::json to_json() const;
};

/// Goal-independent steps: builds or loads the cached embedding. Requires a
/// cache directory.
EmbedResult cmd_embed(const RunConfig& config);

/// Full pipeline with `runs` restarts on seeds seed .. seed+runs-1. Writes the
/// JSON report and SVG when configured.
RunReport cmd_solve(const RunConfig& config);

/// Exact optimum over workspace geodesic goal distances.
OracleReport cmd_oracle(const RunConfig& config);

/// Evaluates an ordering file (JSON array or whitespace-separated indices).
EvalReport cmd_eval(const RunConfig& config, const std::filesystem::path& ordering_path);

Ordering parse_ordering(std::string_view text);

}  // namespace tba
