#include "tba/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <sstream>

#include "tba/errors.hpp"
#include "tba/fileio.hpp"
#include "tba/svg.hpp"

namespace tba {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Wall-clock values are reported to the millisecond.
double ms_round(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json som_to_json(const SomParams& p) {
  return {{"neuron_factor", p.neuron_factor},
          {"mu", p.mu},
          {"sigma0_factor", p.sigma0_factor},
          {"sigma_decay", p.sigma_decay},
          {"neighborhood_radius_factor", p.neighborhood_radius_factor},
          {"max_epochs", p.max_epochs},
          {"win_tolerance", p.win_tolerance}};
}

json config_to_json(const RunConfig& c) {
  return {{"map", c.map_path.string()},
          {"goals", c.goals_path.string()},
          {"dim", c.m},
          {"seed", c.seed},
          {"runs", c.runs},
          {"som", som_to_json(c.som)},
          {"cache", c.cache_dir ? json(c.cache_dir->string()) : json(nullptr)}};
}

json triangulation_to_json(const Triangulation& tri) {
  json triangles = json::array();
  for (const auto& t : tri.triangles) triangles.push_back({t[0], t[1], t[2]});
  return {{"triangles", triangles}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
  write_file_atomic(path, doc.dump(2) + "\n");
}

struct Geometry {
  PolygonalMap map;
  VisibilityGraph graph;
  GoalSet goals;
};

Geometry load_geometry_and_goals(const RunConfig& config) {
  PolygonalMap map = parse_map(read_file(config.map_path));
  GoalSet goals = parse_goals(read_file(config.goals_path));
  validate_goals(map, goals);
  VisibilityGraph graph = build_visibility_graph(map);
  return {std::move(map), std::move(graph), std::move(goals)};
}

std::optional<double> oracle_length(const Geometry& g) {
  if (g.goals.size() < 2 || g.goals.size() > kHeldKarpMaxGoals) return std::nullopt;
  const double l_opt = held_karp(goal_distance_matrix(g.map, g.graph, g.goals)).length;
  if (!(l_opt > 0.0)) return std::nullopt;
  return l_opt;
}

}  // namespace

void RunConfig::validate() const {
  if (runs < 1) throw ValidationError("runs must be >= 1");
  if (m < 1) throw ValidationError("dimension must be >= 1");
  if (m > 0xffff) throw ValidationError("dimension too large");
  som.validate();
}

MdsOptions RunConfig::mds_options() const {
  MdsOptions opts;
  opts.m = m;
  return opts;
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::filesystem::path>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("TBA_CACHE_DIR"); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

PreparedMap prepare_map(const RunConfig& config) {
  config.validate();
  const std::string bytes = read_file(config.map_path);
  PreparedMap out{content_hash(bytes), parse_map(bytes), {}, {}, {}, std::nullopt, false, std::nullopt};
  out.graph = build_visibility_graph(out.map);

  std::optional<EmbeddingCache> cache;
  if (config.cache_dir) cache.emplace(*config.cache_dir);
  if (cache) {
    bool mismatch = false;
    if (auto hit = cache->load(out.hash, config.m, out.map.vertex_count(), &mismatch)) {
      out.embedding = std::move(*hit);
      out.cache_hit = true;
      out.cache_path = cache->embedding_path(out.hash, config.m);
      out.distances = cache->load_distances(out.hash, out.map.vertex_count());
    } else if (mismatch) {
      std::cerr << "warning: cache entry " << cache->embedding_path(out.hash, config.m).string()
                << " does not match the map; recomputing\n";
    }
  }
  if (!out.cache_hit) {
    out.distances = all_pairs_vertex_distances(out.graph);
    out.embedding = embed(*out.distances, config.mds_options());
    if (cache) {
      cache->store_distances(out.hash, *out.distances);
      out.cache_path = cache->store(out.hash, out.embedding);
    }
  }
  out.triangulation = build_cdt(out.map);
  if (config.triangulation_json) write_json(*config.triangulation_json, triangulation_to_json(out.triangulation));
  return out;
}

EmbedResult cmd_embed(const RunConfig& config) {
  if (!config.cache_dir) throw ParseError("embed needs a cache directory (--cache or TBA_CACHE_DIR)");
  const PreparedMap prepared = prepare_map(config);
  EmbedResult result{*prepared.cache_path, prepared.cache_hit, prepared.map.vertex_count(), config.m,
                     prepared.embedding.stress, prepared.embedding.iterations};
  if (config.out_json) write_json(*config.out_json, result.to_json());
  return result;
}

RunReport cmd_solve(const RunConfig& config) {
  const auto t_start = Clock::now();
  RunReport report;
  report.config = config;

  // Goal-independent steps: visibility graph, geodesics, embedding, CDT.
  PreparedMap prepared = prepare_map(config);
  report.metrics.t_mds = seconds_since(t_start);
  report.cache_hit = prepared.cache_hit;
  report.vertices = prepared.map.vertex_count();
  report.stress = prepared.embedding.stress;
  if (prepared.distances) report.max_relative_distortion = max_relative_distortion(*prepared.distances, prepared.embedding);

  const GoalSet goals = parse_goals(read_file(config.goals_path));
  validate_goals(prepared.map, goals);
  report.goals = goals.size();

  // Lift and train purely in the embedded space.
  const auto t_som = Clock::now();
  const std::uint64_t calls_before = geodesic_call_count();
  const auto lifted = lift_goals(goals, prepared.map, prepared.triangulation, prepared.embedding);
  for (const auto& g : lifted) report.lift_distortion.push_back(g.distortion);
  std::vector<SolveResult> solutions;
  for (std::size_t r = 0; r < config.runs; ++r) solutions.push_back(solve(lifted, config.som, config.seed + r));
  report.geodesic_calls_during_som = geodesic_call_count() - calls_before;
  report.metrics.t_som = seconds_since(t_som);

  // Judge every ordering in the workspace. One goal-to-goal geodesic matrix
  // serves all restarts and the exact oracle.
  const auto t_eval = Clock::now();
  const DistanceMatrix goal_d = goal_distance_matrix(prepared.map, prepared.graph, goals);
  std::size_t best_run = 0;
  for (std::size_t r = 0; r < config.runs; ++r) {
    const double length = tour_length(goal_d, solutions[r].ordering);
    report.runs.push_back(
        {config.seed + r, length, solutions[r].ordering, solutions[r].epochs_run, solutions[r].converged});
    if (length < report.runs[best_run].length) best_run = r;
  }
  double sum = 0.0;
  for (const auto& run : report.runs) sum += run.length;
  report.mean_length = sum / static_cast<double>(report.runs.size());
  report.best_length = report.runs[best_run].length;
  report.best_ordering = report.runs[best_run].ordering;

  report.metrics.runs = config.runs;
  if (goals.size() >= 2 && goals.size() <= kHeldKarpMaxGoals) {
    const double l_opt = held_karp(goal_d).length;
    if (l_opt > 0.0) {
      report.metrics.l_opt = l_opt;
      report.metrics.pdm = pdm(report.mean_length, l_opt);
      report.metrics.pdb = pdb(report.best_length, l_opt);
    }
  }
  report.t_eval = seconds_since(t_eval);
  report.metrics.t_total = seconds_since(t_start);

  if (config.out_json) write_json(*config.out_json, report.to_json());
  if (config.svg) {
    const Triangulation* overlay = config.svg_triangulation ? &prepared.triangulation : nullptr;
    const Tour best = tour_length_in_workspace(prepared.map, prepared.graph, goals, report.best_ordering);
    write_file_atomic(*config.svg, render_svg(prepared.map, goals, &best, overlay));
  }
  return report;
}

OracleReport cmd_oracle(const RunConfig& config) {
  const PolygonalMap map = parse_map(read_file(config.map_path));
  const GoalSet goals = parse_goals(read_file(config.goals_path));
  validate_goals(map, goals);
  if (goals.size() > kHeldKarpMaxGoals) {
    throw CapacityError("oracle: " + std::to_string(goals.size()) + " goals exceed the exact-oracle limit of " +
                        std::to_string(kHeldKarpMaxGoals));
  }
  const VisibilityGraph graph = build_visibility_graph(map);
  const auto opt = held_karp(goal_distance_matrix(map, graph, goals));
  OracleReport report{goals.size(), opt.ordering, opt.length};
  if (config.out_json) write_json(*config.out_json, report.to_json());
  if (config.svg) {
    const Tour tour = tour_length_in_workspace(map, graph, goals, opt.ordering);
    write_file_atomic(*config.svg, render_svg(map, goals, &tour));
  }
  return report;
}

EvalReport cmd_eval(const RunConfig& config, const std::filesystem::path& ordering_path) {
  const auto t_start = Clock::now();
  const Geometry geometry = load_geometry_and_goals(config);
  const Ordering ordering = parse_ordering(read_file(ordering_path));
  if (!is_permutation_of(ordering, geometry.goals.size())) {
    throw ParseError("ordering is not a permutation of 0.." + std::to_string(geometry.goals.size()) + "-1");
  }
  const Tour tour = tour_length_in_workspace(geometry.map, geometry.graph, geometry.goals, ordering);
  EvalReport report{ordering, tour.length, {}};
  report.metrics.runs = 1;
  report.metrics.l_opt = oracle_length(geometry);
  if (report.metrics.l_opt) {
    report.metrics.pdm = pdm(tour.length, *report.metrics.l_opt);
    report.metrics.pdb = pdb(tour.length, *report.metrics.l_opt);
  }
  report.metrics.t_total = seconds_since(t_start);
  if (config.out_json) write_json(*config.out_json, report.to_json());
  if (config.svg) write_file_atomic(*config.svg, render_svg(geometry.map, geometry.goals, &tour));
  return report;
}

Ordering parse_ordering(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  Ordering ordering;
  if (first == std::string_view::npos) return ordering;
  if (text[first] == '[') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("ordering: ") + e.what());
    }
    for (const auto& v : doc) {
      if (!v.is_number_unsigned()) throw ParseError("ordering: entries must be non-negative integers");
      ordering.push_back(v.get<std::size_t>());
    }
    return ordering;
  }
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    if (token.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("ordering: '" + token + "' is not a goal index");
    }
    ordering.push_back(std::stoull(token));
  }
  return ordering;
}

json EmbedResult::to_json() const {
  return {{"cache_path", cache_path.string()}, {"cache_hit", cache_hit}, {"vertices", vertices},
          {"dim", m},                          {"stress", stress},       {"iterations", iterations}};
}

json RunReport::to_json() const {
  json runs_json = json::array();
  for (const auto& r : runs) {
    runs_json.push_back({{"seed", r.seed},
                         {"length", r.length},
                         {"ordering", r.ordering},
                         {"epochs", r.epochs},
                         {"converged", r.converged}});
  }
  return {{"config", config_to_json(config)},
          {"goals", goals},
          {"vertices", vertices},
          {"cache_hit", cache_hit},
          {"embedding", {{"stress", stress}, {"max_relative_distortion", optional_number(max_relative_distortion)}}},
          {"lift_distortion", lift_distortion},
          {"runs", runs_json},
          {"mean_length", mean_length},
          {"best", {{"length", best_length}, {"ordering", best_ordering}}},
          {"geodesic_calls_during_som", geodesic_calls_during_som},
          {"metrics",
           {{"L_opt", optional_number(metrics.l_opt)},
            {"PDM", optional_number(metrics.pdm)},
            {"PDB", optional_number(metrics.pdb)},
            {"runs", metrics.runs},
            {"T", ms_round(metrics.t_total)},
            {"T_MDS", ms_round(metrics.t_mds)},
            {"T_SOM", ms_round(metrics.t_som)},
            {"T_eval", ms_round(t_eval)}}}};
}

json OracleReport::to_json() const { return {{"goals", goals}, {"ordering", ordering}, {"L_opt", l_opt}}; }

json EvalReport::to_json() const {
  return {{"ordering", ordering},
          {"length", length},
          {"metrics",
           {{"L_opt", optional_number(metrics.l_opt)},
            {"PDM", optional_number(metrics.pdm)},
            {"PDB", optional_number(metrics.pdb)},
            {"T", ms_round(metrics.t_total)}}}};
}

}  // namespace tba
