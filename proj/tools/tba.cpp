// tba: travelling-salesman tours in polygonal maps via an obstacle-free
// embedding of the map vertices and a ring self-organizing map.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tba/errors.hpp"
#include "tba/pipeline.hpp"

namespace {

struct Flags {
  std::string map, goals, cache, out, svg, ordering, triangulation;
  bool svg_cdt = false;
};

void add_common(CLI::App& cmd, tba::RunConfig& cfg, Flags& flags, bool needs_goals) {
  cmd.add_option("--map", flags.map, "Map file (JSON)")->required();
  auto* goals = cmd.add_option("--goals", flags.goals, "Goals file (JSON array or 'x y' lines)");
  if (needs_goals) goals->required();
  cmd.add_option("--dim", cfg.m, "Embedding dimension m")->capture_default_str();
  cmd.add_option("--seed", cfg.seed, "Seed of the first restart")->capture_default_str();
  cmd.add_option("--runs", cfg.runs, "Number of SOM restarts")->capture_default_str();
  cmd.add_option("--cache", flags.cache, "Embedding cache directory (fallback: $TBA_CACHE_DIR)");
  cmd.add_option("--out", flags.out, "Write the JSON report here");
  cmd.add_option("--svg", flags.svg, "Write an SVG rendering here");
  cmd.add_flag("--svg-triangulation", flags.svg_cdt, "Overlay the triangulation in the SVG");
  cmd.add_option("--triangulation", flags.triangulation, "Dump the triangulation as JSON here");
  cmd.add_option("--mu", cfg.som.mu, "SOM learning rate")->capture_default_str();
  cmd.add_option("--sigma-decay", cfg.som.sigma_decay, "Per-epoch gain decay")->capture_default_str();
  cmd.add_option("--neuron-factor", cfg.som.neuron_factor, "Neurons per goal")->capture_default_str();
  cmd.add_option("--max-epochs", cfg.som.max_epochs, "Epoch limit")->capture_default_str();
}

std::optional<std::filesystem::path> opt_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polygonal-domain TSP via vertex embedding and a ring SOM", "tba"};
  app.require_subcommand(1);

  tba::RunConfig cfg;
  Flags flags;
  auto* embed = app.add_subcommand("embed", "Precompute the goal-independent embedding of a map");
  auto* solve = app.add_subcommand("solve", "Solve the tour for a goal set");
  auto* oracle = app.add_subcommand("oracle", "Exact optimum by Held-Karp (<= 18 goals)");
  auto* eval = app.add_subcommand("eval", "Evaluate a given goal ordering");
  add_common(*embed, cfg, flags, false);
  add_common(*solve, cfg, flags, true);
  add_common(*oracle, cfg, flags, true);
  add_common(*eval, cfg, flags, true);
  eval->add_option("--ordering", flags.ordering, "Ordering file (JSON array or indices)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  cfg.map_path = flags.map;
  cfg.goals_path = flags.goals;
  cfg.cache_dir = tba::resolve_cache_dir(opt_path(flags.cache));
  cfg.out_json = opt_path(flags.out);
  cfg.svg = opt_path(flags.svg);
  cfg.svg_triangulation = flags.svg_cdt;
  cfg.triangulation_json = opt_path(flags.triangulation);

  try {
    if (embed->parsed()) {
      std::cout << tba::cmd_embed(cfg).to_json().dump(2) << '\n';
    } else if (solve->parsed()) {
      const auto report = tba::cmd_solve(cfg);
      auto summary = report.to_json();
      summary.erase("runs");
      summary.erase("lift_distortion");
      std::cout << summary.dump(2) << '\n';
    } else if (oracle->parsed()) {
      std::cout << tba::cmd_oracle(cfg).to_json().dump(2) << '\n';
    } else if (eval->parsed()) {
      std::cout << tba::cmd_eval(cfg, flags.ordering).to_json().dump(2) << '\n';
    }
  } catch (const tba::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
