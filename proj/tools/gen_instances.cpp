// Writes a reproducible suite of random polygonal maps and goal sets.
//
//   tba_gen_instances --out instances/ [--seed 2024]

#include <filesystem>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tba/fileio.hpp"
#include "tba/instance_gen.hpp"

namespace {

std::string goals_json(const tba::GoalSet& goals) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& g : goals) doc.push_back({g.x, g.y});
  return doc.dump() + "\n";
}

struct Recipe {
  const char* name;
  std::size_t vertices;
  std::size_t holes;
  std::size_t goals;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the random instance suite"};
  std::string out = "instances";
  std::uint64_t seed = 2024;
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--seed", seed, "Generator seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const Recipe recipes[] = {
      {"small_1hole", 12, 1, 8},   {"small_2holes", 18, 2, 8},  {"medium_3holes", 30, 3, 16},
      {"medium_4holes", 48, 4, 18}, {"large_4holes", 50, 4, 100}, {"large_8holes", 120, 8, 200},
  };

  std::mt19937_64 rng(seed);
  const std::filesystem::path dir(out);
  for (const auto& r : recipes) {
    const auto map = tba::random_map(tba::shape_for(r.vertices, r.holes, rng), rng);
    const auto goals = tba::random_goals(map, r.goals, rng);
    tba::write_file_atomic(dir / (std::string(r.name) + ".map.json"), tba::serialize_map(map));
    tba::write_file_atomic(dir / (std::string(r.name) + ".goals.json"), goals_json(goals));
    std::cout << r.name << ": " << map.vertex_count() << " vertices, " << map.holes().size() << " holes, "
              << goals.size() << " goals\n";
  }
  return 0;
}
