#include "tba/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "tba/errors.hpp"

namespace tba {

namespace {

std::vector<Point2> jittered_ring(Point2 center, double radius, std::size_t k, double min_scale,
                                  std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(k);
  std::vector<Point2> ring;
  for (std::size_t i = 0; i < k; ++i) {
    const double angle = phase + step * (static_cast<double>(i) + 0.3 * (unit(rng) - 0.5));
    const double r = radius * (min_scale + (1.0 - min_scale) * unit(rng));
    ring.push_back({center.x + r * std::cos(angle), center.y + r * std::sin(angle)});
  }
  return ring;
}

struct Disc {
  Point2 c;
  double r;
};

}  // namespace

PolygonalMap random_map(const MapShape& shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double big = shape.extent;
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Polygon boundary(jittered_ring({0.0, 0.0}, big, shape.boundary_vertices, 0.85, rng));
    // Largest disc certainly inside the star boundary (apothem bound).
    const double inner =
        0.85 * big * std::cos(std::numbers::pi * 1.3 / static_cast<double>(shape.boundary_vertices));

    std::vector<Disc> discs;
    bool placed = true;
    for (std::size_t h = 0; h < shape.hole_vertices.size() && placed; ++h) {
      placed = false;
      for (int tries = 0; tries < 200 && !placed; ++tries) {
        const double r = big * (0.08 + 0.12 * unit(rng));
        const double reach = inner - r - 0.03 * big;
        if (reach <= 0.0) continue;
        const double rho = reach * std::sqrt(unit(rng));
        const double theta = 2.0 * std::numbers::pi * unit(rng);
        const Disc d{{rho * std::cos(theta), rho * std::sin(theta)}, r};
        placed = std::all_of(discs.begin(), discs.end(),
                             [&](const Disc& o) { return distance(o.c, d.c) > o.r + d.r + 0.03 * big; });
        if (placed) discs.push_back(d);
      }
    }
    if (!placed) continue;

    std::vector<Polygon> holes;
    for (std::size_t h = 0; h < discs.size(); ++h) {
      holes.emplace_back(jittered_ring(discs[h].c, discs[h].r, shape.hole_vertices[h], 0.6, rng));
    }
    try {
      return PolygonalMap(std::move(boundary), std::move(holes));
    } catch (const ValidationError&) {
    }
  }
  throw Error("random_map: could not place the requested holes");
}

MapShape shape_for(std::size_t total_vertices, std::size_t holes, std::mt19937_64& rng) {
  if (total_vertices < 4 + 3 * holes) throw ValidationError("shape_for: vertex budget too small");
  MapShape shape;
  shape.hole_vertices.assign(holes, 3);
  std::size_t spare = total_vertices - 4 - 3 * holes;
  shape.boundary_vertices = 4;
  std::uniform_int_distribution<std::size_t> pick(0, holes);
  while (spare > 0) {
    const std::size_t slot = pick(rng);
    if (slot == holes) {
      ++shape.boundary_vertices;
    } else if (shape.hole_vertices[slot] < 10) {
      ++shape.hole_vertices[slot];
    } else {
      ++shape.boundary_vertices;
    }
    --spare;
  }
  return shape;
}

GoalSet random_goals(const PolygonalMap& map, std::size_t count, std::mt19937_64& rng) {
  double lo_x = map.vertex(0).x, hi_x = lo_x, lo_y = map.vertex(0).y, hi_y = lo_y;
  for (const auto& v : map.boundary().vertices()) {
    lo_x = std::min(lo_x, v.x);
    hi_x = std::max(hi_x, v.x);
    lo_y = std::min(lo_y, v.y);
    hi_y = std::max(hi_y, v.y);
  }
  std::uniform_real_distribution<double> ux(lo_x, hi_x), uy(lo_y, hi_y);
  GoalSet goals;
  while (goals.size() < count) {
    const Point2 p{ux(rng), uy(rng)};
    if (point_in_free_space(map, p) == Containment::interior) goals.push_back(p);
  }
  return goals;
}

}  // namespace tba
