#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "tba/geometry.hpp"

namespace tba {

struct MapShape {
  std::size_t boundary_vertices = 6;
  std::vector<std::size_t> hole_vertices;  // one entry per hole
  double extent = 100.0;                   // boundary circumradius
};

/// Random star-shaped boundary with non-overlapping jittered convex holes.
/// Retries internally until the result validates.
PolygonalMap random_map(const MapShape& shape, std::mt19937_64& rng);

/// Splits a vertex budget into a boundary and `holes` hole polygons
/// (each >= 3 vertices, boundary >= 4).
MapShape shape_for(std::size_t total_vertices, std::size_t holes, std::mt19937_64& rng);

/// Uniform samples from the interior of free space.
GoalSet random_goals(const PolygonalMap& map, std::size_t count, std::mt19937_64& rng);

}  // namespace tba
