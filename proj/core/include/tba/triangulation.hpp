#pragma once

#include <array>
#include <cstddef>
#include <set>
#include <utility>
#include <vector>

#include "tba/geometry.hpp"
#include "tba/mds.hpp"

namespace tba {

using Triangle = std::array<std::size_t, 3>;  // counterclockwise map vertex ids

/// Constrained Delaunay triangulation of free space over the map vertices
/// only (no Steiner points). Triangles are canonicalized (smallest id first,
/// counterclockwise) and sorted, so ids are deterministic.
struct Triangulation {
  std::vector<Triangle> triangles;
  std::set<std::pair<std::size_t, std::size_t>> constrained_edges;  // (min, max)

  bool is_constrained(std::size_t i, std::size_t j) const {
    return constrained_edges.count({std::min(i, j), std::max(i, j)}) != 0;
  }
};

struct BarycentricCoords {
  std::size_t triangle = 0;
  std::array<double, 3> lambda{};  // weights of triangles[triangle][0..2]
};

struct LiftedGoal {
  std::size_t goal_index = 0;
  BarycentricCoords bary;
  std::vector<double> point;  // coordinates in the embedded space
  /// Max over the triangle's corners of | |lifted - E(v)| - |goal - v| |.
  /// The corners are straight-line visible from the goal, so the workspace
  /// side is exact geodesic distance.
  double distortion = 0.0;
};

/// > 0 when d lies strictly inside the circumcircle of counterclockwise (a, b, c).
double incircle(Point2 a, Point2 b, Point2 c, Point2 d);

/// Throws NumericalError for zero-area free space.
Triangulation build_cdt(const PolygonalMap& map);

double triangle_area(const PolygonalMap& map, const Triangle& t);

/// Smallest-id triangle whose closure contains p. Throws DomainError when p
/// is outside free space.
std::size_t locate(const Triangulation& tri, const PolygonalMap& map, Point2 p);

/// Weights with p = sum lambda_k * v_k and sum lambda_k = 1. Components that
/// drift below zero by less than kGeoEps are clamped and renormalized.
/// Throws NumericalError for a degenerate triangle.
BarycentricCoords barycentric(const PolygonalMap& map, const Triangulation& tri, std::size_t t, Point2 p);

/// Applies the goal's barycentric weights to the embedded triangle corners.
std::vector<LiftedGoal> lift_goals(const GoalSet& goals, const PolygonalMap& map, const Triangulation& tri,
                                   const Embedding& embedding);

}  // namespace tba
