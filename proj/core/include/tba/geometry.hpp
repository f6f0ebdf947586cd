#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tba {

/// Tolerance for on-segment and intersection predicates, in workspace units.
inline constexpr double kGeoEps = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }

double dot(Point2 a, Point2 b);
double cross(Point2 a, Point2 b);
double distance(Point2 a, Point2 b);

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
double orient2d(Point2 a, Point2 b, Point2 c);

/// Distance from p to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// True when the open segments (a,b) and (c,d) cross at a single interior
/// point of both. Touching, collinear overlap and shared endpoints are not
/// proper crossings.
bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d);

/// True when the closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d);

/// Simple polygon, stored as an open vertex ring (last vertex != first).
class Polygon {
 public:
  Polygon() = default;
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  const Point2& operator[](std::size_t i) const { return vertices_[i]; }

  /// Shoelace signed area; positive for counterclockwise rings.
  double signed_area() const;
  bool is_ccw() const { return signed_area() > 0.0; }

  /// Reverses orientation while keeping the first vertex first.
  Polygon reversed() const;

  bool is_simple() const;

  /// Crossing-number test; the result for points on the border is unspecified.
  bool contains_strictly(Point2 p) const;
  bool on_border(Point2 p, double eps = kGeoEps) const;

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point2> vertices_;
};

enum class Containment { interior, on_border, outside };

/// Reference to a polygon edge by global vertex ids.
struct MapEdge {
  std::size_t a = 0;
  std::size_t b = 0;
};

/// Workspace: counterclockwise outer boundary with clockwise holes. Vertices
/// are enumerated boundary first, then holes in file order; this enumeration
/// is stable and keys every vertex-indexed structure downstream.
class PolygonalMap {
 public:
  /// Validates and normalizes orientation. Throws ValidationError.
  PolygonalMap(Polygon boundary, std::vector<Polygon> holes);

  const Polygon& boundary() const { return boundary_; }
  const std::vector<Polygon>& holes() const { return holes_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<Point2>& vertices() const { return vertices_; }
  const Point2& vertex(std::size_t id) const { return vertices_[id]; }

  /// Every polygon edge, oriented along its ring.
  const std::vector<MapEdge>& edges() const { return edges_; }

  /// Area of free space (boundary area minus hole areas).
  double free_area() const;

  friend bool operator==(const PolygonalMap& a, const PolygonalMap& b) {
    return a.boundary_ == b.boundary_ && a.holes_ == b.holes_;
  }

 private:
  Polygon boundary_;
  std::vector<Polygon> holes_;
  std::vector<Point2> vertices_;
  std::vector<MapEdge> edges_;
};

using GoalSet = std::vector<Point2>;

struct VisibilityEdge {
  std::size_t i = 0;
  std::size_t j = 0;
  double w = 0.0;

  friend bool operator==(const VisibilityEdge&, const VisibilityEdge&) = default;
};

/// Undirected visibility graph over map vertices. Edges have i < j and are
/// sorted by (i, j).
struct VisibilityGraph {
  std::size_t n = 0;
  std::vector<VisibilityEdge> edges;

  bool has_edge(std::size_t i, std::size_t j) const;
};

PolygonalMap parse_map(std::string_view text);
std::string serialize_map(const PolygonalMap& map);

/// Accepts a JSON array of [x, y] pairs or plain "x y" lines; the first
/// non-whitespace byte decides ('[' means JSON).
GoalSet parse_goals(std::string_view text);

Containment point_in_free_space(const PolygonalMap& map, Point2 p);

/// True iff the open segment (a, b) stays in the closure of free space.
/// Grazing corners and running along edges is allowed.
bool segment_visible(const PolygonalMap& map, Point2 a, Point2 b);

VisibilityGraph build_visibility_graph(const PolygonalMap& map);

/// Throws DomainError naming the first goal outside free space.
void validate_goals(const PolygonalMap& map, const GoalSet& goals);

}  // namespace tba
