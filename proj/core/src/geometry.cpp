#include "tba/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tba/errors.hpp"

namespace tba {

namespace {

using nlohmann::json;

// Sign of p relative to the directed line a->b; points within kGeoEps of the
// line count as collinear.
int side(Point2 a, Point2 b, Point2 p) {
  const double o = orient2d(a, b, p);
  const double len = distance(a, b);
  if (std::abs(o) <= kGeoEps * std::max(len, 1.0)) return 0;
  return o > 0 ? 1 : -1;
}

bool on_closed_segment(Point2 p, Point2 a, Point2 b) {
  return point_segment_distance(p, a, b) <= kGeoEps;
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

Point2 point_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": expected [x, y] number pair");
  }
  const Point2 p{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw ParseError(where + ": coordinates must be finite");
  }
  return p;
}

std::vector<Point2> ring_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of points");
  std::vector<Point2> ring;
  ring.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    ring.push_back(point_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  }
  // A repeated closing vertex is tolerated and dropped.
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  return ring;
}

json ring_to_json(const Polygon& poly) {
  json ring = json::array();
  for (const auto& v : poly.vertices()) ring.push_back({v.x, v.y});
  return ring;
}

bool polygons_touch(const Polygon& p, const Polygon& q) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point2 a = p[i], b = p[(i + 1) % p.size()];
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (segments_intersect(a, b, q[j], q[(j + 1) % q.size()])) return true;
    }
  }
  return false;
}

}  // namespace

double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double distance(Point2 a, Point2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double orient2d(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int s1 = side(a, b, c), s2 = side(a, b, d);
  const int s3 = side(c, d, a), s4 = side(c, d, b);
  return s1 * s2 < 0 && s3 * s4 < 0;
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  if (segments_cross_properly(a, b, c, d)) return true;
  return on_closed_segment(c, a, b) || on_closed_segment(d, a, b) ||
         on_closed_segment(a, c, d) || on_closed_segment(b, c, d);
}

// --- Polygon ---------------------------------------------------------------

Polygon::Polygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {}

double Polygon::signed_area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    twice += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
  }
  return 0.5 * twice;
}

Polygon Polygon::reversed() const {
  std::vector<Point2> out;
  out.reserve(vertices_.size());
  if (!vertices_.empty()) {
    out.push_back(vertices_.front());
    for (std::size_t i = vertices_.size() - 1; i >= 1; --i) out.push_back(vertices_[i]);
  }
  return Polygon(std::move(out));
}

bool Polygon::is_simple() const {
  const std::size_t n = vertices_.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(vertices_[i], vertices_[(i + 1) % n]) <= kGeoEps) return false;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = vertices_[i], b = vertices_[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 c = vertices_[j], d = vertices_[(j + 1) % n];
      const bool next = (j == i + 1);
      const bool prev = (i == 0 && j == n - 1);
      if (next) {
        // Adjacent edges share b == c; they must not fold back onto each other.
        if (on_closed_segment(d, a, b) || on_closed_segment(a, c, d)) return false;
      } else if (prev) {
        if (on_closed_segment(c, a, b) || on_closed_segment(b, c, d)) return false;
      } else if (segments_intersect(a, b, c, d)) {
        return false;
      }
    }
  }
  return std::abs(signed_area()) > 0.0;
}

bool Polygon::contains_strictly(Point2 p) const {
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = vertices_[i], b = vertices_[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

bool Polygon::on_border(Point2 p, double eps) const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_segment_distance(p, vertices_[i], vertices_[(i + 1) % n]) <= eps) return true;
  }
  return false;
}

// --- PolygonalMap ----------------------------------------------------------

PolygonalMap::PolygonalMap(Polygon boundary, std::vector<Polygon> holes)
    : boundary_(std::move(boundary)), holes_(std::move(holes)) {
  auto check_ring = [](const Polygon& poly, const std::string& name) {
    if (poly.size() < 3) throw ValidationError(name + ": needs at least 3 vertices");
    for (const auto& v : poly.vertices()) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw ValidationError(name + ": non-finite coordinate");
      }
    }
    if (!poly.is_simple()) {
      throw ValidationError(name + ": polygon is not simple (self-intersecting or repeated vertices)");
    }
  };

  check_ring(boundary_, "boundary");
  if (!boundary_.is_ccw()) boundary_ = boundary_.reversed();

  for (std::size_t h = 0; h < holes_.size(); ++h) {
    const std::string name = "hole " + std::to_string(h);
    check_ring(holes_[h], name);
    if (holes_[h].is_ccw()) holes_[h] = holes_[h].reversed();
    for (const auto& v : holes_[h].vertices()) {
      if (!boundary_.contains_strictly(v) || boundary_.on_border(v)) {
        throw ValidationError(name + ": lies outside the boundary");
      }
    }
    if (polygons_touch(holes_[h], boundary_)) {
      throw ValidationError(name + ": touches or crosses the boundary");
    }
    for (std::size_t g = 0; g < h; ++g) {
      if (polygons_touch(holes_[h], holes_[g]) ||
          holes_[g].contains_strictly(holes_[h][0]) ||
          holes_[h].contains_strictly(holes_[g][0])) {
        throw ValidationError(name + ": overlaps hole " + std::to_string(g));
      }
    }
  }

  auto append = [this](const Polygon& poly) {
    const std::size_t base = vertices_.size();
    for (const auto& v : poly.vertices()) vertices_.push_back(v);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      edges_.push_back({base + i, base + (i + 1) % poly.size()});
    }
  };
  append(boundary_);
  for (const auto& hole : holes_) append(hole);
}

double PolygonalMap::free_area() const {
  double area = boundary_.signed_area();
  for (const auto& hole : holes_) area -= std::abs(hole.signed_area());
  return area;
}

bool VisibilityGraph::has_edge(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{i, j},
                                   [](const VisibilityEdge& e, const std::pair<std::size_t, std::size_t>& key) {
                                     return std::pair{e.i, e.j} < key;
                                   });
  return it != edges.end() && it->i == i && it->j == j;
}

// --- I/O -------------------------------------------------------------------

PolygonalMap parse_map(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("map: JSON syntax error at line " + std::to_string(line_of_offset(text, e.byte)) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("map: top level must be an object");
  if (!doc.contains("boundary")) throw ParseError("map: missing field 'boundary'");

  Polygon boundary(ring_from_json(doc["boundary"], "boundary"));
  std::vector<Polygon> holes;
  if (doc.contains("holes")) {
    const json& jh = doc["holes"];
    if (!jh.is_array()) throw ParseError("holes: expected an array of polygons");
    for (std::size_t h = 0; h < jh.size(); ++h) {
      holes.emplace_back(ring_from_json(jh[h], "holes[" + std::to_string(h) + "]"));
    }
  }
  return PolygonalMap(std::move(boundary), std::move(holes));
}

std::string serialize_map(const PolygonalMap& map) {
  json doc;
  doc["boundary"] = ring_to_json(map.boundary());
  doc["holes"] = json::array();
  for (const auto& hole : map.holes()) doc["holes"].push_back(ring_to_json(hole));
  return doc.dump() + "\n";
}

GoalSet parse_goals(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  GoalSet goals;
  if (first == std::string_view::npos) return goals;

  if (text[first] == '[') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError("goals: JSON syntax error at line " +
                       std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
    }
    for (std::size_t k = 0; k < doc.size(); ++k) {
      goals.push_back(point_from_json(doc[k], "goals[" + std::to_string(k) + "]"));
    }
    return goals;
  }

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    Point2 p;
    std::string rest;
    if (!(fields >> p.x >> p.y) || (fields >> rest)) {
      throw ParseError("goals: line " + std::to_string(lineno) + ": expected \"x y\"");
    }
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ParseError("goals: line " + std::to_string(lineno) + ": coordinates must be finite");
    }
    goals.push_back(p);
  }
  return goals;
}

// --- Predicates ------------------------------------------------------------

Containment point_in_free_space(const PolygonalMap& map, Point2 p) {
  if (map.boundary().on_border(p)) return Containment::on_border;
  for (const auto& hole : map.holes()) {
    if (hole.on_border(p)) return Containment::on_border;
  }
  if (!map.boundary().contains_strictly(p)) return Containment::outside;
  for (const auto& hole : map.holes()) {
    if (hole.contains_strictly(p)) return Containment::outside;
  }
  return Containment::interior;
}

bool segment_visible(const PolygonalMap& map, Point2 a, Point2 b) {
  const auto& verts = map.vertices();
  if (distance(a, b) <= kGeoEps) return point_in_free_space(map, a) != Containment::outside;

  for (const auto& e : map.edges()) {
    if (segments_cross_properly(a, b, verts[e.a], verts[e.b])) return false;
  }

  // Without proper crossings, the segment can only change between inside and
  // outside at map vertices lying on it. Split there and probe each piece.
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  std::vector<double> cuts{0.0, 1.0};
  for (const auto& v : verts) {
    if (on_closed_segment(v, a, b)) cuts.push_back(std::clamp(dot(v - a, ab) / len2, 0.0, 1.0));
  }
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 1e-12) continue;
    const Point2 mid = a + (0.5 * (cuts[k] + cuts[k + 1])) * ab;
    if (point_in_free_space(map, mid) == Containment::outside) return false;
  }
  return true;
}

VisibilityGraph build_visibility_graph(const PolygonalMap& map) {
  VisibilityGraph graph;
  graph.n = map.vertex_count();
  const auto& verts = map.vertices();
  for (std::size_t i = 0; i < graph.n; ++i) {
    for (std::size_t j = i + 1; j < graph.n; ++j) {
      if (segment_visible(map, verts[i], verts[j])) {
        graph.edges.push_back({i, j, distance(verts[i], verts[j])});
      }
    }
  }
  return graph;
}

void validate_goals(const PolygonalMap& map, const GoalSet& goals) {
  for (std::size_t k = 0; k < goals.size(); ++k) {
    if (!std::isfinite(goals[k].x) || !std::isfinite(goals[k].y) ||
        point_in_free_space(map, goals[k]) == Containment::outside) {
      throw DomainError("goal " + std::to_string(k) + " lies outside free space");
    }
  }
}

}  // namespace tba
