#include "tba/svg.hpp"

#include <algorithm>
#include <sstream>

namespace tba {

namespace {

struct Frame {
  double min_x, max_y, scale;

  Point2 map(Point2 p) const { return {(p.x - min_x) * scale, (max_y - p.y) * scale}; }
};

void points_attr(std::ostream& out, const Frame& frame, const std::vector<Point2>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 q = frame.map(pts[i]);
    out << (i ? " " : "") << q.x << ',' << q.y;
  }
}

}  // namespace

std::string render_svg(const PolygonalMap& map, const GoalSet& goals, const Tour* tour,
                       const Triangulation* triangulation) {
  const auto& outer = map.boundary().vertices();
  double min_x = outer[0].x, max_x = min_x, min_y = outer[0].y, max_y = min_y;
  for (const auto& v : outer) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double size = 800.0;
  const double margin = 0.03 * span;
  const Frame frame{min_x - margin, max_y + margin, size / (span + 2 * margin)};
  const double width = (max_x - min_x + 2 * margin) * frame.scale;
  const double height = (max_y - min_y + 2 * margin) * frame.scale;
  const double dot = 0.006 * size;

  std::ostringstream out;
  out.precision(6);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";

  out << "  <polygon class=\"boundary\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"2\" points=\"";
  points_attr(out, frame, outer);
  out << "\"/>\n";
  for (const auto& hole : map.holes()) {
    out << "  <polygon class=\"hole\" fill=\"#9a9a9a\" stroke=\"#000000\" stroke-width=\"1\" points=\"";
    points_attr(out, frame, hole.vertices());
    out << "\"/>\n";
  }

  if (triangulation != nullptr && !triangulation->triangles.empty()) {
    out << "  <path class=\"cdt\" fill=\"none\" stroke=\"#4a90d9\" stroke-width=\"0.5\" d=\"";
    for (const auto& t : triangulation->triangles) {
      for (int k = 0; k < 3; ++k) {
        const Point2 q = frame.map(map.vertex(t[k]));
        out << (k == 0 ? "M" : " L") << q.x << ',' << q.y;
      }
      out << " Z ";
    }
    out << "\"/>\n";
  }

  if (tour != nullptr && !tour->legs.empty()) {
    std::vector<Point2> line;
    for (const auto& leg : tour->legs) {
      for (const auto& p : leg.waypoints) {
        if (line.empty() || !(line.back() == p)) line.push_back(p);
      }
    }
    if (!line.empty() && !(line.front() == line.back())) line.push_back(line.front());
    out << "  <polyline class=\"tour\" fill=\"none\" stroke=\"#d0021b\" stroke-width=\"2\" points=\"";
    points_attr(out, frame, line);
    out << "\"/>\n";
  }

  for (const auto& g : goals) {
    const Point2 q = frame.map(g);
    out << "  <circle class=\"goal\" cx=\"" << q.x << "\" cy=\"" << q.y << "\" r=\"" << dot
        << "\" fill=\"#000000\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace tba
