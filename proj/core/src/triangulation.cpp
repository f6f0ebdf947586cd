#include "tba/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

#include "tba/errors.hpp"

namespace tba {

namespace {

using Edge = std::pair<std::size_t, std::size_t>;

Edge key(std::size_t i, std::size_t j) { return {std::min(i, j), std::max(i, j)}; }

Triangle canonical(Triangle t) {
  const auto first = std::min_element(t.begin(), t.end()) - t.begin();
  std::rotate(t.begin(), t.begin() + first, t.end());
  return t;
}

bool vertex_on_open_segment(const std::vector<Point2>& verts, std::size_t i, std::size_t j) {
  for (std::size_t k = 0; k < verts.size(); ++k) {
    if (k == i || k == j) continue;
    if (point_segment_distance(verts[k], verts[i], verts[j]) <= kGeoEps) return true;
  }
  return false;
}

// Vertex of t that is not on edge (a, b).
std::size_t opposite(const Triangle& t, std::size_t a, std::size_t b) {
  for (std::size_t v : t) {
    if (v != a && v != b) return v;
  }
  return t[0];
}

}  // namespace

double incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

double triangle_area(const PolygonalMap& map, const Triangle& t) {
  return 0.5 * orient2d(map.vertex(t[0]), map.vertex(t[1]), map.vertex(t[2]));
}

Triangulation build_cdt(const PolygonalMap& map) {
  if (!(map.free_area() > 0.0)) throw NumericalError("build_cdt: free space has zero area");
  const auto& verts = map.vertices();
  const std::size_t n = verts.size();

  Triangulation tri;
  std::vector<Edge> accepted;
  for (const auto& e : map.edges()) {
    tri.constrained_edges.insert(key(e.a, e.b));
    accepted.push_back(key(e.a, e.b));
  }

  // Greedy maximal set of non-crossing interior diagonals, shortest first.
  struct Candidate {
    double len;
    Edge e;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (tri.is_constrained(i, j)) continue;
      if (!segment_visible(map, verts[i], verts[j])) continue;
      if (vertex_on_open_segment(verts, i, j)) continue;
      candidates.push_back({distance(verts[i], verts[j]), {i, j}});
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return std::tie(a.len, a.e) < std::tie(b.len, b.e); });
  for (const auto& c : candidates) {
    const Point2 p = verts[c.e.first], q = verts[c.e.second];
    const bool blocked = std::any_of(accepted.begin(), accepted.end(), [&](const Edge& e) {
      return segments_cross_properly(p, q, verts[e.first], verts[e.second]);
    });
    if (!blocked) accepted.push_back(c.e);
  }

  // In a maximal planar straight-line graph, every vertex-free 3-cycle whose
  // interior is free space bounds a face.
  std::vector<std::set<std::size_t>> adj(n);
  for (const auto& [i, j] : accepted) {
    adj[i].insert(j);
    adj[j].insert(i);
  }
  for (const auto& [i, j] : accepted) {
    for (std::size_t k : adj[i]) {
      if (k <= j || !adj[j].count(k)) continue;
      Triangle t{i, j, k};
      double area2 = orient2d(verts[i], verts[j], verts[k]);
      if (std::abs(area2) <= kGeoEps) continue;
      if (area2 < 0) std::swap(t[1], t[2]);
      const Point2 centroid = (1.0 / 3.0) * (verts[i] + verts[j] + verts[k]);
      if (point_in_free_space(map, centroid) != Containment::interior) continue;
      bool empty = true;
      for (std::size_t v = 0; v < n && empty; ++v) {
        if (v == i || v == j || v == k) continue;
        const Point2 a = verts[t[0]], b = verts[t[1]], c = verts[t[2]], p = verts[v];
        if (orient2d(a, b, p) > 0 && orient2d(b, c, p) > 0 && orient2d(c, a, p) > 0) empty = false;
      }
      if (empty) tri.triangles.push_back(t);
    }
  }

  // Lawson flips on unconstrained edges until every one is locally Delaunay.
  std::map<Edge, std::vector<std::size_t>> edge_tris;
  auto register_tri = [&](std::size_t id) {
    const auto& t = tri.triangles[id];
    for (int k = 0; k < 3; ++k) edge_tris[key(t[k], t[(k + 1) % 3])].push_back(id);
  };
  auto unregister_tri = [&](std::size_t id) {
    const auto& t = tri.triangles[id];
    for (int k = 0; k < 3; ++k) {
      auto& owners = edge_tris[key(t[k], t[(k + 1) % 3])];
      owners.erase(std::remove(owners.begin(), owners.end(), id), owners.end());
    }
  };
  for (std::size_t id = 0; id < tri.triangles.size(); ++id) register_tri(id);

  std::deque<Edge> pending;
  for (const auto& [e, owners] : edge_tris) {
    if (owners.size() == 2 && !tri.constrained_edges.count(e)) pending.push_back(e);
  }
  std::size_t guard = 0;
  const std::size_t guard_limit = 64 * (n + 1) * (n + 1);
  while (!pending.empty() && guard++ < guard_limit) {
    const Edge e = pending.front();
    pending.pop_front();
    const auto it = edge_tris.find(e);
    if (it == edge_tris.end() || it->second.size() != 2) continue;
    const std::size_t t1 = it->second[0], t2 = it->second[1];
    const std::size_t a = e.first, b = e.second;
    const std::size_t c = opposite(tri.triangles[t1], a, b);
    const std::size_t d = opposite(tri.triangles[t2], a, b);

    // Orient (a, b, c) counterclockwise for the in-circle test.
    Point2 pa = verts[a], pb = verts[b];
    const Point2 pc = verts[c], pd = verts[d];
    if (orient2d(pa, pb, pc) < 0) std::swap(pa, pb);
    const double scale = std::max({distance(pa, pb), distance(pa, pc), distance(pb, pc), distance(pa, pd)});
    if (incircle(pa, pb, pc, pd) <= 1e-12 * std::pow(scale, 4)) continue;
    // The quadrilateral must be strictly convex for the flip to be valid.
    if (orient2d(pc, pd, pa) * orient2d(pc, pd, pb) >= 0) continue;

    unregister_tri(t1);
    unregister_tri(t2);
    Triangle n1{c, d, a}, n2{d, c, b};
    if (orient2d(verts[n1[0]], verts[n1[1]], verts[n1[2]]) < 0) std::swap(n1[1], n1[2]);
    if (orient2d(verts[n2[0]], verts[n2[1]], verts[n2[2]]) < 0) std::swap(n2[1], n2[2]);
    tri.triangles[t1] = n1;
    tri.triangles[t2] = n2;
    register_tri(t1);
    register_tri(t2);
    for (const Edge& outer : {key(a, c), key(c, b), key(b, d), key(d, a)}) {
      if (!tri.constrained_edges.count(outer)) pending.push_back(outer);
    }
  }

  for (auto& t : tri.triangles) t = canonical(t);
  std::sort(tri.triangles.begin(), tri.triangles.end());
  return tri;
}

std::size_t locate(const Triangulation& tri, const PolygonalMap& map, Point2 p) {
  if (point_in_free_space(map, p) == Containment::outside) {
    throw DomainError("locate: point lies outside free space");
  }
  std::size_t best = 0;
  double best_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t id = 0; id < tri.triangles.size(); ++id) {
    const auto& t = tri.triangles[id];
    double slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      const Point2 a = map.vertex(t[k]), b = map.vertex(t[(k + 1) % 3]);
      slack = std::min(slack, orient2d(a, b, p) / std::max(distance(a, b), 1e-300));
    }
    if (slack >= -kGeoEps) return id;
    if (slack > best_slack) {
      best_slack = slack;
      best = id;
    }
  }
  if (tri.triangles.empty()) throw NumericalError("locate: empty triangulation");
  return best;
}

BarycentricCoords barycentric(const PolygonalMap& map, const Triangulation& tri, std::size_t t, Point2 p) {
  const auto& ids = tri.triangles.at(t);
  const Point2 a = map.vertex(ids[0]), b = map.vertex(ids[1]), c = map.vertex(ids[2]);
  const double det = cross(b - a, c - a);
  const double scale = std::max({distance(a, b), distance(b, c), distance(c, a)});
  if (!(std::abs(det) > 1e-14 * scale * scale)) {
    throw NumericalError("barycentric: triangle " + std::to_string(t) + " is degenerate");
  }
  const double s = cross(p - a, c - a) / det;
  const double u = cross(b - a, p - a) / det;
  BarycentricCoords out{t, {1.0 - s - u, s, u}};

  bool clamped = false;
  for (double& l : out.lambda) {
    if (l < 0.0 && l > -kGeoEps) {
      l = 0.0;
      clamped = true;
    }
  }
  if (clamped) {
    const double sum = out.lambda[0] + out.lambda[1] + out.lambda[2];
    for (double& l : out.lambda) l /= sum;
  }
  return out;
}

std::vector<LiftedGoal> lift_goals(const GoalSet& goals, const PolygonalMap& map, const Triangulation& tri,
                                   const Embedding& embedding) {
  if (embedding.n != map.vertex_count()) {
    throw ValidationError("lift_goals: embedding does not cover the map vertices");
  }
  std::vector<LiftedGoal> lifted(goals.size());
  for (std::size_t g = 0; g < goals.size(); ++g) {
    LiftedGoal& out = lifted[g];
    out.goal_index = g;
    try {
      out.bary = barycentric(map, tri, locate(tri, map, goals[g]), goals[g]);
    } catch (const DomainError& e) {
      throw DomainError("goal " + std::to_string(g) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("goal " + std::to_string(g) + ": " + e.what());
    }
    const auto& t = tri.triangles[out.bary.triangle];
    out.point.assign(embedding.m, 0.0);
    for (int k = 0; k < 3; ++k) {
      const double* corner = embedding.row(t[k]);
      for (std::size_t d = 0; d < embedding.m; ++d) out.point[d] += out.bary.lambda[k] * corner[d];
    }
    for (int k = 0; k < 3; ++k) {
      const double* corner = embedding.row(t[k]);
      double sq = 0.0;
      for (std::size_t d = 0; d < embedding.m; ++d) sq += (out.point[d] - corner[d]) * (out.point[d] - corner[d]);
      out.distortion =
          std::max(out.distortion, std::abs(std::sqrt(sq) - distance(goals[g], map.vertex(t[k]))));
    }
  }
  return lifted;
}

}  // namespace tba
