#include "tba/geodesic.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>

#include "tba/errors.hpp"

namespace tba {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::atomic<std::uint64_t> g_calls{0};

// Root-first vertex sequence of the tree path ending at v.
std::vector<std::size_t> tree_path(const std::vector<std::size_t>& parent, std::size_t v) {
  std::vector<std::size_t> path;
  while (true) {
    path.push_back(v);
    if (parent[v] == v) break;
    v = parent[v];
  }
  std::reverse(path.begin(), path.end());
  return path;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw ParseError("distance matrix: truncated");
  return value;
}

// Attaches extra points to a copy of the vertex adjacency. Each point links to
// every vertex it sees; `link_points` also links mutually visible points.
Adjacency augment(const PolygonalMap& map, const Adjacency& base, const std::vector<Point2>& points,
                  bool link_points) {
  Adjacency adj = base;
  const std::size_t n = base.size();
  adj.resize(n + points.size());
  const auto& verts = map.vertices();
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (std::size_t v = 0; v < n; ++v) {
      if (segment_visible(map, points[k], verts[v])) {
        const double w = distance(points[k], verts[v]);
        adj[n + k].emplace_back(v, w);
        adj[v].emplace_back(n + k, w);
      }
    }
  }
  if (link_points) {
    for (std::size_t k = 0; k < points.size(); ++k) {
      for (std::size_t l = k + 1; l < points.size(); ++l) {
        if (segment_visible(map, points[k], points[l])) {
          const double w = distance(points[k], points[l]);
          adj[n + k].emplace_back(n + l, w);
          adj[n + l].emplace_back(n + k, w);
        }
      }
    }
  }
  return adj;
}

ShortestPathTree dijkstra_impl(const Adjacency& adj, std::size_t source,
                               const std::function<bool(std::size_t)>& expandable) {
  g_calls.fetch_add(1, std::memory_order_relaxed);
  const std::size_t n = adj.size();
  ShortestPathTree tree{std::vector<double>(n, kInf), std::vector<std::size_t>(n, kNone)};
  std::vector<char> settled(n, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;

  tree.dist[source] = 0.0;
  tree.parent[source] = source;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [du, u] = queue.top();
    queue.pop();
    if (settled[u] || du > tree.dist[u]) continue;
    settled[u] = 1;
    if (u != source && !expandable(u)) continue;
    for (const auto& [v, w] : adj[u]) {
      if (settled[v]) continue;
      const double nd = du + w;
      const double tol = 1e-12 * std::max(1.0, nd);
      if (nd < tree.dist[v] - tol) {
        tree.dist[v] = nd;
        tree.parent[v] = u;
        queue.emplace(nd, v);
      } else if (nd <= tree.dist[v] + tol && tree.parent[v] != u) {
        // Tie: keep the lexicographically smaller predecessor path.
        if (tree_path(tree.parent, u) < tree_path(tree.parent, tree.parent[v])) tree.parent[v] = u;
      }
    }
  }
  return tree;
}

}  // namespace

void write_distance_matrix(std::ostream& out, const DistanceMatrix& d) {
  put_le<std::uint64_t>(out, d.size());
  for (double x : d.data()) put_le<double>(out, x);
}

DistanceMatrix read_distance_matrix(std::istream& in) {
  const auto n = get_le<std::uint64_t>(in);
  if (n > (1u << 20)) throw ParseError("distance matrix: implausible size");
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d(i, j) = get_le<double>(in);
  }
  return d;
}

Adjacency adjacency_of(const VisibilityGraph& graph) {
  Adjacency adj(graph.n);
  for (const auto& e : graph.edges) {
    adj[e.i].emplace_back(e.j, e.w);
    adj[e.j].emplace_back(e.i, e.w);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

ShortestPathTree dijkstra(const Adjacency& adj, std::size_t source) {
  return dijkstra_impl(adj, source, [](std::size_t) { return true; });
}

DistanceMatrix all_pairs_vertex_distances(const VisibilityGraph& graph) {
  const Adjacency adj = adjacency_of(graph);
  DistanceMatrix d(graph.n);
  for (std::size_t s = 0; s < graph.n; ++s) {
    const auto tree = dijkstra(adj, s);
    for (std::size_t t = 0; t < graph.n; ++t) {
      if (!std::isfinite(tree.dist[t])) {
        throw DisconnectedError("free space is disconnected: vertex " + std::to_string(t) +
                                " is unreachable from vertex " + std::to_string(s));
      }
      d(s, t) = tree.dist[t];
    }
  }
  // Dijkstra sums edges in path order; mirror the upper triangle so the
  // matrix is exactly symmetric.
  for (std::size_t i = 0; i < graph.n; ++i) {
    for (std::size_t j = i + 1; j < graph.n; ++j) d(j, i) = d(i, j);
  }
  return d;
}

GeodesicPath geodesic_between(const PolygonalMap& map, const VisibilityGraph& graph, Point2 a, Point2 b) {
  if (point_in_free_space(map, a) == Containment::outside) {
    throw DomainError("geodesic: start point lies outside free space");
  }
  if (point_in_free_space(map, b) == Containment::outside) {
    throw DomainError("geodesic: end point lies outside free space");
  }
  if (a == b) {
    g_calls.fetch_add(1, std::memory_order_relaxed);
    return {{a}, 0.0};
  }

  const std::size_t n = graph.n;
  const Adjacency adj = augment(map, adjacency_of(graph), {a, b}, true);
  const auto tree = dijkstra(adj, n);
  if (!std::isfinite(tree.dist[n + 1])) throw DisconnectedError("geodesic: end point unreachable");

  GeodesicPath path;
  path.length = tree.dist[n + 1];
  for (std::size_t v : tree_path(tree.parent, n + 1)) {
    path.waypoints.push_back(v == n ? a : v == n + 1 ? b : map.vertex(v));
  }
  return path;
}

DistanceMatrix goal_distance_matrix(const PolygonalMap& map, const VisibilityGraph& graph,
                                    const GoalSet& goals) {
  validate_goals(map, goals);
  const std::size_t n = graph.n;
  const Adjacency adj = augment(map, adjacency_of(graph), goals, true);
  const auto is_vertex = [n](std::size_t v) { return v < n; };

  DistanceMatrix d(goals.size());
  for (std::size_t k = 0; k < goals.size(); ++k) {
    const auto tree = dijkstra_impl(adj, n + k, is_vertex);
    for (std::size_t l = 0; l < goals.size(); ++l) {
      if (!std::isfinite(tree.dist[n + l])) {
        throw DisconnectedError("goal " + std::to_string(l) + " is unreachable from goal " + std::to_string(k));
      }
      d(k, l) = k == l ? 0.0 : tree.dist[n + l];
    }
  }
  for (std::size_t i = 0; i < goals.size(); ++i) {
    for (std::size_t j = i + 1; j < goals.size(); ++j) d(j, i) = d(i, j);
  }
  return d;
}

std::uint64_t geodesic_call_count() { return g_calls.load(std::memory_order_relaxed); }
void reset_geodesic_call_count() { g_calls.store(0, std::memory_order_relaxed); }

}  // namespace tba
