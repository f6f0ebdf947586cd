#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tba/geometry.hpp"

namespace tba {

/// Dense symmetric n x n matrix of geodesic distances, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n, double fill = 0.0) : n_(n), d_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * n_ + j]; }
  const std::vector<double>& data() const { return d_; }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Binary layout: u64 n (little endian) followed by n*n f64, row-major.
void write_distance_matrix(std::ostream& out, const DistanceMatrix& d);
DistanceMatrix read_distance_matrix(std::istream& in);

struct GeodesicPath {
  std::vector<Point2> waypoints;
  double length = 0.0;
};

/// Adjacency-list view of an undirected weighted graph.
using Adjacency = std::vector<std::vector<std::pair<std::size_t, double>>>;

Adjacency adjacency_of(const VisibilityGraph& graph);

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<std::size_t> parent;  // parent[source] == source; unreachable == npos
};

/// Dijkstra from `source`. Equal-length alternatives resolve to the path
/// whose vertex-id sequence is lexicographically smaller.
ShortestPathTree dijkstra(const Adjacency& adj, std::size_t source);

/// All-pairs shortest paths over the visibility graph. Edge weights are
/// Euclidean lengths, so Johnson's reweighting is the identity and this is
/// Dijkstra from every source. Throws DisconnectedError.
DistanceMatrix all_pairs_vertex_distances(const VisibilityGraph& graph);

/// Shortest obstacle-avoiding path from a to b. Throws DomainError when an
/// endpoint is outside free space, DisconnectedError when unreachable.
GeodesicPath geodesic_between(const PolygonalMap& map, const VisibilityGraph& graph, Point2 a, Point2 b);

/// Pairwise geodesic distances between goals. Each goal is attached to the
/// vertices it sees and to the goals it sees; goals are never intermediate
/// waypoints of other legs.
DistanceMatrix goal_distance_matrix(const PolygonalMap& map, const VisibilityGraph& graph,
                                    const GoalSet& goals);

/// Number of shortest-path searches run by this module since start-up
/// (or the last reset). Used to show that SOM training does none.
std::uint64_t geodesic_call_count();
void reset_geodesic_call_count();

}  // namespace tba
