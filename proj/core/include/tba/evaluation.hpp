#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tba/geodesic.hpp"
#include "tba/tour.hpp"

namespace tba {

/// Closed tour evaluated in the workspace.
struct Tour {
  Ordering ordering;
  double length = 0.0;
  std::vector<GeodesicPath> legs;  // legs[i] runs ordering[i] -> ordering[i+1 mod n]
};

/// Percent deviations from the optimum plus phase timings (seconds).
struct Metrics {
  std::optional<double> l_opt;
  std::optional<double> pdm;
  std::optional<double> pdb;
  std::size_t runs = 0;
  double t_total = 0.0;
  double t_mds = 0.0;
  double t_som = 0.0;
};

struct OracleResult {
  Ordering ordering;
  double length = 0.0;
};

/// Largest instance the exact oracle accepts (2^17 * 17 DP table).
inline constexpr std::size_t kHeldKarpMaxGoals = 18;

Tour tour_length_in_workspace(const PolygonalMap& map, const VisibilityGraph& graph, const GoalSet& goals,
                              const Ordering& ordering);

/// Closed-tour length of `ordering` under a precomputed distance matrix.
double tour_length(const DistanceMatrix& d, const Ordering& ordering);

/// Exact TSP by Held-Karp dynamic programming. Throws CapacityError above
/// kHeldKarpMaxGoals goals.
OracleResult held_karp(const DistanceMatrix& d);

/// (L_mean - L_opt) / L_opt * 100. Throws DomainError unless L_opt > 0.
double pdm(double l_mean, double l_opt);
/// (L_best - L_opt) / L_opt * 100. Throws DomainError unless L_opt > 0.
double pdb(double l_best, double l_opt);

}  // namespace tba
