#include "tba/evaluation.hpp"

#include <limits>

#include "tba/errors.hpp"

namespace tba {

namespace {

double percent_deviation(double l, double l_opt) {
  if (!(l_opt > 0.0)) throw DomainError("optimal tour length must be positive");
  return (l - l_opt) / l_opt * 100.0;
}

}  // namespace

Tour tour_length_in_workspace(const PolygonalMap& map, const VisibilityGraph& graph, const GoalSet& goals,
                              const Ordering& ordering) {
  if (!is_permutation_of(ordering, goals.size())) {
    throw ValidationError("tour: ordering is not a permutation of the goal indices");
  }
  Tour tour;
  tour.ordering = ordering;
  const std::size_t n = ordering.size();
  if (n < 2) return tour;
  for (std::size_t i = 0; i < n; ++i) {
    tour.legs.push_back(geodesic_between(map, graph, goals[ordering[i]], goals[ordering[(i + 1) % n]]));
    tour.length += tour.legs.back().length;
  }
  return tour;
}

double tour_length(const DistanceMatrix& d, const Ordering& ordering) {
  double total = 0.0;
  for (std::size_t i = 0; i < ordering.size(); ++i) {
    total += d(ordering[i], ordering[(i + 1) % ordering.size()]);
  }
  return ordering.size() < 2 ? 0.0 : total;
}

OracleResult held_karp(const DistanceMatrix& d) {
  const std::size_t n = d.size();
  if (n > kHeldKarpMaxGoals) {
    throw CapacityError("held_karp: " + std::to_string(n) + " goals exceed the exact-oracle limit of " +
                        std::to_string(kHeldKarpMaxGoals));
  }
  if (n == 0) return {};
  if (n == 1) return {{0}, 0.0};
  if (n == 2) return {{0, 1}, 2.0 * d(0, 1)};

  // Goal 0 is the fixed start; subsets range over goals 1..n-1 (bit k-1 <-> goal k).
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t k = n - 1;
  const std::size_t subsets = std::size_t{1} << k;
  std::vector<double> cost(subsets * k, kInf);
  std::vector<unsigned char> prev(subsets * k, 0);
  auto at = [k](std::size_t mask, std::size_t last) { return mask * k + last; };

  for (std::size_t j = 0; j < k; ++j) cost[at(std::size_t{1} << j, j)] = d(0, j + 1);
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    for (std::size_t last = 0; last < k; ++last) {
      if (!(mask & (std::size_t{1} << last))) continue;
      const double base = cost[at(mask, last)];
      if (base == kInf) continue;
      for (std::size_t next = 0; next < k; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t nmask = mask | (std::size_t{1} << next);
        const double c = base + d(last + 1, next + 1);
        if (c < cost[at(nmask, next)]) {
          cost[at(nmask, next)] = c;
          prev[at(nmask, next)] = static_cast<unsigned char>(last);
        }
      }
    }
  }

  const std::size_t full = subsets - 1;
  double best = kInf;
  std::size_t best_last = 0;
  for (std::size_t last = 0; last < k; ++last) {
    const double c = cost[at(full, last)] + d(last + 1, 0);
    if (c < best) {
      best = c;
      best_last = last;
    }
  }

  Ordering ordering;
  std::size_t mask = full, last = best_last;
  while (true) {
    ordering.push_back(last + 1);
    const std::size_t nmask = mask & ~(std::size_t{1} << last);
    if (nmask == 0) break;
    last = prev[at(mask, last)];
    mask = nmask;
  }
  ordering.push_back(0);
  return {canonicalize_cycle(std::move(ordering)), best};
}

double pdm(double l_mean, double l_opt) { return percent_deviation(l_mean, l_opt); }
double pdb(double l_best, double l_opt) { return percent_deviation(l_best, l_opt); }

}  // namespace tba
