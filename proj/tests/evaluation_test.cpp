#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tba/errors.hpp"
#include "tba/evaluation.hpp"
#include "tba/instance_gen.hpp"

namespace tba {
namespace {

const GoalSet kCorners{{0, 0}, {1, 0}, {1, 1}, {0, 1}};

PolygonalMap open_field() { return PolygonalMap(Polygon({{-1, -1}, {2, -1}, {2, 2}, {-1, 2}}), {}); }

std::vector<Point2> random_points(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

TEST(WorkspaceTour, TriangleAnyOrderIsPerimeter) {
  const auto map = open_field();
  const auto graph = build_visibility_graph(map);
  const GoalSet goals{{0, 0}, {1.5, 0}, {0, 1}};
  const double perimeter = 1.5 + 1.0 + std::sqrt(1.5 * 1.5 + 1.0);
  for (const Ordering& o : {Ordering{0, 1, 2}, Ordering{0, 2, 1}, Ordering{2, 1, 0}}) {
    EXPECT_NEAR(tour_length_in_workspace(map, graph, goals, o).length, perimeter, 1e-12);
  }
}

TEST(WorkspaceTour, SquareHullAndBowtie) {
  const auto map = open_field();
  const auto graph = build_visibility_graph(map);
  const auto hull = tour_length_in_workspace(map, graph, kCorners, {0, 1, 2, 3});
  EXPECT_NEAR(hull.length, 4.0, 1e-12);
  ASSERT_EQ(hull.legs.size(), 4u);
  EXPECT_EQ(hull.legs[3].waypoints.front(), kCorners[3]);
  EXPECT_EQ(hull.legs[3].waypoints.back(), kCorners[0]);
  EXPECT_NEAR(tour_length_in_workspace(map, graph, kCorners, {0, 2, 1, 3}).length, 2.0 + 2.0 * std::sqrt(2.0),
              1e-12);
}

TEST(WorkspaceTour, LegsSumToLengthAroundObstacles) {
  const auto map = testing::square_with_hole();
  const auto graph = build_visibility_graph(map);
  const GoalSet goals{{1, 5}, {9, 5}, {5, 1}, {5, 9}};
  const auto tour = tour_length_in_workspace(map, graph, goals, {0, 1, 2, 3});
  double sum = 0.0;
  for (const auto& leg : tour.legs) sum += leg.length;
  EXPECT_NEAR(sum, tour.length, 1e-12);
  EXPECT_NEAR(tour.length, tour_length(goal_distance_matrix(map, graph, goals), {0, 1, 2, 3}), 1e-9);
  EXPECT_THROW(tour_length_in_workspace(map, graph, goals, {0, 1, 1, 3}), ValidationError);
}

TEST(HeldKarp, SmallExamples) {
  EXPECT_EQ(held_karp(DistanceMatrix(0)).length, 0.0);
  EXPECT_EQ(held_karp(DistanceMatrix(1)).ordering, (Ordering{0}));
  const auto two = held_karp(testing::euclidean_matrix({{0, 0}, {3, 4}}));
  EXPECT_DOUBLE_EQ(two.length, 10.0);
  const auto tri = held_karp(testing::euclidean_matrix({{0, 0}, {3, 0}, {0, 4}}));
  EXPECT_DOUBLE_EQ(tri.length, 12.0);
  const auto square = held_karp(testing::euclidean_matrix(kCorners));
  EXPECT_DOUBLE_EQ(square.length, 4.0);
  EXPECT_EQ(square.ordering, (Ordering{0, 1, 2, 3}));
}

TEST(HeldKarp, MatchesBruteForce) {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<std::size_t> size(5, 9);
  for (int inst = 0; inst < 50; ++inst) {
    const auto d = testing::euclidean_matrix(random_points(size(rng), rng));
    const auto hk = held_karp(d);
    EXPECT_NEAR(hk.length, testing::brute_force_tsp(d), 1e-9);
    EXPECT_TRUE(is_permutation_of(hk.ordering, d.size()));
    EXPECT_NEAR(tour_length(d, hk.ordering), hk.length, 1e-9);
    EXPECT_EQ(hk.ordering, canonicalize_cycle(hk.ordering));
  }
}

TEST(HeldKarp, GeodesicInstancesNeverBeatenByAnyOrdering) {
  std::mt19937_64 rng(73);
  const auto map = random_map(shape_for(20, 2, rng), rng);
  const auto graph = build_visibility_graph(map);
  const auto goals = random_goals(map, 7, rng);
  const auto d = goal_distance_matrix(map, graph, goals);
  const auto hk = held_karp(d);
  Ordering o{0, 1, 2, 3, 4, 5, 6};
  for (int k = 0; k < 40; ++k) {
    std::shuffle(o.begin(), o.end(), rng);
    EXPECT_LE(hk.length, tour_length_in_workspace(map, graph, goals, o).length + 1e-9);
  }
}

TEST(HeldKarp, CapacityGuard) {
  std::mt19937_64 rng(79);
  EXPECT_NO_THROW(held_karp(testing::euclidean_matrix(random_points(kHeldKarpMaxGoals, rng))));
  try {
    held_karp(DistanceMatrix(kHeldKarpMaxGoals + 1, 1.0));
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("18"), std::string::npos) << e.what();
    EXPECT_EQ(e.exit_code(), 5);
  }
}

TEST(Metrics, PercentDeviations) {
  EXPECT_EQ(pdm(58.5, 58.5), 0.0);
  EXPECT_EQ(pdb(13.6, 13.6), 0.0);
  EXPECT_NEAR(pdm(14.2, 13.6), 4.41, 0.005);
  EXPECT_THROW(pdm(1.0, 0.0), DomainError);
  EXPECT_THROW(pdb(1.0, -2.0), DomainError);
}

TEST(Metrics, ScaleInvariant) {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> len(1.0, 1000.0), scale(1e-3, 1e3);
  for (int k = 0; k < 100; ++k) {
    const double opt = len(rng), l = opt * (1.0 + 0.3 * len(rng) / 1000.0), c = scale(rng);
    EXPECT_NEAR(pdm(c * l, c * opt), pdm(l, opt), 1e-9);
    EXPECT_NEAR(pdb(c * l, c * opt), pdb(l, opt), 1e-9);
  }
}

TEST(TourLength, RotationAndReflectionInvariant) {
  std::mt19937_64 rng(89);
  const auto d = testing::euclidean_matrix(random_points(9, rng));
  Ordering o{0, 1, 2, 3, 4, 5, 6, 7, 8};
  std::shuffle(o.begin(), o.end(), rng);
  const double base = tour_length(d, o);
  for (std::size_t r = 0; r < o.size(); ++r) {
    Ordering rotated = o;
    std::rotate(rotated.begin(), rotated.begin() + static_cast<std::ptrdiff_t>(r), rotated.end());
    EXPECT_NEAR(tour_length(d, rotated), base, 1e-9);
    std::reverse(rotated.begin(), rotated.end());
    EXPECT_NEAR(tour_length(d, rotated), base, 1e-9);
  }
}

}  // namespace
}  // namespace tba
