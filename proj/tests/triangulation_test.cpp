#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "tba/errors.hpp"
#include "tba/instance_gen.hpp"
#include "tba/triangulation.hpp"

namespace tba {
namespace {

using testing::square_with_hole;
using testing::triangle_map;
using testing::unit_square;

double total_area(const PolygonalMap& map, const Triangulation& tri) {
  double sum = 0.0;
  for (const auto& t : tri.triangles) sum += triangle_area(map, t);
  return sum;
}

Point2 recombine(const PolygonalMap& map, const Triangulation& tri, const BarycentricCoords& b) {
  const auto& t = tri.triangles[b.triangle];
  Point2 p{0, 0};
  for (int k = 0; k < 3; ++k) {
    p.x += b.lambda[k] * map.vertex(t[k]).x;
    p.y += b.lambda[k] * map.vertex(t[k]).y;
  }
  return p;
}

std::vector<double> lift_by(const Embedding& e, const Triangulation& tri, const BarycentricCoords& b) {
  std::vector<double> out(e.m, 0.0);
  for (int k = 0; k < 3; ++k) {
    for (std::size_t d = 0; d < e.m; ++d) out[d] += b.lambda[k] * e.row(tri.triangles[b.triangle][k])[d];
  }
  return out;
}

Embedding embedding_of(const PolygonalMap& map, std::size_t m = 5) {
  MdsOptions o;
  o.m = m;
  return embed(all_pairs_vertex_distances(build_visibility_graph(map)), o);
}

// Checks the structural invariants shared by every map.
void expect_valid(const PolygonalMap& map, const Triangulation& tri) {
  EXPECT_NEAR(total_area(map, tri), map.free_area(), 1e-6 * map.free_area());
  for (const auto& t : tri.triangles) {
    EXPECT_GT(triangle_area(map, t), 0.0);
    for (auto v : t) EXPECT_LT(v, map.vertex_count());
    EXPECT_LT(t[0], t[1]);
    EXPECT_LT(t[0], t[2]);
    const Point2 c = (1.0 / 3.0) * (map.vertex(t[0]) + map.vertex(t[1]) + map.vertex(t[2]));
    EXPECT_EQ(point_in_free_space(map, c), Containment::interior);
  }
  for (const auto& e : map.edges()) EXPECT_TRUE(tri.is_constrained(e.a, e.b)) << e.a << "-" << e.b;

  // Every map edge bounds exactly one triangle; every other edge exactly two.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> owners;
  for (std::size_t id = 0; id < tri.triangles.size(); ++id) {
    const auto& t = tri.triangles[id];
    for (int k = 0; k < 3; ++k) {
      const auto a = t[k], b = t[(k + 1) % 3];
      owners[{std::min(a, b), std::max(a, b)}].push_back(id);
    }
  }
  for (const auto& [edge, ids] : owners) {
    if (tri.is_constrained(edge.first, edge.second)) {
      EXPECT_EQ(ids.size(), 1u);
      continue;
    }
    ASSERT_EQ(ids.size(), 2u);
    // Empty circumcircle across every unconstrained edge.
    const auto& t = tri.triangles[ids[0]];
    const auto& u = tri.triangles[ids[1]];
    std::size_t opposite = 0;
    for (auto v : u) {
      if (v != edge.first && v != edge.second) opposite = v;
    }
    const double scale = map.free_area() * map.free_area();
    EXPECT_LE(incircle(map.vertex(t[0]), map.vertex(t[1]), map.vertex(t[2]), map.vertex(opposite)),
              1e-9 * scale);
  }
}

TEST(Cdt, UnitSquare) {
  const auto map = unit_square();
  const auto tri = build_cdt(map);
  EXPECT_EQ(tri.triangles.size(), 2u);
  EXPECT_DOUBLE_EQ(total_area(map, tri), 1.0);
  expect_valid(map, tri);
}

TEST(Cdt, SquareWithHole) {
  const auto map = square_with_hole();
  const auto tri = build_cdt(map);
  EXPECT_EQ(tri.triangles.size(), 8u);
  EXPECT_NEAR(total_area(map, tri), 96.0, 1e-12);
  expect_valid(map, tri);
}

TEST(Cdt, TriangleMapIsItself) {
  const auto map = triangle_map();
  const auto tri = build_cdt(map);
  ASSERT_EQ(tri.triangles.size(), 1u);
  EXPECT_EQ(tri.triangles[0], (Triangle{0, 1, 2}));
}

TEST(Cdt, RandomMapsSatisfyInvariants) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 25; ++k) {
    const auto map = random_map(shape_for(16 + k, 1 + k % 4, rng), rng);
    const auto tri = build_cdt(map);
    // Euler: a triangulated polygon with h holes and V vertices has V + 2h - 2 triangles.
    EXPECT_EQ(tri.triangles.size(), map.vertex_count() + 2 * map.holes().size() - 2);
    expect_valid(map, tri);
  }
}

TEST(Cdt, Deterministic) {
  std::mt19937_64 rng(37);
  const auto map = random_map(shape_for(30, 3, rng), rng);
  EXPECT_EQ(build_cdt(map).triangles, build_cdt(map).triangles);
}

TEST(Locate, SquareExamples) {
  const auto map = unit_square();
  const auto tri = build_cdt(map);
  const auto& lower = tri.triangles[locate(tri, map, {0.25, 0.1})];
  EXPECT_NE(std::find(lower.begin(), lower.end(), 0u), lower.end());
  EXPECT_NE(std::find(lower.begin(), lower.end(), 1u), lower.end());
  // The centre lies on the shared diagonal whichever one was chosen.
  EXPECT_EQ(locate(tri, map, {0.5, 0.5}), 0u);
}

TEST(Locate, OutsideFreeSpace) {
  const auto map = square_with_hole();
  const auto tri = build_cdt(map);
  EXPECT_THROW(locate(tri, map, {5, 5}), DomainError);
  EXPECT_THROW(locate(tri, map, {-1, 5}), DomainError);
  EXPECT_NO_THROW(locate(tri, map, {4, 5}));
}

TEST(Barycentric, VertexAndCentroid) {
  const auto map = square_with_hole();
  const auto tri = build_cdt(map);
  for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
    const auto& ids = tri.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const auto b = barycentric(map, tri, t, map.vertex(ids[k]));
      for (int j = 0; j < 3; ++j) EXPECT_EQ(b.lambda[j], j == k ? 1.0 : 0.0);
    }
    const Point2 c = (1.0 / 3.0) * (map.vertex(ids[0]) + map.vertex(ids[1]) + map.vertex(ids[2]));
    const auto b = barycentric(map, tri, t, c);
    for (double l : b.lambda) EXPECT_NEAR(l, 1.0 / 3.0, 1e-12);
  }
}

TEST(Barycentric, RandomRoundTrip) {
  std::mt19937_64 rng(41);
  const auto map = random_map(shape_for(40, 3, rng), rng);
  const auto tri = build_cdt(map);
  std::uniform_int_distribution<std::size_t> pick(0, tri.triangles.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int draw = 0; draw < 1000; ++draw) {
    const std::size_t t = pick(rng);
    double r1 = u(rng), r2 = u(rng);
    if (r1 + r2 > 1.0) {
      r1 = 1.0 - r1;
      r2 = 1.0 - r2;
    }
    const auto& ids = tri.triangles[t];
    const Point2 a = map.vertex(ids[0]), b = map.vertex(ids[1]), c = map.vertex(ids[2]);
    const Point2 p = a + r1 * (b - a) + r2 * (c - a);
    const auto bc = barycentric(map, tri, t, p);
    EXPECT_NEAR(bc.lambda[0] + bc.lambda[1] + bc.lambda[2], 1.0, 1e-12);
    for (double l : bc.lambda) EXPECT_GE(l, -kGeoEps);
    const Point2 q = recombine(map, tri, bc);
    EXPECT_NEAR(q.x, p.x, 1e-12 * std::max(1.0, std::abs(p.x)));
    EXPECT_NEAR(q.y, p.y, 1e-12 * std::max(1.0, std::abs(p.y)));
  }
}

TEST(Barycentric, DegenerateTriangle) {
  const PolygonalMap map(Polygon({{0, 0}, {1, 0}, {2, 0}, {2, 2}, {0, 2}}), {});
  Triangulation tri;
  tri.triangles = {Triangle{0, 1, 2}};
  EXPECT_THROW(barycentric(map, tri, 0, {1, 0}), NumericalError);
}

TEST(Lift, VertexGoalLandsOnEmbeddedVertex) {
  const auto map = square_with_hole();
  const auto tri = build_cdt(map);
  const auto e = embedding_of(map);
  GoalSet goals;
  for (std::size_t v = 0; v < map.vertex_count(); ++v) goals.push_back(map.vertex(v));
  const auto lifted = lift_goals(goals, map, tri, e);
  for (std::size_t v = 0; v < goals.size(); ++v) {
    EXPECT_EQ(lifted[v].goal_index, v);
    for (std::size_t d = 0; d < e.m; ++d) EXPECT_EQ(lifted[v].point[d], e.row(v)[d]);
  }
}

TEST(Lift, ConvexMapPreservesGoalDistances) {
  std::vector<Point2> ring;
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * 3.141592653589793 * k / 8.0;
    ring.push_back({10.0 * std::cos(a), 7.0 * std::sin(a)});
  }
  const PolygonalMap map(Polygon(ring), {});
  const auto tri = build_cdt(map);
  const auto e = embedding_of(map, 2);
  ASSERT_LE(e.stress, 1e-12);
  std::mt19937_64 rng(43);
  const auto goals = random_goals(map, 12, rng);
  const auto lifted = lift_goals(goals, map, tri, e);
  for (std::size_t i = 0; i < goals.size(); ++i) {
    for (std::size_t j = i + 1; j < goals.size(); ++j) {
      const double dx = lifted[i].point[0] - lifted[j].point[0];
      const double dy = lifted[i].point[1] - lifted[j].point[1];
      EXPECT_NEAR(std::sqrt(dx * dx + dy * dy), distance(goals[i], goals[j]), 1e-6);
    }
  }
}

TEST(Lift, SharedEdgeGivesSameLiftFromEitherSide) {
  std::mt19937_64 rng(47);
  const auto map = random_map(shape_for(24, 2, rng), rng);
  const auto tri = build_cdt(map);
  const auto e = embedding_of(map);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> owners;
  for (std::size_t id = 0; id < tri.triangles.size(); ++id) {
    for (int k = 0; k < 3; ++k) {
      const auto a = tri.triangles[id][k], b = tri.triangles[id][(k + 1) % 3];
      owners[{std::min(a, b), std::max(a, b)}].push_back(id);
    }
  }
  std::uniform_real_distribution<double> u(0.05, 0.95);
  int checked = 0;
  for (const auto& [edge, ids] : owners) {
    if (ids.size() != 2) continue;
    const double t = u(rng);
    const Point2 p = map.vertex(edge.first) + t * (map.vertex(edge.second) - map.vertex(edge.first));
    const auto x = lift_by(e, tri, barycentric(map, tri, ids[0], p));
    const auto y = lift_by(e, tri, barycentric(map, tri, ids[1], p));
    for (std::size_t d = 0; d < e.m; ++d) EXPECT_NEAR(x[d], y[d], 1e-12 * std::max(1.0, std::abs(x[d])));
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Lift, ErrorsNameTheGoal) {
  const auto map = square_with_hole();
  const auto tri = build_cdt(map);
  const auto e = embedding_of(map);
  try {
    lift_goals({{1, 1}, {5, 5}}, map, tri, e);
    FAIL();
  } catch (const DomainError& err) {
    EXPECT_EQ(std::string(err.what()).rfind("goal 1: ", 0), 0u) << err.what();
  }
}

}  // namespace
}  // namespace tba
