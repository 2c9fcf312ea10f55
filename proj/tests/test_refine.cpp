#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "defmesh/refine.hpp"
#include "doctest.h"

using namespace defmesh;

namespace {

Mesh quarter_grid(int n) {
  std::array<Marker, 4> sides = {Marker{"bottom", MarkerKind::Slippery},
                                 Marker{"right", MarkerKind::Moving},
                                 Marker{"top", MarkerKind::Moving},
                                 Marker{"left", MarkerKind::Slippery}};
  return rect_grid(n, n, Box{}, sides);
}

BoundaryMotion quarter_motion() {
  auto circle = ImplicitShape::sphere(2, {0, 0, 0}, 1.25);
  BoundaryMotion motion;
  motion.rules["right"] = {MarkerKind::Moving, circle, ProjectionKind::Radial};
  motion.rules["top"] = {MarkerKind::Moving, circle, ProjectionKind::Radial};
  return motion;
}

Mesh conformed_quarter_disk() {
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::MovingDomain);
  RunConfig cfg;
  cfg.dt = 0.05;
  return run_algorithm1(quarter_grid(4), monitor, quarter_motion(), cfg).mesh;
}

bool has_marker(const Mesh& m, int node, const std::string& name) {
  for (int id : m.node_markers[node])
    if (m.markers[id].name == name) return true;
  return false;
}

}  // namespace

TEST_CASE("plan counts for a 4x4 grid at order 3") {
  std::array<Marker, 4> sides = {Marker{"b", MarkerKind::Slippery},
                                 Marker{"r", MarkerKind::Slippery},
                                 Marker{"t", MarkerKind::Slippery},
                                 Marker{"l", MarkerKind::Slippery}};
  auto coarse = rect_grid(4, 4, Box{}, sides);
  auto plan = plan_refinement(coarse, 3, BoundaryMotion{});
  CHECK(plan.subdivision.fine.n_nodes() == 169);
  CHECK(plan.subdivision.fine.n_elements() == 144);
  CHECK(plan.warnings.empty());
  // no moving marker anywhere: no new-boundary nodes
  for (auto c : plan.node_classes) CHECK(c != NodeClass::NewBoundary);
}

TEST_CASE("no-op plan leaves the fine mesh in place") {
  std::array<Marker, 4> sides = {Marker{"b", MarkerKind::Slippery},
                                 Marker{"r", MarkerKind::Slippery},
                                 Marker{"t", MarkerKind::Slippery},
                                 Marker{"l", MarkerKind::Slippery}};
  auto coarse = rect_grid(3, 3, Box{}, sides);
  RunConfig cfg;
  cfg.dt = 0.1;
  auto res = refine_and_conform(coarse, 3, BoundaryMotion{}, cfg);
  auto fine = subdivide(coarse, 3).fine;
  REQUIRE(res.mesh.n_nodes() == fine.n_nodes());
  for (int i = 0; i < fine.n_nodes(); ++i)
    CHECK(vec_norm(res.mesh.nodes[i] - fine.nodes[i]) <= 1e-9);
}

TEST_CASE("quarter-disk plan moves only the new arc nodes") {
  auto coarse = conformed_quarter_disk();
  auto plan = plan_refinement(coarse, 3, quarter_motion());
  int nonzero = 0;
  for (int i = 0; i < plan.subdivision.fine.n_nodes(); ++i) {
    const bool moved = vec_norm(plan.bcs[i].velocity) > 1e-12;
    if (moved) {
      CHECK(plan.node_classes[i] == NodeClass::NewBoundary);
      ++nonzero;
    }
    if (plan.node_classes[i] == NodeClass::NewBoundary) {
      // target sits on the circle
      const Vec3 x = plan.subdivision.fine.nodes[i] + plan.bcs[i].velocity;
      CHECK(std::abs(vec_norm(x) - 1.25) <= 1e-10);
    }
  }
  // (p-1) interior nodes per arc edge, 8 arc edges on the 4x4 coarse mesh
  CHECK(nonzero == 16);
}

TEST_CASE("quarter-disk refinement conforms to the circle") {
  auto coarse = conformed_quarter_disk();
  RunConfig cfg;
  cfg.dt = 0.1;
  auto res = refine_and_conform(coarse, 3, quarter_motion(), cfg);
  const Mesh& m = res.mesh;
  REQUIRE(m.n_nodes() == 169);
  REQUIRE(m.n_elements() == 144);
  for (const auto& row : res.history) CHECK(row.min_jacobian > 0.0);

  // inherited boundary nodes do not move
  for (int i = 0; i < m.n_nodes(); ++i) {
    const auto& org = res.map.node_origin[i];
    if (org.coarse_node >= 0 && !coarse.node_markers[org.coarse_node].empty())
      CHECK(vec_norm(m.nodes[i] - coarse.nodes[org.coarse_node]) <= 1e-10);
  }

  // every fine arc node lands on the circle
  for (int i = 0; i < m.n_nodes(); ++i)
    if (has_marker(m, i, "top") || has_marker(m, i, "right"))
      CHECK(std::abs(vec_norm(m.nodes[i]) - 1.25) <= 1e-9);

  // slippery walls preserved
  for (int i = 0; i < m.n_nodes(); ++i) {
    if (has_marker(m, i, "left")) CHECK(std::abs(m.nodes[i][0]) <= 1e-10);
    if (has_marker(m, i, "bottom")) CHECK(std::abs(m.nodes[i][1]) <= 1e-10);
  }

  const double exact = std::numbers::pi * 1.25 * 1.25 / 4.0;
  CHECK(std::abs(total_volume(m) - exact) <
        std::abs(total_volume(coarse) - exact));
}

TEST_CASE("long projections are flagged") {
  std::array<Marker, 4> sides = {Marker{"bottom", MarkerKind::Slippery},
                                 Marker{"right", MarkerKind::Moving},
                                 Marker{"top", MarkerKind::Moving},
                                 Marker{"left", MarkerKind::Slippery}};
  auto coarse = rect_grid(2, 2, Box{}, sides);
  auto circle = ImplicitShape::sphere(2, {0, 0, 0}, 3.0);
  BoundaryMotion motion;
  motion.rules["right"] = {MarkerKind::Moving, circle, ProjectionKind::Radial};
  motion.rules["top"] = {MarkerKind::Moving, circle, ProjectionKind::Radial};
  auto plan = plan_refinement(coarse, 3, motion);
  CHECK(!plan.warnings.empty());
}

TEST_CASE("plan rejects bad input") {
  auto coarse = quarter_grid(2);
  CHECK_THROWS_AS(plan_refinement(coarse, 1, quarter_motion()),
                  std::invalid_argument);
  Mesh folded = coarse;
  folded.nodes[4] = {-2.0, -2.0, 0};  // fold an element
  CHECK_THROWS_AS(plan_refinement(folded, 3, quarter_motion()),
                  std::invalid_argument);
}
