#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "defmesh/deform.hpp"
#include "doctest.h"

using namespace defmesh;

namespace {

Mesh quarter_grid(int n) {
  // unit square expanding into the quarter disk of radius 1.25
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

bool has_marker(const Mesh& m, int node, const std::string& name) {
  for (int id : m.node_markers[node])
    if (m.markers[id].name == name) return true;
  return false;
}

}  // namespace

TEST_CASE("uniform monitor on a fixed domain is stationary") {
  std::array<Marker, 4> sides = {Marker{"b", MarkerKind::Fixed},
                                 Marker{"r", MarkerKind::Fixed},
                                 Marker{"t", MarkerKind::Fixed},
                                 Marker{"l", MarkerKind::Fixed}};
  auto m0 = rect_grid(4, 4, Box{}, sides);
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::FixedDomain);
  RunConfig cfg;
  cfg.dt = 0.25;
  auto res = run_algorithm1(m0, monitor, BoundaryMotion{}, cfg);
  REQUIRE(res.history.size() == 5);
  for (int i = 0; i < m0.n_nodes(); ++i)
    CHECK(vec_norm(res.mesh.nodes[i] - m0.nodes[i]) <= 1e-12);
  for (const auto& row : res.history) {
    CHECK(row.volume == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(row.min_jacobian > 0.0);
  }
}

TEST_CASE("quarter disk expansion lands moving nodes on the circle") {
  auto m0 = quarter_grid(4);
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::MovingDomain);
  RunConfig cfg;
  cfg.dt = 0.05;
  auto res = run_algorithm1(m0, monitor, quarter_motion(), cfg);
  const Mesh& m = res.mesh;

  REQUIRE(res.history.size() == 21);
  for (const auto& row : res.history) CHECK(row.min_jacobian > 0.0);

  for (int i = 0; i < m.n_nodes(); ++i) {
    if (has_marker(m, i, "top") || has_marker(m, i, "right"))
      CHECK(std::abs(vec_norm(m.nodes[i]) - 1.25) <= 1e-9);
    if (has_marker(m, i, "left")) CHECK(std::abs(m.nodes[i][0]) <= 1e-10);
    if (has_marker(m, i, "bottom")) CHECK(std::abs(m.nodes[i][1]) <= 1e-10);
  }

  // straight-line boundary trajectories: x(T) = x0 + v exactly
  auto bcs = build_node_bcs(quarter_motion(), m0);
  for (int i = 0; i < m0.n_nodes(); ++i) {
    if (!(has_marker(m0, i, "top") || has_marker(m0, i, "right"))) continue;
    const Vec3 expect = m0.nodes[i] + bcs[i].velocity;
    CHECK(vec_norm(m.nodes[i] - expect) <= 1e-9);
  }

  const double exact = std::numbers::pi * 1.25 * 1.25 / 4.0;
  CHECK(res.history.back().volume ==
        doctest::Approx(exact).epsilon(0.03));
  CHECK(res.history.back().volume > res.history.front().volume);
}

TEST_CASE("runs are deterministic") {
  auto m0 = quarter_grid(3);
  RunConfig cfg;
  cfg.dt = 0.1;
  MonitorSpec a(MonitorSource::uniform(), VolumeMode::MovingDomain);
  MonitorSpec b(MonitorSource::uniform(), VolumeMode::MovingDomain);
  auto r1 = run_algorithm1(m0, a, quarter_motion(), cfg);
  auto r2 = run_algorithm1(m0, b, quarter_motion(), cfg);
  for (int i = 0; i < m0.n_nodes(); ++i) {
    CHECK(r1.mesh.nodes[i][0] == r2.mesh.nodes[i][0]);
    CHECK(r1.mesh.nodes[i][1] == r2.mesh.nodes[i][1]);
  }
  REQUIRE(r1.history.size() == r2.history.size());
  for (std::size_t k = 0; k < r1.history.size(); ++k)
    CHECK(r1.history[k].volume == r2.history[k].volume);
}

TEST_CASE("interface monitor reduces the equidistribution residual") {
  std::array<Marker, 4> sides = {Marker{"b", MarkerKind::Slippery},
                                 Marker{"r", MarkerKind::Slippery},
                                 Marker{"t", MarkerKind::Slippery},
                                 Marker{"l", MarkerKind::Slippery}};
  auto m0 = rect_grid(8, 8, Box{}, sides);
  auto src = MonitorSource::interface(
      [](const Vec3& x) {
        const double dx = (x[0] - 0.5) / 0.3, dy = (x[1] - 0.5) / 0.2;
        return dx * dx + dy * dy - 1.0;
      },
      1.0, 0.4, 0.4);
  MonitorSpec monitor(src, VolumeMode::FixedDomain);
  RunConfig cfg;
  cfg.dt = 0.1;
  auto res = run_algorithm1(m0, monitor, BoundaryMotion{}, cfg);
  CHECK(res.history.back().min_jacobian > 0.0);
  CHECK(res.history.back().equidistribution_residual <
        res.history.front().equidistribution_residual);
  // domain is fixed: volume preserved
  CHECK(res.history.back().volume == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("history csv round trip") {
  namespace fs = std::filesystem;
  auto m0 = quarter_grid(3);
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::MovingDomain);
  RunConfig cfg;
  cfg.dt = 0.25;
  auto res = run_algorithm1(m0, monitor, quarter_motion(), cfg);
  auto path = fs::temp_directory_path() / "history.csv";
  write_history_csv(path.string(), res.history);
  std::ifstream is(path);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line ==
        "t,min_jacobian,volume,equidistribution_residual,cg_iterations,"
        "cg_relative_residual");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == static_cast<int>(res.history.size()));
  fs::remove(path);
}

TEST_CASE("invalid run configuration is rejected") {
  auto m0 = quarter_grid(2);
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::MovingDomain);
  RunConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(run_algorithm1(m0, monitor, quarter_motion(), cfg),
                  std::invalid_argument);

  cfg.dt = 0.5;
  auto res = run_algorithm1(m0, monitor, quarter_motion(), cfg);
  // the monitor is consumed by the first run
  CHECK_THROWS_AS(run_algorithm1(m0, monitor, quarter_motion(), cfg),
                  std::invalid_argument);
}
