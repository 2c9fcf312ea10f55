#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <string>

#include "defmesh/pipeline.hpp"
#include "doctest.h"

using namespace defmesh;

namespace {

std::string minimal_config(const std::string& extra = "") {
  return R"({
    "schema_version": 1,
    "grid": {
      "dim": 2,
      "resolution": [4, 4],
      "markers": {"bottom": "fixed", "right": "fixed",
                  "top": "fixed", "left": "fixed"}
    })" +
         extra + "\n}";
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  auto cfg = parse_config(minimal_config());
  CHECK(cfg.scenario == "unnamed");
  CHECK(cfg.grid.dim == 2);
  CHECK(cfg.grid.resolution[0] == 4);
  CHECK(cfg.monitor.source == "uniform");
  CHECK(cfg.monitor.mode == "fixed-domain");  // no moving marker
  CHECK(cfg.run.dt == 0.05);
  CHECK(cfg.run.dt_refine == 0.1);
  CHECK(cfg.run.T == 1.0);
  CHECK(cfg.run.cg_tol == 1e-10);
  CHECK(cfg.run.fold_action == "retry-halve-dt");
  CHECK(cfg.order == 3);
  CHECK_FALSE(cfg.has_target);
}

TEST_CASE("unknown keys are rejected with their path") {
  const std::string bad = R"({
    "schema_version": 1,
    "montior": {},
    "grid": {"dim": 2, "resolution": [2, 2],
             "markers": {"bottom": "fixed", "right": "fixed",
                         "top": "fixed", "left": "fixed"}}
  })";
  try {
    parse_config(bad);
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("montior") != std::string::npos);
  }

  CHECK_THROWS_AS(
      parse_config(minimal_config(R"(, "run": {"dtt": 0.1})")),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse_config(minimal_config(R"(, "grid2": 1)")),
      std::invalid_argument);
}

TEST_CASE("value validation") {
  CHECK_THROWS_AS(parse_config(R"({"schema_version": 2})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(minimal_config(R"(, "order": 5)")),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_config(minimal_config(R"(, "run": {"dt": -1})")),
                  std::invalid_argument);
  // missing a side
  CHECK_THROWS_AS(parse_config(R"({
    "schema_version": 1,
    "grid": {"dim": 2, "resolution": [2, 2],
             "markers": {"bottom": "fixed", "right": "fixed",
                         "top": "fixed"}}
  })"),
                  std::invalid_argument);
  // moving marker without a target
  CHECK_THROWS_AS(parse_config(R"({
    "schema_version": 1,
    "grid": {"dim": 2, "resolution": [2, 2],
             "markers": {"bottom": "fixed", "right": "moving",
                         "top": "fixed", "left": "fixed"}}
  })"),
                  std::invalid_argument);
}

TEST_CASE("committed scenario configs load and build") {
  for (const char* name :
       {"quarter_disk", "quarter_ball", "ellipse_adapt", "square_noop"}) {
    auto cfg = load_config(std::string(GOLDEN_DIR) + "/../../configs/" + name +
                           ".json");
    auto m = build_initial_mesh(cfg);
    CHECK(m.n_nodes() > 0);
    auto motion = build_motion(cfg);
    auto bcs = build_node_bcs(motion, m);
    CHECK(static_cast<int>(bcs.size()) == m.n_nodes());
    MonitorSpec monitor = build_monitor(cfg);
    monitor.initialize(m);
    CHECK(monitor.initial_volume() == doctest::Approx(1.0));
  }
}

TEST_CASE("effective config round trip") {
  auto cfg = load_config(std::string(GOLDEN_DIR) + "/../../configs/quarter_disk.json");
  const std::string dumped = dump_config(cfg);
  auto cfg2 = parse_config(dumped);
  CHECK(dump_config(cfg2) == dumped);
  CHECK(cfg2.run.dt == cfg.run.dt);
  CHECK(cfg2.target.radius == 1.25);
  CHECK(cfg2.monitor.mode == "moving-domain");
}

TEST_CASE("seed_output_dir prefixes requested outputs only") {
  auto cfg = parse_config(minimal_config(
      R"(, "output": {"mesh_json": "m.json", "svg": "m.svg"})"));
  seed_output_dir(cfg, "/tmp/run1");
  CHECK(cfg.output.mesh_json == "/tmp/run1/m.json");
  CHECK(cfg.output.svg == "/tmp/run1/m.svg");
  CHECK(cfg.output.msh.empty());
}

TEST_CASE("grayscale monitors are rejected in 3D") {
  auto cfg = parse_config(R"({
    "schema_version": 1,
    "grid": {"dim": 3, "resolution": [2, 2, 2],
             "markers": {"zmin": "fixed", "zmax": "fixed", "ymin": "fixed",
                         "xmax": "fixed", "ymax": "fixed", "xmin": "fixed"}},
    "monitor": {"source": "grayscale",
                "grayscale": {"path": "missing.pgm"}}
  })");
  CHECK_THROWS_AS(build_monitor(cfg), std::invalid_argument);
}
