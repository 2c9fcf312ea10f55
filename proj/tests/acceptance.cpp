// Acceptance suite: one pass/fail line per criterion, exit code = number
// of failed criteria.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "defmesh/deform.hpp"
#include "defmesh/hoe.hpp"
#include "defmesh/refine.hpp"

using namespace defmesh;

namespace {

// ---- tiny check framework ----------------------------------------------

struct Criterion {
  std::string failure;  // empty = pass so far

  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
  void expect_near(double got, double want, double tol,
                   const std::string& what) {
    if (std::abs(got - want) > tol && failure.empty()) {
      std::ostringstream os;
      os << what << ": got " << got << ", want " << want << " +- " << tol;
      failure = os.str();
    }
  }
};

std::vector<double> g_cg_residuals;  // every CG solve seen in A1..A8

void collect(const std::vector<HistoryRow>& rows) {
  for (const auto& r : rows) g_cg_residuals.push_back(r.cg_relative_residual);
}

// ---- shared scenario builders ------------------------------------------

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

Mesh ball_grid(int n) {
  std::array<Marker, 6> faces = {Marker{"zmin", MarkerKind::Slippery},
                                 Marker{"zmax", MarkerKind::Moving},
                                 Marker{"ymin", MarkerKind::Slippery},
                                 Marker{"xmax", MarkerKind::Moving},
                                 Marker{"ymax", MarkerKind::Moving},
                                 Marker{"xmin", MarkerKind::Slippery}};
  return box_grid(n, n, n, Box{}, faces);
}

BoundaryMotion ball_motion() {
  auto ball = ImplicitShape::sphere(3, {0, 0, 0}, 1.25);
  BoundaryMotion motion;
  for (const char* f : {"zmax", "xmax", "ymax"})
    motion.rules[f] = {MarkerKind::Moving, ball, ProjectionKind::Radial};
  return motion;
}

bool has_marker(const Mesh& m, int node, const std::string& name) {
  for (int id : m.node_markers[node])
    if (m.markers[id].name == name) return true;
  return false;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is.good()) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

// results shared between criteria
std::optional<DeformResult> g_a1;
std::optional<DeformResult> g_a2;
std::optional<RefineResult> g_a6;
std::optional<HighOrderMesh> g_hoe;

// ---- criteria -----------------------------------------------------------

// A1: quarter-disk morph, 4x4, dt=0.05.
void a1(Criterion& c) {
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::MovingDomain);
  RunConfig cfg;
  cfg.dt = 0.05;
  const Mesh m0 = quarter_grid(4);
  g_a1 = run_algorithm1(m0, monitor, quarter_motion(), cfg);
  const Mesh& m = g_a1->mesh;
  collect(g_a1->history);

  c.expect(g_a1->history.size() == 21, "expected 20 accepted steps");
  for (const auto& row : g_a1->history)
    c.expect(row.min_jacobian > 0.0, "min J <= 0 during the run");

  for (int i = 0; i < m.n_nodes(); ++i) {
    if (has_marker(m, i, "top") || has_marker(m, i, "right"))
      c.expect_near(vec_norm(m.nodes[i]), 1.25, 1e-9, "arc node radius");
    if (has_marker(m, i, "left"))
      c.expect(std::abs(m.nodes[i][0]) <= 1e-10, "left wall node left x=0");
    if (has_marker(m, i, "bottom"))
      c.expect(std::abs(m.nodes[i][1]) <= 1e-10, "bottom wall node left y=0");
  }

  const double exact = std::numbers::pi * 1.25 * 1.25 / 4.0;
  const double vol = g_a1->history.back().volume;
  c.expect(std::abs(vol - exact) <= 0.03 * exact,
           "final volume off the quarter-disk area by > 3%");
}

// A2: quarter-semi-ball morph, 4x4x4, three slippery back faces.
void a2(Criterion& c) {
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::MovingDomain);
  RunConfig cfg;
  cfg.dt = 0.05;
  g_a2 = run_algorithm1(ball_grid(4), monitor, ball_motion(), cfg);
  collect(g_a2->history);

  for (const auto& row : g_a2->history)
    c.expect(row.min_jacobian > 0.0, "min J <= 0 during the run");

  const Mesh& m = g_a2->mesh;
  for (int i = 0; i < m.n_nodes(); ++i) {
    if (has_marker(m, i, "zmax") || has_marker(m, i, "xmax") ||
        has_marker(m, i, "ymax"))
      c.expect_near(vec_norm(m.nodes[i]), 1.25, 1e-9, "sphere node radius");
  }
}

// A3: LSFEM exactness and convergence (manufactured solutions).
void a3(Criterion& c) {
  auto square = [](int n) {
    std::array<Marker, 4> sides = {Marker{"b", MarkerKind::Fixed},
                                   Marker{"r", MarkerKind::Fixed},
                                   Marker{"t", MarkerKind::Fixed},
                                   Marker{"l", MarkerKind::Fixed}};
    return rect_grid(n, n, Box{}, sides);
  };
  auto dirichlet = [](const Mesh& m,
                      const std::function<Vec3(const Vec3&)>& u) {
    ConstraintSet cs;
    for (int i = 0; i < m.n_nodes(); ++i) {
      if (m.node_markers[i].empty()) continue;
      const Vec3 v = u(m.nodes[i]);
      for (int d = 0; d < m.dim; ++d) cs.add(i, d, v[d]);
    }
    return cs;
  };

  // exactness: u = (2x, 2y), div u = 4, curl u = 0
  {
    auto exact = [](const Vec3& x) { return Vec3{2 * x[0], 2 * x[1], 0}; };
    auto m = square(8);
    RhsField g(m.n_nodes(), 4.0);
    SolveReport rep;
    auto u = solve_velocity(m, g, dirichlet(m, exact), 1e-12, &rep);
    g_cg_residuals.push_back(rep.cg.relative_residual);
    double err = 0.0;
    for (int i = 0; i < m.n_nodes(); ++i) {
      const Vec3 e = exact(m.nodes[i]);
      for (int d = 0; d < 2; ++d)
        err = std::max(err, std::abs(u.values[i][d] - e[d]));
    }
    c.expect(err <= 1e-8, "linear manufactured solution not exact");
  }

  // convergence: u = grad(x^3 + y^3), observed L2 order >= 1.5
  auto exact = [](const Vec3& x) {
    return Vec3{3 * x[0] * x[0], 3 * x[1] * x[1], 0};
  };
  std::vector<double> errs;
  for (int n : {4, 8, 16}) {
    auto m = square(n);
    RhsField g(m.n_nodes());
    for (int i = 0; i < m.n_nodes(); ++i)
      g[i] = 6 * m.nodes[i][0] + 6 * m.nodes[i][1];
    SolveReport rep;
    auto u = solve_velocity(m, g, dirichlet(m, exact), 1e-12, &rep);
    g_cg_residuals.push_back(rep.cg.relative_residual);

    constexpr double ga = 0.21132486540518713, gb = 0.7886751345948129;
    double sum = 0.0;
    double N[8];
    for (int e = 0; e < m.n_elements(); ++e)
      for (double a : {ga, gb})
        for (double b : {ga, gb}) {
          const Vec3 rp{a, b, 0};
          shape_values(2, rp, N);
          Vec3 x{0, 0, 0}, v{0, 0, 0};
          for (int k = 0; k < 4; ++k) {
            const int id = m.elements[e][k];
            x = x + N[k] * m.nodes[id];
            v = v + N[k] * u.values[id];
          }
          const Vec3 ue = exact(x);
          double d2 = 0.0;
          for (int d = 0; d < 2; ++d) d2 += (v[d] - ue[d]) * (v[d] - ue[d]);
          sum += element_jacobian(m, e, rp) / 4.0 * d2;
        }
    errs.push_back(std::sqrt(sum));
  }
  c.expect(std::log2(errs[0] / errs[1]) >= 1.5,
           "L2 order below 1.5 on 4 -> 8");
  c.expect(std::log2(errs[1] / errs[2]) >= 1.5,
           "L2 order below 1.5 on 8 -> 16");
}

// A4: stationarity under a uniform monitor with zero boundary motion.
void a4(Criterion& c) {
  std::array<Marker, 4> sides = {Marker{"b", MarkerKind::Fixed},
                                 Marker{"r", MarkerKind::Fixed},
                                 Marker{"t", MarkerKind::Fixed},
                                 Marker{"l", MarkerKind::Fixed}};
  auto m0 = rect_grid(6, 6, Box{}, sides);
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::FixedDomain);
  RunConfig cfg;
  cfg.dt = 0.1;
  auto res = run_algorithm1(m0, monitor, BoundaryMotion{}, cfg);
  collect(res.history);
  double disp = 0.0;
  for (int i = 0; i < m0.n_nodes(); ++i)
    disp = std::max(disp, vec_norm(res.mesh.nodes[i] - m0.nodes[i]));
  c.expect(disp <= 1e-9, "mesh moved under a stationary problem");
}

// A5: fixed-domain adaptation to an ellipse-interface monitor, with the
// compatibility integral checked on the quadrature at every step.
void a5(Criterion& c) {
  std::array<Marker, 4> sides = {Marker{"b", MarkerKind::Slippery},
                                 Marker{"r", MarkerKind::Slippery},
                                 Marker{"t", MarkerKind::Slippery},
                                 Marker{"l", MarkerKind::Slippery}};
  Mesh m = rect_grid(16, 16, Box{}, sides);
  auto src = MonitorSource::interface(
      [](const Vec3& x) {
        const double dx = (x[0] - 0.5) / 0.3, dy = (x[1] - 0.5) / 0.2;
        return dx * dx + dy * dy - 1.0;
      },
      1.0, 0.4, 0.4);
  MonitorSpec monitor(src, VolumeMode::FixedDomain);
  monitor.initialize(m);
  const auto det0 = center_jacobians(m);
  const auto bcs = build_node_bcs(BoundaryMotion{}, m);
  const double dt = 0.05;

  monitor.prepare_step(m, 0.0, 0.0);
  c.expect_near(monitor.reciprocal_integral(m, 0.0), monitor.initial_volume(),
                1e-8, "compatibility integral at t=0");
  const double res0 = equidistribution_residual(m, det0, monitor);

  for (int step = 0; step < 20; ++step) {
    const double t = step * dt;
    const RhsField g = monitor.eval_g_field(m, t);
    ConstraintSet cs;
    for (int i = 0; i < m.n_nodes(); ++i) {
      if (!bcs[i].any()) continue;
      const double f = monitor.eval_f(m.nodes[i], t);
      for (int d = 0; d < m.dim; ++d)
        if (bcs[i].fixed_comp[d]) cs.add(i, d, bcs[i].velocity[d] / f);
    }
    SolveReport rep;
    const NodalField u = solve_velocity(m, g, cs, 1e-10, &rep);
    g_cg_residuals.push_back(rep.cg.relative_residual);
    for (int i = 0; i < m.n_nodes(); ++i)
      m.nodes[i] = m.nodes[i] + dt * monitor.eval_f(m.nodes[i], t) *
                                     u.values[i];
    c.expect(min_jacobian(m) > 0.0, "min J <= 0 during the run");
    monitor.prepare_step(m, t + dt, 0.0);
    c.expect_near(monitor.reciprocal_integral(m, t + dt),
                  monitor.initial_volume(), 1e-8,
                  "compatibility integral mid-run");
  }
  const double res1 = equidistribution_residual(m, det0, monitor);
  c.expect(res1 < res0, "equidistribution residual did not decrease");
}

// A6: boundary-conforming refinement of the A1 output, p=3.
void a6(Criterion& c) {
  c.expect(g_a1.has_value(), "A1 prerequisite failed");
  if (!g_a1) return;
  RunConfig cfg;
  cfg.dt = 0.1;
  g_a6 = refine_and_conform(g_a1->mesh, 3, quarter_motion(), cfg);
  collect(g_a6->history);
  const Mesh& fine = g_a6->mesh;

  c.expect(fine.n_nodes() == 169, "expected 169 fine nodes");
  for (const auto& x : fine.nodes)
    for (int d = 0; d < 2; ++d)
      c.expect(std::isfinite(x[d]), "non-finite node coordinate");

  // inherited coarse boundary nodes stay put
  for (int i = 0; i < fine.n_nodes(); ++i) {
    const NodeOrigin& org = g_a6->map.node_origin[i];
    if (org.coarse_node < 0) continue;
    if (g_a1->mesh.node_markers[org.coarse_node].empty()) continue;
    c.expect(vec_norm(fine.nodes[i] - g_a1->mesh.nodes[org.coarse_node]) <=
                 1e-10,
             "old boundary node displaced");
  }

  for (int i = 0; i < fine.n_nodes(); ++i)
    if (has_marker(fine, i, "top") || has_marker(fine, i, "right"))
      c.expect_near(vec_norm(fine.nodes[i]), 1.25, 1e-9,
                    "fine arc node radius");

  c.expect(min_jacobian(fine) > 0.0, "fine mesh min J <= 0");
}

// A7: geometric gain of the order-3 elements over the straight edges.
void a7(Criterion& c) {
  c.expect(g_a1.has_value() && g_a6.has_value(), "A1/A6 prerequisite failed");
  if (!g_a1 || !g_a6) return;
  g_hoe = build_hoe(g_a1->mesh, g_a6->mesh, g_a6->map);

  auto circle = ImplicitShape::sphere(2, {0, 0, 0}, 1.25);

  // the measured straight-edge deviation must match the chord sagitta
  // r (1 - cos(dtheta/2)) predicted from the actual arc-node angles
  double measured = 0.0, predicted = 0.0;
  const Mesh& m = g_a1->mesh;
  for (const char* name : {"top", "right"})
    measured = std::max(measured, edge_deviation(m, name, *circle, 65));
  for (const auto& f : m.facets) {
    const std::string& name = m.markers[f.marker].name;
    if (name != "top" && name != "right") continue;
    const auto& corners = quad_edge_corners()[f.local_facet];
    const Vec3 a = m.nodes[m.elements[f.element][corners[0]]];
    const Vec3 b = m.nodes[m.elements[f.element][corners[1]]];
    const double dtheta =
        std::abs(std::atan2(a[1], a[0]) - std::atan2(b[1], b[0]));
    predicted = std::max(predicted, 1.25 * (1.0 - std::cos(dtheta / 2.0)));
  }
  c.expect(std::abs(measured - predicted) <= 0.05 * predicted,
           "linear deviation off the analytic sagitta by > 5%");

  // reference chord: one straight edge subtending 22.5 degrees
  {
    const double r = 1.25, mid = std::numbers::pi / 4,
                 half = std::numbers::pi / 16;
    auto pt = [&](double ang) {
      return Vec3{r * std::cos(ang), r * std::sin(ang), 0};
    };
    Mesh chord;
    chord.dim = 2;
    chord.nodes = {pt(mid - half), pt(mid + half), {0.2, 0.2, 0},
                   {0.1, 0.4, 0}};
    chord.elements.push_back({0, 1, 3, 2, -1, -1, -1, -1});
    chord.markers.push_back({"arc", MarkerKind::Moving});
    chord.facets.push_back({0, 0, 0});
    chord.rebuild_node_markers();
    const double sagitta = r * (1.0 - std::cos(half));  // ~0.0240
    c.expect(std::abs(edge_deviation(chord, "arc", *circle, 65) - sagitta) <=
                 0.05 * sagitta,
             "22.5-degree chord sagitta off by > 5%");
  }

  for (const char* name : {"top", "right"}) {
    const double lin = edge_deviation(m, name, *circle, 65);
    const double hi = edge_deviation(*g_hoe, name, *circle, 65);
    c.expect(hi <= lin / 10.0,
             "order-3 boundary not 10x closer than the straight edges");
  }
}

// A8: order-3 Jacobian positivity on the interior sampling lattice, 2D + 3D.
void a8(Criterion& c) {
  c.expect(g_hoe.has_value(), "A7 prerequisite failed");
  if (g_hoe) c.expect(hoe_min_jacobian(*g_hoe) > 0.0, "2D order-3 J <= 0");

  c.expect(g_a2.has_value(), "A2 prerequisite failed");
  if (!g_a2) return;
  RunConfig cfg;
  cfg.dt = 0.1;
  auto ref = refine_and_conform(g_a2->mesh, 3, ball_motion(), cfg);
  collect(ref.history);
  auto h3 = build_hoe(g_a2->mesh, ref.mesh, ref.map);
  c.expect(hoe_min_jacobian(h3) > 0.0, "3D order-3 J <= 0");
}

// A9: byte-stable exports and invertible node permutations.
void a9(Criterion& c) {
  namespace fs = std::filesystem;
  for (int dim : {2, 3}) {
    for (int p : {1, 3}) {
      for (const auto& perm : {lattice_to_msh_permutation(dim, p),
                               lattice_to_vtk_permutation(dim, p)}) {
        const int n = static_cast<int>(perm.size());
        std::vector<int> inv(n, -1);
        for (int i = 0; i < n; ++i) {
          c.expect(perm[i] >= 0 && perm[i] < n && inv[perm[i]] < 0,
                   "permutation is not a bijection");
          if (perm[i] >= 0 && perm[i] < n) inv[perm[i]] = i;
        }
        for (int i = 0; i < n; ++i)
          c.expect(inv[perm[i]] == i && perm[inv[i]] == i,
                   "permutation round trip is not the identity");
      }
    }
  }

  // regenerate the golden meshes and compare bytes
  std::array<Marker, 4> sides = {Marker{"b", MarkerKind::Fixed},
                                 Marker{"r", MarkerKind::Fixed},
                                 Marker{"t", MarkerKind::Fixed},
                                 Marker{"l", MarkerKind::Fixed}};
  auto square = rect_grid(1, 1, Box{}, sides);
  auto map2 = subdivide(square, 3);
  auto quad = build_hoe(square, map2.fine, map2);

  std::array<Marker, 6> faces;
  const char* names[6] = {"zmin", "zmax", "ymin", "xmax", "ymax", "xmin"};
  for (int i = 0; i < 6; ++i) faces[i] = Marker{names[i], MarkerKind::Fixed};
  auto cube = box_grid(1, 1, 1, Box{}, faces);
  auto map3 = subdivide(cube, 3);
  auto hex = build_hoe(cube, map3.fine, map3);

  const auto tmp = fs::temp_directory_path();
  const struct {
    const char* golden;
    std::function<void(const std::string&)> write;
  } cases[4] = {
      {"quad16.msh", [&](const std::string& p) { export_msh(quad, p); }},
      {"quad16.vtk", [&](const std::string& p) { export_vtk(quad, p); }},
      {"hex64.msh", [&](const std::string& p) { export_msh(hex, p); }},
      {"hex64.vtk", [&](const std::string& p) { export_vtk(hex, p); }},
  };
  for (const auto& cs : cases) {
    const std::string out = (tmp / (std::string("acc_") + cs.golden)).string();
    cs.write(out);
    // write twice: stability across runs
    const std::string first = slurp(out);
    cs.write(out);
    c.expect(slurp(out) == first, "export not byte-stable across runs");
    c.expect(first == slurp(std::string(GOLDEN_DIR) + "/" + cs.golden),
             std::string("export differs from golden ") + cs.golden);
    fs::remove(out);
  }
}

// A10: every CG solve above converged to 1e-10 (recomputed residual).
void a10(Criterion& c) {
  c.expect(!g_cg_residuals.empty(), "no CG solves recorded");
  double worst = 0.0;
  for (double r : g_cg_residuals) worst = std::max(worst, r);
  std::ostringstream os;
  os << "worst recomputed relative residual " << worst << " over "
     << g_cg_residuals.size() << " records";
  c.expect(worst <= 1e-10, os.str());
}

}  // namespace

int main() {
  const struct {
    const char* id;
    const char* label;
    void (*fn)(Criterion&);
  } criteria[] = {
      {"A1", "quarter-disk morph", a1},
      {"A2", "quarter-semi-ball morph", a2},
      {"A3", "LSFEM exactness and convergence", a3},
      {"A4", "stationarity", a4},
      {"A5", "fixed-domain interface adaptation", a5},
      {"A6", "refinement conformity", a6},
      {"A7", "high-order geometric gain", a7},
      {"A8", "high-order Jacobian validity", a8},
      {"A9", "export integrity", a9},
      {"A10", "solver contract", a10},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    Criterion c;
    try {
      cr.fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    if (c.failure.empty()) {
      std::printf("%s %s: PASS\n", cr.id, cr.label);
    } else {
      std::printf("%s %s: FAIL (%s)\n", cr.id, cr.label, c.failure.c_str());
      ++failures;
    }
  }
  return failures;
}
