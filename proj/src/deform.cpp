#include "defmesh/deform.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace defmesh {

std::vector<double> center_jacobians(const Mesh& m) {
  const Vec3 c = {0.5, 0.5, m.dim == 3 ? 0.5 : 0.0};
  std::vector<double> det(m.n_elements());
  for (int e = 0; e < m.n_elements(); ++e) det[e] = element_jacobian(m, e, c);
  return det;
}

double equidistribution_residual(const Mesh& m, const std::vector<double>& det0,
                                 const MonitorSpec& monitor) {
  if (static_cast<int>(det0.size()) != m.n_elements())
    throw std::invalid_argument("equidistribution_residual: size mismatch");
  const Vec3 c = {0.5, 0.5, m.dim == 3 ? 0.5 : 0.0};
  const int nc = m.nodes_per_elem();
  double N[8];
  shape_values(m.dim, c, N);
  double res = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) {
    Vec3 x = {0, 0, 0};
    for (int a = 0; a < nc; ++a) x = x + N[a] * m.nodes[m.elements[e][a]];
    const double ratio = element_jacobian(m, e, c) / det0[e];
    res = std::max(res, std::abs(ratio / monitor.target_f(x) - 1.0));
  }
  return res;
}

double boundary_flux(const Mesh& m, const std::vector<NodeBc>& bcs) {
  double flux = 0.0;
  for (const auto& f : m.facets) flux += facet_flux(m, f, bcs);
  return flux;
}

DeformResult run_algorithm1(const Mesh& m0, MonitorSpec& monitor,
                            const BoundaryMotion& motion,
                            const RunConfig& cfg) {
  return run_with_bcs(m0, monitor, build_node_bcs(motion, m0), cfg);
}

DeformResult run_with_bcs(const Mesh& m0, MonitorSpec& monitor,
                          const std::vector<NodeBc>& bcs,
                          const RunConfig& cfg) {
  if (cfg.dt <= 0 || cfg.T <= 0)
    throw std::invalid_argument("run: dt and T must be positive");
  if (monitor.initialized())
    throw std::invalid_argument("run: monitor already initialized");
  if (static_cast<int>(bcs.size()) != m0.n_nodes())
    throw std::invalid_argument("run: boundary condition table size mismatch");

  DeformResult out;
  Mesh& m = out.mesh;
  m = m0;
  monitor.initialize(m);
  const auto det0 = center_jacobians(m);
  const int nn = m.n_nodes();

  monitor.prepare_step(m, 0.0, boundary_flux(m, bcs));
  out.history.push_back({0.0, min_jacobian(m), total_volume(m),
                         equidistribution_residual(m, det0, monitor), 0, 0.0});

  double t = 0.0;
  double cur_dt = cfg.dt;
  while (t < cfg.T - 1e-12) {
    double dt_step = std::min(cur_dt, cfg.T - t);
    int retries = 0;
    SolveReport rep;
    for (;;) {
      const RhsField g = monitor.eval_g_field(m, t);
      ConstraintSet cset;
      std::vector<double> fval(nn);
      for (int i = 0; i < nn; ++i) {
        fval[i] = monitor.eval_f(m.nodes[i], t);
        if (!bcs[i].any()) continue;
        for (int d = 0; d < m.dim; ++d)
          if (bcs[i].fixed_comp[d])
            cset.add(i, d, bcs[i].velocity[d] / fval[i]);
      }
      const NodalField u = solve_velocity(m, g, cset, cfg.cg_tol, &rep);

      const std::vector<Vec3> saved = m.nodes;
      for (int i = 0; i < nn; ++i)
        m.nodes[i] = m.nodes[i] + (dt_step * fval[i]) * u.values[i];
      if (min_jacobian(m) > 0.0) break;

      m.nodes = saved;
      if (cfg.fold_action == FoldAction::Halt ||
          retries >= cfg.max_fold_retries) {
        std::ostringstream os;
        os << "run: mesh folded at t = " << t << " with dt = " << dt_step;
        throw std::runtime_error(os.str());
      }
      cur_dt *= 0.5;
      dt_step = std::min(cur_dt, cfg.T - t);
      ++retries;
    }

    t += dt_step;
    monitor.prepare_step(m, t, boundary_flux(m, bcs));
    out.history.push_back({t, min_jacobian(m), total_volume(m),
                           equidistribution_residual(m, det0, monitor),
                           rep.cg.iterations, rep.cg.relative_residual});
  }
  return out;
}

void write_history_csv(const std::string& path,
                       const std::vector<HistoryRow>& rows) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("history: cannot open " + path);
  os << "t,min_jacobian,volume,equidistribution_residual,cg_iterations,"
        "cg_relative_residual\n";
  os.precision(17);
  for (const auto& r : rows)
    os << r.t << ',' << r.min_jacobian << ',' << r.volume << ','
       << r.equidistribution_residual << ',' << r.cg_iterations << ','
       << r.cg_relative_residual << '\n';
}

}  // namespace defmesh
