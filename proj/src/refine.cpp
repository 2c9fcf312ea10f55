#include "defmesh/refine.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace defmesh {

namespace {

double min_edge_length(const Mesh& m, int e) {
  static const int quad_edges[4][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  static const int hex_edges[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                       {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                       {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  const auto& el = m.elements[e];
  double len = std::numeric_limits<double>::max();
  const int n = m.dim == 2 ? 4 : 12;
  for (int k = 0; k < n; ++k) {
    const int a = m.dim == 2 ? quad_edges[k][0] : hex_edges[k][0];
    const int b = m.dim == 2 ? quad_edges[k][1] : hex_edges[k][1];
    len = std::min(len, vec_norm(m.nodes[el[a]] - m.nodes[el[b]]));
  }
  return len;
}

}  // namespace

RefinePlan plan_refinement(const Mesh& coarse, int p,
                           const BoundaryMotion& target, double dt_refine) {
  if (p < 2) throw std::invalid_argument("plan_refinement: order must be >= 2");
  if (min_jacobian(coarse) <= 0.0)
    throw std::invalid_argument("plan_refinement: coarse mesh is folded");

  RefinePlan plan;
  plan.dt_refine = dt_refine;
  plan.subdivision = subdivide(coarse, p);
  const Mesh& fine = plan.subdivision.fine;
  const int nn = fine.n_nodes();

  plan.bcs = build_node_bcs(target, fine);
  plan.node_classes.assign(nn, NodeClass::Interior);

  for (int i = 0; i < nn; ++i) {
    const NodeOrigin& org = plan.subdivision.node_origin[i];
    if (org.coarse_node >= 0) {
      if (!coarse.node_markers[org.coarse_node].empty()) {
        // inherited boundary node: pinned for the whole refinement run
        plan.node_classes[i] = NodeClass::OldBoundary;
        plan.bcs[i] = NodeBc{};
        for (int d = 0; d < fine.dim; ++d) plan.bcs[i].fixed_comp[d] = true;
      }
      continue;
    }
    if (fine.node_markers[i].empty()) continue;
    bool moving = false;
    for (int id : fine.node_markers[i])
      if (target.rule_for(fine.markers[id]).kind == MarkerKind::Moving)
        moving = true;
    if (!moving) {
      plan.node_classes[i] = NodeClass::Slippery;
      continue;
    }
    plan.node_classes[i] = NodeClass::NewBoundary;
    const double travel = vec_norm(plan.bcs[i].velocity);
    const double limit = 0.5 * min_edge_length(coarse, org.coarse_elem);
    if (travel > limit) {
      std::ostringstream os;
      os << "new boundary node " << i << " travels " << travel
         << ", more than half the local coarse edge length " << limit;
      plan.warnings.push_back(os.str());
    }
  }
  return plan;
}

RefineResult refine_and_conform(const Mesh& coarse, int p,
                                const BoundaryMotion& target,
                                const RunConfig& cfg) {
  RefinePlan plan = plan_refinement(coarse, p, target, cfg.dt);
  MonitorSpec monitor(MonitorSource::uniform(), VolumeMode::MovingDomain);
  DeformResult run = run_with_bcs(plan.subdivision.fine, monitor, plan.bcs,
                                  cfg);
  RefineResult out;
  out.mesh = std::move(run.mesh);
  out.history = std::move(run.history);
  out.map = std::move(plan.subdivision);
  out.map.fine = out.mesh;
  return out;
}

}  // namespace defmesh
