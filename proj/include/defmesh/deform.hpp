#ifndef DEFMESH_DEFORM_HPP
#define DEFMESH_DEFORM_HPP

#include <string>
#include <vector>

#include "defmesh/geometry.hpp"
#include "defmesh/lsfem.hpp"
#include "defmesh/monitor.hpp"

namespace defmesh {

enum class FoldAction { Halt, RetryHalveDt };

struct RunConfig {
  double dt = 0.05;
  double T = 1.0;
  double cg_tol = 1e-10;
  FoldAction fold_action = FoldAction::RetryHalveDt;
  int max_fold_retries = 8;
};

// One accepted time level of the deformation run.
struct HistoryRow {
  double t = 0.0;
  double min_jacobian = 0.0;
  double volume = 0.0;
  double equidistribution_residual = 0.0;
  int cg_iterations = 0;
  double cg_relative_residual = 0.0;
};

struct DeformResult {
  Mesh mesh;
  std::vector<HistoryRow> history;
};

// Max over elements of |J(t)/J(0) / f_target - 1| at element centers; det0
// are the initial center Jacobians of the same elements.
double equidistribution_residual(const Mesh& m, const std::vector<double>& det0,
                                 const MonitorSpec& monitor);

// Initial element-center Jacobians for the residual above.
std::vector<double> center_jacobians(const Mesh& m);

// Total rate of volume change from the prescribed boundary velocity.
double boundary_flux(const Mesh& m, const std::vector<NodeBc>& bcs);

// Deformation run: at each time level solve div u = g, curl u = 0 with
// u = v/f Dirichlet data on constrained boundary components, then advect
// x += dt f u. On a fold (non-positive element Jacobian) the step is
// retried with a halved dt, or the run halts, per config. The monitor must
// not yet be initialized; it is initialized on m0.
DeformResult run_algorithm1(const Mesh& m0, MonitorSpec& monitor,
                            const BoundaryMotion& motion,
                            const RunConfig& cfg);

// Same run with an explicit per-node trajectory table instead of marker
// resolution (used by the refinement pass, which pins inherited nodes).
DeformResult run_with_bcs(const Mesh& m0, MonitorSpec& monitor,
                          const std::vector<NodeBc>& bcs,
                          const RunConfig& cfg);

void write_history_csv(const std::string& path,
                       const std::vector<HistoryRow>& rows);

}  // namespace defmesh

#endif
