#ifndef DEFMESH_REFINE_HPP
#define DEFMESH_REFINE_HPP

#include <string>
#include <vector>

#include "defmesh/deform.hpp"
#include "defmesh/geometry.hpp"
#include "defmesh/mesh.hpp"

namespace defmesh {

enum class NodeClass { OldBoundary, NewBoundary, Slippery, Interior };

// Subdivision plus per-fine-node trajectories for the conforming
// deformation: inherited boundary nodes are pinned, new boundary nodes
// travel straight lines to their projection on the target shape, nodes on
// slippery walls keep a zero normal component.
struct RefinePlan {
  SubdivisionMap subdivision;
  std::vector<NodeClass> node_classes;
  std::vector<NodeBc> bcs;
  double dt_refine = 0.1;
  // new-boundary nodes whose projection travels further than half the
  // local coarse edge length (tangling risk)
  std::vector<std::string> warnings;
};

RefinePlan plan_refinement(const Mesh& coarse, int p,
                           const BoundaryMotion& target,
                           double dt_refine = 0.1);

struct RefineResult {
  Mesh mesh;           // conforming fine mesh
  SubdivisionMap map;  // fine mesh inside updated to conformed positions
  std::vector<HistoryRow> history;
};

// Subdivide and deform the fine mesh onto the target boundary with a
// uniform monitor; cfg.dt is the refinement time step.
RefineResult refine_and_conform(const Mesh& coarse, int p,
                                const BoundaryMotion& target,
                                const RunConfig& cfg);

}  // namespace defmesh

#endif
