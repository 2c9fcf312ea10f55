#ifndef DEFMESH_GEOMETRY_HPP
#define DEFMESH_GEOMETRY_HPP

#include <map>
#include <memory>
#include <string>

#include "defmesh/mesh.hpp"

namespace defmesh {

enum class ProjectionKind { Radial, Closest };

// Implicit target boundary: level function psi(x) with psi < 0 inside.
class ImplicitShape {
 public:
  virtual ~ImplicitShape() = default;
  virtual double level(const Vec3& x) const = 0;
  // Point on the zero level set, |psi| <= 1e-10 at the result.
  virtual Vec3 project(const Vec3& x, ProjectionKind kind) const = 0;
  virtual double distance(const Vec3& x) const;  // |x - project(x, Closest)|

  static std::shared_ptr<ImplicitShape> sphere(int dim, const Vec3& center,
                                               double radius);
  static std::shared_ptr<ImplicitShape> ellipsoid(int dim, const Vec3& center,
                                                  const Vec3& semi_axes);
};

struct MotionRule {
  MarkerKind kind = MarkerKind::Fixed;
  std::shared_ptr<ImplicitShape> target;  // moving rule only
  ProjectionKind projection = ProjectionKind::Radial;
  int slip_axis = -1;  // slippery rule only
};

// Per-marker boundary motion over t in [0, 1]: moving nodes travel the
// straight line to their one-time projection, slippery nodes keep a zero
// normal component, fixed nodes do not move.
struct BoundaryMotion {
  std::map<std::string, MotionRule> rules;
  MotionRule rule_for(const Marker& m) const;
};

// Per-node trajectory constraint, resolved from all markers a node carries.
struct NodeBc {
  // component c is prescribed iff fixed_comp[c]; then the node path is
  // x0 + t * velocity along that component
  std::array<bool, 3> fixed_comp = {false, false, false};
  Vec3 velocity = {0, 0, 0};
  bool any() const { return fixed_comp[0] || fixed_comp[1] || fixed_comp[2]; }
};

// Resolve the trajectory of node i of m under the given motion. Moving
// markers win over slippery ones at corners, with the slippery axis
// component of the velocity zeroed. Throws on two conflicting moving
// markers.
NodeBc boundary_velocity(const BoundaryMotion& motion, const Mesh& m, int node);

// Full per-node table for a mesh.
std::vector<NodeBc> build_node_bcs(const BoundaryMotion& motion, const Mesh& m);

// Outward unit normal of a boundary facet at its midpoint.
Vec3 facet_normal(const Mesh& m, const BoundaryFacet& f);

// Facet measure (length in 2D, area in 3D) by midpoint evaluation is not
// enough for bilinear faces; integrates v.n over the facet with Gauss
// points. Used for the moving-domain volume rate.
double facet_flux(const Mesh& m, const BoundaryFacet& f,
                  const std::vector<NodeBc>& bcs);

}  // namespace defmesh

#endif
