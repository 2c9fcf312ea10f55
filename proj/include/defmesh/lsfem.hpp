#ifndef DEFMESH_LSFEM_HPP
#define DEFMESH_LSFEM_HPP

#include <vector>

#include "defmesh/linalg.hpp"
#include "defmesh/mesh.hpp"
#include "defmesh/monitor.hpp"

namespace defmesh {

// Nodal vector field (dim components per node) on the current mesh.
struct NodalField {
  int dim = 2;
  std::vector<Vec3> values;

  int n_nodes() const { return static_cast<int>(values.size()); }
};

struct DirichletEntry {
  int node = -1;
  int component = -1;
  double value = 0.0;
};

// Dirichlet values for moving-boundary components and zero-normal slippery
// constraints, already flattened to (node, component, value).
struct ConstraintSet {
  std::vector<DirichletEntry> dirichlet;

  void add(int node, int component, double value);
  // throws if the same node-component carries two different values
  void validate() const;
};

struct LsfemSystem {
  SparseMatrix matrix;  // unknown ordering: node-major, component-minor
  std::vector<double> rhs;
  int dim = 2;
};

// Normal equations of min F(u) = int (div u - g)^2 + |curl u|^2 over the
// multilinear vector FE space, 2^dim Gauss points per element. Throws if
// an element Jacobian is non-positive at a quadrature point.
LsfemSystem assemble(const Mesh& m, const RhsField& g);

// Symmetric row/column elimination of the Dirichlet entries; diagonal set
// to 1, rhs updated.
void apply_constraints(LsfemSystem& sys, const ConstraintSet& c);

struct SolveReport {
  CgReport cg;
};

// assemble + constraints + Jacobi-CG; Dirichlet values re-injected into
// the returned field.
NodalField solve_velocity(const Mesh& m, const RhsField& g,
                          const ConstraintSet& c, double tol = 1e-10,
                          SolveReport* report = nullptr);

}  // namespace defmesh

#endif
