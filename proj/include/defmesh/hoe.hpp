#ifndef DEFMESH_HOE_HPP
#define DEFMESH_HOE_HPP

#include <string>
#include <vector>

#include "defmesh/geometry.hpp"
#include "defmesh/mesh.hpp"

namespace defmesh {

// Boundary facet of a high-order element: the (p+1)^(dim-1) lattice node
// ids on the facet, lexicographic in the facet parameters.
struct HoeFacet {
  int element = -1;
  int local_facet = -1;
  int marker = -1;
  std::vector<int> nodes;
};

// Order-p tensor-lattice Lagrange mesh; one element per coarse element,
// node ids in lexicographic reference order (x fastest).
struct HighOrderMesh {
  int dim = 2;
  int p = 3;
  std::vector<Vec3> nodes;
  std::vector<std::vector<int>> elements;
  std::vector<HoeFacet> facets;
  std::vector<Marker> markers;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int nodes_per_elem() const {
    int n = 1;
    for (int d = 0; d < dim; ++d) n *= p + 1;
    return n;
  }
};

// Harvest the per-coarse-element lattice nodes of the conformed fine mesh
// into high-order elements. Throws if the map does not belong to the
// given meshes.
HighOrderMesh build_hoe(const Mesh& coarse, const Mesh& conformed,
                        const SubdivisionMap& map);

// 1D Lagrange basis of order p with nodes at {0, 1/p, ..., 1}.
void lagrange_1d(int p, double t, double* values, double* derivs = nullptr);

// Order-p isoparametric map of element e at a reference point, and its
// Jacobian determinant.
Vec3 hoe_point(const HighOrderMesh& h, int e, const Vec3& ref);
double hoe_jacobian(const HighOrderMesh& h, int e, const Vec3& ref);

// Minimum Jacobian over all elements on a strictly interior uniform
// (p+2)^dim lattice (cell midpoints of a (p+2)-per-axis grid).
double hoe_min_jacobian(const HighOrderMesh& h);

// Max distance from the interpolated boundary to the shape over all
// facets carrying the marker, sampled at `samples` points per direction.
double edge_deviation(const HighOrderMesh& h, const std::string& marker,
                      const ImplicitShape& shape, int samples = 33);
double edge_deviation(const Mesh& m, const std::string& marker,
                      const ImplicitShape& shape, int samples = 33);

// Lattice -> format node permutations (perm[k] = lattice index written at
// format position k); pure functions, p in {1, 3}.
std::vector<int> lattice_to_msh_permutation(int dim, int p);
std::vector<int> lattice_to_vtk_permutation(int dim, int p);

// Gmsh MSH 4.1 ASCII (types 3/5 linear, 36/92 at p=3).
void export_msh(const HighOrderMesh& h, const std::string& path);
void export_msh(const Mesh& m, const std::string& path);

// VTK legacy ASCII unstructured grid (types 9/12 linear, 70/72 at p=3).
void export_vtk(const HighOrderMesh& h, const std::string& path);
void export_vtk(const Mesh& m, const std::string& path);

// 2D SVG plot; cubic edges sampled at 16 points. Rejects 3D meshes.
void plot_svg(const HighOrderMesh& h, const std::string& path);
void plot_svg(const Mesh& m, const std::string& path);

}  // namespace defmesh

#endif
