#ifndef DEFMESH_MESH_HPP
#define DEFMESH_MESH_HPP

#include <array>
#include <string>
#include <vector>

namespace defmesh {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
double vec_dot(const Vec3& a, const Vec3& b);
double vec_norm(const Vec3& a);

enum class MarkerKind { Moving, Slippery, Fixed };

struct Marker {
  std::string name;
  MarkerKind kind = MarkerKind::Fixed;
  int slip_axis = -1;  // outward normal axis for slippery walls
};

struct BoundaryFacet {
  int element = -1;
  int local_facet = -1;
  int marker = -1;
};

// Quad (2D) / hex (3D) mesh. Reference element is [0,1]^dim; quad corners
// counterclockwise, hex corners bottom face then top face, right-handed.
struct Mesh {
  int dim = 2;
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 8>> elements;  // first 4 entries used for quads
  std::vector<BoundaryFacet> facets;
  std::vector<Marker> markers;
  std::vector<std::vector<int>> node_markers;  // sorted marker ids per node

  int nodes_per_elem() const { return dim == 2 ? 4 : 8; }
  int facets_per_elem() const { return dim == 2 ? 4 : 6; }
  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }

  // Recompute node_markers from the facet list.
  void rebuild_node_markers();
};

// Local facet corner ids, ordered so the facet's induced orientation points
// outward. 2D: edges (0,1),(1,2),(2,3),(3,0). 3D: z=0, z=1, y=0, x=1, y=1,
// x=0 faces.
const std::array<std::array<int, 2>, 4>& quad_edge_corners();
const std::array<std::array<int, 4>, 6>& hex_face_corners();

struct Box {
  Vec3 lo{0, 0, 0};
  Vec3 hi{1, 1, 1};
};

// Sides in order bottom(y=0), right(x=1), top(y=1), left(x=0).
Mesh rect_grid(int nx, int ny, const Box& bounds,
               const std::array<Marker, 4>& side_markers);
// Faces in order zmin, zmax, ymin, xmax, ymax, xmin (matching
// hex_face_corners order).
Mesh box_grid(int nx, int ny, int nz, const Box& bounds,
              const std::array<Marker, 6>& face_markers);

// Multilinear shape functions and their reference gradients at a point of
// [0,1]^dim. n = 4 (2D) or 8 (3D).
void shape_values(int dim, const Vec3& ref, double* N);
void shape_gradients(int dim, const Vec3& ref, Vec3* dN);

// Jacobian matrix (columns d(x)/d(ref_k)) of the isoparametric map of
// element e at a reference point; returns its determinant.
double element_jacobian(const Mesh& m, int e, const Vec3& ref,
                        std::array<Vec3, 3>* jac_cols = nullptr);

// Minimum of element_jacobian over all elements at tensor Gauss points and
// corners.
double min_jacobian(const Mesh& m);

// Sum of element volumes by 2^dim-point Gauss quadrature (exact for
// multilinear geometry).
double total_volume(const Mesh& m);
double element_volume(const Mesh& m, int e);

struct NodeOrigin {
  int coarse_node = -1;  // >= 0 when inherited from a coarse node
  int coarse_elem = -1;
  Vec3 ref{0, 0, 0};  // reference coords within coarse_elem
};

struct SubdivisionMap {
  Mesh fine;
  int p = 0;
  std::vector<NodeOrigin> node_origin;  // per fine node
  std::vector<int> elem_origin;         // per fine element: coarse element id
  // Per coarse element, the (p+1)^dim fine node ids of its reference
  // lattice {0, 1/p, ..., 1}^dim in lexicographic order (x fastest).
  std::vector<std::vector<int>> elem_lattice_nodes;
};

// Split each quad into p x p quads (hex into p^3 hexes) through the
// isoparametric map; shared nodes are identified through integer lattice
// keys on coarse entities, never by coordinate comparison.
SubdivisionMap subdivide(const Mesh& m, int p);

// Native JSON mesh format.
void save_mesh(const Mesh& m, const std::string& path);
Mesh load_mesh(const std::string& path);
std::string mesh_to_json(const Mesh& m);
Mesh mesh_from_json(const std::string& text);

}  // namespace defmesh

#endif
