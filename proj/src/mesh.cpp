#include "defmesh/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

namespace defmesh {

double vec_dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
double vec_norm(const Vec3& a) { return std::sqrt(vec_dot(a, a)); }

const std::array<std::array<int, 2>, 4>& quad_edge_corners() {
  static const std::array<std::array<int, 2>, 4> e = {
      {{0, 1}, {1, 2}, {2, 3}, {3, 0}}};
  return e;
}

const std::array<std::array<int, 4>, 6>& hex_face_corners() {
  static const std::array<std::array<int, 4>, 6> f = {{{0, 3, 2, 1},
                                                       {4, 5, 6, 7},
                                                       {0, 1, 5, 4},
                                                       {1, 2, 6, 5},
                                                       {2, 3, 7, 6},
                                                       {3, 0, 4, 7}}};
  return f;
}

namespace {

// Reference corner coordinates scaled by 1 (entries 0/1).
const std::array<std::array<int, 3>, 8>& hex_corner_ref() {
  static const std::array<std::array<int, 3>, 8> c = {{{0, 0, 0},
                                                       {1, 0, 0},
                                                       {1, 1, 0},
                                                       {0, 1, 0},
                                                       {0, 0, 1},
                                                       {1, 0, 1},
                                                       {1, 1, 1},
                                                       {0, 1, 1}}};
  return c;
}

const std::array<std::array<int, 2>, 4>& quad_corner_ref() {
  static const std::array<std::array<int, 2>, 4> c = {
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  return c;
}

const std::array<std::array<int, 2>, 12>& hex_edge_corners() {
  static const std::array<std::array<int, 2>, 12> e = {{{0, 1},
                                                        {1, 2},
                                                        {2, 3},
                                                        {3, 0},
                                                        {4, 5},
                                                        {5, 6},
                                                        {6, 7},
                                                        {7, 4},
                                                        {0, 4},
                                                        {1, 5},
                                                        {2, 6},
                                                        {3, 7}}};
  return e;
}

}  // namespace

void Mesh::rebuild_node_markers() {
  node_markers.assign(nodes.size(), {});
  for (const auto& f : facets) {
    const auto& el = elements[f.element];
    if (dim == 2) {
      for (int c : quad_edge_corners()[f.local_facet]) {
        auto& ms = node_markers[el[c]];
        if (std::find(ms.begin(), ms.end(), f.marker) == ms.end())
          ms.push_back(f.marker);
      }
    } else {
      for (int c : hex_face_corners()[f.local_facet]) {
        auto& ms = node_markers[el[c]];
        if (std::find(ms.begin(), ms.end(), f.marker) == ms.end())
          ms.push_back(f.marker);
      }
    }
  }
  for (auto& ms : node_markers) std::sort(ms.begin(), ms.end());
}

Mesh rect_grid(int nx, int ny, const Box& bounds,
               const std::array<Marker, 4>& side_markers) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("rect_grid: nx, ny >= 1");
  if (bounds.hi[0] <= bounds.lo[0] || bounds.hi[1] <= bounds.lo[1])
    throw std::invalid_argument("rect_grid: degenerate bounds");

  Mesh m;
  m.dim = 2;
  m.markers.assign(side_markers.begin(), side_markers.end());
  // bottom, right, top, left wall normals are -y, +x, +y, -x
  const int side_axis[4] = {1, 0, 1, 0};
  for (int s = 0; s < 4; ++s)
    if (m.markers[s].kind == MarkerKind::Slippery && m.markers[s].slip_axis < 0)
      m.markers[s].slip_axis = side_axis[s];

  m.nodes.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.nodes.push_back(
          {bounds.lo[0] + (bounds.hi[0] - bounds.lo[0]) * i / nx,
           bounds.lo[1] + (bounds.hi[1] - bounds.lo[1]) * j / ny, 0.0});

  auto nid = [&](int i, int j) { return i + j * (nx + 1); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      m.elements.push_back({nid(i, j), nid(i + 1, j), nid(i + 1, j + 1),
                            nid(i, j + 1), -1, -1, -1, -1});

  auto eid = [&](int i, int j) { return i + j * nx; };
  for (int i = 0; i < nx; ++i) m.facets.push_back({eid(i, 0), 0, 0});
  for (int j = 0; j < ny; ++j) m.facets.push_back({eid(nx - 1, j), 1, 1});
  for (int i = 0; i < nx; ++i) m.facets.push_back({eid(i, ny - 1), 2, 2});
  for (int j = 0; j < ny; ++j) m.facets.push_back({eid(0, j), 3, 3});

  m.rebuild_node_markers();
  return m;
}

Mesh box_grid(int nx, int ny, int nz, const Box& bounds,
              const std::array<Marker, 6>& face_markers) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw std::invalid_argument("box_grid: nx, ny, nz >= 1");
  for (int d = 0; d < 3; ++d)
    if (bounds.hi[d] <= bounds.lo[d])
      throw std::invalid_argument("box_grid: degenerate bounds");

  Mesh m;
  m.dim = 3;
  m.markers.assign(face_markers.begin(), face_markers.end());
  // face order zmin, zmax, ymin, xmax, ymax, xmin
  const int face_axis[6] = {2, 2, 1, 0, 1, 0};
  for (int s = 0; s < 6; ++s)
    if (m.markers[s].kind == MarkerKind::Slippery && m.markers[s].slip_axis < 0)
      m.markers[s].slip_axis = face_axis[s];

  m.nodes.reserve((nx + 1) * (ny + 1) * (nz + 1));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        m.nodes.push_back(
            {bounds.lo[0] + (bounds.hi[0] - bounds.lo[0]) * i / nx,
             bounds.lo[1] + (bounds.hi[1] - bounds.lo[1]) * j / ny,
             bounds.lo[2] + (bounds.hi[2] - bounds.lo[2]) * k / nz});

  auto nid = [&](int i, int j, int k) {
    return i + (nx + 1) * (j + (ny + 1) * k);
  };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        m.elements.push_back({nid(i, j, k), nid(i + 1, j, k),
                              nid(i + 1, j + 1, k), nid(i, j + 1, k),
                              nid(i, j, k + 1), nid(i + 1, j, k + 1),
                              nid(i + 1, j + 1, k + 1), nid(i, j + 1, k + 1)});

  auto eid = [&](int i, int j, int k) { return i + nx * (j + ny * k); };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) m.facets.push_back({eid(i, j, 0), 0, 0});
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      m.facets.push_back({eid(i, j, nz - 1), 1, 1});
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) m.facets.push_back({eid(i, 0, k), 2, 2});
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      m.facets.push_back({eid(nx - 1, j, k), 3, 3});
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i)
      m.facets.push_back({eid(i, ny - 1, k), 4, 4});
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) m.facets.push_back({eid(0, j, k), 5, 5});

  m.rebuild_node_markers();
  return m;
}

void shape_values(int dim, const Vec3& ref, double* N) {
  const double x = ref[0], y = ref[1], z = ref[2];
  if (dim == 2) {
    N[0] = (1 - x) * (1 - y);
    N[1] = x * (1 - y);
    N[2] = x * y;
    N[3] = (1 - x) * y;
  } else {
    N[0] = (1 - x) * (1 - y) * (1 - z);
    N[1] = x * (1 - y) * (1 - z);
    N[2] = x * y * (1 - z);
    N[3] = (1 - x) * y * (1 - z);
    N[4] = (1 - x) * (1 - y) * z;
    N[5] = x * (1 - y) * z;
    N[6] = x * y * z;
    N[7] = (1 - x) * y * z;
  }
}

void shape_gradients(int dim, const Vec3& ref, Vec3* dN) {
  const double x = ref[0], y = ref[1], z = ref[2];
  if (dim == 2) {
    dN[0] = {-(1 - y), -(1 - x), 0};
    dN[1] = {(1 - y), -x, 0};
    dN[2] = {y, x, 0};
    dN[3] = {-y, (1 - x), 0};
  } else {
    dN[0] = {-(1 - y) * (1 - z), -(1 - x) * (1 - z), -(1 - x) * (1 - y)};
    dN[1] = {(1 - y) * (1 - z), -x * (1 - z), -x * (1 - y)};
    dN[2] = {y * (1 - z), x * (1 - z), -x * y};
    dN[3] = {-y * (1 - z), (1 - x) * (1 - z), -(1 - x) * y};
    dN[4] = {-(1 - y) * z, -(1 - x) * z, (1 - x) * (1 - y)};
    dN[5] = {(1 - y) * z, -x * z, x * (1 - y)};
    dN[6] = {y * z, x * z, x * y};
    dN[7] = {-y * z, (1 - x) * z, (1 - x) * y};
  }
}

double element_jacobian(const Mesh& m, int e, const Vec3& ref,
                        std::array<Vec3, 3>* jac_cols) {
  const int n = m.nodes_per_elem();
  Vec3 dN[8];
  shape_gradients(m.dim, ref, dN);
  std::array<Vec3, 3> J = {Vec3{0, 0, 0}, Vec3{0, 0, 0}, Vec3{0, 0, 0}};
  if (m.dim == 2) J[2][2] = 1.0;  // padding row for the 2D case
  for (int a = 0; a < n; ++a) {
    const Vec3& x = m.nodes[m.elements[e][a]];
    for (int d = 0; d < m.dim; ++d)
      for (int c = 0; c < m.dim; ++c) J[d][c] += dN[a][d] * x[c];
  }
  // J[d][c] = d x_c / d ref_d
  if (jac_cols) *jac_cols = J;
  if (m.dim == 2) return J[0][0] * J[1][1] - J[0][1] * J[1][0];
  return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
         J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
         J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
}

namespace {
constexpr double kGaussA = 0.21132486540518713;  // (1 - 1/sqrt(3)) / 2
constexpr double kGaussB = 0.7886751345948129;

void gauss_points(int dim, std::vector<Vec3>& pts) {
  const double g[2] = {kGaussA, kGaussB};
  pts.clear();
  if (dim == 2) {
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) pts.push_back({g[i], g[j], 0});
  } else {
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) pts.push_back({g[i], g[j], g[k]});
  }
}
}  // namespace

double min_jacobian(const Mesh& m) {
  std::vector<Vec3> pts;
  gauss_points(m.dim, pts);
  const int nc = m.nodes_per_elem();
  for (int c = 0; c < nc; ++c) {
    if (m.dim == 2) {
      auto r = quad_corner_ref()[c];
      pts.push_back({double(r[0]), double(r[1]), 0});
    } else {
      auto r = hex_corner_ref()[c];
      pts.push_back({double(r[0]), double(r[1]), double(r[2])});
    }
  }
  double mn = std::numeric_limits<double>::infinity();
  for (int e = 0; e < m.n_elements(); ++e)
    for (const auto& p : pts) mn = std::min(mn, element_jacobian(m, e, p));
  return mn;
}

double element_volume(const Mesh& m, int e) {
  std::vector<Vec3> pts;
  gauss_points(m.dim, pts);
  double v = 0.0;
  for (const auto& p : pts) v += element_jacobian(m, e, p);
  return v / pts.size();  // each Gauss weight on [0,1]^dim is 1/2^dim
}

double total_volume(const Mesh& m) {
  double v = 0.0;
  for (int e = 0; e < m.n_elements(); ++e) v += element_volume(m, e);
  return v;
}

// ---------------------------------------------------------------------------
// Subdivision

namespace {

struct LatticeKey {
  // type 0: coarse node (a = node id)
  // type 1: coarse edge (a,b = sorted endpoint node ids, s = position)
  // type 2: coarse face (a = face id, s,t = canonical face coords)
  // type 3: element interior (a = element id, s = lex index)
  int type = 0;
  int a = 0, b = 0, s = 0, t = 0;
  bool operator<(const LatticeKey& o) const {
    return std::tie(type, a, b, s, t) < std::tie(o.type, o.a, o.b, o.s, o.t);
  }
};

// Canonical coordinates of an interior point of a quad face whose corners
// carry global ids g[0..3] in cyclic order. The frame is rotated/reflected
// so the minimal id sits at (0,0) and its smaller-id neighbor spans the
// s-axis.
void canonical_face_coords(const std::array<int, 4>& g, int p, int s, int t,
                           int* cs, int* ct) {
  static const int corner_s[4] = {0, 1, 1, 0};
  static const int corner_t[4] = {0, 0, 1, 1};
  int m = 0;
  for (int i = 1; i < 4; ++i)
    if (g[i] < g[m]) m = i;
  const int next = (m + 1) % 4, prev = (m + 3) % 4;
  const int dir = (g[next] < g[prev]) ? 1 : 3;  // +1 cyclic or -1 cyclic
  const int c1 = (m + dir) % 4;
  const int c3 = (m + 4 - dir) % 4;
  // express (s,t) along the axes c0->c1 and c0->c3
  auto coord = [&](int cfrom, int cto) {
    int v = 0;
    if (corner_s[cto] != corner_s[cfrom])
      v += (corner_s[cto] > corner_s[cfrom]) ? s : p - s;
    if (corner_t[cto] != corner_t[cfrom])
      v += (corner_t[cto] > corner_t[cfrom]) ? t : p - t;
    return v;
  };
  *cs = coord(m, c1);
  *ct = coord(m, c3);
}

}  // namespace

SubdivisionMap subdivide(const Mesh& m, int p) {
  if (p < 2) throw std::invalid_argument("subdivide: p must be >= 2");
  const int dim = m.dim;
  const int nc = m.nodes_per_elem();

  SubdivisionMap out;
  out.p = p;
  out.fine.dim = dim;
  out.fine.markers = m.markers;

  std::map<LatticeKey, int> known;
  std::map<std::array<int, 4>, int> face_ids;

  const int lat = p + 1;
  auto lex = [&](int i, int j, int k) {
    return i + lat * (j + (dim == 3 ? lat * k : 0));
  };

  out.elem_lattice_nodes.resize(m.n_elements());

  for (int e = 0; e < m.n_elements(); ++e) {
    const auto& el = m.elements[e];
    auto& lattice = out.elem_lattice_nodes[e];
    lattice.assign(dim == 2 ? lat * lat : lat * lat * lat, -1);

    const int kmax = dim == 3 ? p : 0;
    for (int k = 0; k <= kmax; ++k)
      for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i) {
          const int c[3] = {i, j, k};
          int n_ext = 0;
          for (int d = 0; d < dim; ++d)
            if (c[d] == 0 || c[d] == p) ++n_ext;

          LatticeKey key;
          if (n_ext == dim) {
            // corner
            int ci = -1;
            if (dim == 2) {
              for (int a = 0; a < 4; ++a) {
                auto r = quad_corner_ref()[a];
                if (r[0] * p == i && r[1] * p == j) ci = a;
              }
            } else {
              for (int a = 0; a < 8; ++a) {
                auto r = hex_corner_ref()[a];
                if (r[0] * p == i && r[1] * p == j && r[2] * p == k) ci = a;
              }
            }
            key = {0, el[ci], 0, 0, 0};
          } else if (n_ext == dim - 1) {
            // edge interior
            int ea = -1, eb = -1, pos = 0;
            auto on_edge = [&](int ca, int cb) {
              int ra[3], rb[3];
              if (dim == 2) {
                ra[0] = quad_corner_ref()[ca][0] * p;
                ra[1] = quad_corner_ref()[ca][1] * p;
                ra[2] = 0;
                rb[0] = quad_corner_ref()[cb][0] * p;
                rb[1] = quad_corner_ref()[cb][1] * p;
                rb[2] = 0;
              } else {
                for (int d = 0; d < 3; ++d) {
                  ra[d] = hex_corner_ref()[ca][d] * p;
                  rb[d] = hex_corner_ref()[cb][d] * p;
                }
              }
              int s = -1;
              for (int d = 0; d < dim; ++d) {
                if (ra[d] == rb[d]) {
                  if (c[d] != ra[d]) return false;
                } else {
                  s = (rb[d] > ra[d]) ? c[d] : p - c[d];
                }
              }
              if (s <= 0 || s >= p) return false;
              ea = el[ca];
              eb = el[cb];
              pos = s;
              return true;
            };
            bool found = false;
            if (dim == 2) {
              for (const auto& eg : quad_edge_corners())
                if (on_edge(eg[0], eg[1])) {
                  found = true;
                  break;
                }
            } else {
              for (const auto& eg : hex_edge_corners())
                if (on_edge(eg[0], eg[1])) {
                  found = true;
                  break;
                }
            }
            if (!found) throw std::logic_error("subdivide: edge lookup failed");
            if (ea < eb)
              key = {1, ea, eb, pos, 0};
            else
              key = {1, eb, ea, p - pos, 0};
          } else if (n_ext == 1 && dim == 3) {
            // face interior
            int lf = -1;
            for (int f = 0; f < 6; ++f) {
              const auto& fc = hex_face_corners()[f];
              // the face is the set where one ref coord is constant
              bool onface = true;
              int ra[3];
              for (int d = 0; d < 3; ++d) ra[d] = hex_corner_ref()[fc[0]][d];
              // constant axis: the one shared by all 4 corners
              for (int d = 0; d < 3; ++d) {
                bool all_same = true;
                for (int a = 1; a < 4; ++a)
                  if (hex_corner_ref()[fc[a]][d] != ra[d]) all_same = false;
                if (all_same && c[d] != ra[d] * p) onface = false;
              }
              if (onface) {
                lf = f;
                break;
              }
            }
            if (lf < 0) throw std::logic_error("subdivide: face lookup failed");
            const auto& fc = hex_face_corners()[lf];
            // face-local (s,t) from corner fc[0] toward fc[1] / fc[3]
            auto axis_coord = [&](int cfrom, int cto) {
              int v = 0;
              for (int d = 0; d < 3; ++d) {
                const int rf = hex_corner_ref()[cfrom][d] * p;
                const int rt = hex_corner_ref()[cto][d] * p;
                if (rf != rt) v = (rt > rf) ? c[d] : p - c[d];
              }
              return v;
            };
            const int s = axis_coord(fc[0], fc[1]);
            const int t = axis_coord(fc[0], fc[3]);
            std::array<int, 4> g = {el[fc[0]], el[fc[1]], el[fc[2]],
                                    el[fc[3]]};
            std::array<int, 4> sorted = g;
            std::sort(sorted.begin(), sorted.end());
            auto [it, inserted] =
                face_ids.try_emplace(sorted, (int)face_ids.size());
            int cs, ct;
            canonical_face_coords(g, p, s, t, &cs, &ct);
            key = {2, it->second, 0, cs, ct};
          } else {
            key = {3, e, 0, lex(i, j, k), 0};
          }

          auto [it, inserted] = known.try_emplace(key, out.fine.n_nodes());
          if (inserted) {
            const Vec3 ref = {double(i) / p, double(j) / p, double(k) / p};
            double N[8];
            shape_values(dim, ref, N);
            Vec3 x = {0, 0, 0};
            for (int a = 0; a < nc; ++a) x = x + N[a] * m.nodes[el[a]];
            // snap to coarse corner coordinates exactly
            NodeOrigin orig;
            if (key.type == 0) {
              x = m.nodes[key.a];
              orig.coarse_node = key.a;
            }
            orig.coarse_elem = e;
            orig.ref = ref;
            out.fine.nodes.push_back(x);
            out.node_origin.push_back(orig);
          }
          lattice[lex(i, j, k)] = it->second;
        }

    // fine elements, lex order (i fastest)
    const int ke = dim == 3 ? p : 1;
    for (int k = 0; k < ke; ++k)
      for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i) {
          std::array<int, 8> fe = {-1, -1, -1, -1, -1, -1, -1, -1};
          fe[0] = lattice[lex(i, j, k)];
          fe[1] = lattice[lex(i + 1, j, k)];
          fe[2] = lattice[lex(i + 1, j + 1, k)];
          fe[3] = lattice[lex(i, j + 1, k)];
          if (dim == 3) {
            fe[4] = lattice[lex(i, j, k + 1)];
            fe[5] = lattice[lex(i + 1, j, k + 1)];
            fe[6] = lattice[lex(i + 1, j + 1, k + 1)];
            fe[7] = lattice[lex(i, j + 1, k + 1)];
          }
          out.fine.elements.push_back(fe);
          out.elem_origin.push_back(e);
        }
  }

  // boundary facets: each coarse facet spawns the p^(dim-1) sub-facets of
  // the matching fine element layer, same local index
  const int psq = dim == 3 ? p * p * p : p * p;
  for (const auto& f : m.facets) {
    const int base = f.element * psq;
    auto sub = [&](int i, int j, int k) {
      return base + i + p * (j + (dim == 3 ? p * k : 0));
    };
    if (dim == 2) {
      switch (f.local_facet) {
        case 0:
          for (int i = 0; i < p; ++i)
            out.fine.facets.push_back({sub(i, 0, 0), 0, f.marker});
          break;
        case 1:
          for (int j = 0; j < p; ++j)
            out.fine.facets.push_back({sub(p - 1, j, 0), 1, f.marker});
          break;
        case 2:
          for (int i = 0; i < p; ++i)
            out.fine.facets.push_back({sub(i, p - 1, 0), 2, f.marker});
          break;
        case 3:
          for (int j = 0; j < p; ++j)
            out.fine.facets.push_back({sub(0, j, 0), 3, f.marker});
          break;
      }
    } else {
      for (int b = 0; b < p; ++b)
        for (int a = 0; a < p; ++a) {
          int el = -1;
          switch (f.local_facet) {
            case 0: el = sub(a, b, 0); break;
            case 1: el = sub(a, b, p - 1); break;
            case 2: el = sub(a, 0, b); break;
            case 3: el = sub(p - 1, a, b); break;
            case 4: el = sub(a, p - 1, b); break;
            case 5: el = sub(0, a, b); break;
          }
          out.fine.facets.push_back({el, f.local_facet, f.marker});
        }
    }
  }

  out.fine.rebuild_node_markers();
  return out;
}

}  // namespace defmesh
