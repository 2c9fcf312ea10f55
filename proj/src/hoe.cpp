#include "defmesh/hoe.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace defmesh {

namespace {

const int kQuadCorner[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
const int kHexCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                              {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

int lattice_flat(int dim, int p, int i, int j, int k) {
  return dim == 2 ? i + (p + 1) * j : i + (p + 1) * (j + (p + 1) * k);
}

// lattice indices of facet parameter point (a[, b]) within the element
int facet_lattice(int local_facet, int dim, int p, int a, int b) {
  if (dim == 2) {
    const auto& e = quad_edge_corners()[local_facet];
    const int* c0 = kQuadCorner[e[0]];
    const int* c1 = kQuadCorner[e[1]];
    const int i = c0[0] * p + a * (c1[0] - c0[0]);
    const int j = c0[1] * p + a * (c1[1] - c0[1]);
    return lattice_flat(2, p, i, j, 0);
  }
  const auto& f = hex_face_corners()[local_facet];
  const int* c0 = kHexCorner[f[0]];
  const int* c1 = kHexCorner[f[1]];
  const int* c3 = kHexCorner[f[3]];
  int idx[3];
  for (int d = 0; d < 3; ++d)
    idx[d] = c0[d] * p + a * (c1[d] - c0[d]) + b * (c3[d] - c0[d]);
  return lattice_flat(3, p, idx[0], idx[1], idx[2]);
}

}  // namespace

HighOrderMesh build_hoe(const Mesh& coarse, const Mesh& conformed,
                        const SubdivisionMap& map) {
  if (map.fine.n_nodes() != conformed.n_nodes() ||
      static_cast<int>(map.elem_lattice_nodes.size()) != coarse.n_elements())
    throw std::invalid_argument(
        "build_hoe: subdivision map does not match the given meshes");

  HighOrderMesh h;
  h.dim = coarse.dim;
  h.p = map.p;
  h.nodes = conformed.nodes;
  h.markers = coarse.markers;

  const int per_elem = h.nodes_per_elem();
  h.elements.reserve(coarse.n_elements());
  for (int e = 0; e < coarse.n_elements(); ++e) {
    const auto& lat = map.elem_lattice_nodes[e];
    if (static_cast<int>(lat.size()) != per_elem)
      throw std::invalid_argument("build_hoe: corrupted lattice for element " +
                                  std::to_string(e));
    for (int id : lat)
      if (id < 0 || id >= h.n_nodes())
        throw std::invalid_argument(
            "build_hoe: lattice node out of range in element " +
            std::to_string(e));
    h.elements.push_back(lat);
  }

  const int per_facet = h.dim == 2 ? h.p + 1 : (h.p + 1) * (h.p + 1);
  for (const auto& f : coarse.facets) {
    HoeFacet hf;
    hf.element = f.element;
    hf.local_facet = f.local_facet;
    hf.marker = f.marker;
    hf.nodes.reserve(per_facet);
    const auto& lat = h.elements[f.element];
    if (h.dim == 2) {
      for (int a = 0; a <= h.p; ++a)
        hf.nodes.push_back(lat[facet_lattice(f.local_facet, 2, h.p, a, 0)]);
    } else {
      for (int b = 0; b <= h.p; ++b)
        for (int a = 0; a <= h.p; ++a)
          hf.nodes.push_back(lat[facet_lattice(f.local_facet, 3, h.p, a, b)]);
    }
    h.facets.push_back(std::move(hf));
  }
  return h;
}

void lagrange_1d(int p, double t, double* values, double* derivs) {
  for (int i = 0; i <= p; ++i) {
    const double xi = double(i) / p;
    double v = 1.0;
    for (int m = 0; m <= p; ++m) {
      if (m == i) continue;
      const double xm = double(m) / p;
      v *= (t - xm) / (xi - xm);
    }
    values[i] = v;
    if (!derivs) continue;
    double d = 0.0;
    for (int k = 0; k <= p; ++k) {
      if (k == i) continue;
      double term = 1.0 / (xi - double(k) / p);
      for (int m = 0; m <= p; ++m) {
        if (m == i || m == k) continue;
        const double xm = double(m) / p;
        term *= (t - xm) / (xi - xm);
      }
      d += term;
    }
    derivs[i] = d;
  }
}

namespace {

// basis values and reference gradients of the tensor Lagrange element
void tensor_basis(int dim, int p, const Vec3& ref, std::vector<double>& N,
                  std::vector<Vec3>& dN) {
  const int n1 = p + 1;
  std::vector<double> v(3 * n1), d(3 * n1);
  for (int a = 0; a < dim; ++a)
    lagrange_1d(p, ref[a], &v[a * n1], &d[a * n1]);
  const int n = dim == 2 ? n1 * n1 : n1 * n1 * n1;
  N.resize(n);
  dN.resize(n);
  const int kmax = dim == 3 ? n1 : 1;
  int idx = 0;
  for (int k = 0; k < kmax; ++k)
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n1; ++i, ++idx) {
        const double vz = dim == 3 ? v[2 * n1 + k] : 1.0;
        N[idx] = v[i] * v[n1 + j] * vz;
        dN[idx][0] = d[i] * v[n1 + j] * vz;
        dN[idx][1] = v[i] * d[n1 + j] * vz;
        dN[idx][2] = dim == 3 ? v[i] * v[n1 + j] * d[2 * n1 + k] : 0.0;
      }
}

}  // namespace

Vec3 hoe_point(const HighOrderMesh& h, int e, const Vec3& ref) {
  std::vector<double> N;
  std::vector<Vec3> dN;
  tensor_basis(h.dim, h.p, ref, N, dN);
  Vec3 x = {0, 0, 0};
  const auto& el = h.elements[e];
  for (std::size_t a = 0; a < N.size(); ++a) x = x + N[a] * h.nodes[el[a]];
  return x;
}

double hoe_jacobian(const HighOrderMesh& h, int e, const Vec3& ref) {
  std::vector<double> N;
  std::vector<Vec3> dN;
  tensor_basis(h.dim, h.p, ref, N, dN);
  Vec3 col[3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 1}};
  if (h.dim == 3) col[2] = {0, 0, 0};
  const auto& el = h.elements[e];
  for (std::size_t a = 0; a < N.size(); ++a)
    for (int d = 0; d < h.dim; ++d) col[d] = col[d] + dN[a][d] * h.nodes[el[a]];
  return col[0][0] * (col[1][1] * col[2][2] - col[1][2] * col[2][1]) -
         col[1][0] * (col[0][1] * col[2][2] - col[0][2] * col[2][1]) +
         col[2][0] * (col[0][1] * col[1][2] - col[0][2] * col[1][1]);
}

double hoe_min_jacobian(const HighOrderMesh& h) {
  // strictly interior lattice: where a coarse corner node sits on a smooth
  // boundary arc, the two edge tangents meet at a straight angle and the
  // corner Jacobian is analytically zero, so corners are not sampled
  const int n = h.p + 2;  // points per axis
  double mn = std::numeric_limits<double>::max();
  const int kmax = h.dim == 3 ? n : 1;
  for (int e = 0; e < h.n_elements(); ++e)
    for (int k = 0; k < kmax; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const Vec3 ref = {(i + 0.5) / n, (j + 0.5) / n,
                            h.dim == 3 ? (k + 0.5) / n : 0.0};
          mn = std::min(mn, hoe_jacobian(h, e, ref));
        }
  return mn;
}

double edge_deviation(const HighOrderMesh& h, const std::string& marker,
                      const ImplicitShape& shape, int samples) {
  if (samples < 2)
    throw std::invalid_argument("edge_deviation: need at least 2 samples");
  const int n1 = h.p + 1;
  std::vector<double> va(n1), vb(n1);
  double dev = 0.0;
  bool found = false;
  for (const auto& f : h.facets) {
    if (h.markers[f.marker].name != marker) continue;
    found = true;
    for (int sb = 0; sb < (h.dim == 3 ? samples : 1); ++sb) {
      if (h.dim == 3) lagrange_1d(h.p, double(sb) / (samples - 1), vb.data());
      for (int sa = 0; sa < samples; ++sa) {
        lagrange_1d(h.p, double(sa) / (samples - 1), va.data());
        Vec3 x = {0, 0, 0};
        if (h.dim == 2) {
          for (int a = 0; a < n1; ++a) x = x + va[a] * h.nodes[f.nodes[a]];
        } else {
          for (int b = 0; b < n1; ++b)
            for (int a = 0; a < n1; ++a)
              x = x + (va[a] * vb[b]) * h.nodes[f.nodes[b * n1 + a]];
        }
        dev = std::max(dev, shape.distance(x));
      }
    }
  }
  if (!found)
    throw std::invalid_argument("edge_deviation: no facet carries marker '" +
                                marker + "'");
  return dev;
}

double edge_deviation(const Mesh& m, const std::string& marker,
                      const ImplicitShape& shape, int samples) {
  if (samples < 2)
    throw std::invalid_argument("edge_deviation: need at least 2 samples");
  double dev = 0.0;
  bool found = false;
  for (const auto& f : m.facets) {
    if (m.markers[f.marker].name != marker) continue;
    found = true;
    const auto& el = m.elements[f.element];
    if (m.dim == 2) {
      const auto& e = quad_edge_corners()[f.local_facet];
      const Vec3 a = m.nodes[el[e[0]]], b = m.nodes[el[e[1]]];
      for (int s = 0; s < samples; ++s) {
        const double t = double(s) / (samples - 1);
        dev = std::max(dev, shape.distance(a + t * (b - a)));
      }
    } else {
      const auto& fc = hex_face_corners()[f.local_facet];
      const Vec3 c0 = m.nodes[el[fc[0]]], c1 = m.nodes[el[fc[1]]];
      const Vec3 c2 = m.nodes[el[fc[2]]], c3 = m.nodes[el[fc[3]]];
      for (int sb = 0; sb < samples; ++sb)
        for (int sa = 0; sa < samples; ++sa) {
          const double u = double(sa) / (samples - 1);
          const double v = double(sb) / (samples - 1);
          const Vec3 x = ((1 - u) * (1 - v)) * c0 + (u * (1 - v)) * c1 +
                         (u * v) * c2 + ((1 - u) * v) * c3;
          dev = std::max(dev, shape.distance(x));
        }
    }
  }
  if (!found)
    throw std::invalid_argument("edge_deviation: no facet carries marker '" +
                                marker + "'");
  return dev;
}

}  // namespace defmesh
