#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "defmesh/hoe.hpp"

namespace defmesh {

namespace {

const int kQuadCorner[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
const int kHexCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                              {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

// edge corner pairs; interior edge nodes run from the first to the second
const int kMshHexEdge[12][2] = {{0, 1}, {0, 3}, {0, 4}, {1, 2},
                                {1, 5}, {2, 3}, {2, 6}, {3, 7},
                                {4, 5}, {4, 7}, {5, 6}, {6, 7}};
const int kMshHexFace[6][4] = {{0, 3, 2, 1}, {0, 1, 5, 4}, {0, 4, 7, 3},
                               {1, 2, 6, 5}, {2, 3, 7, 6}, {4, 5, 6, 7}};
const int kVtkHexEdge[12][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3},
                                {4, 5}, {5, 6}, {7, 6}, {4, 7},
                                {0, 4}, {1, 5}, {3, 7}, {2, 6}};

int flat2(int p, int i, int j) { return i + (p + 1) * j; }
int flat3(int p, int i, int j, int k) {
  return i + (p + 1) * (j + (p + 1) * k);
}

void check_order(int p) {
  if (p != 1 && p != 3)
    throw std::invalid_argument("export: only orders 1 and 3 are supported");
}

std::vector<int> msh_perm_2d(int p) {
  std::vector<int> perm;
  for (int c = 0; c < 4; ++c)
    perm.push_back(flat2(p, kQuadCorner[c][0] * p, kQuadCorner[c][1] * p));
  if (p == 1) return perm;
  // edge interiors in edge order, first corner to second
  for (const auto& e : quad_edge_corners()) {
    const int* a = kQuadCorner[e[0]];
    const int* b = kQuadCorner[e[1]];
    for (int s = 1; s < p; ++s)
      perm.push_back(flat2(p, a[0] * p + s * (b[0] - a[0]),
                           a[1] * p + s * (b[1] - a[1])));
  }
  // interior as a recursively ordered sub-quad (p=3: order-1 corners)
  const int in[4][2] = {{1, 1}, {2, 1}, {2, 2}, {1, 2}};
  for (const auto& q : in) perm.push_back(flat2(p, q[0], q[1]));
  return perm;
}

std::vector<int> msh_perm_3d(int p) {
  std::vector<int> perm;
  for (int c = 0; c < 8; ++c)
    perm.push_back(flat3(p, kHexCorner[c][0] * p, kHexCorner[c][1] * p,
                         kHexCorner[c][2] * p));
  if (p == 1) return perm;
  for (const auto& e : kMshHexEdge) {
    const int* a = kHexCorner[e[0]];
    const int* b = kHexCorner[e[1]];
    for (int s = 1; s < p; ++s)
      perm.push_back(flat3(p, a[0] * p + s * (b[0] - a[0]),
                           a[1] * p + s * (b[1] - a[1]),
                           a[2] * p + s * (b[2] - a[2])));
  }
  // face interiors: recursive sub-quad order within each face frame
  const int in2[4][2] = {{1, 1}, {2, 1}, {2, 2}, {1, 2}};
  for (const auto& f : kMshHexFace) {
    const int* c0 = kHexCorner[f[0]];
    const int* c1 = kHexCorner[f[1]];
    const int* c3 = kHexCorner[f[3]];
    for (const auto& q : in2) {
      int idx[3];
      for (int d = 0; d < 3; ++d)
        idx[d] = c0[d] * p + q[0] * (c1[d] - c0[d]) + q[1] * (c3[d] - c0[d]);
      perm.push_back(flat3(p, idx[0], idx[1], idx[2]));
    }
  }
  // volume interior: recursive inner hex (p=3: order-1 corners)
  const int in3[8][3] = {{1, 1, 1}, {2, 1, 1}, {2, 2, 1}, {1, 2, 1},
                         {1, 1, 2}, {2, 1, 2}, {2, 2, 2}, {1, 2, 2}};
  for (const auto& q : in3) perm.push_back(flat3(p, q[0], q[1], q[2]));
  return perm;
}

std::vector<int> vtk_perm_2d(int p) {
  std::vector<int> perm;
  for (int c = 0; c < 4; ++c)
    perm.push_back(flat2(p, kQuadCorner[c][0] * p, kQuadCorner[c][1] * p));
  if (p == 1) return perm;
  // edges bottom, right, top, left, interiors along the increasing axis
  for (int s = 1; s < p; ++s) perm.push_back(flat2(p, s, 0));
  for (int s = 1; s < p; ++s) perm.push_back(flat2(p, p, s));
  for (int s = 1; s < p; ++s) perm.push_back(flat2(p, s, p));
  for (int s = 1; s < p; ++s) perm.push_back(flat2(p, 0, s));
  // interior lexicographic
  for (int j = 1; j < p; ++j)
    for (int i = 1; i < p; ++i) perm.push_back(flat2(p, i, j));
  return perm;
}

std::vector<int> vtk_perm_3d(int p) {
  std::vector<int> perm;
  for (int c = 0; c < 8; ++c)
    perm.push_back(flat3(p, kHexCorner[c][0] * p, kHexCorner[c][1] * p,
                         kHexCorner[c][2] * p));
  if (p == 1) return perm;
  for (const auto& e : kVtkHexEdge) {
    const int* a = kHexCorner[e[0]];
    const int* b = kHexCorner[e[1]];
    for (int s = 1; s < p; ++s)
      perm.push_back(flat3(p, a[0] * p + s * (b[0] - a[0]),
                           a[1] * p + s * (b[1] - a[1]),
                           a[2] * p + s * (b[2] - a[2])));
  }
  // faces x-, x+, y-, y+, z-, z+; interiors lexicographic in the
  // remaining axes
  for (int k = 1; k < p; ++k)
    for (int j = 1; j < p; ++j) perm.push_back(flat3(p, 0, j, k));
  for (int k = 1; k < p; ++k)
    for (int j = 1; j < p; ++j) perm.push_back(flat3(p, p, j, k));
  for (int k = 1; k < p; ++k)
    for (int i = 1; i < p; ++i) perm.push_back(flat3(p, i, 0, k));
  for (int k = 1; k < p; ++k)
    for (int i = 1; i < p; ++i) perm.push_back(flat3(p, i, p, k));
  for (int j = 1; j < p; ++j)
    for (int i = 1; i < p; ++i) perm.push_back(flat3(p, i, j, 0));
  for (int j = 1; j < p; ++j)
    for (int i = 1; i < p; ++i) perm.push_back(flat3(p, i, j, p));
  // volume interior lexicographic
  for (int k = 1; k < p; ++k)
    for (int j = 1; j < p; ++j)
      for (int i = 1; i < p; ++i) perm.push_back(flat3(p, i, j, k));
  return perm;
}

struct FlatMesh {
  int dim = 2;
  int p = 1;
  const std::vector<Vec3>* nodes = nullptr;
  std::vector<std::vector<int>> elements;  // lattice order
};

FlatMesh flatten(const Mesh& m) {
  FlatMesh fm;
  fm.dim = m.dim;
  fm.p = 1;
  fm.nodes = &m.nodes;
  for (int e = 0; e < m.n_elements(); ++e) {
    const auto& el = m.elements[e];
    std::vector<int> lat;
    if (m.dim == 2)
      lat = {el[0], el[1], el[3], el[2]};  // lex from CCW corners
    else
      lat = {el[0], el[1], el[3], el[2], el[4], el[5], el[7], el[6]};
    fm.elements.push_back(std::move(lat));
  }
  return fm;
}

FlatMesh flatten(const HighOrderMesh& h) {
  FlatMesh fm;
  fm.dim = h.dim;
  fm.p = h.p;
  fm.nodes = &h.nodes;
  fm.elements = h.elements;
  return fm;
}

void write_msh(const FlatMesh& fm, const std::string& path) {
  check_order(fm.p);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("export_msh: cannot open " + path);
  os.precision(17);

  Vec3 lo = (*fm.nodes)[0], hi = (*fm.nodes)[0];
  for (const auto& x : *fm.nodes)
    for (int d = 0; d < 3; ++d) {
      lo[d] = std::min(lo[d], x[d]);
      hi[d] = std::max(hi[d], x[d]);
    }

  os << "$MeshFormat\n4.1 0 8\n$EndMeshFormat\n";
  os << "$Entities\n";
  if (fm.dim == 2) {
    os << "0 0 1 0\n1 " << lo[0] << ' ' << lo[1] << ' ' << lo[2] << ' '
       << hi[0] << ' ' << hi[1] << ' ' << hi[2] << " 0 0\n";
  } else {
    os << "0 0 0 1\n1 " << lo[0] << ' ' << lo[1] << ' ' << lo[2] << ' '
       << hi[0] << ' ' << hi[1] << ' ' << hi[2] << " 0 0\n";
  }
  os << "$EndEntities\n";

  const std::size_t nn = fm.nodes->size();
  os << "$Nodes\n1 " << nn << " 1 " << nn << '\n';
  os << fm.dim << " 1 0 " << nn << '\n';
  for (std::size_t i = 0; i < nn; ++i) os << i + 1 << '\n';
  for (const auto& x : *fm.nodes)
    os << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
  os << "$EndNodes\n";

  int type;
  if (fm.dim == 2)
    type = fm.p == 1 ? 3 : 36;
  else
    type = fm.p == 1 ? 5 : 92;
  const auto perm = lattice_to_msh_permutation(fm.dim, fm.p);
  const std::size_t ne = fm.elements.size();
  os << "$Elements\n1 " << ne << " 1 " << ne << '\n';
  os << fm.dim << " 1 " << type << ' ' << ne << '\n';
  for (std::size_t e = 0; e < ne; ++e) {
    os << e + 1;
    for (int k : perm) os << ' ' << fm.elements[e][k] + 1;
    os << '\n';
  }
  os << "$EndElements\n";
}

void write_vtk(const FlatMesh& fm, const std::string& path) {
  check_order(fm.p);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("export_vtk: cannot open " + path);
  os.precision(17);

  os << "# vtk DataFile Version 3.0\n";
  os << "deformation mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << fm.nodes->size() << " double\n";
  for (const auto& x : *fm.nodes)
    os << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';

  const auto perm = lattice_to_vtk_permutation(fm.dim, fm.p);
  const std::size_t ne = fm.elements.size();
  const std::size_t per = perm.size();
  os << "CELLS " << ne << ' ' << ne * (per + 1) << '\n';
  for (const auto& el : fm.elements) {
    os << per;
    for (int k : perm) os << ' ' << el[k];
    os << '\n';
  }
  int type;
  if (fm.dim == 2)
    type = fm.p == 1 ? 9 : 70;  // quad / Lagrange quadrilateral
  else
    type = fm.p == 1 ? 12 : 72;  // hex / Lagrange hexahedron
  os << "CELL_TYPES " << ne << '\n';
  for (std::size_t e = 0; e < ne; ++e) os << type << '\n';
}

// unique element edges as lattice node index lists along the edge
std::vector<std::vector<int>> unique_edges(const FlatMesh& fm) {
  std::vector<std::vector<int>> edges;
  std::vector<std::pair<int, int>> seen;
  for (const auto& el : fm.elements) {
    for (const auto& e : quad_edge_corners()) {
      const int* a = kQuadCorner[e[0]];
      const int* b = kQuadCorner[e[1]];
      std::vector<int> nodes;
      for (int s = 0; s <= fm.p; ++s)
        nodes.push_back(el[flat2(fm.p, a[0] * fm.p + s * (b[0] - a[0]),
                                 a[1] * fm.p + s * (b[1] - a[1]))]);
      const std::pair<int, int> key = {
          std::min(nodes.front(), nodes.back()),
          std::max(nodes.front(), nodes.back())};
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      edges.push_back(std::move(nodes));
    }
  }
  return edges;
}

void write_svg(const FlatMesh& fm, const std::string& path) {
  if (fm.dim != 2)
    throw std::invalid_argument(
        "plot_svg: 2D meshes only; use the VTK export for 3D");
  check_order(fm.p);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("plot_svg: cannot open " + path);

  Vec3 lo = (*fm.nodes)[0], hi = (*fm.nodes)[0];
  for (const auto& x : *fm.nodes)
    for (int d = 0; d < 2; ++d) {
      lo[d] = std::min(lo[d], x[d]);
      hi[d] = std::max(hi[d], x[d]);
    }
  const double span = std::max(hi[0] - lo[0], hi[1] - lo[1]);
  const double margin = 0.05 * (span > 0 ? span : 1.0);
  const double scale = 512.0 / (span + 2 * margin);
  auto px = [&](double v) { return (v - lo[0] + margin) * scale; };
  auto py = [&](double v) { return (hi[1] - v + margin) * scale; };

  const double w = (hi[0] - lo[0] + 2 * margin) * scale;
  const double hgt = (hi[1] - lo[1] + 2 * margin) * scale;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << hgt << "\" viewBox=\"0 0 " << w << ' ' << hgt
     << "\">\n";

  const int kSamples = 16;  // points per cubic edge
  std::vector<double> basis(fm.p + 1);
  for (const auto& edge : unique_edges(fm)) {
    os << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
    for (int s = 0; s < (fm.p == 1 ? 2 : kSamples); ++s) {
      const double t = double(s) / (fm.p == 1 ? 1 : kSamples - 1);
      lagrange_1d(fm.p, t, basis.data());
      Vec3 x = {0, 0, 0};
      for (int a = 0; a <= fm.p; ++a)
        x = x + basis[a] * (*fm.nodes)[edge[a]];
      os << (s == 0 ? 'M' : 'L') << px(x[0]) << ' ' << py(x[1]) << ' ';
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

}  // namespace

std::vector<int> lattice_to_msh_permutation(int dim, int p) {
  check_order(p);
  return dim == 2 ? msh_perm_2d(p) : msh_perm_3d(p);
}

std::vector<int> lattice_to_vtk_permutation(int dim, int p) {
  check_order(p);
  return dim == 2 ? vtk_perm_2d(p) : vtk_perm_3d(p);
}

void export_msh(const HighOrderMesh& h, const std::string& path) {
  write_msh(flatten(h), path);
}
void export_msh(const Mesh& m, const std::string& path) {
  write_msh(flatten(m), path);
}
void export_vtk(const HighOrderMesh& h, const std::string& path) {
  write_vtk(flatten(h), path);
}
void export_vtk(const Mesh& m, const std::string& path) {
  write_vtk(flatten(m), path);
}
void plot_svg(const HighOrderMesh& h, const std::string& path) {
  write_svg(flatten(h), path);
}
void plot_svg(const Mesh& m, const std::string& path) {
  write_svg(flatten(m), path);
}

}  // namespace defmesh
