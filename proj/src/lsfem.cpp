#include "defmesh/lsfem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace defmesh {

void ConstraintSet::add(int node, int component, double value) {
  dirichlet.push_back({node, component, value});
}

void ConstraintSet::validate() const {
  std::map<std::pair<int, int>, double> seen;
  for (const auto& d : dirichlet) {
    auto key = std::make_pair(d.node, d.component);
    auto it = seen.find(key);
    if (it != seen.end() && it->second != d.value) {
      std::ostringstream os;
      os << "constraints: node " << d.node << " component " << d.component
         << " carries conflicting values " << it->second << " and " << d.value;
      throw std::invalid_argument(os.str());
    }
    seen.emplace(key, d.value);
  }
}

namespace {

constexpr double kGaussA = 0.21132486540518713;
constexpr double kGaussB = 0.7886751345948129;

// inverse of the dim x dim matrix M[r][s] = d x_r / d ref_s
void invert(int dim, const std::array<Vec3, 3>& jac_cols, double det,
            double Minv[3][3]) {
  // jac_cols[s][r] = d x_r / d ref_s
  if (dim == 2) {
    const double a = jac_cols[0][0], b = jac_cols[1][0];
    const double c = jac_cols[0][1], d = jac_cols[1][1];
    Minv[0][0] = d / det;
    Minv[0][1] = -c / det;
    Minv[1][0] = -b / det;
    Minv[1][1] = a / det;
    return;
  }
  double M[3][3];
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) M[r][s] = jac_cols[s][r];
  Minv[0][0] = (M[1][1] * M[2][2] - M[1][2] * M[2][1]) / det;
  Minv[0][1] = (M[0][2] * M[2][1] - M[0][1] * M[2][2]) / det;
  Minv[0][2] = (M[0][1] * M[1][2] - M[0][2] * M[1][1]) / det;
  Minv[1][0] = (M[1][2] * M[2][0] - M[1][0] * M[2][2]) / det;
  Minv[1][1] = (M[0][0] * M[2][2] - M[0][2] * M[2][0]) / det;
  Minv[1][2] = (M[0][2] * M[1][0] - M[0][0] * M[1][2]) / det;
  Minv[2][0] = (M[1][0] * M[2][1] - M[1][1] * M[2][0]) / det;
  Minv[2][1] = (M[0][1] * M[2][0] - M[0][0] * M[2][1]) / det;
  Minv[2][2] = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) / det;
}

}  // namespace

LsfemSystem assemble(const Mesh& m, const RhsField& g) {
  if (static_cast<int>(g.size()) != m.n_nodes())
    throw std::invalid_argument("assemble: rhs field size mismatch");

  const int dim = m.dim;
  const int nc = m.nodes_per_elem();
  const int ndof_e = nc * dim;
  const int n = m.n_nodes() * dim;
  const int n_curl = dim == 2 ? 1 : 3;

  std::vector<Vec3> qpts;
  {
    const double gp[2] = {kGaussA, kGaussB};
    if (dim == 2) {
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) qpts.push_back({gp[i], gp[j], 0});
    } else {
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
          for (int i = 0; i < 2; ++i) qpts.push_back({gp[i], gp[j], gp[k]});
    }
  }
  const double qw = 1.0 / qpts.size();

  std::vector<std::tuple<int, int, double>> triplets;
  triplets.reserve(std::size_t(m.n_elements()) * ndof_e * ndof_e);
  std::vector<double> rhs(n, 0.0);

  std::vector<double> Ae(ndof_e * ndof_e);
  std::vector<double> be(ndof_e);
  std::vector<double> D(ndof_e);
  std::vector<double> C(3 * ndof_e);
  double N[8];
  Vec3 dN[8];
  std::array<Vec3, 3> jac;
  double Minv[3][3];

  for (int e = 0; e < m.n_elements(); ++e) {
    std::fill(Ae.begin(), Ae.end(), 0.0);
    std::fill(be.begin(), be.end(), 0.0);
    const auto& el = m.elements[e];

    for (const auto& qp : qpts) {
      const double det = element_jacobian(m, e, qp, &jac);
      if (det <= 0.0) {
        std::ostringstream os;
        os << "assemble: non-positive Jacobian " << det << " in element " << e;
        throw std::runtime_error(os.str());
      }
      invert(dim, jac, det, Minv);
      shape_values(dim, qp, N);
      shape_gradients(dim, qp, dN);

      double gq = 0.0;
      Vec3 gradN[8];
      for (int a = 0; a < nc; ++a) {
        gq += N[a] * g[el[a]];
        for (int r = 0; r < dim; ++r) {
          double s = 0.0;
          for (int d = 0; d < dim; ++d) s += dN[a][d] * Minv[d][r];
          gradN[a][r] = s;
        }
      }

      std::fill(D.begin(), D.end(), 0.0);
      std::fill(C.begin(), C.begin() + n_curl * ndof_e, 0.0);
      for (int a = 0; a < nc; ++a) {
        for (int c = 0; c < dim; ++c) D[a * dim + c] = gradN[a][c];
        if (dim == 2) {
          C[a * dim + 0] = -gradN[a][1];
          C[a * dim + 1] = gradN[a][0];
        } else {
          // (curl u)_x = dy u_z - dz u_y, cyclic
          C[0 * ndof_e + a * dim + 2] = gradN[a][1];
          C[0 * ndof_e + a * dim + 1] = -gradN[a][2];
          C[1 * ndof_e + a * dim + 0] = gradN[a][2];
          C[1 * ndof_e + a * dim + 2] = -gradN[a][0];
          C[2 * ndof_e + a * dim + 1] = gradN[a][0];
          C[2 * ndof_e + a * dim + 0] = -gradN[a][1];
        }
      }

      const double w = qw * det;
      for (int i = 0; i < ndof_e; ++i) {
        for (int j = 0; j < ndof_e; ++j) {
          double v = D[i] * D[j];
          for (int r = 0; r < n_curl; ++r)
            v += C[r * ndof_e + i] * C[r * ndof_e + j];
          Ae[i * ndof_e + j] += w * v;
        }
        be[i] += w * gq * D[i];
      }
    }

    for (int i = 0; i < ndof_e; ++i) {
      const int gi = el[i / dim] * dim + i % dim;
      rhs[gi] += be[i];
      for (int j = 0; j < ndof_e; ++j) {
        const int gj = el[j / dim] * dim + j % dim;
        triplets.emplace_back(gi, gj, Ae[i * ndof_e + j]);
      }
    }
  }

  LsfemSystem sys;
  sys.matrix = SparseMatrix::from_triplets(n, n, triplets);
  sys.rhs = std::move(rhs);
  sys.dim = dim;
  return sys;
}

void apply_constraints(LsfemSystem& sys, const ConstraintSet& c) {
  c.validate();
  const int n = sys.matrix.rows();
  std::vector<char> constrained(n, 0);
  std::vector<double> value(n, 0.0);
  for (const auto& d : c.dirichlet) {
    if (d.component < 0 || d.component >= sys.dim)
      throw std::invalid_argument("apply_constraints: bad component");
    const int dof = d.node * sys.dim + d.component;
    if (dof < 0 || dof >= n)
      throw std::invalid_argument("apply_constraints: dof out of range");
    constrained[dof] = 1;
    value[dof] = d.value;
  }

  const auto& off = sys.matrix.row_offsets();
  const auto& col = sys.matrix.col_indices();
  auto& val = sys.matrix.mutable_values();

  for (int i = 0; i < n; ++i) {
    if (constrained[i]) {
      for (int k = off[i]; k < off[i + 1]; ++k)
        val[k] = (col[k] == i) ? 1.0 : 0.0;
      sys.rhs[i] = value[i];
    } else {
      for (int k = off[i]; k < off[i + 1]; ++k) {
        if (constrained[col[k]]) {
          sys.rhs[i] -= val[k] * value[col[k]];
          val[k] = 0.0;
        }
      }
    }
  }
}

NodalField solve_velocity(const Mesh& m, const RhsField& g,
                          const ConstraintSet& c, double tol,
                          SolveReport* report) {
  c.validate();
  LsfemSystem sys = assemble(m, g);
  apply_constraints(sys, c);

  std::vector<double> x(sys.rhs.size(), 0.0);
  CgReport rep = cg_solve(sys.matrix, sys.rhs, x, tol);
  if (report) report->cg = rep;
  if (!rep.converged) {
    std::ostringstream os;
    os << "solve_velocity: CG did not converge, " << rep.iterations
       << " iterations, relative residual " << rep.relative_residual;
    throw std::runtime_error(os.str());
  }

  NodalField u;
  u.dim = m.dim;
  u.values.assign(m.n_nodes(), Vec3{0, 0, 0});
  for (int i = 0; i < m.n_nodes(); ++i)
    for (int d = 0; d < m.dim; ++d) u.values[i][d] = x[i * m.dim + d];
  // re-inject exact Dirichlet values
  for (const auto& d : c.dirichlet) u.values[d.node][d.component] = d.value;
  return u;
}

}  // namespace defmesh
