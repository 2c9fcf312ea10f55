#include "defmesh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace defmesh {

SparseMatrix::SparseMatrix(int n_rows, int n_cols, std::vector<int> row_offsets,
                           std::vector<int> col_indices,
                           std::vector<double> values)
    : n_rows_(n_rows),
      n_cols_(n_cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (static_cast<int>(row_offsets_.size()) != n_rows_ + 1)
    throw std::invalid_argument("SparseMatrix: row_offsets size mismatch");
  for (int i = 0; i < n_rows_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1])
      throw std::invalid_argument("SparseMatrix: row_offsets not monotone");
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (col_indices_[k] < 0 || col_indices_[k] >= n_cols_)
        throw std::invalid_argument("SparseMatrix: column index out of range");
      if (k > row_offsets_[i] && col_indices_[k - 1] >= col_indices_[k])
        throw std::invalid_argument(
            "SparseMatrix: columns not strictly increasing in row");
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(
    int n_rows, int n_cols,
    const std::vector<std::tuple<int, int, double>>& triplets) {
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     const auto& ta = triplets[a];
                     const auto& tb = triplets[b];
                     if (std::get<0>(ta) != std::get<0>(tb))
                       return std::get<0>(ta) < std::get<0>(tb);
                     return std::get<1>(ta) < std::get<1>(tb);
                   });

  std::vector<int> offsets(n_rows + 1, 0);
  std::vector<int> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());

  int prev_r = -1, prev_c = -1;
  for (std::size_t k : order) {
    auto [r, c, v] = triplets[k];
    if (r < 0 || r >= n_rows || c < 0 || c >= n_cols)
      throw std::invalid_argument("from_triplets: index out of range");
    if (r == prev_r && c == prev_c) {
      vals.back() += v;
    } else {
      cols.push_back(c);
      vals.push_back(v);
      offsets[r + 1]++;
      prev_r = r;
      prev_c = c;
    }
  }
  for (int i = 0; i < n_rows; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(n_rows, n_cols, std::move(offsets), std::move(cols),
                      std::move(vals));
}

double SparseMatrix::at(int i, int j) const {
  for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
    if (col_indices_[k] == j) return values_[k];
  return 0.0;
}

double* SparseMatrix::find(int i, int j) {
  const int lo = row_offsets_[i], hi = row_offsets_[i + 1];
  auto it = std::lower_bound(col_indices_.begin() + lo,
                             col_indices_.begin() + hi, j);
  if (it != col_indices_.begin() + hi && *it == j)
    return &values_[it - col_indices_.begin()];
  return nullptr;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_rows_, 0.0);
  for (int i = 0; i < n_rows_; ++i)
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k)
      if (col_indices_[k] == i) d[i] = values_[k];
  return d;
}

std::vector<double> spmv(const SparseMatrix& A, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != A.cols()) {
    std::ostringstream os;
    os << "spmv: dimension mismatch, matrix is " << A.rows() << "x" << A.cols()
       << ", vector has length " << x.size();
    throw std::invalid_argument(os.str());
  }
  std::vector<double> y(A.rows(), 0.0);
  const auto& off = A.row_offsets();
  const auto& col = A.col_indices();
  const auto& val = A.values();
  for (int i = 0; i < A.rows(); ++i) {
    double s = 0.0;
    for (int k = off[i]; k < off[i + 1]; ++k) s += val[k] * x[col[k]];
    y[i] = s;
  }
  return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

CgReport cg_solve(const SparseMatrix& A, const std::vector<double>& b,
                  std::vector<double>& x, double tol, int max_iter) {
  const int n = A.rows();
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("cg_solve: rhs size mismatch");
  if (tol <= 0.0) throw std::invalid_argument("cg_solve: tol must be > 0");
  if (max_iter < 0) max_iter = 10 * n;
  if (static_cast<int>(x.size()) != n) x.assign(n, 0.0);

  std::vector<double> diag = A.diagonal();
  for (int i = 0; i < n; ++i)
    if (diag[i] == 0.0)
      throw std::invalid_argument("cg_solve: zero diagonal entry at row " +
                                  std::to_string(i));

  std::vector<double> r = spmv(A, x);
  for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];

  const double bnorm = norm2(b);
  const double stop = tol * (bnorm > 0.0 ? bnorm : 1.0);

  CgReport rep;
  std::vector<double> z(n), p(n), Ap;
  for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);

  double rnorm = norm2(r);
  int it = 0;
  while (rnorm > stop && it < max_iter) {
    Ap = spmv(A, p);
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0) break;  // loss of positive definiteness
    const double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    for (int i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rnorm = norm2(r);
    ++it;
  }

  // Independent residual recomputation; the report never trusts the
  // recurrence.
  std::vector<double> res = spmv(A, x);
  for (int i = 0; i < n; ++i) res[i] -= b[i];
  rep.iterations = it;
  rep.final_residual_norm = norm2(res);
  rep.relative_residual =
      bnorm > 0.0 ? rep.final_residual_norm / bnorm : rep.final_residual_norm;
  rep.converged = rep.final_residual_norm <= stop;
  return rep;
}

}  // namespace defmesh
