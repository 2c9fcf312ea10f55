#ifndef DEFMESH_LINALG_HPP
#define DEFMESH_LINALG_HPP

#include <cstddef>
#include <vector>

namespace defmesh {

// Compressed sparse row matrix. Within each row, column indices are
// strictly increasing. Built once from a triplet list, immutable after
// construction except for the targeted edits used by constraint
// elimination.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int n_rows, int n_cols, std::vector<int> row_offsets,
               std::vector<int> col_indices, std::vector<double> values);

  // Accumulates duplicate (i,j) entries by summation.
  static SparseMatrix from_triplets(
      int n_rows, int n_cols,
      const std::vector<std::tuple<int, int, double>>& triplets);

  int rows() const { return n_rows_; }
  int cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<int>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  // Value at (i,j), zero if not stored.
  double at(int i, int j) const;
  // Pointer to stored entry (i,j), nullptr if not in the pattern.
  double* find(int i, int j);

  std::vector<double> diagonal() const;

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<int> row_offsets_;
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

std::vector<double> spmv(const SparseMatrix& A, const std::vector<double>& x);

struct CgReport {
  int iterations = 0;
  double final_residual_norm = 0.0;  // recomputed ||Ax-b|| via spmv
  double relative_residual = 0.0;    // recomputed ||Ax-b|| / ||b||
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradients. A must be SPD.
// Throws std::invalid_argument on a zero diagonal entry.
CgReport cg_solve(const SparseMatrix& A, const std::vector<double>& b,
                  std::vector<double>& x, double tol = 1e-10,
                  int max_iter = -1);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace defmesh

#endif
