#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "spca/dense_symmetric.hpp"

namespace spca {

/// One stored entry of a symmetric matrix, given by its upper-triangle
/// coordinates (row <= col).
struct SymmetricEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Sparse symmetric matrix: a dense diagonal plus the strictly upper
/// triangular nonzeros in compressed sparse row layout. Explicit zeros are
/// never stored.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  /// Zero matrix of dimension p.
  explicit SparseSymmetric(std::size_t p);

  /// Builds from upper-triangle entries in any order. Entries with
  /// row > col are transposed; duplicates are summed; zeros are dropped.
  static SparseSymmetric from_entries(std::size_t p, std::vector<SymmetricEntry> entries);

  /// Nonzero pattern of a dense matrix (upper triangle authoritative).
  static SparseSymmetric from_dense(const DenseSymmetric& m);

  std::size_t dim() const { return static_cast<std::size_t>(diag_.size()); }

  /// Number of nonzeros of the full p x p matrix (off-diagonal pairs count twice).
  std::size_t nnz() const;
  std::size_t offdiag_pairs() const { return values_.size(); }

  const Eigen::VectorXd& diagonal() const { return diag_; }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  /// Entry (i, j), zero when not stored.
  double operator()(std::size_t i, std::size_t j) const;

  /// y = M x. Sequential and deterministic.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  DenseSymmetric to_dense() const;
  SparseSymmetric operator-() const;

  /// Frobenius norm of the full matrix.
  double frobenius_norm() const;

  /// Visits every stored entry as (row, col, value) with row <= col,
  /// diagonal entries included when nonzero.
  template <typename Fn>
  void for_each_entry(Fn&& fn) const {
    for (std::size_t i = 0; i < dim(); ++i) {
      const double d = diag_(static_cast<Eigen::Index>(i));
      if (d != 0.0) fn(i, i, d);
      for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) fn(i, col_idx_[e], values_[e]);
    }
  }

 private:
  friend class SparseSymmetricBuilder;

  Eigen::VectorXd diag_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// Row-by-row builder. Rows must be appended in increasing order and each
/// row's columns in increasing order, all strictly above the diagonal.
class SparseSymmetricBuilder {
 public:
  explicit SparseSymmetricBuilder(std::size_t p);

  void set_diagonal(std::size_t i, double value);
  /// Appends (row, col) with row < col; zeros are skipped.
  void push(std::size_t row, std::size_t col, double value);
  SparseSymmetric finish() &&;

 private:
  SparseSymmetric m_;
  std::size_t current_row_ = 0;
};

}  // namespace spca
