#include "spca/sparse_symmetric.hpp"

#include <algorithm>
#include <cmath>

#include "spca/error.hpp"

namespace spca {

SparseSymmetric::SparseSymmetric(std::size_t p)
    : diag_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p))), row_ptr_(p + 1, 0) {}

SparseSymmetric SparseSymmetric::from_entries(std::size_t p, std::vector<SymmetricEntry> entries) {
  for (auto& e : entries) {
    if (e.row >= p || e.col >= p) throw IndexOutOfRange("sparse entry index out of range");
    if (e.row > e.col) std::swap(e.row, e.col);
  }
  std::sort(entries.begin(), entries.end(), [](const SymmetricEntry& a, const SymmetricEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSymmetricBuilder builder(p);
  std::size_t k = 0;
  while (k < entries.size()) {
    const std::size_t i = entries[k].row;
    const std::size_t j = entries[k].col;
    double sum = 0.0;
    while (k < entries.size() && entries[k].row == i && entries[k].col == j) sum += entries[k++].value;
    if (i == j) {
      builder.set_diagonal(i, sum);
    } else {
      builder.push(i, j, sum);
    }
  }
  return std::move(builder).finish();
}

SparseSymmetric SparseSymmetric::from_dense(const DenseSymmetric& m) {
  const std::size_t p = m.dim();
  SparseSymmetricBuilder builder(p);
  for (std::size_t i = 0; i < p; ++i) {
    builder.set_diagonal(i, m(i, i));
    for (std::size_t j = i + 1; j < p; ++j) builder.push(i, j, m(i, j));
  }
  return std::move(builder).finish();
}

std::size_t SparseSymmetric::nnz() const {
  const auto diag_nnz = static_cast<std::size_t>((diag_.array() != 0.0).count());
  return 2 * values_.size() + diag_nnz;
}

double SparseSymmetric::operator()(std::size_t i, std::size_t j) const {
  if (i >= dim() || j >= dim()) throw IndexOutOfRange("sparse entry index out of range");
  if (i == j) return diag_(static_cast<Eigen::Index>(i));
  if (i > j) std::swap(i, j);
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

void SparseSymmetric::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const std::size_t p = dim();
  if (static_cast<std::size_t>(x.size()) != p) throw DimensionMismatch("matvec dimension mismatch");
  y = diag_.cwiseProduct(x);
  for (std::size_t i = 0; i < p; ++i) {
    const double xi = x(static_cast<Eigen::Index>(i));
    double acc = 0.0;
    for (std::size_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e) {
      const auto j = static_cast<Eigen::Index>(col_idx_[e]);
      acc += values_[e] * x(j);
      y(j) += values_[e] * xi;
    }
    y(static_cast<Eigen::Index>(i)) += acc;
  }
}

Eigen::VectorXd SparseSymmetric::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  apply(x, y);
  return y;
}

DenseSymmetric SparseSymmetric::to_dense() const {
  const auto p = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
  for_each_entry([&](std::size_t i, std::size_t j, double v) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
  });
  return DenseSymmetric::from_upper(std::move(m));
}

SparseSymmetric SparseSymmetric::operator-() const {
  SparseSymmetric out = *this;
  out.diag_ = -out.diag_;
  for (auto& v : out.values_) v = -v;
  return out;
}

double SparseSymmetric::frobenius_norm() const {
  double off = 0.0;
  for (const double v : values_) off += v * v;
  return std::sqrt(diag_.squaredNorm() + 2.0 * off);
}

SparseSymmetricBuilder::SparseSymmetricBuilder(std::size_t p) : m_(p) {
  if (p == 0) throw DimensionMismatch("sparse symmetric matrix needs p >= 1");
}

void SparseSymmetricBuilder::set_diagonal(std::size_t i, double value) {
  if (i >= m_.dim()) throw IndexOutOfRange("diagonal index out of range");
  m_.diag_(static_cast<Eigen::Index>(i)) = value;
}

void SparseSymmetricBuilder::push(std::size_t row, std::size_t col, double value) {
  if (row >= col || col >= m_.dim()) throw IndexOutOfRange("builder expects row < col < p");
  if (row < current_row_) throw Error("builder rows must be appended in order");
  if (value == 0.0) return;
  while (current_row_ < row) m_.row_ptr_[++current_row_] = m_.values_.size();
  if (m_.values_.size() > m_.row_ptr_[row] && m_.col_idx_.back() >= col) {
    throw Error("builder columns must increase within a row");
  }
  m_.col_idx_.push_back(col);
  m_.values_.push_back(value);
}

SparseSymmetric SparseSymmetricBuilder::finish() && {
  const std::size_t p = m_.dim();
  while (current_row_ < p) m_.row_ptr_[++current_row_] = m_.values_.size();
  return std::move(m_);
}

}  // namespace spca
