#include "spca/threshold.hpp"

#include "spca/error.hpp"

namespace spca {

SparseSymmetric soft_threshold_matrix(const DenseSymmetric& m, double level, bool preserve_diagonal) {
  if (!(level >= 0.0)) throw InvalidConfig("threshold level must be nonnegative");
  const std::size_t p = m.dim();
  const Eigen::MatrixXd& a = m.matrix();
  SparseSymmetricBuilder builder(p);
  for (std::size_t i = 0; i < p; ++i) {
    const auto col = a.col(static_cast<Eigen::Index>(i));
    const double d = col(static_cast<Eigen::Index>(i));
    builder.set_diagonal(i, preserve_diagonal ? d : soft_threshold(d, level));
    // Column i below the diagonal is row i above it, and is contiguous.
    for (std::size_t j = i + 1; j < p; ++j) {
      const double v = soft_threshold(col(static_cast<Eigen::Index>(j)), level);
      if (v != 0.0) builder.push(i, j, v);
    }
  }
  return std::move(builder).finish();
}

}  // namespace spca
