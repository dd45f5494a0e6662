#pragma once

#include <cmath>

#include "spca/dense_symmetric.hpp"
#include "spca/sparse_symmetric.hpp"

namespace spca {

/// Soft thresholding eta(z; level) = sgn(z) * max(|z| - level, 0).
inline double soft_threshold(double z, double level) {
  const double shrunk = std::abs(z) - level;
  if (!(shrunk > 0.0)) return 0.0;
  return std::copysign(shrunk, z);
}

/// Hard thresholding: z when |z| >= level, else 0.
inline double hard_threshold(double z, double level) { return std::abs(z) >= level ? z : 0.0; }

/// Entrywise soft thresholding of a symmetric matrix, diagonal included.
/// With `preserve_diagonal` the diagonal is copied unthresholded; that mode
/// exists for diagnostics only.
SparseSymmetric soft_threshold_matrix(const DenseSymmetric& m, double level,
                                      bool preserve_diagonal = false);

}  // namespace spca
