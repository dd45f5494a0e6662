#pragma once

#include <Eigen/Dense>

#include "spca/rng.hpp"

namespace spca::testing {

// Symmetric matrix with N(0, 1) entries above the diagonal, mirrored.
inline Eigen::MatrixXd random_symmetric(Eigen::Index p, Rng& rng) {
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      m(i, j) = rng.gaussian();
      m(j, i) = m(i, j);
    }
  }
  return m;
}

inline Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  }
  return m;
}

}  // namespace spca::testing
