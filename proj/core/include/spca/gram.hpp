#pragma once

#include <Eigen/Dense>

#include "spca/dense_symmetric.hpp"

namespace spca {

/// X^T X / n for an n x p sample matrix (rows are observations), minus
/// sigma2 * I when `subtract_identity` is set. No mean is removed; callers
/// center beforehand when they need to.
DenseSymmetric gram_centered(const Eigen::Ref<const Eigen::MatrixXd>& x, bool subtract_identity,
                             double sigma2 = 1.0);

/// (X^T X / n - sigma2 * I) y computed as X^T (X y) / n - sigma2 * y, without
/// forming the p x p matrix.
Eigen::VectorXd gram_apply(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::VectorXd& y,
                           double sigma2);

}  // namespace spca
