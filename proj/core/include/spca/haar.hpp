#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace spca {

/// Orthonormal Haar transform of a length-2^m signal. Output layout is
/// [scaling coefficient, coarsest detail, ..., finest details].
/// Throws LengthNotPowerOfTwo.
Eigen::VectorXd haar_forward(const Eigen::VectorXd& signal);

/// Inverse of haar_forward.
Eigen::VectorXd haar_inverse(const Eigen::VectorXd& coefficients);

/// Piecewise-constant signal of length p with `blocks` equal-width blocks
/// (boundaries at round(j * p / blocks)) and distinct levels
/// 1, -2, 3, -4, ...
Eigen::VectorXd block_constant_signal(std::size_t p, std::size_t blocks);

}  // namespace spca
