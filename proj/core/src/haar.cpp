#include "spca/haar.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "spca/error.hpp"

namespace spca {

namespace {

void check_length(Eigen::Index n) {
  if (n <= 0 || !std::has_single_bit(static_cast<std::size_t>(n))) {
    throw LengthNotPowerOfTwo("Haar transform needs a power-of-two length, got " + std::to_string(n));
  }
}

}  // namespace

Eigen::VectorXd haar_forward(const Eigen::VectorXd& signal) {
  check_length(signal.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::VectorXd a = signal;
  Eigen::VectorXd tmp(a.size());
  for (Eigen::Index len = a.size(); len > 1; len /= 2) {
    const Eigen::Index half = len / 2;
    for (Eigen::Index i = 0; i < half; ++i) {
      tmp(i) = (a(2 * i) + a(2 * i + 1)) * inv_sqrt2;
      tmp(half + i) = (a(2 * i) - a(2 * i + 1)) * inv_sqrt2;
    }
    a.head(len) = tmp.head(len);
  }
  return a;
}

Eigen::VectorXd haar_inverse(const Eigen::VectorXd& coefficients) {
  check_length(coefficients.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::VectorXd a = coefficients;
  Eigen::VectorXd tmp(a.size());
  for (Eigen::Index len = 2; len <= a.size(); len *= 2) {
    const Eigen::Index half = len / 2;
    for (Eigen::Index i = 0; i < half; ++i) {
      tmp(2 * i) = (a(i) + a(half + i)) * inv_sqrt2;
      tmp(2 * i + 1) = (a(i) - a(half + i)) * inv_sqrt2;
    }
    a.head(len) = tmp.head(len);
  }
  return a;
}

Eigen::VectorXd block_constant_signal(std::size_t p, std::size_t blocks) {
  if (p == 0 || blocks == 0 || blocks > p) throw InvalidConfig("block signal needs 1 <= blocks <= p");
  Eigen::VectorXd s(static_cast<Eigen::Index>(p));
  for (std::size_t b = 0; b < blocks; ++b) {
    const auto lo = static_cast<Eigen::Index>(std::llround(static_cast<double>(b * p) / static_cast<double>(blocks)));
    const auto hi = static_cast<Eigen::Index>(std::llround(static_cast<double>((b + 1) * p) / static_cast<double>(blocks)));
    const double level = (b % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(b + 1);
    s.segment(lo, hi - lo).setConstant(level);
  }
  return s;
}

}  // namespace spca
