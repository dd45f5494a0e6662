#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace spca {

/// Dense symmetric p x p matrix. The upper triangle of the source is
/// authoritative; the lower triangle is mirrored at construction, so the
/// stored matrix is exactly symmetric.
class DenseSymmetric {
 public:
  DenseSymmetric() = default;

  /// Mirrors the upper triangle of `m` into the lower one.
  /// Throws DimensionMismatch for non-square or empty input and Error on
  /// non-finite entries.
  static DenseSymmetric from_upper(Eigen::MatrixXd m);

  /// Same as from_upper but takes the lower triangle as authoritative.
  static DenseSymmetric from_lower(Eigen::MatrixXd m);

  static DenseSymmetric identity(std::size_t p);
  static DenseSymmetric diagonal(const Eigen::VectorXd& d);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return m_; }

  /// y = M x.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

  DenseSymmetric operator-() const;

  /// Principal submatrix on `indices` (in the given order).
  template <typename IndexRange>
  DenseSymmetric restricted(const IndexRange& indices) const {
    const auto k = static_cast<Eigen::Index>(std::size(indices));
    Eigen::MatrixXd sub(k, k);
    Eigen::Index a = 0;
    for (auto i : indices) {
      Eigen::Index b = 0;
      for (auto j : indices) {
        sub(a, b) = m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        ++b;
      }
      ++a;
    }
    return DenseSymmetric(std::move(sub));
  }

 private:
  explicit DenseSymmetric(Eigen::MatrixXd m) : m_(std::move(m)) {}

  Eigen::MatrixXd m_;
};

}  // namespace spca
