#include "spca/dense_symmetric.hpp"

#include "spca/error.hpp"

namespace spca {

namespace {

void check_square(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw DimensionMismatch("symmetric matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw Error("symmetric matrix has non-finite entries");
}

}  // namespace

DenseSymmetric DenseSymmetric::from_upper(Eigen::MatrixXd m) {
  check_square(m);
  m.triangularView<Eigen::StrictlyLower>() = m.transpose();
  return DenseSymmetric(std::move(m));
}

DenseSymmetric DenseSymmetric::from_lower(Eigen::MatrixXd m) {
  check_square(m);
  m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  return DenseSymmetric(std::move(m));
}

DenseSymmetric DenseSymmetric::identity(std::size_t p) {
  const auto n = static_cast<Eigen::Index>(p);
  return from_upper(Eigen::MatrixXd::Identity(n, n));
}

DenseSymmetric DenseSymmetric::diagonal(const Eigen::VectorXd& d) {
  return from_upper(d.asDiagonal().toDenseMatrix());
}

Eigen::VectorXd DenseSymmetric::apply(const Eigen::VectorXd& x) const {
  if (x.size() != m_.rows()) throw DimensionMismatch("matvec dimension mismatch");
  Eigen::VectorXd y = m_ * x;
  return y;
}

DenseSymmetric DenseSymmetric::operator-() const { return DenseSymmetric(-m_); }

}  // namespace spca
