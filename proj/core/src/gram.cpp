#include "spca/gram.hpp"

#include "spca/error.hpp"

namespace spca {

DenseSymmetric gram_centered(const Eigen::Ref<const Eigen::MatrixXd>& x, bool subtract_identity,
                             double sigma2) {
  if (x.rows() == 0 || x.cols() == 0) throw DimensionMismatch("gram of an empty sample matrix");
  const Eigen::Index p = x.cols();
  const double inv_n = 1.0 / static_cast<double>(x.rows());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p, p);
  g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), inv_n);
  if (subtract_identity) g.diagonal().array() -= sigma2;
  return DenseSymmetric::from_lower(std::move(g));
}

Eigen::VectorXd gram_apply(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::VectorXd& y,
                           double sigma2) {
  if (x.cols() != y.size()) throw DimensionMismatch("gram_apply dimension mismatch");
  if (x.rows() == 0) throw DimensionMismatch("gram of an empty sample matrix");
  const Eigen::VectorXd xy = x * y;
  Eigen::VectorXd out = x.transpose() * xy;
  out /= static_cast<double>(x.rows());
  out -= sigma2 * y;
  return out;
}

}  // namespace spca
