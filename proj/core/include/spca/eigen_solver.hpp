#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

#include "spca/dense_symmetric.hpp"
#include "spca/error.hpp"
#include "spca/sparse_symmetric.hpp"

namespace spca {

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit norm
  double residual = 0.0;   // ||M v - value v||_2
};

enum class EigenMethod {
  kAuto,     // dense for small dims, Lanczos otherwise, dense if Lanczos fails
  kLanczos,  // Lanczos only; throws ConvergenceFailure
  kDense,    // dense symmetric eigendecomposition
};

struct EigenOptions {
  double tol = 1e-9;              // residual target ||M v - lambda v||
  std::size_t max_iter = 0;       // matvec budget; 0 means 10 * dim
  std::size_t dense_cutoff = 128; // kAuto solves dims <= this densely
  std::size_t dense_fallback_limit = 4096;
  EigenMethod method = EigenMethod::kAuto;
};

/// Lanczos did not reach the residual target within the matvec budget.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, std::vector<EigenPair> best, double residual)
      : Error(what), best_(std::move(best)), residual_(residual) {}

  const std::vector<EigenPair>& best_iterate() const { return best_; }
  double residual() const { return residual_; }

 private:
  std::vector<EigenPair> best_;
  double residual_;
};

/// Symmetric linear operator seen through its action y = M x.
struct SymmetricOperator {
  std::size_t dim = 0;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)> apply;
};

/// Relative gap below which two magnitudes count as tied in
/// apply_sign_convention.
inline constexpr double kSignTieTolerance = 1e-8;

/// Flips v so that its entry of largest magnitude is nonnegative. Entries
/// within a relative kSignTieTolerance of the maximum are ties, resolved to
/// the lowest index.
void apply_sign_convention(Eigen::VectorXd& v);

/// Top-r eigenpairs by algebraic value, descending. Vectors follow
/// apply_sign_convention.
std::vector<EigenPair> top_r_eigenpairs(const SparseSymmetric& m, std::size_t r,
                                        const EigenOptions& opts = {});
std::vector<EigenPair> top_r_eigenpairs(const DenseSymmetric& m, std::size_t r,
                                        const EigenOptions& opts = {});

/// Lanczos with full reorthogonalization on an abstract operator. Restarts
/// with a fresh orthogonal direction whenever an invariant subspace is found.
std::vector<EigenPair> lanczos_top_r(const SymmetricOperator& op, std::size_t r,
                                     const EigenOptions& opts = {});

/// Dense symmetric eigendecomposition, top r.
std::vector<EigenPair> dense_top_r(const DenseSymmetric& m, std::size_t r);

/// max(|lambda_max|, |lambda_min|) to relative accuracy `tol`.
double spectral_norm(const SparseSymmetric& m, double tol = 1e-9);
double spectral_norm(const DenseSymmetric& m, double tol = 1e-9);

}  // namespace spca
