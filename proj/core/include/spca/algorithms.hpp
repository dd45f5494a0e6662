#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "spca/eigen_solver.hpp"
#include "spca/model.hpp"

namespace spca {

/// Parameters of covariance thresholding. `tau` is the rescaled threshold:
/// entries of the empirical covariance are soft-thresholded at tau / sqrt(n).
struct CTConfig {
  double tau = 4.0;
  double rho = 0.0;             // support cutoff on |(Sigma' s_q)_i|; +inf allowed
  std::size_t r = 1;
  std::vector<std::size_t> ks;  // support size per spike
  double theta = 1.0;

  void validate(std::size_t p) const;
};

struct CTDiagnostics {
  std::size_t nnz = 0;  // nonzeros of the thresholded matrix
  std::vector<double> residuals;
  double gram_ms = 0.0;
  double threshold_ms = 0.0;
  double eigen_ms = 0.0;
  double total_ms = 0.0;
  /// k0 variant only: whether sum(k_q) <= k0 <= 20 sum(k_q) is known to hold.
  std::optional<bool> k0_in_guarantee_regime;
};

struct CTResult {
  std::vector<std::size_t> support_hat;  // ascending
  std::vector<Eigen::VectorXd> eigvecs;  // v_hat_q
  std::vector<Eigen::VectorXd> cleaned;  // s_q
  std::vector<double> eigvals;
  CTDiagnostics diagnostics;
};

/// Covariance thresholding with sample splitting: direction estimates from
/// the first n rows, support selection against the second n rows.
CTResult covariance_thresholding(const Dataset& data, const CTConfig& cfg,
                                 const EigenOptions& eig = {});

/// Variant that only needs an upper estimate k0 of sum(k_q): every spike is
/// cleaned with cutoff theta / (2 sqrt(k0)) (strict inequality).
CTResult covariance_thresholding_k0(const Dataset& data, std::size_t k0, double theta, double tau,
                                    double rho, std::size_t r, const EigenOptions& eig = {});

/// s_i = v_i when |v_i| passes `cutoff` (>= or, with `strict`, >), else 0.
Eigen::VectorXd clean_eigenvector(const Eigen::VectorXd& v, double cutoff, bool strict = false);

/// {i : exists q with |(Sigma' s_q)_i| >= rho}, where Sigma' = X2^T X2 / n - I
/// over the rows of `second_half`.
std::vector<std::size_t> select_support(const Eigen::Ref<const Eigen::MatrixXd>& second_half,
                                        const std::vector<Eigen::VectorXd>& cleaned, double rho);

/// min_q beta_q * theta / (4 sqrt(k_q)).
double default_rho(const std::vector<double>& betas, double theta, const std::vector<std::size_t>& ks);

struct DiagonalThresholdingResult {
  std::vector<std::size_t> selected;  // J, ascending
  Eigen::VectorXd vector;             // unit p-vector supported on J
  double value = 0.0;
};

/// Keeps the k largest diagonal entries of G (ties to the lowest index) and
/// returns the principal eigenvector of G restricted to them. Uses all 2n rows.
DiagonalThresholdingResult diagonal_thresholding(const Dataset& data, std::size_t k,
                                                 const EigenOptions& eig = {});

/// Top-r eigenvectors of G over all 2n rows.
std::vector<EigenPair> vanilla_pca(const Dataset& data, std::size_t r, const EigenOptions& eig = {});

}  // namespace spca
