#include "spca/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spca/error.hpp"
#include "spca/gram.hpp"
#include "spca/threshold.hpp"

namespace spca {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

CTResult run_thresholding(const Dataset& data, double tau, double rho, std::size_t r,
                          const std::vector<double>& cutoffs, bool strict, const EigenOptions& eig) {
  data.validate();
  const auto t_start = Clock::now();
  CTResult result;
  const double n = static_cast<double>(data.n);

  auto t0 = Clock::now();
  const DenseSymmetric sigma_hat = gram_centered(data.first_half(), true, 1.0);
  result.diagnostics.gram_ms = ms_since(t0);

  t0 = Clock::now();
  const SparseSymmetric eta = soft_threshold_matrix(sigma_hat, tau / std::sqrt(n));
  result.diagnostics.threshold_ms = ms_since(t0);
  result.diagnostics.nnz = eta.nnz();

  t0 = Clock::now();
  const auto pairs = top_r_eigenpairs(eta, r, eig);
  result.diagnostics.eigen_ms = ms_since(t0);

  for (std::size_t q = 0; q < r; ++q) {
    result.eigvals.push_back(pairs[q].value);
    result.eigvecs.push_back(pairs[q].vector);
    result.diagnostics.residuals.push_back(pairs[q].residual);
    result.cleaned.push_back(clean_eigenvector(pairs[q].vector, cutoffs[q], strict));
  }
  result.support_hat = select_support(data.second_half(), result.cleaned, rho);
  result.diagnostics.total_ms = ms_since(t_start);
  return result;
}

}  // namespace

void CTConfig::validate(std::size_t p) const {
  if (!(tau >= 0.0)) throw InvalidConfig("tau must be >= 0");
  if (!(rho >= 0.0)) throw InvalidConfig("rho must be >= 0");
  if (r == 0) throw InvalidConfig("r must be >= 1");
  if (r > p) throw InvalidConfig("r = " + std::to_string(r) + " exceeds p = " + std::to_string(p));
  if (ks.size() != r) throw InvalidConfig("need one support size per spike");
  for (const auto k : ks) {
    if (k == 0) throw InvalidConfig("support sizes must be >= 1");
    if (k > p) throw InvalidConfig("support size " + std::to_string(k) + " exceeds p");
  }
  if (!(theta > 0.0)) throw InvalidConfig("theta must be > 0");
}

Eigen::VectorXd clean_eigenvector(const Eigen::VectorXd& v, double cutoff, bool strict) {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (strict ? a > cutoff : a >= cutoff) s(i) = v(i);
  }
  return s;
}

std::vector<std::size_t> select_support(const Eigen::Ref<const Eigen::MatrixXd>& second_half,
                                        const std::vector<Eigen::VectorXd>& cleaned, double rho) {
  const auto p = static_cast<std::size_t>(second_half.cols());
  std::vector<char> selected(p, 0);
  for (const auto& s : cleaned) {
    // Sigma' s with Sigma' = G' - I, diagonal term included.
    const Eigen::VectorXd score = gram_apply(second_half, s, 1.0);
    for (std::size_t i = 0; i < p; ++i) {
      if (std::abs(score(static_cast<Eigen::Index>(i))) >= rho) selected[i] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p; ++i) {
    if (selected[i] != 0) out.push_back(i);
  }
  return out;
}

double default_rho(const std::vector<double>& betas, double theta, const std::vector<std::size_t>& ks) {
  if (betas.empty() || betas.size() != ks.size()) throw InvalidConfig("default_rho needs one k per beta");
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < betas.size(); ++q) {
    rho = std::min(rho, betas[q] * theta / (4.0 * std::sqrt(static_cast<double>(ks[q]))));
  }
  return rho;
}

CTResult covariance_thresholding(const Dataset& data, const CTConfig& cfg, const EigenOptions& eig) {
  cfg.validate(data.p());
  std::vector<double> cutoffs;
  for (const auto k : cfg.ks) cutoffs.push_back(cfg.theta / (2.0 * std::sqrt(static_cast<double>(k))));
  return run_thresholding(data, cfg.tau, cfg.rho, cfg.r, cutoffs, false, eig);
}

CTResult covariance_thresholding_k0(const Dataset& data, std::size_t k0, double theta, double tau,
                                    double rho, std::size_t r, const EigenOptions& eig) {
  CTConfig cfg{tau, rho, r, std::vector<std::size_t>(r, k0), theta};
  cfg.validate(data.p());
  const double cutoff = theta / (2.0 * std::sqrt(static_cast<double>(k0)));
  CTResult result = run_thresholding(data, tau, rho, r, std::vector<double>(r, cutoff), true, eig);
  if (data.truth) {
    const auto k = data.truth->union_support().size();
    result.diagnostics.k0_in_guarantee_regime = k <= k0 && k0 <= 20 * k;
  }
  return result;
}

DiagonalThresholdingResult diagonal_thresholding(const Dataset& data, std::size_t k, const EigenOptions& eig) {
  data.validate();
  const std::size_t p = data.p();
  if (k == 0 || k > p) throw InvalidConfig("diagonal thresholding needs 1 <= k <= p");
  const double m = static_cast<double>(data.rows());
  const Eigen::VectorXd diag = data.x.colwise().squaredNorm().transpose() / m;

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return diag(static_cast<Eigen::Index>(a)) > diag(static_cast<Eigen::Index>(b));
  });
  std::vector<std::size_t> selected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(selected.begin(), selected.end());

  Eigen::MatrixXd columns(data.x.rows(), static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    columns.col(static_cast<Eigen::Index>(a)) = data.x.col(static_cast<Eigen::Index>(selected[a]));
  }
  const DenseSymmetric restricted = gram_centered(columns, false);
  const EigenPair top = top_r_eigenpairs(restricted, 1, eig).front();

  DiagonalThresholdingResult result;
  result.selected = selected;
  result.value = top.value;
  result.vector = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  for (std::size_t a = 0; a < k; ++a) {
    result.vector(static_cast<Eigen::Index>(selected[a])) = top.vector(static_cast<Eigen::Index>(a));
  }
  apply_sign_convention(result.vector);
  return result;
}

std::vector<EigenPair> vanilla_pca(const Dataset& data, std::size_t r, const EigenOptions& eig) {
  data.validate();
  if (r == 0 || r > data.p()) throw InvalidConfig("vanilla PCA needs 1 <= r <= p");
  return top_r_eigenpairs(gram_centered(data.x, false), r, eig);
}

}  // namespace spca
