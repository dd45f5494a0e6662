#include "spca/data_driven.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "spca/error.hpp"
#include "spca/gram.hpp"
#include "spca/robust.hpp"
#include "spca/threshold.hpp"

namespace spca {

double unit_noise_edge(std::size_t m, std::size_t p, double tau_unit, std::size_t trials,
                       std::uint64_t seed, const EigenOptions& eig) {
  if (trials == 0) throw InvalidConfig("bulk edge estimation needs trials >= 1");
  if (m == 0 || p == 0) throw DimensionMismatch("bulk edge needs m, p >= 1");
  const double level = tau_unit / std::sqrt(static_cast<double>(m));
  double edge = -std::numeric_limits<double>::infinity();
  Eigen::MatrixXd z(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(trial_seed(seed, t));
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = rng.gaussian();
    }
    const SparseSymmetric eta = soft_threshold_matrix(gram_centered(z, true, 1.0), level);
    edge = std::max(edge, top_r_eigenpairs(eta, 1, eig).front().value);
  }
  return edge;
}

double estimate_bulk_edge(std::size_t m, std::size_t p, double sigma_hat, double tau_rescaled,
                          std::size_t trials, Rng& rng, double safety, const EigenOptions& eig) {
  if (!(sigma_hat > 0.0)) throw DegenerateInput("bulk edge needs sigma_hat > 0");
  const double var = sigma_hat * sigma_hat;
  return var * unit_noise_edge(m, p, tau_rescaled / var, trials, rng.next_u64(), eig) * safety;
}

Eigen::VectorXd denoise_component(const Eigen::VectorXd& v, double nu_prime) {
  const double noise = mad(std::span<const double>(v.data(), static_cast<std::size_t>(v.size()))) / kMadToSigma;
  const double cutoff = nu_prime * noise;
  Eigen::VectorXd out = v.unaryExpr([cutoff](double x) { return hard_threshold(x, cutoff); });
  const double norm = out.norm();
  if (norm == 0.0) {
    out = v.normalized();
  } else {
    out /= norm;
  }
  apply_sign_convention(out);
  return out;
}

DataDrivenResult data_driven_ct(const Eigen::Ref<const Eigen::MatrixXd>& x, const DataDrivenOptions& opts) {
  if (x.rows() < 2 || x.cols() < 2) throw DimensionMismatch("data-driven CT needs m >= 2 and p >= 2");
  if (!(opts.nu_prime >= 0.0)) throw InvalidConfig("nu_prime must be >= 0");
  const auto m = static_cast<std::size_t>(x.rows());
  const auto p = static_cast<std::size_t>(x.cols());

  DataDrivenResult result;
  result.mu_hat = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - result.mu_hat.transpose();
  result.sigma_hat = mad(std::span<const double>(centered.data(), static_cast<std::size_t>(centered.size()))) /
                     kMadToSigma;
  if (!(result.sigma_hat > 0.0)) throw DegenerateInput("MAD noise scale is zero (constant data?)");
  const double var = result.sigma_hat * result.sigma_hat;

  const DenseSymmetric sigma = gram_centered(centered, true, var);
  const double level = opts.nu_prime * var / std::sqrt(static_cast<double>(m));
  const SparseSymmetric eta = soft_threshold_matrix(sigma, level);
  result.nnz = eta.nnz();

  // Tolerances scale with the data so the solve is invariant under rescaling.
  EigenOptions eig = opts.eig;
  eig.tol *= var;

  const auto compute_edge = [&] { return unit_noise_edge(m, p, opts.nu_prime, opts.edge_trials, opts.edge_seed, opts.eig); };
  const double unit_edge =
      opts.edge_cache
          ? opts.edge_cache->get_or_compute({m, p, opts.nu_prime, opts.edge_trials, opts.edge_seed}, compute_edge)
          : compute_edge();
  result.bulk_edge = var * unit_edge * opts.edge_safety;

  std::size_t count = std::min<std::size_t>(p, 4);
  std::vector<EigenPair> pairs;
  while (true) {
    pairs = top_r_eigenpairs(eta, count, eig);
    if (pairs.back().value <= result.bulk_edge || count == p) break;
    count = std::min(p, 2 * count);
  }
  for (const auto& pair : pairs) {
    if (pair.value <= result.bulk_edge) break;
    ++result.r_hat;
    result.eigvals.push_back(pair.value);
    result.components.push_back(denoise_component(pair.vector, opts.nu_prime));
  }
  return result;
}

}  // namespace spca
