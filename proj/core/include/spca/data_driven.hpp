#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "spca/eigen_solver.hpp"
#include "spca/rng.hpp"

namespace spca {

struct DataDrivenResult {
  Eigen::VectorXd mu_hat;
  double sigma_hat = 0.0;
  std::size_t r_hat = 0;
  std::vector<Eigen::VectorXd> components;  // denoised unit vectors
  std::vector<double> eigvals;              // eigenvalues above the bulk edge
  double bulk_edge = 0.0;
  std::size_t nnz = 0;
};

/// Memo of unit-variance noise edges keyed by (m, p, threshold, trials, seed).
/// Thread-safe; the cached values are exactly what a fresh computation gives.
class BulkEdgeCache {
 public:
  using Key = std::tuple<std::size_t, std::size_t, double, std::size_t, std::uint64_t>;

  template <typename Fn>
  double get_or_compute(const Key& key, Fn&& compute) {
    {
      std::lock_guard lock(mutex_);
      if (auto it = values_.find(key); it != values_.end()) return it->second;
    }
    const double value = compute();
    std::lock_guard lock(mutex_);
    values_.emplace(key, value);
    return value;
  }

 private:
  std::mutex mutex_;
  std::map<Key, double> values_;
};

struct DataDrivenOptions {
  double nu_prime = 4.0;
  std::size_t edge_trials = 5;
  double edge_safety = 1.05;
  std::uint64_t edge_seed = 0xB0B5EEDULL;
  EigenOptions eig;
  std::shared_ptr<BulkEdgeCache> edge_cache;  // optional
};

/// Largest top eigenvalue of eta(Z^T Z / m - sigma_hat^2 I; tau_rescaled / sqrt(m))
/// over `trials` pure-noise m x p matrices Z with N(0, sigma_hat^2) entries,
/// times `safety`.
///
/// Z is drawn as sigma_hat * (standard normal), and the thresholded matrix is
/// formed at unit scale and multiplied by sigma_hat^2, which is the same
/// matrix; this makes the edge exactly equivariant in sigma_hat.
double estimate_bulk_edge(std::size_t m, std::size_t p, double sigma_hat, double tau_rescaled,
                          std::size_t trials, Rng& rng, double safety = 1.05,
                          const EigenOptions& eig = {});

/// Unit-noise version of estimate_bulk_edge keyed by a seed, without the
/// safety factor; this is what BulkEdgeCache stores.
double unit_noise_edge(std::size_t m, std::size_t p, double tau_unit, std::size_t trials,
                       std::uint64_t seed, const EigenOptions& eig = {});

/// Covariance thresholding driven entirely by the data: mean removal, MAD
/// noise scale, threshold nu' sigma_hat^2, spike count from the bulk edge and
/// hard-thresholded eigenvectors. Throws DegenerateInput when sigma_hat = 0.
DataDrivenResult data_driven_ct(const Eigen::Ref<const Eigen::MatrixXd>& x,
                                const DataDrivenOptions& opts = {});

/// Hard-threshold v at nu' * MAD(v) / 0.6745 and renormalize. Falls back to v
/// itself when nothing survives.
Eigen::VectorXd denoise_component(const Eigen::VectorXd& v, double nu_prime);

}  // namespace spca
