#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "spca/rng.hpp"

namespace spca {

enum class SpikeKind {
  kUniformMagnitude,  // entries +-1/sqrt(k), random signs
  kSignedUniform,     // magnitudes ~ U[theta/sqrt(k), 1/sqrt(k)], random signs, normalized
  kExplicit,          // user-supplied values on the support
};

struct SpikeSpec {
  std::size_t p = 0;
  std::vector<std::size_t> support;  // distinct indices in [0, p)
  SpikeKind kind = SpikeKind::kUniformMagnitude;
  double theta = 1.0;                // magnitude lower bound theta / sqrt(k)
  std::vector<double> values;        // kExplicit only, aligned with `support`
};

/// Unit vector supported exactly on spec.support with every nonzero entry of
/// magnitude >= theta / sqrt(k). Throws InvalidConfig for malformed specs and
/// InfeasibleSpec when the magnitude bound cannot hold after normalization.
Eigen::VectorXd make_spike(const SpikeSpec& spec, Rng& rng);

/// Spiked covariance instance: x = sum_q sqrt(beta_q) u_q v_q + z.
struct ModelParams {
  std::size_t p = 0;
  std::vector<double> betas;            // strictly decreasing, >= 0
  std::vector<Eigen::VectorXd> spikes;  // unit p-vectors, orthonormal
  double gamma = 1.0;                   // bound on |v_qi / v_q'i| on shared support

  std::size_t r() const { return spikes.size(); }

  /// Support of spike q (nonzero entries), ascending.
  std::vector<std::size_t> support(std::size_t q) const;
  /// Union of all spike supports, ascending.
  std::vector<std::size_t> union_support() const;

  /// Throws InvalidConfig when any model invariant is violated.
  void validate() const;
};

/// Pure-noise model of dimension p (no spikes).
ModelParams null_model(std::size_t p);

/// `ks.size()` pairwise disjoint random supports in [0, p), each sorted.
std::vector<std::vector<std::size_t>> random_disjoint_supports(std::size_t p,
                                                               const std::vector<std::size_t>& ks,
                                                               Rng& rng);

/// Builds and validates a model from one spec per beta.
ModelParams make_model(std::size_t p, std::vector<double> betas, const std::vector<SpikeSpec>& specs,
                       Rng& rng, double gamma = 1.0);

/// 2n x p sample matrix with its provenance. Rows 0..n-1 and n..2n-1 are the
/// two halves used by sample splitting.
struct Dataset {
  Eigen::MatrixXd x;
  std::size_t n = 0;  // half-sample size
  std::uint64_t seed = 0;
  std::optional<ModelParams> truth;

  std::size_t p() const { return static_cast<std::size_t>(x.cols()); }
  std::size_t rows() const { return static_cast<std::size_t>(x.rows()); }
  auto first_half() const { return x.topRows(static_cast<Eigen::Index>(n)); }
  auto second_half() const { return x.bottomRows(static_cast<Eigen::Index>(n)); }

  /// Throws InvalidConfig unless the row count is exactly 2n with n >= 1.
  void validate() const;
};

/// Wraps a sample matrix (e.g. ingested from disk) without truth. Throws
/// InvalidConfig when the row count is odd or zero.
Dataset dataset_from_matrix(Eigen::MatrixXd x);

/// Draws 2n rows x_i = sum_q sqrt(beta_q) u_{q,i} v_q + z_i.
///
/// Consumption order, frozen: for each row i in order, first u_{1,i} ... u_{r,i},
/// then z_{i,1} ... z_{i,p}, all from Rng::gaussian().
Dataset sample_dataset(const ModelParams& params, std::size_t n, std::uint64_t seed);
Dataset sample_dataset(const ModelParams& params, std::size_t n, Rng& rng);

}  // namespace spca
