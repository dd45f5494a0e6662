#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spca/data_driven.hpp"
#include "spca/metrics.hpp"

namespace spca {

enum class Method { kCT, kCTK0, kDT, kDataDriven, kPCA };

std::string_view to_string(Method method);
/// Accepts ct, ct-k0, dt, data-driven, pca. Throws InvalidConfig.
Method parse_method(std::string_view name);

enum class RhoMode { kAuto, kExplicit };

/// Phase-transition sweep over (p, k / sqrt(n)) with n = p.
struct SweepConfig {
  Method method = Method::kCT;
  std::vector<std::size_t> ps;
  std::vector<double> k_over_sqrt_n;
  double beta = 0.0;  // required; there is no default signal strength
  double theta = 1.0;
  double tau = 4.0;
  RhoMode rho_mode = RhoMode::kAuto;
  double rho = 0.0;  // used when rho_mode is kExplicit; may be +inf
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  double k0_factor = 10.0;  // ct-k0: k0 = round(k0_factor * k)
  double nu_prime = 4.0;    // data-driven
  std::size_t threads = 1;  // speed only, never results

  void validate() const;
};

/// One resolved grid cell.
struct SweepCell {
  Method method = Method::kCT;
  std::size_t p = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  double ratio = 0.0;
  double beta = 0.0;
  double theta = 1.0;
  double tau = 4.0;
  double rho = 0.0;
  std::size_t k0 = 0;
  double nu_prime = 4.0;
};

/// k = max(1, round(ratio * sqrt(n))).
std::size_t cell_k(double ratio, std::size_t n);

/// Cells ordered by (p, ratio), both ascending.
std::vector<SweepCell> expand_cells(const SweepConfig& cfg);

struct TrialResult {
  std::uint64_t seed = 0;
  Method method = Method::kCT;
  std::size_t p = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  bool success = false;
  double fraction = 0.0;
  double loss = 0.0;
  double wall_ms = 0.0;
  bool failed = false;
  std::string error;
  std::optional<DecompDiagnostics> diag;
};

/// Shared, result-neutral state for a batch of trials.
struct TrialContext {
  std::shared_ptr<BulkEdgeCache> edge_cache = std::make_shared<BulkEdgeCache>();
  bool with_diagnostics = false;
};

/// Samples a rank-one instance from seed trial_seed(base_seed, trial_index),
/// runs the cell's method and scores it. Estimator errors produce a failed,
/// unsuccessful record instead of propagating.
TrialResult run_trial(const SweepCell& cell, std::uint64_t base_seed, std::size_t trial_index,
                      const TrialContext& ctx = {});

struct SweepRow {
  SweepCell cell;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double success_se = 0.0;  // sqrt(s (1 - s) / trials)
  double mean_fraction = 0.0;
  double mean_loss = 0.0;
  std::size_t failed_trials = 0;
};

/// Aggregates trials of one cell. Failed trials count as unsuccessful.
SweepRow summarize(const SweepCell& cell, const std::vector<TrialResult>& trials);

/// Runs every cell; trials within a cell run on cfg.threads workers.
/// `progress`, when set, is called after each finished cell.
std::vector<SweepRow> sweep_phase_transition(
    const SweepConfig& cfg, const std::function<void(const SweepRow&)>& progress = {});

inline constexpr std::string_view kSweepCsvHeader =
    "method,p,n,k,ratio,beta,tau,rho,trials,success_rate,success_se,mean_fraction,mean_loss,failed_trials";

/// Header plus one line per row; floats with 6 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Printf-style %.6g formatting used by every CSV the harness writes.
std::string format_g6(double value);

struct ReconstructionRecord {
  Method method = Method::kPCA;
  std::size_t n = 0;
  Eigen::VectorXd reconstruction;  // signal domain, sign aligned with the truth
  double correlation = 0.0;        // |<estimate, truth>|
  std::size_t selected = 0;        // DT: coordinates kept; data-driven: r_hat
};

struct WaveletTrial {
  Eigen::VectorXd clean;  // unit-norm block-constant signal
  std::vector<ReconstructionRecord> records;  // pca, dt, data-driven
};

struct WaveletDemoConfig {
  std::size_t p = 1024;
  std::vector<std::size_t> ns = {1024, 4096};
  double beta = 1.4;
  double nu_prime = 4.5;
  std::size_t blocks = 3;
  std::uint64_t seed = 1;
};

/// Coordinates kept by diagonal thresholding in the demo: G_ii at or above
/// sigma_hat^2 (1 + 2 sqrt(log p / m)), at least one, where sigma_hat is the
/// MAD scale of the data and m the number of rows.
std::size_t diagonal_threshold_count(const Dataset& data);

/// One seeded reconstruction experiment at half-sample size n: the spike is
/// the Haar transform of the normalized block signal, 2n rows are sampled in
/// the Haar domain, and each estimate is mapped back to the signal domain.
/// Throws LengthNotPowerOfTwo.
WaveletTrial wavelet_demo(std::size_t p, std::size_t n, double beta, double nu_prime, std::size_t blocks,
                          std::uint64_t seed, const TrialContext& ctx = {});

}  // namespace spca
