#include "spca/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>

#include "spca/algorithms.hpp"
#include "spca/error.hpp"
#include "spca/haar.hpp"
#include "spca/parallel.hpp"
#include "spca/robust.hpp"

namespace spca {

namespace {

const double kOrthogonalLoss = std::sqrt(2.0);

std::vector<std::size_t> nonzero_indices(const Eigen::VectorXd& v) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kCT: return "ct";
    case Method::kCTK0: return "ct-k0";
    case Method::kDT: return "dt";
    case Method::kDataDriven: return "data-driven";
    case Method::kPCA: return "pca";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (const auto m : {Method::kCT, Method::kCTK0, Method::kDT, Method::kDataDriven, Method::kPCA}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidConfig("unknown method '" + std::string(name) + "'");
}

void SweepConfig::validate() const {
  if (method == Method::kPCA) throw InvalidConfig("sweeps support ct, ct-k0, dt and data-driven");
  if (ps.empty() || k_over_sqrt_n.empty()) throw InvalidConfig("sweep grids must be nonempty");
  for (const auto p : ps) {
    if (p < 2) throw InvalidConfig("sweep dimensions must be >= 2");
  }
  for (const auto ratio : k_over_sqrt_n) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) throw InvalidConfig("k/sqrt(n) ratios must be positive");
  }
  if (trials == 0) throw InvalidConfig("trials must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidConfig("beta must be finite and >= 0");
  if (!(theta > 0.0 && theta <= 1.0)) throw InvalidConfig("theta must lie in (0, 1]");
  if (!(tau >= 0.0)) throw InvalidConfig("tau must be >= 0");
  if (rho_mode == RhoMode::kExplicit && !(rho >= 0.0)) throw InvalidConfig("rho must be >= 0");
  if (!(k0_factor >= 1.0)) throw InvalidConfig("k0_factor must be >= 1");
}

std::size_t cell_k(double ratio, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::llround(ratio * std::sqrt(static_cast<double>(n))));
  return std::max<std::size_t>(1, k);
}

std::vector<SweepCell> expand_cells(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<std::size_t> ps = cfg.ps;
  std::vector<double> ratios = cfg.k_over_sqrt_n;
  std::sort(ps.begin(), ps.end());
  std::sort(ratios.begin(), ratios.end());
  std::vector<SweepCell> cells;
  for (const auto p : ps) {
    for (const auto ratio : ratios) {
      SweepCell cell;
      cell.method = cfg.method;
      cell.p = p;
      cell.n = p;
      cell.k = cell_k(ratio, cell.n);
      if (cell.k > p) throw InvalidConfig("ratio too large: k exceeds p");
      cell.ratio = ratio;
      cell.beta = cfg.beta;
      cell.theta = cfg.theta;
      cell.tau = cfg.tau;
      cell.rho = cfg.rho_mode == RhoMode::kAuto ? default_rho({cfg.beta}, cfg.theta, {cell.k}) : cfg.rho;
      cell.k0 = std::min<std::size_t>(
          p, std::max<std::size_t>(cell.k, static_cast<std::size_t>(std::llround(cfg.k0_factor * static_cast<double>(cell.k)))));
      cell.nu_prime = cfg.nu_prime;
      cells.push_back(cell);
    }
  }
  return cells;
}

TrialResult run_trial(const SweepCell& cell, std::uint64_t base_seed, std::size_t trial_index,
                      const TrialContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialResult out;
  out.seed = trial_seed(base_seed, trial_index);
  out.method = cell.method;
  out.p = cell.p;
  out.n = cell.n;
  out.k = cell.k;
  out.loss = kOrthogonalLoss;

  try {
    Rng rng(out.seed);
    SpikeSpec spec;
    spec.p = cell.p;
    spec.support = random_disjoint_supports(cell.p, {cell.k}, rng).front();
    spec.theta = cell.theta;
    spec.kind = cell.theta >= 1.0 ? SpikeKind::kUniformMagnitude : SpikeKind::kSignedUniform;
    const ModelParams model = make_model(cell.p, {cell.beta}, {spec}, rng);
    const Dataset data = sample_dataset(model, cell.n, rng);
    const Eigen::VectorXd& v = model.spikes.front();

    std::vector<std::size_t> estimate;
    std::optional<Eigen::VectorXd> leading;
    switch (cell.method) {
      case Method::kCT: {
        const CTConfig cfg{cell.tau, cell.rho, 1, {cell.k}, cell.theta};
        auto result = covariance_thresholding(data, cfg);
        estimate = std::move(result.support_hat);
        leading = std::move(result.eigvecs.front());
        break;
      }
      case Method::kCTK0: {
        auto result = covariance_thresholding_k0(data, cell.k0, cell.theta, cell.tau, cell.rho, 1);
        estimate = std::move(result.support_hat);
        leading = std::move(result.eigvecs.front());
        break;
      }
      case Method::kDT: {
        auto result = diagonal_thresholding(data, cell.k);
        estimate = std::move(result.selected);
        leading = std::move(result.vector);
        break;
      }
      case Method::kDataDriven: {
        DataDrivenOptions opts;
        opts.nu_prime = cell.nu_prime;
        opts.edge_cache = ctx.edge_cache;
        auto result = data_driven_ct(data.x, opts);
        if (!result.components.empty()) {
          estimate = nonzero_indices(result.components.front());
          leading = std::move(result.components.front());
        }
        break;
      }
      case Method::kPCA:
        throw InvalidConfig("pca has no support estimate");
    }

    const SupportMetrics metrics = support_metrics(estimate, model.support(0), cell.p);
    out.success = metrics.exact;
    out.fraction = metrics.fraction;
    if (leading) out.loss = vector_loss(*leading, v);
    if (ctx.with_diagnostics) out.diag = decomposition_diagnostics(data, cell.tau);
  } catch (const Error& e) {
    out.failed = true;
    out.error = e.what();
    out.success = false;
    out.fraction = 0.0;
    out.loss = kOrthogonalLoss;
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

SweepRow summarize(const SweepCell& cell, const std::vector<TrialResult>& trials) {
  SweepRow row;
  row.cell = cell;
  row.trials = trials.size();
  if (trials.empty()) return row;
  double successes = 0.0;
  double fraction = 0.0;
  double loss = 0.0;
  for (const auto& t : trials) {
    successes += t.success ? 1.0 : 0.0;
    fraction += t.fraction;
    loss += t.loss;
    row.failed_trials += t.failed ? 1 : 0;
  }
  const double count = static_cast<double>(trials.size());
  row.success_rate = successes / count;
  row.success_se = std::sqrt(row.success_rate * (1.0 - row.success_rate) / count);
  row.mean_fraction = fraction / count;
  row.mean_loss = loss / count;
  return row;
}

std::vector<SweepRow> sweep_phase_transition(const SweepConfig& cfg,
                                             const std::function<void(const SweepRow&)>& progress) {
  const auto cells = expand_cells(cfg);
  TrialContext ctx;
  std::vector<SweepRow> rows;
  for (const auto& cell : cells) {
    std::vector<TrialResult> trials(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) { trials[i] = run_trial(cell, cfg.base_seed, i, ctx); });
    rows.push_back(summarize(cell, trials));
    if (progress) progress(rows.back());
  }
  return rows;
}

std::string format_g6(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value == 0.0 ? 0.0 : value);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const auto& row : rows) {
    const auto& c = row.cell;
    out << to_string(c.method) << ',' << c.p << ',' << c.n << ',' << c.k << ',' << format_g6(c.ratio) << ','
        << format_g6(c.beta) << ',' << format_g6(c.tau) << ',' << format_g6(c.rho) << ',' << row.trials << ','
        << format_g6(row.success_rate) << ',' << format_g6(row.success_se) << ',' << format_g6(row.mean_fraction)
        << ',' << format_g6(row.mean_loss) << ',' << row.failed_trials << '\n';
  }
}

std::size_t diagonal_threshold_count(const Dataset& data) {
  const auto m = static_cast<double>(data.rows());
  const auto p = static_cast<double>(data.p());
  const double sigma = mad(std::span<const double>(data.x.data(), static_cast<std::size_t>(data.x.size()))) / kMadToSigma;
  const double cutoff = sigma * sigma * (1.0 + 2.0 * std::sqrt(std::log(p) / m));
  const Eigen::VectorXd diag = data.x.colwise().squaredNorm().transpose() / m;
  const auto count = static_cast<std::size_t>((diag.array() >= cutoff).count());
  return std::max<std::size_t>(1, count);
}

WaveletTrial wavelet_demo(std::size_t p, std::size_t n, double beta, double nu_prime, std::size_t blocks,
                          std::uint64_t seed, const TrialContext& ctx) {
  WaveletTrial trial;
  Eigen::VectorXd clean = block_constant_signal(p, blocks);
  clean.normalize();
  const Eigen::VectorXd spike = haar_forward(clean);  // throws LengthNotPowerOfTwo

  ModelParams model;
  model.p = p;
  model.betas = {beta};
  model.spikes = {spike};
  const Dataset data = sample_dataset(model, n, seed);

  const auto record = [&](Method method, Eigen::VectorXd estimate, std::size_t selected) {
    ReconstructionRecord rec;
    rec.method = method;
    rec.n = n;
    rec.selected = selected;
    const double overlap = estimate.dot(spike);
    rec.correlation = std::abs(overlap);
    if (overlap < 0.0) estimate = -estimate;
    rec.reconstruction = haar_inverse(estimate);
    trial.records.push_back(std::move(rec));
  };

  record(Method::kPCA, vanilla_pca(data, 1).front().vector, 0);

  const std::size_t k = diagonal_threshold_count(data);
  record(Method::kDT, diagonal_thresholding(data, k).vector, k);

  DataDrivenOptions opts;
  opts.nu_prime = nu_prime;
  opts.edge_cache = ctx.edge_cache;
  const DataDrivenResult dd = data_driven_ct(data.x, opts);
  record(Method::kDataDriven,
         dd.components.empty() ? Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p)) : dd.components.front(),
         dd.r_hat);

  trial.clean = std::move(clean);
  return trial;
}

}  // namespace spca
