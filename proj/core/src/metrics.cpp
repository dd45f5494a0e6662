#include "spca/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "spca/dense_symmetric.hpp"
#include "spca/eigen_solver.hpp"
#include "spca/error.hpp"
#include "spca/gram.hpp"
#include "spca/threshold.hpp"

namespace spca {

namespace {

std::vector<char> membership(const std::vector<std::size_t>& set, std::size_t p) {
  std::vector<char> in(p, 0);
  for (const auto i : set) {
    if (i >= p) throw IndexOutOfRange("support index " + std::to_string(i) + " outside [0, p)");
    in[i] = 1;
  }
  return in;
}

}  // namespace

SupportMetrics support_metrics(const std::vector<std::size_t>& estimated,
                               const std::vector<std::size_t>& truth, std::size_t p) {
  const auto est = membership(estimated, p);
  const auto tru = membership(truth, p);
  SupportMetrics out;
  std::size_t hits = 0;
  std::size_t truth_size = 0;
  for (std::size_t i = 0; i < p; ++i) {
    if (tru[i] != 0) ++truth_size;
    if (est[i] != 0 && tru[i] != 0) ++hits;
    if (est[i] != 0 && tru[i] == 0) ++out.false_pos;
    if (est[i] == 0 && tru[i] != 0) ++out.false_neg;
  }
  out.symdiff = out.false_pos + out.false_neg;
  out.exact = out.symdiff == 0;
  if (truth_size == 0) {
    out.fraction = out.false_pos == 0 ? 1.0 : 0.0;
  } else {
    out.fraction = static_cast<double>(hits) / static_cast<double>(truth_size);
  }
  return out;
}

double vector_loss(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth) {
  if (estimate.size() != truth.size()) throw DimensionMismatch("vector_loss dimension mismatch");
  if (std::abs(estimate.norm() - 1.0) > 1e-6 || std::abs(truth.norm() - 1.0) > 1e-6) {
    throw NotUnitNorm("vector_loss expects unit vectors");
  }
  const double overlap = std::min(1.0, std::abs(estimate.dot(truth)));
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

DecompBlocks decompose(const SparseSymmetric& eta, const std::vector<std::vector<std::size_t>>& supports) {
  const std::size_t p = eta.dim();
  std::vector<std::vector<char>> in_q;
  std::vector<char> in_union(p, 0);
  for (const auto& support : supports) {
    in_q.push_back(membership(support, p));
    for (const auto i : support) in_union[i] = 1;
  }
  const auto in_e = [&](std::size_t i, std::size_t j) {
    return std::any_of(in_q.begin(), in_q.end(), [&](const auto& m) { return m[i] != 0 && m[j] != 0; });
  };

  std::vector<SymmetricEntry> s;
  std::vector<SymmetricEntry> n;
  std::vector<SymmetricEntry> r1;
  std::vector<SymmetricEntry> r2;
  eta.for_each_entry([&](std::size_t i, std::size_t j, double v) {
    if (in_e(i, j)) {
      s.push_back({i, j, v});
    } else if (i == j) {
      r2.push_back({i, j, v});  // diagonal outside every support
    } else if (in_union[i] == 0 && in_union[j] == 0) {
      n.push_back({i, j, v});
    } else {
      r1.push_back({i, j, v});
    }
  });
  return {SparseSymmetric::from_entries(p, std::move(s)), SparseSymmetric::from_entries(p, std::move(n)),
          SparseSymmetric::from_entries(p, std::move(r1)), SparseSymmetric::from_entries(p, std::move(r2))};
}

DecompDiagnostics decomposition_diagnostics(const Dataset& data, double tau) {
  if (!data.truth) throw MissingTruth("decomposition diagnostics need the generating model");
  data.validate();
  const ModelParams& truth = *data.truth;
  const double n = static_cast<double>(data.n);
  const SparseSymmetric eta =
      soft_threshold_matrix(gram_centered(data.first_half(), true, 1.0), tau / std::sqrt(n));

  std::vector<std::vector<std::size_t>> supports;
  for (std::size_t q = 0; q < truth.r(); ++q) supports.push_back(truth.support(q));
  const DecompBlocks blocks = decompose(eta, supports);

  DecompDiagnostics out;
  const auto q_union = truth.union_support();
  if (!q_union.empty()) {
    // S - sum beta v v^T lives on E, inside Q x Q.
    const auto k = static_cast<Eigen::Index>(q_union.size());
    Eigen::MatrixXd diff(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) {
        const auto i = q_union[static_cast<std::size_t>(a)];
        const auto j = q_union[static_cast<std::size_t>(b)];
        double signal = 0.0;
        for (std::size_t q = 0; q < truth.r(); ++q) {
          signal += truth.betas[q] * truth.spikes[q](static_cast<Eigen::Index>(i)) *
                    truth.spikes[q](static_cast<Eigen::Index>(j));
        }
        diff(a, b) = blocks.s(i, j) - signal;
      }
    }
    out.norm_s_minus_signal = spectral_norm(DenseSymmetric::from_upper(std::move(diff)));
  }
  out.norm_n = spectral_norm(blocks.n);
  out.norm_r1 = spectral_norm(blocks.r1);
  out.norm_r2 = blocks.r2.diagonal().cwiseAbs().maxCoeff();
  return out;
}

}  // namespace spca
