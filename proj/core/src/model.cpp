#include "spca/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spca/error.hpp"

namespace spca {

namespace {

void check_support(const SpikeSpec& spec) {
  if (spec.p == 0) throw InvalidConfig("spike dimension must be positive");
  if (spec.support.empty()) throw InvalidConfig("spike support must be nonempty");
  std::vector<std::size_t> sorted = spec.support;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidConfig("spike support has duplicate indices");
  }
  if (sorted.back() >= spec.p) throw InvalidConfig("spike support index out of range");
  if (!(spec.theta > 0.0 && spec.theta <= 1.0)) throw InvalidConfig("theta must lie in (0, 1]");
}

}  // namespace

Eigen::VectorXd make_spike(const SpikeSpec& spec, Rng& rng) {
  check_support(spec);
  const auto k = static_cast<double>(spec.support.size());
  const double floor = spec.theta / std::sqrt(k);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.p));

  switch (spec.kind) {
    case SpikeKind::kUniformMagnitude:
      for (const auto i : spec.support) v(static_cast<Eigen::Index>(i)) = rng.sign() / std::sqrt(k);
      break;
    case SpikeKind::kSignedUniform:
      for (const auto i : spec.support) {
        const double magnitude = rng.uniform(floor, 1.0 / std::sqrt(k));
        v(static_cast<Eigen::Index>(i)) = rng.sign() * magnitude;
      }
      break;
    case SpikeKind::kExplicit:
      if (spec.values.size() != spec.support.size()) {
        throw InvalidConfig("explicit spike needs one value per support index");
      }
      for (std::size_t e = 0; e < spec.support.size(); ++e) {
        if (spec.values[e] == 0.0 || !std::isfinite(spec.values[e])) {
          throw InvalidConfig("explicit spike values must be finite and nonzero");
        }
        v(static_cast<Eigen::Index>(spec.support[e])) = spec.values[e];
      }
      break;
  }

  v /= v.norm();
  for (const auto i : spec.support) {
    // Small slack for the rounding of 1/sqrt(k) itself.
    if (std::abs(v(static_cast<Eigen::Index>(i))) < floor * (1.0 - 1e-12)) {
      throw InfeasibleSpec("normalized spike violates the theta/sqrt(k) magnitude bound");
    }
  }
  return v;
}

std::vector<std::size_t> ModelParams::support(std::size_t q) const {
  std::vector<std::size_t> out;
  const auto& v = spikes.at(q);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) != 0.0) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

std::vector<std::size_t> ModelParams::union_support() const {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(p); ++i) {
    for (const auto& v : spikes) {
      if (v(i) != 0.0) {
        out.push_back(static_cast<std::size_t>(i));
        break;
      }
    }
  }
  return out;
}

void ModelParams::validate() const {
  if (p == 0) throw InvalidConfig("model dimension must be positive");
  if (betas.size() != spikes.size()) throw InvalidConfig("need exactly one beta per spike");
  for (std::size_t q = 0; q < betas.size(); ++q) {
    if (!(betas[q] >= 0.0) || !std::isfinite(betas[q])) throw InvalidConfig("betas must be finite and >= 0");
    if (q > 0 && !(betas[q] < betas[q - 1])) throw InvalidConfig("betas must be strictly decreasing");
  }
  for (std::size_t q = 0; q < spikes.size(); ++q) {
    const auto& v = spikes[q];
    if (static_cast<std::size_t>(v.size()) != p) throw InvalidConfig("spike length differs from p");
    if (std::abs(v.norm() - 1.0) > 1e-10) throw InvalidConfig("spikes must be unit norm");
    for (std::size_t q2 = 0; q2 < q; ++q2) {
      const auto& w = spikes[q2];
      if (std::abs(v.dot(w)) > 1e-10) throw InvalidConfig("spikes must be mutually orthogonal");
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) != 0.0 && w(i) != 0.0) {
          const double ratio = std::abs(v(i) / w(i));
          if (ratio > gamma || 1.0 / ratio > gamma) {
            throw InvalidConfig("overlapping spikes violate the gamma ratio bound");
          }
        }
      }
    }
  }
}

ModelParams null_model(std::size_t p) {
  ModelParams params;
  params.p = p;
  params.validate();
  return params;
}

std::vector<std::vector<std::size_t>> random_disjoint_supports(std::size_t p,
                                                               const std::vector<std::size_t>& ks,
                                                               Rng& rng) {
  const std::size_t total = std::accumulate(ks.begin(), ks.end(), std::size_t{0});
  if (total > p) throw InvalidConfig("disjoint supports need sum(k) <= p");
  // Partial Fisher-Yates: the first `total` entries become a uniform sample.
  std::vector<std::size_t> perm(p);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(p - i));
    std::swap(perm[i], perm[j]);
  }
  std::vector<std::vector<std::size_t>> supports;
  std::size_t offset = 0;
  for (const auto k : ks) {
    if (k == 0) throw InvalidConfig("support sizes must be >= 1");
    std::vector<std::size_t> s(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                               perm.begin() + static_cast<std::ptrdiff_t>(offset + k));
    std::sort(s.begin(), s.end());
    supports.push_back(std::move(s));
    offset += k;
  }
  return supports;
}

ModelParams make_model(std::size_t p, std::vector<double> betas, const std::vector<SpikeSpec>& specs,
                       Rng& rng, double gamma) {
  ModelParams params;
  params.p = p;
  params.betas = std::move(betas);
  params.gamma = gamma;
  for (const auto& spec : specs) {
    if (spec.p != p) throw InvalidConfig("spike spec dimension differs from model dimension");
    params.spikes.push_back(make_spike(spec, rng));
  }
  params.validate();
  return params;
}

void Dataset::validate() const {
  if (n == 0 || rows() != 2 * n) {
    throw InvalidConfig("dataset must have exactly 2n rows with n >= 1 (has " + std::to_string(rows()) +
                        " rows, n = " + std::to_string(n) + ")");
  }
  if (x.cols() == 0) throw InvalidConfig("dataset has no columns");
  if (truth && truth->p != p()) throw InvalidConfig("dataset truth dimension differs from data");
}

Dataset dataset_from_matrix(Eigen::MatrixXd x) {
  if (x.rows() == 0 || x.rows() % 2 != 0) {
    throw InvalidConfig("dataset row count must be even and positive (rows are split in two halves)");
  }
  Dataset data;
  data.n = static_cast<std::size_t>(x.rows()) / 2;
  data.x = std::move(x);
  data.validate();
  return data;
}

Dataset sample_dataset(const ModelParams& params, std::size_t n, Rng& rng) {
  params.validate();
  if (n == 0) throw InvalidConfig("half-sample size n must be positive");
  const auto p = static_cast<Eigen::Index>(params.p);
  const auto rows = static_cast<Eigen::Index>(2 * n);
  const std::size_t r = params.r();

  std::vector<double> amplitude(r);
  for (std::size_t q = 0; q < r; ++q) amplitude[q] = std::sqrt(params.betas[q]);

  Dataset data;
  data.n = n;
  data.x.resize(rows, p);
  data.truth = params;
  Eigen::RowVectorXd row(p);
  std::vector<double> u(r);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (std::size_t q = 0; q < r; ++q) u[q] = rng.gaussian();
    for (Eigen::Index j = 0; j < p; ++j) row(j) = rng.gaussian();
    for (std::size_t q = 0; q < r; ++q) row += (amplitude[q] * u[q]) * params.spikes[q].transpose();
    data.x.row(i) = row;
  }
  return data;
}

Dataset sample_dataset(const ModelParams& params, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset data = sample_dataset(params, n, rng);
  data.seed = seed;
  return data;
}

}  // namespace spca
