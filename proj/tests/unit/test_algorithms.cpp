#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "instances.hpp"
#include "spca/algorithms.hpp"
#include "spca/error.hpp"
#include "spca/gram.hpp"

namespace spca {
namespace {

using testing::rank_one_instance;

CTConfig ct_config(std::size_t k, double beta, double tau = 4.0) {
  CTConfig cfg;
  cfg.tau = tau;
  cfg.ks = {k};
  cfg.rho = default_rho({beta}, 1.0, cfg.ks);
  return cfg;
}

TEST(DefaultRho, Examples) {
  EXPECT_DOUBLE_EQ(default_rho({2.0}, 1.0, {4}), 0.25);
  EXPECT_DOUBLE_EQ(default_rho({2.0, 8.0}, 1.0, {4, 4}), 0.25);
  EXPECT_DOUBLE_EQ(default_rho({3.0}, 0.5, {25}), 0.075);
}

TEST(CleanEigenvector, StrictAndInclusiveCutoffs) {
  Eigen::VectorXd v(4);
  v << 0.5, -0.2, 0.1, -0.5;
  const auto inclusive = clean_eigenvector(v, 0.5);
  EXPECT_EQ(inclusive(0), 0.5);
  EXPECT_EQ(inclusive(3), -0.5);
  EXPECT_EQ(inclusive(1), 0.0);
  const auto strict = clean_eigenvector(v, 0.5, true);
  EXPECT_EQ(strict.squaredNorm(), 0.0);
}

TEST(CovarianceThresholding, RecoversStrongSpike) {
  const auto data = rank_one_instance(200, 400, 6, 6.0, 1);
  const auto res = covariance_thresholding(data, ct_config(6, 6.0));
  EXPECT_EQ(res.support_hat, data.truth->union_support());
  EXPECT_EQ(res.eigvecs.size(), 1u);
  EXPECT_NEAR(res.eigvecs[0].norm(), 1.0, 1e-10);
  EXPECT_GT(res.diagnostics.nnz, 0u);
  ASSERT_EQ(res.diagnostics.residuals.size(), 1u);
  EXPECT_LE(res.diagnostics.residuals[0], 1e-9);
}

TEST(CovarianceThresholding, CleanedVectorRespectsCutoff) {
  const auto data = rank_one_instance(150, 300, 9, 4.0, 2);
  const auto res = covariance_thresholding(data, ct_config(9, 4.0));
  const double cutoff = 1.0 / (2 * std::sqrt(9.0));
  for (Eigen::Index i = 0; i < 150; ++i) {
    const double v = res.eigvecs[0](i);
    EXPECT_EQ(res.cleaned[0](i), std::abs(v) >= cutoff ? v : 0.0);
  }
}

TEST(CovarianceThresholding, InfiniteRhoGivesEmptySupport) {
  const auto data = sample_dataset(null_model(80), 100, 3);
  auto cfg = ct_config(5, 1.0);
  cfg.rho = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(covariance_thresholding(data, cfg).support_hat.empty());
}

TEST(CovarianceThresholding, PureNoiseRhoAboveAllScores) {
  const auto data = sample_dataset(null_model(80), 100, 4);
  auto cfg = ct_config(5, 1.0);
  cfg.rho = 0.0;
  const auto probe = covariance_thresholding(data, cfg);
  const Eigen::VectorXd scores = gram_apply(data.second_half(), probe.cleaned[0], 1.0).cwiseAbs();
  cfg.rho = std::nextafter(scores.maxCoeff(), std::numeric_limits<double>::infinity());
  EXPECT_TRUE(covariance_thresholding(data, cfg).support_hat.empty());
}

TEST(CovarianceThresholding, ZeroThresholdsSelectEveryScoredCoordinate) {
  const auto data = rank_one_instance(60, 80, 4, 2.0, 5);
  CTConfig cfg;
  cfg.tau = 0.0;
  cfg.rho = 0.0;
  cfg.ks = {4};
  const auto res = covariance_thresholding(data, cfg);
  const Eigen::VectorXd scores = gram_apply(data.second_half(), res.cleaned[0], 1.0);
  for (Eigen::Index i = 0; i < 60; ++i) {
    if (scores(i) != 0.0) {
      EXPECT_TRUE(std::binary_search(res.support_hat.begin(), res.support_hat.end(), std::size_t(i)));
    }
  }
}

TEST(CovarianceThresholding, SampleSplitting) {
  // Replacing the second half changes nothing upstream of support selection.
  auto data = rank_one_instance(120, 200, 6, 3.0, 6);
  const auto before = covariance_thresholding(data, ct_config(6, 3.0));
  Rng rng(1000);
  for (Eigen::Index i = 200; i < 400; ++i) {
    for (Eigen::Index j = 0; j < 120; ++j) data.x(i, j) = rng.gaussian();
  }
  const auto after = covariance_thresholding(data, ct_config(6, 3.0));
  EXPECT_TRUE(before.cleaned[0] == after.cleaned[0]);
  EXPECT_TRUE(before.eigvecs[0] == after.eigvecs[0]);
}

TEST(CovarianceThresholding, SupportIgnoresEigenvectorSign) {
  const auto data = rank_one_instance(100, 200, 5, 3.0, 7);
  const auto res = covariance_thresholding(data, ct_config(5, 3.0));
  const double rho = default_rho({3.0}, 1.0, {5});
  EXPECT_EQ(select_support(data.second_half(), {-res.cleaned[0]}, rho), res.support_hat);
}

TEST(CovarianceThresholding, FlippedSpikeSameSupportOnStrongSignal) {
  // Flipping v is the same as flipping every u_i, so this only holds when both
  // datasets are in the easy regime; it is not an exact invariance.
  const std::size_t p = 150;
  std::vector<std::size_t> support{3, 20, 41, 77, 100, 140};
  std::vector<double> plus(6, 1.0);
  std::vector<double> minus(6, -1.0);
  Rng r1(1);
  Rng r2(1);
  const auto a = make_model(p, {8.0}, {{p, support, SpikeKind::kExplicit, 1.0, plus}}, r1);
  const auto b = make_model(p, {8.0}, {{p, support, SpikeKind::kExplicit, 1.0, minus}}, r2);
  const auto da = sample_dataset(a, 300, 9);
  const auto db = sample_dataset(b, 300, 9);
  EXPECT_EQ(covariance_thresholding(da, ct_config(6, 8.0)).support_hat,
            covariance_thresholding(db, ct_config(6, 8.0)).support_hat);
}

TEST(CovarianceThresholding, PermutationEquivariance) {
  const auto data = rank_one_instance(90, 150, 5, 4.0, 8);
  std::vector<Eigen::Index> perm(90);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 17, perm.end());
  Dataset permuted = data;
  for (Eigen::Index j = 0; j < 90; ++j) permuted.x.col(j) = data.x.col(perm[static_cast<std::size_t>(j)]);
  const auto a = covariance_thresholding(data, ct_config(5, 4.0));
  const auto b = covariance_thresholding(permuted, ct_config(5, 4.0));
  for (Eigen::Index j = 0; j < 90; ++j) {
    const Eigen::Index src = perm[static_cast<std::size_t>(j)];
    EXPECT_NEAR(std::abs(b.eigvecs[0](j)), std::abs(a.eigvecs[0](src)), 1e-9);
    EXPECT_EQ(b.cleaned[0](j) != 0.0, a.cleaned[0](src) != 0.0);
  }
  std::vector<std::size_t> mapped;
  for (const auto j : b.support_hat) mapped.push_back(static_cast<std::size_t>(perm[j]));
  std::sort(mapped.begin(), mapped.end());
  EXPECT_EQ(mapped, a.support_hat);
}

TEST(CovarianceThresholding, RankTwo) {
  Rng rng(9);
  const std::size_t p = 200;
  const auto supports = random_disjoint_supports(p, {5, 5}, rng);
  const auto model = make_model(p, {10.0, 5.0},
                                {{p, supports[0], SpikeKind::kUniformMagnitude, 1.0, {}},
                                 {p, supports[1], SpikeKind::kUniformMagnitude, 1.0, {}}},
                                rng);
  const auto data = sample_dataset(model, 500, rng);
  CTConfig cfg;
  cfg.r = 2;
  cfg.ks = {5, 5};
  cfg.rho = default_rho(model.betas, 1.0, cfg.ks);
  const auto res = covariance_thresholding(data, cfg);
  EXPECT_EQ(res.support_hat, model.union_support());
  EXPECT_GT(res.eigvals[0], res.eigvals[1]);
}

TEST(CovarianceThresholding, ConfigErrors) {
  const auto data = rank_one_instance(20, 30, 3, 2.0, 10);
  CTConfig cfg;
  cfg.ks = {21};
  EXPECT_THROW(covariance_thresholding(data, cfg), InvalidConfig);
  cfg.ks = {3};
  cfg.r = 21;
  EXPECT_THROW(covariance_thresholding(data, cfg), InvalidConfig);
  cfg.r = 1;
  cfg.tau = -1;
  EXPECT_THROW(covariance_thresholding(data, cfg), InvalidConfig);
}

TEST(CovarianceThresholdingK0, MatchesPlainVariantWhenExact) {
  // k0 = k: the cutoffs coincide except at the boundary, which the strict
  // inequality excludes; with continuous data the boundary has probability 0.
  const auto data = rank_one_instance(150, 300, 8, 3.0, 11);
  const double rho = default_rho({3.0}, 1.0, {8});
  const auto plain = covariance_thresholding(data, ct_config(8, 3.0));
  const auto k0 = covariance_thresholding_k0(data, 8, 1.0, 4.0, rho, 1);
  EXPECT_EQ(plain.support_hat, k0.support_hat);
  EXPECT_TRUE(plain.cleaned[0] == k0.cleaned[0]);
  ASSERT_TRUE(k0.diagnostics.k0_in_guarantee_regime.has_value());
  EXPECT_TRUE(*k0.diagnostics.k0_in_guarantee_regime);
}

TEST(CovarianceThresholdingK0, VacuousCutoffRuns) {
  const auto data = rank_one_instance(100, 200, 5, 3.0, 12);
  const auto res = covariance_thresholding_k0(data, 100, 1.0, 4.0, default_rho({3.0}, 1.0, {5}), 1);
  EXPECT_LE(res.support_hat.size(), 100u);
  EXPECT_THROW(covariance_thresholding_k0(data, 0, 1.0, 4.0, 0.1, 1), InvalidConfig);
}

TEST(DiagonalThresholding, OrdersDiagonal) {
  Eigen::MatrixXd x(2, 5);
  x.row(0) << std::sqrt(5.0), 2.0, std::sqrt(3.0), std::sqrt(2.0), 1.0;
  x.row(1) = x.row(0);
  const auto data = dataset_from_matrix(x);
  const auto res = diagonal_thresholding(data, 2);
  EXPECT_EQ(res.selected, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(res.vector.norm(), 1.0, 1e-12);
  EXPECT_EQ(res.vector(2), 0.0);
}

TEST(DiagonalThresholding, TiesGoToLowestIndex) {
  Eigen::MatrixXd x(2, 3);
  x.row(0) << 2.0, 2.0, 1.0;
  x.row(1) << 2.0, -2.0, 1.0;
  const auto res = diagonal_thresholding(dataset_from_matrix(x), 1);
  EXPECT_EQ(res.selected, (std::vector<std::size_t>{0}));
  EXPECT_THROW(diagonal_thresholding(dataset_from_matrix(x), 0), InvalidConfig);
  EXPECT_THROW(diagonal_thresholding(dataset_from_matrix(x), 4), InvalidConfig);
}

TEST(DiagonalThresholding, UsesAllRows) {
  // Only the second half carries signal in column 2.
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 3);
  x(0, 0) = 1.0;
  x(2, 2) = 3.0;
  EXPECT_EQ(diagonal_thresholding(dataset_from_matrix(x), 1).selected, (std::vector<std::size_t>{2}));
}

TEST(VanillaPca, TopEigenvectorOfFullGram) {
  const auto data = rank_one_instance(50, 400, 50, 20.0, 13);
  const auto pairs = vanilla_pca(data, 2);
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_GT(std::abs(pairs[0].vector.dot(data.truth->spikes[0])), 0.95);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(data.x.transpose() * data.x / double(data.rows()));
  EXPECT_NEAR(pairs[0].value, es.eigenvalues()(49), 1e-9);
}

}  // namespace
}  // namespace spca
