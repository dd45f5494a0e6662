#include <gtest/gtest.h>

#include <cmath>

#include "instances.hpp"
#include "random_matrices.hpp"
#include "spca/dense_symmetric.hpp"
#include "spca/error.hpp"
#include "spca/metrics.hpp"
#include "spca/threshold.hpp"

namespace spca {
namespace {

TEST(SupportMetrics, Examples) {
  const auto same = support_metrics({1, 2, 3}, {1, 2, 3}, 10);
  EXPECT_TRUE(same.exact);
  EXPECT_EQ(same.fraction, 1.0);
  EXPECT_EQ(same.symdiff, 0u);

  const auto empty = support_metrics({}, {1, 2}, 10);
  EXPECT_FALSE(empty.exact);
  EXPECT_EQ(empty.fraction, 0.0);
  EXPECT_EQ(empty.false_neg, 2u);

  const auto partial = support_metrics({1, 2, 4}, {1, 2, 3}, 10);
  EXPECT_DOUBLE_EQ(partial.fraction, 2.0 / 3.0);
  EXPECT_EQ(partial.symdiff, 2u);
  EXPECT_EQ(partial.false_pos, 1u);
  EXPECT_EQ(partial.false_neg, 1u);
}

TEST(SupportMetrics, EmptyTruthAndDuplicates) {
  EXPECT_EQ(support_metrics({}, {}, 4).fraction, 1.0);
  EXPECT_TRUE(support_metrics({}, {}, 4).exact);
  EXPECT_EQ(support_metrics({2}, {}, 4).fraction, 0.0);
  EXPECT_TRUE(support_metrics({3, 1, 3}, {1, 3}, 4).exact);
  EXPECT_THROW(support_metrics({4}, {1}, 4), IndexOutOfRange);
  EXPECT_THROW(support_metrics({1}, {9}, 4), IndexOutOfRange);
}

TEST(SupportMetrics, FractionPlusMissRateIsOne) {
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::size_t> est;
    std::vector<std::size_t> truth;
    for (std::size_t i = 0; i < 30; ++i) {
      if (rng.uniform() < 0.3) est.push_back(i);
      if (rng.uniform() < 0.3) truth.push_back(i);
    }
    if (truth.empty()) continue;
    const auto m = support_metrics(est, truth, 30);
    EXPECT_NEAR(m.fraction + double(m.false_neg) / double(truth.size()), 1.0, 1e-15);
    EXPECT_EQ(m.exact, m.symdiff == 0);
  }
}

TEST(VectorLoss, Examples) {
  const Eigen::Vector3d v = Eigen::Vector3d(1, 2, 2) / 3.0;
  EXPECT_NEAR(vector_loss(v, v), 0.0, 1e-7);
  EXPECT_NEAR(vector_loss(-v, v), 0.0, 1e-7);
  EXPECT_NEAR(vector_loss(Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY()), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(vector_loss(2 * v, v), NotUnitNorm);
}

TEST(VectorLoss, SymmetricAndSignInvariant) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd a(8);
    Eigen::VectorXd b(8);
    for (Eigen::Index i = 0; i < 8; ++i) {
      a(i) = rng.gaussian();
      b(i) = rng.gaussian();
    }
    a.normalize();
    b.normalize();
    const double l = vector_loss(a, b);
    EXPECT_EQ(l, vector_loss(b, a));
    EXPECT_EQ(l, vector_loss(-a, b));
    EXPECT_EQ(l, vector_loss(a, -b));
    EXPECT_NEAR(l, std::min((a - b).norm(), (a + b).norm()), 1e-12);
  }
}

TEST(Decompose, BlocksPartitionTheMatrix) {
  Rng rng(3);
  const Eigen::MatrixXd raw = testing::random_symmetric(25, rng);
  const auto eta = soft_threshold_matrix(DenseSymmetric::from_upper(raw), 0.3);
  const std::vector<std::vector<std::size_t>> supports{{1, 4, 7}, {7, 10, 20}};
  const auto blocks = decompose(eta, supports);
  const Eigen::MatrixXd sum = blocks.s.to_dense().matrix() + blocks.n.to_dense().matrix() +
                              blocks.r1.to_dense().matrix() + blocks.r2.to_dense().matrix();
  EXPECT_TRUE(sum == eta.to_dense().matrix());
  const auto in = [](const std::vector<std::size_t>& s, std::size_t i) {
    return std::find(s.begin(), s.end(), i) != s.end();
  };
  const auto in_q = [&](std::size_t i) { return in(supports[0], i) || in(supports[1], i); };
  for (std::size_t i = 0; i < 25; ++i) {
    for (std::size_t j = 0; j < 25; ++j) {
      int owners = (blocks.s(i, j) != 0) + (blocks.n(i, j) != 0) + (blocks.r1(i, j) != 0) + (blocks.r2(i, j) != 0);
      EXPECT_LE(owners, 1);
      const bool in_e = (in(supports[0], i) && in(supports[0], j)) || (in(supports[1], i) && in(supports[1], j));
      if (blocks.s(i, j) != 0) EXPECT_TRUE(in_e);
      if (blocks.n(i, j) != 0) EXPECT_TRUE(i != j && !in_q(i) && !in_q(j));
      if (blocks.r2(i, j) != 0) EXPECT_TRUE(i == j && !in_q(i));
      if (blocks.r1(i, j) != 0) EXPECT_FALSE(in_e || (!in_q(i) && !in_q(j)));
    }
  }
}

TEST(DecompositionDiagnostics, NullModelHasNoSignalBlock) {
  const auto data = sample_dataset(null_model(60), 100, 4);
  const auto d = decomposition_diagnostics(data, 4.0);
  EXPECT_EQ(d.norm_s_minus_signal, 0.0);
  EXPECT_EQ(d.norm_r1, 0.0);
  EXPECT_GE(d.norm_n, 0.0);
  EXPECT_GE(d.norm_r2, 0.0);
}

TEST(DecompositionDiagnostics, SpikedInstance) {
  const auto data = testing::rank_one_instance(200, 300, 8, 3.0, 5);
  const auto d = decomposition_diagnostics(data, 4.0);
  EXPECT_TRUE(std::isfinite(d.norm_s_minus_signal));
  EXPECT_LT(d.norm_s_minus_signal, 3.0);
  Dataset stripped = data;
  stripped.truth.reset();
  EXPECT_THROW(decomposition_diagnostics(stripped, 4.0), MissingTruth);
}

}  // namespace
}  // namespace spca
