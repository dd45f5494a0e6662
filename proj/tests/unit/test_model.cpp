#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "spca/error.hpp"
#include "spca/gram.hpp"
#include "spca/haar.hpp"
#include "spca/model.hpp"
#include "spca/rng.hpp"

namespace spca {
namespace {

TEST(Rng, DeterministicStreams) {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  Rng c(43);
  EXPECT_NE(Rng(42).next_u64(), c.next_u64());
}

TEST(Rng, FrozenReferenceValues) {
  // SplitMix64 reference outputs for state 0.
  std::uint64_t state = 0;
  EXPECT_EQ(splitmix64(state), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(state), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(trial_seed(7, 3), mix64(7 + 0x9E3779B97F4A7C15ULL * 4));
  EXPECT_NE(trial_seed(7, 3), trial_seed(7, 4));
}

TEST(Rng, UniformAndGaussianMoments) {
  Rng rng(9);
  double su = 0;
  double sg = 0;
  double sg2 = 0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double g = rng.gaussian();
    sg += g;
    sg2 += g * g;
  }
  EXPECT_NEAR(su / count, 0.5, 4 * std::sqrt(1.0 / 12 / count));
  EXPECT_NEAR(sg / count, 0.0, 4 / std::sqrt(double(count)));
  EXPECT_NEAR(sg2 / count, 1.0, 4 * std::sqrt(2.0 / count));
}

TEST(Rng, BelowIsInRange) {
  Rng rng(10);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.below(7)];
  for (const int h : hits) EXPECT_GT(h, 800);
}

TEST(MakeSpike, UniformMagnitudeAllPositive) {
  Rng rng(1);
  SpikeSpec spec{8, {1, 3, 5, 7}, SpikeKind::kExplicit, 1.0, {1, 1, 1, 1}};
  const auto v = make_spike(spec, rng);
  for (const auto i : spec.support) EXPECT_DOUBLE_EQ(v(static_cast<Eigen::Index>(i)), 0.5);
  EXPECT_EQ(v(0), 0.0);

  spec.kind = SpikeKind::kUniformMagnitude;
  const auto u = make_spike(spec, rng);
  for (const auto i : spec.support) EXPECT_DOUBLE_EQ(std::abs(u(static_cast<Eigen::Index>(i))), 0.5);
}

TEST(MakeSpike, SingleCoordinateIsBasisVector) {
  Rng rng(2);
  const auto v = make_spike({5, {3}, SpikeKind::kUniformMagnitude, 1.0, {}}, rng);
  EXPECT_DOUBLE_EQ(std::abs(v(3)), 1.0);
  EXPECT_DOUBLE_EQ(v.norm(), 1.0);
}

TEST(MakeSpike, SignedUniformRespectsBound) {
  Rng rng(3);
  SpikeSpec spec{40, {0, 2, 4, 6, 8, 10, 12, 14, 16, 18}, SpikeKind::kSignedUniform, 0.5, {}};
  const double floor = 0.5 / std::sqrt(10.0);
  for (int t = 0; t < 1000; ++t) {
    const auto v = make_spike(spec, rng);
    EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    for (const auto i : spec.support) EXPECT_GE(std::abs(v(static_cast<Eigen::Index>(i))), floor - 1e-12);
    EXPECT_EQ(v(1), 0.0);
  }
}

TEST(MakeSpike, Errors) {
  Rng rng(4);
  EXPECT_THROW(make_spike({5, {}, SpikeKind::kUniformMagnitude, 1.0, {}}, rng), InvalidConfig);
  EXPECT_THROW(make_spike({5, {1, 1}, SpikeKind::kUniformMagnitude, 1.0, {}}, rng), InvalidConfig);
  EXPECT_THROW(make_spike({5, {5}, SpikeKind::kUniformMagnitude, 1.0, {}}, rng), InvalidConfig);
  // Entries 1 and 3 normalize to 0.316 and 0.949; the bound 0.9/sqrt(2) fails.
  EXPECT_THROW(make_spike({5, {0, 1}, SpikeKind::kExplicit, 0.9, {1.0, 3.0}}, rng), InfeasibleSpec);
}

TEST(ModelParams, ValidatesInvariants) {
  Rng rng(5);
  const auto supports = random_disjoint_supports(30, {4, 6}, rng);
  ASSERT_EQ(supports.size(), 2u);
  for (const auto i : supports[0]) {
    EXPECT_EQ(std::count(supports[1].begin(), supports[1].end(), i), 0);
  }
  std::vector<SpikeSpec> specs;
  for (const auto& s : supports) specs.push_back({30, s, SpikeKind::kUniformMagnitude, 1.0, {}});
  const auto model = make_model(30, {4.0, 2.0}, specs, rng);
  EXPECT_EQ(model.r(), 2u);
  EXPECT_NEAR(model.spikes[0].dot(model.spikes[1]), 0.0, 1e-15);
  EXPECT_EQ(model.union_support().size(), 10u);
  EXPECT_THROW(make_model(30, {2.0, 4.0}, specs, rng), InvalidConfig);
  EXPECT_THROW(make_model(30, {2.0, 2.0}, specs, rng), InvalidConfig);
}

TEST(ModelParams, OverlappingSpikesCheckGamma) {
  ModelParams m;
  m.p = 4;
  m.betas = {2.0, 1.0};
  Eigen::VectorXd a(4);
  a << 1, 1, 1, 1;
  Eigen::VectorXd b(4);
  b << 1, -1, 1, -1;
  m.spikes = {a / 2, b / 2};
  m.gamma = 1.0;
  EXPECT_NO_THROW(m.validate());
  Eigen::VectorXd c(4);
  c << 3, -3, 1, -1;
  m.spikes = {a / 2, c.normalized()};
  EXPECT_THROW(m.validate(), InvalidConfig);
  m.gamma = 3.0;
  EXPECT_NO_THROW(m.validate());
}

TEST(SampleDataset, DeterministicAndShaped) {
  Rng rng(6);
  const auto model = make_model(20, {2.0}, {{20, {1, 4, 9}, SpikeKind::kUniformMagnitude, 1.0, {}}}, rng);
  const auto a = sample_dataset(model, 15, 99);
  const auto b = sample_dataset(model, 15, 99);
  EXPECT_EQ(a.rows(), 30u);
  EXPECT_EQ(a.p(), 20u);
  EXPECT_EQ(a.n, 15u);
  EXPECT_TRUE(a.x == b.x);
  EXPECT_FALSE(a.x == sample_dataset(model, 15, 100).x);
  ASSERT_TRUE(a.truth.has_value());
}

TEST(SampleDataset, FrozenConsumptionOrder) {
  Rng rng(7);
  const auto model = make_model(3, {4.0}, {{3, {0}, SpikeKind::kExplicit, 1.0, {1.0}}}, rng);
  const auto data = sample_dataset(model, 1, 555);
  Rng replay(555);
  for (Eigen::Index i = 0; i < 2; ++i) {
    const double u = replay.gaussian();
    const double z0 = replay.gaussian();
    const double z1 = replay.gaussian();
    const double z2 = replay.gaussian();
    EXPECT_DOUBLE_EQ(data.x(i, 0), 2.0 * u + z0);
    EXPECT_EQ(data.x(i, 1), z1);
    EXPECT_EQ(data.x(i, 2), z2);
  }
}

TEST(SampleDataset, NullModelIsWhiteNoise) {
  const auto data = sample_dataset(null_model(50), 500, 1);
  const auto g = gram_centered(data.x, false);
  EXPECT_NEAR(g.matrix().diagonal().mean(), 1.0, 4 * std::sqrt(2.0 / (1000 * 50)));
  EXPECT_NEAR(data.x.mean(), 0.0, 4 / std::sqrt(1000.0 * 50));
}

TEST(SampleDataset, SpikeDirectionVariance) {
  // <v, G v> over 2n = 400 rows should sit near 1 + beta.
  const std::size_t p = 100;
  double worst = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const auto supports = random_disjoint_supports(p, {5}, rng);
    const auto model = make_model(p, {2.0}, {{p, supports[0], SpikeKind::kUniformMagnitude, 1.0, {}}}, rng);
    const auto data = sample_dataset(model, 200, rng);
    const Eigen::VectorXd xv = data.x * model.spikes[0];
    worst = std::max(worst, std::abs(xv.squaredNorm() / double(data.rows()) - 3.0));
  }
  EXPECT_LE(worst, 0.5);
}

TEST(SampleDataset, DiagonalMatchesModelAtLargeN) {
  Rng rng(8);
  const auto model = make_model(10, {3.0}, {{10, {0, 1}, SpikeKind::kUniformMagnitude, 1.0, {}}}, rng);
  const auto data = sample_dataset(model, 5000, rng);
  const Eigen::VectorXd diag = gram_centered(data.x, false).matrix().diagonal();
  const double m = double(data.rows());
  for (Eigen::Index i = 0; i < 10; ++i) {
    const double expected = 1.0 + 3.0 * model.spikes[0](i) * model.spikes[0](i);
    EXPECT_NEAR(diag(i), expected, 4 * expected * std::sqrt(2.0 / m));
  }
}

TEST(Dataset, RejectsOddRows) {
  EXPECT_THROW(dataset_from_matrix(Eigen::MatrixXd::Zero(3, 2)), InvalidConfig);
  EXPECT_THROW(dataset_from_matrix(Eigen::MatrixXd::Zero(0, 2)), InvalidConfig);
  EXPECT_EQ(dataset_from_matrix(Eigen::MatrixXd::Zero(4, 2)).n, 2u);
}

TEST(Haar, ConstantHasOnlyScalingCoefficient) {
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(8, 1.5);
  const auto w = haar_forward(c);
  EXPECT_NEAR(w(0), 1.5 * std::sqrt(8.0), 1e-14);
  EXPECT_LE(w.tail(7).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Haar, BasisVectorKeepsNorm) {
  const Eigen::VectorXd e = Eigen::VectorXd::Unit(4, 0);
  EXPECT_NEAR(haar_forward(e).norm(), 1.0, 1e-15);
}

TEST(Haar, RoundTripAndNorm) {
  Rng rng(11);
  Eigen::VectorXd x(1024);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.gaussian();
  const auto w = haar_forward(x);
  EXPECT_NEAR(w.norm(), x.norm(), 1e-12 * x.norm());
  EXPECT_LE((haar_inverse(w) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Haar, BlockSignalIsSparse) {
  for (const std::size_t blocks : {1u, 2u, 3u, 5u}) {
    const auto s = block_constant_signal(1024, blocks);
    const auto w = haar_forward(s);
    const auto nonzero = (w.array().abs() > 1e-10).count();
    EXPECT_LE(static_cast<std::size_t>(nonzero), blocks * 10 + 1);
  }
}

TEST(Haar, RejectsNonPowerOfTwo) {
  EXPECT_THROW(haar_forward(Eigen::VectorXd::Zero(12)), LengthNotPowerOfTwo);
  EXPECT_THROW(haar_inverse(Eigen::VectorXd::Zero(0)), LengthNotPowerOfTwo);
}

}  // namespace
}  // namespace spca
