#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "spca/dense_symmetric.hpp"
#include "spca/eigen_solver.hpp"
#include "spca/gram.hpp"
#include "spca/rng.hpp"
#include "spca/sparse_symmetric.hpp"
#include "spca/threshold.hpp"

namespace {

using namespace spca;

Eigen::MatrixXd noise(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.gaussian();
  return x;
}

// Thresholded pure-noise covariance at tau = 4, the typical eigensolver input.
SparseSymmetric thresholded_noise(Eigen::Index p) {
  const Eigen::MatrixXd x = noise(p, p, 3);
  return soft_threshold_matrix(gram_centered(x, true, 1.0), 4.0 / std::sqrt(static_cast<double>(p)));
}

void BM_Gram(benchmark::State& state) {
  const auto p = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXd x = noise(p, p, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gram_centered(x, true, 1.0));
}
BENCHMARK(BM_Gram)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SoftThresholdMatrix(benchmark::State& state) {
  const auto p = static_cast<Eigen::Index>(state.range(0));
  const DenseSymmetric g = gram_centered(noise(p, p, 2), true, 1.0);
  const double level = 4.0 / std::sqrt(static_cast<double>(p));
  for (auto _ : state) benchmark::DoNotOptimize(soft_threshold_matrix(g, level));
}
BENCHMARK(BM_SoftThresholdMatrix)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SparseMatvec(benchmark::State& state) {
  const SparseSymmetric m = thresholded_noise(state.range(0));
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(m.dim()));
  Eigen::VectorXd y(x.size());
  for (auto _ : state) {
    m.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nnz"] = static_cast<double>(m.nnz());
}
BENCHMARK(BM_SparseMatvec)->Arg(500)->Arg(1000);

void BM_TopEigen(benchmark::State& state) {
  const SparseSymmetric m = thresholded_noise(state.range(0));
  EigenOptions opts;
  opts.method = state.range(1) == 0 ? EigenMethod::kLanczos : EigenMethod::kDense;
  for (auto _ : state) benchmark::DoNotOptimize(top_r_eigenpairs(m, 1, opts));
}
BENCHMARK(BM_TopEigen)
    ->ArgNames({"p", "dense"})
    ->Args({500, 0})
    ->Args({500, 1})
    ->Args({1000, 0})
    ->Args({1000, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
