#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "spca/model.hpp"
#include "spca/sparse_symmetric.hpp"

namespace spca {

struct SupportMetrics {
  bool exact = false;
  double fraction = 0.0;  // |Q_hat & Q| / |Q|
  std::size_t symdiff = 0;
  std::size_t false_pos = 0;
  std::size_t false_neg = 0;
};

/// Compares an estimated support with the true one. Both are index sets in
/// [0, p) (duplicates ignored). With an empty truth, fraction is 1 when the
/// estimate is empty too and 0 otherwise. Throws IndexOutOfRange.
SupportMetrics support_metrics(const std::vector<std::size_t>& estimated,
                               const std::vector<std::size_t>& truth, std::size_t p);

/// min(||a - b||, ||a + b||) = sqrt(2 - 2 |<a, b>|) for unit vectors.
/// Throws NotUnitNorm when either norm is off by more than 1e-6.
double vector_loss(const Eigen::VectorXd& estimate, const Eigen::VectorXd& truth);

/// The four disjoint pieces of a thresholded covariance matrix relative to
/// the spike supports Q_q (Q their union):
///   S  on E = union_q Q_q x Q_q
///   N  on F = (Q^c x Q^c) minus the diagonal
///   R1 on G = everything else off E, F, D (cross terms)
///   R2 on D = diagonal entries outside Q
struct DecompBlocks {
  SparseSymmetric s;
  SparseSymmetric n;
  SparseSymmetric r1;
  SparseSymmetric r2;
};

DecompBlocks decompose(const SparseSymmetric& eta, const std::vector<std::vector<std::size_t>>& supports);

struct DecompDiagnostics {
  double norm_s_minus_signal = 0.0;  // ||S - sum_q beta_q v_q v_q^T||
  double norm_n = 0.0;
  double norm_r1 = 0.0;
  double norm_r2 = 0.0;
};

/// Spectral norms of the blocks of eta(G - I) built from the first n rows at
/// level tau / sqrt(n). Needs synthetic truth; throws MissingTruth.
DecompDiagnostics decomposition_diagnostics(const Dataset& data, double tau);

}  // namespace spca
