#include "spca/eigen_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "spca/rng.hpp"

namespace spca {

namespace {

constexpr std::uint64_t kStartSeed = 0x1A2C305EEDULL;

std::size_t budget(const EigenOptions& opts, std::size_t dim) {
  return opts.max_iter != 0 ? opts.max_iter : 10 * dim;
}

void check_request(std::size_t dim, std::size_t r, double tol) {
  if (r == 0 || r > dim) throw InvalidConfig("requested eigenpair count must be in [1, dim]");
  if (!(tol > 0.0)) throw InvalidConfig("eigensolver tolerance must be positive");
}

double residual_of(const SymmetricOperator& op, const Eigen::VectorXd& v, double value) {
  Eigen::VectorXd mv;
  op.apply(v, mv);
  return (mv - value * v).norm();
}

// Orthogonalizes w against the first `count` columns of basis, twice
// (classical Gram-Schmidt with one reorthogonalization pass).
void orthogonalize(const Eigen::MatrixXd& basis, Eigen::Index count, Eigen::VectorXd& w) {
  if (count == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd coeffs = basis.leftCols(count).transpose() * w;
    w.noalias() -= basis.leftCols(count) * coeffs;
  }
}

// Random unit vector orthogonal to the current basis; empty when the basis
// already spans the space.
bool fresh_direction(const Eigen::MatrixXd& basis, Eigen::Index count, Rng& rng,
                     Eigen::VectorXd& out) {
  const Eigen::Index p = basis.rows();
  for (int attempt = 0; attempt < 3; ++attempt) {
    Eigen::VectorXd w(p);
    for (Eigen::Index i = 0; i < p; ++i) w(i) = rng.gaussian();
    orthogonalize(basis, count, w);
    const double norm = w.norm();
    if (norm > 1e-8 * std::sqrt(static_cast<double>(p))) {
      out = w / norm;
      return true;
    }
  }
  return false;
}

std::vector<EigenPair> finish_pairs(std::vector<EigenPair> pairs) {
  for (auto& pair : pairs) apply_sign_convention(pair.vector);
  return pairs;
}

}  // namespace

void apply_sign_convention(Eigen::VectorXd& v) {
  if (v.size() == 0) return;
  // Magnitudes within solver precision of the maximum count as ties, so that
  // structurally tied entries (e.g. (1, -1) / sqrt(2)) do not flip on rounding.
  const double cutoff = v.cwiseAbs().maxCoeff() * (1.0 - kSignTieTolerance);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= cutoff) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

std::vector<EigenPair> dense_top_r(const DenseSymmetric& m, std::size_t r) {
  check_request(m.dim(), r, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("dense symmetric eigensolver failed", {}, std::numeric_limits<double>::infinity());
  }
  const Eigen::Index p = m.matrix().rows();
  std::vector<EigenPair> pairs;
  pairs.reserve(r);
  for (std::size_t q = 0; q < r; ++q) {
    const Eigen::Index idx = p - 1 - static_cast<Eigen::Index>(q);
    EigenPair pair;
    pair.value = solver.eigenvalues()(idx);
    pair.vector = solver.eigenvectors().col(idx).normalized();
    pair.residual = (m.matrix() * pair.vector - pair.value * pair.vector).norm();
    pairs.push_back(std::move(pair));
  }
  return finish_pairs(std::move(pairs));
}

std::vector<EigenPair> lanczos_top_r(const SymmetricOperator& op, std::size_t r,
                                     const EigenOptions& opts) {
  const std::size_t dim = op.dim;
  check_request(dim, r, opts.tol);
  const std::size_t max_matvec = budget(opts, dim);
  const auto p = static_cast<Eigen::Index>(dim);
  const auto want = static_cast<Eigen::Index>(r);

  Rng rng(kStartSeed ^ mix64(dim));
  Eigen::MatrixXd basis(p, std::min<Eigen::Index>(p, 64));
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples basis columns j and j + 1

  Eigen::VectorXd start;
  fresh_direction(basis, 0, rng, start);
  basis.col(0) = start;
  Eigen::Index m = 1;            // basis columns in use
  Eigen::Index block_start = 0;  // first column of the current Krylov block

  std::size_t matvecs = 0;
  double scale = 0.0;  // running estimate of ||M||
  std::size_t next_check = std::min<std::size_t>(dim, std::max<std::size_t>(r + 5, 10));
  std::vector<EigenPair> best;
  double best_residual = std::numeric_limits<double>::infinity();

  // Ritz pairs of the current tridiagonal matrix. With `complement_value`,
  // the orthogonal complement of the basis is taken to be an eigenspace with
  // that eigenvalue, and random unit vectors from it supply further copies.
  const auto ritz_pairs = [&](std::optional<double> complement_value) {
    const Eigen::Index m0 = m;
    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m0);
    Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m0 - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    Eigen::MatrixXd copies(p, want);
    Eigen::Index copies_used = 0;
    std::vector<EigenPair> pairs;
    Eigen::Index next_ritz = m0 - 1;
    while (static_cast<Eigen::Index>(pairs.size()) < want) {
      const bool copies_left = complement_value && m0 + copies_used < p;
      const bool use_ritz =
          next_ritz >= 0 && (!copies_left || tri.eigenvalues()(next_ritz) >= *complement_value);
      EigenPair pair;
      if (use_ritz) {
        pair.value = tri.eigenvalues()(next_ritz);
        pair.vector = basis.leftCols(m0) * tri.eigenvectors().col(next_ritz);
        --next_ritz;
      } else if (copies_left) {
        Eigen::VectorXd copy;
        if (!fresh_direction(basis, m0, rng, copy)) break;
        orthogonalize(copies, copies_used, copy);
        copy.normalize();
        copies.col(copies_used++) = copy;
        pair.value = *complement_value;
        pair.vector = copy;
      } else {
        break;
      }
      pair.vector.normalize();
      pair.residual = residual_of(op, pair.vector, pair.value);
      pairs.push_back(std::move(pair));
    }
    return pairs;
  };

  const auto worst_residual = [](const std::vector<EigenPair>& pairs) {
    double worst = 0.0;
    for (const auto& pair : pairs) worst = std::max(worst, pair.residual);
    return worst;
  };

  Eigen::VectorXd w;
  while (true) {
    const Eigen::Index j = m - 1;
    op.apply(basis.col(j), w);
    ++matvecs;
    const double a = basis.col(j).dot(w);
    alpha.push_back(a);
    w -= a * basis.col(j);
    if (j > block_start) w -= beta[static_cast<std::size_t>(j - 1)] * basis.col(j - 1);
    orthogonalize(basis, m, w);
    const double b = w.norm();
    scale = std::max({scale, std::abs(a), b});

    if (m == p) {
      beta.push_back(0.0);
      auto pairs = ritz_pairs(std::nullopt);
      const double worst = worst_residual(pairs);
      if (worst <= opts.tol) return finish_pairs(std::move(pairs));
      throw ConvergenceFailure("Lanczos exhausted the space without reaching residual " +
                                   std::to_string(opts.tol),
                               finish_pairs(std::move(pairs)), worst);
    }

    const bool breakdown = b <= 1e-10 * scale;
    if (breakdown) {
      beta.push_back(0.0);
      if (m - block_start == 1) {
        // A random vector of the complement was itself an eigenvector, so the
        // complement is (generically) one eigenspace with eigenvalue a.
        auto pairs = ritz_pairs(a);
        const double worst = worst_residual(pairs);
        if (static_cast<Eigen::Index>(pairs.size()) == want && worst <= opts.tol) {
          return finish_pairs(std::move(pairs));
        }
      }
      Eigen::VectorXd next;
      if (!fresh_direction(basis, m, rng, next)) {
        auto pairs = ritz_pairs(std::nullopt);
        const double worst = worst_residual(pairs);
        if (static_cast<Eigen::Index>(pairs.size()) == want && worst <= opts.tol) {
          return finish_pairs(std::move(pairs));
        }
        throw ConvergenceFailure("Lanczos lost orthogonality", finish_pairs(std::move(pairs)), worst);
      }
      if (m == basis.cols()) basis.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(p, 2 * m));
      block_start = m;
      basis.col(m++) = next;
      continue;
    }
    beta.push_back(b);

    if (m >= want && (static_cast<std::size_t>(m) >= next_check || matvecs >= max_matvec)) {
      Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
      Eigen::VectorXd sub = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      bool estimates_ok = true;
      for (Eigen::Index q = 0; q < want; ++q) {
        // Residual of a Ritz pair is |beta_m * (last component of its T-eigenvector)|.
        if (std::abs(b * tri.eigenvectors()(m - 1, m - 1 - q)) > 0.5 * opts.tol) estimates_ok = false;
      }
      if (estimates_ok || matvecs >= max_matvec) {
        auto pairs = ritz_pairs(std::nullopt);
        const double worst = worst_residual(pairs);
        if (worst <= opts.tol) return finish_pairs(std::move(pairs));
        if (worst < best_residual) {
          best_residual = worst;
          best = pairs;
        }
        if (matvecs >= max_matvec) {
          throw ConvergenceFailure("Lanczos did not reach residual " + std::to_string(opts.tol) +
                                       " within " + std::to_string(max_matvec) + " matvecs",
                                   finish_pairs(std::move(best)), best_residual);
        }
      }
      next_check = static_cast<std::size_t>(m) + std::max<std::size_t>(5, static_cast<std::size_t>(m) / 8);
    } else if (matvecs >= max_matvec) {
      throw ConvergenceFailure("Lanczos budget exhausted before r Ritz pairs formed", {},
                               std::numeric_limits<double>::infinity());
    }

    if (m == basis.cols()) basis.conservativeResize(Eigen::NoChange, std::min<Eigen::Index>(p, 2 * m));
    basis.col(m++) = w / b;
  }
}

std::vector<EigenPair> top_r_eigenpairs(const DenseSymmetric& m, std::size_t r, const EigenOptions& opts) {
  check_request(m.dim(), r, opts.tol);
  const bool dense_first = opts.method == EigenMethod::kDense ||
                           (opts.method == EigenMethod::kAuto && m.dim() <= opts.dense_cutoff);
  if (dense_first) return dense_top_r(m, r);
  SymmetricOperator op{m.dim(), [&m](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
                         y.noalias() = m.matrix() * x;
                       }};
  try {
    return lanczos_top_r(op, r, opts);
  } catch (const ConvergenceFailure&) {
    if (opts.method == EigenMethod::kLanczos || m.dim() > opts.dense_fallback_limit) throw;
    return dense_top_r(m, r);
  }
}

std::vector<EigenPair> top_r_eigenpairs(const SparseSymmetric& m, std::size_t r, const EigenOptions& opts) {
  check_request(m.dim(), r, opts.tol);
  const bool dense_first = opts.method == EigenMethod::kDense ||
                           (opts.method == EigenMethod::kAuto && m.dim() <= opts.dense_cutoff);
  if (dense_first) return dense_top_r(m.to_dense(), r);
  SymmetricOperator op{m.dim(), [&m](const Eigen::VectorXd& x, Eigen::VectorXd& y) { m.apply(x, y); }};
  try {
    return lanczos_top_r(op, r, opts);
  } catch (const ConvergenceFailure&) {
    if (opts.method == EigenMethod::kLanczos || m.dim() > opts.dense_fallback_limit) throw;
    return dense_top_r(m.to_dense(), r);
  }
}

namespace {

template <typename Matrix>
double spectral_norm_impl(const Matrix& m, double frobenius, double tol) {
  if (!(tol > 0.0)) throw InvalidConfig("spectral_norm tolerance must be positive");
  if (frobenius == 0.0) return 0.0;
  // ||M||_F / sqrt(p) <= ||M||_2, so this absolute target is a relative one.
  EigenOptions opts;
  opts.tol = tol * frobenius / std::sqrt(static_cast<double>(m.dim()));
  const double top = top_r_eigenpairs(m, 1, opts).front().value;
  const double bottom = -top_r_eigenpairs(-m, 1, opts).front().value;
  return std::max(std::abs(top), std::abs(bottom));
}

}  // namespace

double spectral_norm(const SparseSymmetric& m, double tol) {
  return spectral_norm_impl(m, m.frobenius_norm(), tol);
}

double spectral_norm(const DenseSymmetric& m, double tol) {
  return spectral_norm_impl(m, m.matrix().norm(), tol);
}

}  // namespace spca
