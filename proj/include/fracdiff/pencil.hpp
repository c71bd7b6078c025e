// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <string>

#include "fracdiff/errors.hpp"
#include "fracdiff/poles.hpp"

namespace fracdiff {

using Vector = Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;

/// Enclosure [lambda_min, lambda_max] of the generalized spectrum of (K, M).
struct SpectralInterval {
  double lambda_min;
  double lambda_max;

  SpectralInterval(double lo, double hi) : lambda_min(lo), lambda_max(hi) {
    if (!(lo > 0.0) || !(hi >= lo))
      throw InvalidArgumentError("spectral interval requires 0 < lambda_min <= lambda_max");
  }
};

class SpectralConvergenceError : public ConvergenceError {
 public:
  SpectralConvergenceError(const std::string& what, SpectralInterval best_estimate)
      : ConvergenceError(what), best(best_estimate) {}
  SpectralInterval best;
};

/// Symmetric positive definite matrix pencil (K, M) representing L = M^{-1} K.
///
/// The pencil is immutable after construction. All member functions are safe
/// to call concurrently; sparse factorizations are cached per shift with
/// at-most-once semantics.
class OperatorPencil {
 public:
  /// Takes ownership of K (stiffness) and M (mass). Both must be stored
  /// symmetric; M must be positive definite and every generalized eigenvalue
  /// of (K, M) strictly positive.
  OperatorPencil(SparseMat K, SparseMat M);
  ~OperatorPencil();

  OperatorPencil(OperatorPencil&&) noexcept;
  OperatorPencil& operator=(OperatorPencil&&) noexcept;
  OperatorPencil(const OperatorPencil&) = delete;
  OperatorPencil& operator=(const OperatorPencil&) = delete;

  /// 3-point Dirichlet Laplacian on (0,1) with h = 1/(n+1), scaled 1/h^2; M = I.
  static OperatorPencil fd_laplacian_1d(Eigen::Index n);

  /// 5-point Dirichlet Laplacian on (0,1)^2 with nx interior nodes per
  /// direction (n = nx^2); M = I.
  static OperatorPencil fd_laplacian_2d(Eigen::Index nx);

  /// Reads K (and optionally M) from Matrix Market coordinate files.
  /// A missing M means M = identity.
  static OperatorPencil load(const std::string& path_k,
                             const std::optional<std::string>& path_m = std::nullopt);

  /// Writes K (and M unless it is the identity) as Matrix Market files with
  /// full (round-trip exact) decimal precision.
  void save(const std::string& path_k,
            const std::optional<std::string>& path_m = std::nullopt) const;

  Eigen::Index dim() const { return n_; }
  const SparseMat& stiffness() const { return k_; }
  const SparseMat& mass() const { return m_; }
  bool mass_is_identity() const { return m_is_identity_; }

  /// Solves (K - d M) w = M rhs; for the infinite pole returns rhs unchanged.
  /// The residual satisfies ||r|| <= kSolveTol (||M rhs|| + ||K - dM||_1 ||w||)
  /// after at most one refinement step; for well-scaled systems this is the
  /// plain relative bound kSolveTol ||M rhs||.
  Vector shifted_solve(const Pole& d, const Vector& rhs) const;

  /// L v = M^{-1} (K v).
  Vector apply_L(const Vector& v) const;

  double m_inner(const Vector& u, const Vector& v) const;
  double m_norm(const Vector& u) const;

  /// Enclosure of [lambda_1, lambda_n] with relative endpoint accuracy tol,
  /// outward-rounded by tol. Dense eigensolve for n <= 400, shift-invert /
  /// plain Lanczos in the M-inner product above.
  SpectralInterval spectral_interval(double tol = 1e-8) const;

  static constexpr double kSolveTol = 1e-12;
  static constexpr Eigen::Index kMaxDim = 4'000'000;

 private:
  struct Cache;

  SparseMat k_;
  SparseMat m_;
  Eigen::Index n_ = 0;
  bool m_is_identity_ = false;
  double k_norm1_ = 0.0;
  double m_norm1_ = 0.0;
  std::unique_ptr<Cache> cache_;
};

}  // namespace fracdiff
