// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "fracdiff/errors.hpp"

namespace fracdiff::densecore {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr Eigen::Index kDenseCap = 2000;

/// Dense symmetric matrix; symmetry holds exactly by storage.
class DenseSym {
 public:
  /// Validates relative asymmetry against `asym_tol`, then stores the exactly
  /// symmetrized matrix (a + a^T)/2.
  explicit DenseSym(Matrix a, double asym_tol = 1e-12);

  const Matrix& get() const { return a_; }
  Eigen::Index dim() const { return a_.rows(); }

 private:
  Matrix a_;
};

/// Spectral decomposition: values ascending, vectors orthonormal with respect
/// to the inner product of the defining problem (B-orthonormal for the
/// generalized problem).
struct EigenPairs {
  Vector values;
  Matrix vectors;
};

/// Full decomposition of a symmetric matrix, values ascending.
EigenPairs sym_eig(const DenseSym& a);

/// Pairs (lambda_j, u_j) with K u = lambda M u and U^T M U = I.
EigenPairs gen_sym_eig(const DenseSym& k, const DenseSym& m);

using InnerProduct = std::function<double(const Vector&, const Vector&)>;

struct OrthonormalBasis {
  Matrix basis;                        // columns orthonormal in the given inner product
  std::vector<Eigen::Index> dropped;   // input columns removed as dependent
};

/// Modified Gram-Schmidt with an unconditional second pass. Columns whose
/// residual after projection falls below drop_tol relative to their original
/// norm are dropped and reported. Zero input columns are dropped, not errors.
OrthonormalBasis orthonormalize(const Matrix& vectors, const InnerProduct& inner,
                                double drop_tol = 1e-10);

}  // namespace fracdiff::densecore
