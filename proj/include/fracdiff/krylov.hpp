// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "fracdiff/densecore.hpp"
#include "fracdiff/pencil.hpp"
#include "fracdiff/poles.hpp"
#include "fracdiff/rational.hpp"

namespace fracdiff::krylov {

using Matrix = Eigen::MatrixXd;

/// M-orthonormal basis W of the rational Krylov space Q_{k+1}(L, b) together
/// with the compression L_{k+1} = W^T K W, its eigendecomposition (rational
/// Ritz values / vectors) and the extraction coefficients W^T M b.
///
/// All projections use the M-inner product, in which L = M^{-1} K is
/// self-adjoint; with M = I this reduces to the Euclidean setting.
/// The referenced pencil must outlive the basis. A built basis is immutable
/// and safe to share across threads.
class KrylovBasis {
 public:
  const Matrix& basis() const { return w_; }             // n x m
  const Matrix& projected() const { return l_red_; }     // L_{k+1}, symmetric
  const Vector& ritz_values() const { return ritz_; }    // ascending
  const Matrix& ritz_vectors() const { return ritz_vec_; }
  const Vector& coeffs() const { return coeffs_; }       // W^T M b
  const PoleSet& poles() const { return poles_; }
  const std::vector<Eigen::Index>& dropped() const { return dropped_; }
  Eigen::Index dim() const { return w_.cols(); }
  const OperatorPencil& pencil() const { return *pencil_; }

  /// Text serialization of (W, coefficients, pole set); load() revalidates
  /// M-orthonormality against the supplied pencil.
  void save(const std::string& path) const;
  static KrylovBasis load(const std::string& path, const OperatorPencil& pencil);

 private:
  friend KrylovBasis build_basis(const OperatorPencil&, const Vector&, const PoleSet&);
  KrylovBasis(const OperatorPencil& p, Matrix w, PoleSet poles, Vector coeffs,
              std::vector<Eigen::Index> dropped);

  const OperatorPencil* pencil_;
  Matrix w_;
  Matrix l_red_;
  Vector ritz_;
  Matrix ritz_vec_;
  Vector coeffs_;
  PoleSet poles_;
  std::vector<Eigen::Index> dropped_;
};

/// Block rational Arnoldi: solves all shifted systems w_j = (L - d_j)^{-1} b,
/// then M-orthonormalizes. The dimension drops below k+1 when the invariance
/// index is reached; dropped directions are reported on the basis.
KrylovBasis build_basis(const OperatorPencil& pencil, const Vector& b,
                        const PoleSet& poles);

/// Rayleigh-Ritz extraction u_{k+1} = W f(L_{k+1}) W^T M b, with f applied
/// through the cached eigendecomposition. f must be finite at every rational
/// Ritz value.
Vector extract(const KrylovBasis& basis, const std::function<double(double)>& f);

/// Galerkin resolvent surrogate w_{k+1}(t) = W (t I + L_{k+1})^{-1} W^T M b;
/// identical to extract with f(z) = (t + z)^{-1}.
Vector rbm_resolvent(const KrylovBasis& basis, double t);

/// t * w_{k+1}(t) evaluated as W (I + L_{k+1}/t)^{-1} W^T M b with inv_t = 1/t,
/// stable for arbitrarily large t (inv_t may underflow to zero).
Vector rbm_resolvent_scaled(const KrylovBasis& basis, double inv_t);

/// The rational function r = p/q_k with r(mu_j) = f(mu_j) at the rational
/// Ritz values, returned in exact barycentric form so that
/// extract(basis, f) = r(L) b. Requires pairwise distinct Ritz values
/// (1e-10 relative), else DegeneracyError.
rational::BarycentricRational spectral_interpolant(
    const KrylovBasis& basis, const std::function<double(double)>& f);

/// Dual reduced basis approximation
///   u = L^{-1} V (V^T M L^{-1} V)^{s-1} V^T M b
/// over the snapshot space span{w(t_j)}; requires the infinite snapshot.
Vector dual_rbm(const OperatorPencil& pencil, const Vector& b,
                const PoleSet& snapshots, double s);

}  // namespace fracdiff::krylov
