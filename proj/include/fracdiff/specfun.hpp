// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "fracdiff/errors.hpp"

namespace fracdiff::specfun {

// Elliptic functions use the modulus convention throughout: the argument is
// k itself, not the parameter m = k^2. Library conventions commonly differ,
// so conversions happen at these call sites and nowhere else.

/// Complete elliptic integral of the first kind K(k), 0 <= k < 1,
/// computed by the arithmetic-geometric mean.
double ellip_K(double k);

/// Jacobi elliptic dn(u, k) for modulus k in [0, 1], via the descending
/// Landen (AGM) chain; dn(u, 1) = sech(u) when the complementary modulus
/// vanishes numerically.
double jacobi_dn(double u, double k);

namespace detail {
struct SnDn {
  double sn;
  double dn;
};
/// sn and dn from one Landen chain; sn is not part of the public surface but
/// is needed by identity checks.
SnDn jacobi_sn_dn(double u, double k);
}  // namespace detail

enum class QuadKind { laguerre };

struct QuadratureRule {
  Eigen::VectorXd nodes;    // strictly increasing
  Eigen::VectorXd weights;  // nonnegative; sum = 1 for Laguerre weight e^{-y}
  QuadKind kind;
};

/// m-point Gauss-Laguerre rule for the weight e^{-y} on (0, inf), exact for
/// polynomials of degree <= 2m-1. Golub-Welsch on the Jacobi matrix of the
/// Laguerre recurrence. Weights are squares of eigenvector components, hence
/// never negative; for m beyond ~190 the smallest ones underflow double
/// precision, which is harmless for every quadrature at these tolerances.
QuadratureRule gauss_laguerre(int m);

}  // namespace fracdiff::specfun
