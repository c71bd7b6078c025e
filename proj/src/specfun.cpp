// SPDX-License-Identifier: Apache-2.0
#include "fracdiff/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fracdiff/densecore.hpp"

namespace fracdiff::specfun {

namespace {
constexpr int kAgmDepthCap = 32;
}

double ellip_K(double k) {
  if (std::isnan(k) || k < 0.0 || k >= 1.0)
    throw DomainError("ellip_K requires modulus k in [0, 1)");
  double a = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));  // complementary modulus k'
  for (int i = 0; i < kAgmDepthCap && std::abs(a - b) > 1e-17 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return M_PI / (2.0 * a);
}

detail::SnDn detail::jacobi_sn_dn(double u, double k) {
  if (std::isnan(u) || !std::isfinite(u))
    throw DomainError("jacobi dn requires finite u");
  if (std::isnan(k) || k < 0.0 || k > 1.0)
    throw DomainError("jacobi dn requires modulus k in [0, 1]");

  if (k < 1e-8) return {std::sin(u), 1.0};  // dn(u, 0) = 1
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  if (kp < 1e-12) {
    // Degenerate modulus: sn(u,1) = tanh u, dn(u,1) = sech u.
    return {std::tanh(u), 1.0 / std::cosh(u)};
  }

  // Descending Landen chain via the AGM; phase back-recursion per
  // Abramowitz & Stegun 16.4.
  std::vector<double> as{1.0}, cs{k};
  double a = 1.0, b = kp;
  int depth = 0;
  while (depth < kAgmDepthCap) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    ++depth;
    as.push_back(a);
    cs.push_back(c);
    if (std::abs(c) <= 1e-17 * a) break;
  }

  double phi = std::ldexp(1.0, depth) * a * u;
  for (int n = depth; n >= 1; --n) {
    const double ratio =
        std::clamp(cs[static_cast<std::size_t>(n)] / as[static_cast<std::size_t>(n)] *
                       std::sin(phi),
                   -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(ratio));
  }

  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn^2 = 1 - k^2 sn^2 = k'^2 + k^2 cn^2; the right-hand form is a sum of
  // nonnegative terms and stays accurate where dn approaches k'.
  const double dn = std::sqrt(kp * kp + k * k * cn * cn);
  return {sn, dn};
}

double jacobi_dn(double u, double k) { return detail::jacobi_sn_dn(u, k).dn; }

namespace {

struct LaguerreTriplet {
  double lm;       // L_m(x)
  double lm_prev;  // L_{m-1}(x)
  double lm_next;  // L_{m+1}(x)
};

// Standard three-term recurrence; |L_k(x)| <= e^{x/2} keeps everything
// representable for x below ~1400.
LaguerreTriplet laguerre_triplet(int m, double x) {
  double prev = 1.0;        // L_0
  double curr = 1.0 - x;    // L_1
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * curr - k * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  const double next = ((2.0 * m + 1.0 - x) * curr - m * prev) / (m + 1.0);
  return {curr, prev, next};
}

}  // namespace

QuadratureRule gauss_laguerre(int m) {
  if (m < 1 || m > 500)
    throw InvalidArgumentError("gauss_laguerre requires 1 <= m <= 500");

  // Golub-Welsch nodes: eigenvalues of the Jacobi matrix of the Laguerre
  // recurrence (diag 2i+1, offdiag i). The eigenvalues carry absolute
  // accuracy only, so each node is Newton-polished on the recurrence and the
  // weight comes from the classical formula w = x / ((m+1) L_{m+1}(x))^2,
  // which keeps the tiny weights relatively accurate.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    jac(i, i) = 2.0 * i + 1.0;
    if (i > 0) {
      jac(i - 1, i) = static_cast<double>(i);
      jac(i, i - 1) = static_cast<double>(i);
    }
  }
  densecore::EigenPairs eig = densecore::sym_eig(densecore::DenseSym(std::move(jac)));

  QuadratureRule rule;
  rule.kind = QuadKind::laguerre;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int j = 0; j < m; ++j) {
    double x = eig.values[j];
    for (int it = 0; it < 20; ++it) {
      const LaguerreTriplet lag = laguerre_triplet(m, x);
      const double deriv = m * (lag.lm - lag.lm_prev) / x;  // L_m'(x)
      if (deriv == 0.0) break;
      const double dx = lag.lm / deriv;
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::abs(x)) break;
    }
    rule.nodes[j] = x;
    if (x > 1400.0) {
      rule.weights[j] = 0.0;  // true weight is below the subnormal range
      continue;
    }
    const LaguerreTriplet lag = laguerre_triplet(m, x);
    const double q = (m + 1.0) * lag.lm_next;
    rule.weights[j] = (x / q) / q;
  }
  return rule;
}

}  // namespace fracdiff::specfun
