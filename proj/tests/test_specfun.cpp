// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "fracdiff/specfun.hpp"
#include "support.hpp"

using namespace fracdiff;
using namespace fracdiff::specfun;
using testsupport::rel_err;

namespace {

// Independent oracle: K(k) by adaptive quadrature of the defining integral.
double ellip_K_quadrature(double k) {
  return testsupport::adaptive_simpson(
      [k](double theta) {
        const double s = std::sin(theta);
        return 1.0 / std::sqrt(1.0 - k * k * s * s);
      },
      0.0, M_PI / 2.0, 1e-15);
}

}  // namespace

TEST_CASE("ellip_K special values") {
  CHECK(ellip_K(0.0) == M_PI / 2.0);
  CHECK(rel_err(ellip_K(1.0 / std::sqrt(2.0)), 1.8540746773013719) <= 1e-14);
  CHECK(rel_err(ellip_K(0.5), 1.6857503548125961) <= 1e-14);
}

TEST_CASE("ellip_K agrees with the integral definition") {
  for (double k = 0.1; k <= 0.95; k += 0.1)
    CHECK(rel_err(ellip_K(k), ellip_K_quadrature(k)) <= 1e-12);
}

TEST_CASE("ellip_K domain errors") {
  CHECK_THROWS_AS(ellip_K(1.0), DomainError);
  CHECK_THROWS_AS(ellip_K(-0.1), DomainError);
  CHECK_THROWS_AS(ellip_K(1.5), DomainError);
}

TEST_CASE("jacobi_dn identities") {
  SUBCASE("dn(0, k) = 1") {
    for (double k : {0.0, 0.3, 0.7, 0.99}) CHECK(rel_err(jacobi_dn(0.0, k), 1.0) <= 1e-14);
  }
  SUBCASE("dn(u, 0) = 1") {
    for (double u : {0.1, 1.0, 3.7}) CHECK(jacobi_dn(u, 0.0) == 1.0);
  }
  SUBCASE("half-argument dn(K/2, k) = sqrt(k')") {
    const double k = 0.9;
    const double kp = std::sqrt(1.0 - k * k);
    CHECK(rel_err(jacobi_dn(ellip_K(k) / 2.0, k), std::sqrt(kp)) <= 1e-10);
  }
  SUBCASE("dn(K, k) = k'") {
    for (double k : {0.5, 0.9, 0.999, 0.9999999}) {
      const double kp = std::sqrt((1.0 - k) * (1.0 + k));
      CHECK(rel_err(jacobi_dn(ellip_K(k), k), kp) <= 1e-9);
    }
  }
  SUBCASE("dn^2 + k^2 sn^2 = 1 on a grid") {
    for (double k : {0.1, 0.5, 0.9, 0.999}) {
      const double bigk = ellip_K(k);
      for (int i = 0; i <= 20; ++i) {
        const double u = bigk * i / 20.0;
        const auto [sn, dn] = detail::jacobi_sn_dn(u, k);
        CHECK(std::abs(dn * dn + k * k * sn * sn - 1.0) <= 1e-10);
      }
    }
  }
  SUBCASE("degenerate modulus k = 1 uses sech") {
    CHECK(rel_err(jacobi_dn(1.2, 1.0), 1.0 / std::cosh(1.2)) <= 1e-13);
  }
}

TEST_CASE("gauss_laguerre closed forms") {
  SUBCASE("m = 1 is the rule {1, 1}") {
    QuadratureRule r = gauss_laguerre(1);
    CHECK(rel_err(r.nodes[0], 1.0) <= 1e-14);
    CHECK(rel_err(r.weights[0], 1.0) <= 1e-14);
  }
  SUBCASE("m = 2 nodes 2 -+ sqrt(2), weights (2 +- sqrt(2))/4") {
    QuadratureRule r = gauss_laguerre(2);
    CHECK(rel_err(r.nodes[0], 2.0 - std::sqrt(2.0)) <= 1e-13);
    CHECK(rel_err(r.nodes[1], 2.0 + std::sqrt(2.0)) <= 1e-13);
    CHECK(rel_err(r.weights[0], (2.0 + std::sqrt(2.0)) / 4.0) <= 1e-13);
    CHECK(rel_err(r.weights[1], (2.0 - std::sqrt(2.0)) / 4.0) <= 1e-13);
  }
  SUBCASE("m = 5 reproduces the moment 9!") {
    QuadratureRule r = gauss_laguerre(5);
    double got = 0.0;
    for (int j = 0; j < 5; ++j) got += r.weights[j] * std::pow(r.nodes[j], 9.0);
    CHECK(rel_err(got, 362880.0) <= 1e-9);
  }
  SUBCASE("m out of range") {
    CHECK_THROWS_AS(gauss_laguerre(0), InvalidArgumentError);
    CHECK_THROWS_AS(gauss_laguerre(501), InvalidArgumentError);
  }
}

TEST_CASE("gauss_laguerre moment exactness up to degree 2m-1 for m <= 30") {
  for (int m = 1; m <= 30; ++m) {
    QuadratureRule r = gauss_laguerre(m);
    // Nodes strictly increasing, weights nonnegative, sum to 0! = 1.
    for (int j = 0; j + 1 < m; ++j) CHECK(r.nodes[j] < r.nodes[j + 1]);
    for (int j = 0; j < m; ++j) CHECK(r.weights[j] >= 0.0);
    CHECK(rel_err(r.weights.sum(), 1.0) <= 1e-12);

    double factorial = 1.0;
    for (int p = 0; p <= 2 * m - 1; ++p) {
      if (p > 0) factorial *= p;
      double got = 0.0;
      for (int j = 0; j < m; ++j) got += r.weights[j] * std::pow(r.nodes[j], p);
      CHECK(rel_err(got, factorial) <= 1e-9);
    }
  }
}
