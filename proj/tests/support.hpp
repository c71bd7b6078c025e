// SPDX-License-Identifier: Apache-2.0
//
// Shared helpers for the test suites: independent oracles and random
// problem generators. Everything here is deliberately separate from the
// library code paths it is used to check.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fracdiff/pencil.hpp"

namespace testsupport {

using Eigen::MatrixXd;
using Eigen::VectorXd;

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline Eigen::SparseMatrix<double> to_sparse(const MatrixXd& a) {
  return a.sparseView(1.0, 0.0);
}

inline MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<MatrixXd> qr(g);
  MatrixXd q = qr.householderQ();
  return q;
}

// SPD matrix with prescribed eigenvalues (log-uniform in [lo, hi], endpoints
// included so the spectral interval is known exactly).
inline MatrixXd random_spd(int n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  VectorXd lambda(n);
  lambda[0] = lo;
  lambda[n - 1] = hi;
  for (int i = 1; i + 1 < n; ++i)
    lambda[i] = lo * std::pow(hi / lo, unif(rng));
  MatrixXd q = random_orthogonal(n, rng);
  return q * lambda.asDiagonal() * q.transpose();
}

struct RandomPencil {
  fracdiff::OperatorPencil pencil;
  MatrixXd k;
  MatrixXd m;
  double lambda_min;
  double lambda_max;
};

// Pencil (K, M) with known generalized eigenvalues: M SPD with modest
// conditioning, U M-orthonormal, K = M U diag(lambda) U^T M.
inline RandomPencil random_pencil(int n, double lo, double hi, std::mt19937_64& rng,
                                  bool identity_mass = false) {
  MatrixXd m = identity_mass ? MatrixXd::Identity(n, n) : random_spd(n, 0.5, 2.0, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  VectorXd lambda(n);
  lambda[0] = lo;
  lambda[n - 1] = hi;
  for (int i = 1; i + 1 < n; ++i) lambda[i] = lo * std::pow(hi / lo, unif(rng));

  // M-orthonormalize a random frame.
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXd u(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = gauss(rng);
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i)
        u.col(j) -= (u.col(i).dot(m * u.col(j))) * u.col(i);
    u.col(j) /= std::sqrt(u.col(j).dot(m * u.col(j)));
  }
  MatrixXd k = m * u * lambda.asDiagonal() * u.transpose() * m;
  k = 0.5 * (k + k.transpose());
  return {fracdiff::OperatorPencil(to_sparse(k), to_sparse(m)), k, m, lo, hi};
}

inline VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

// Closed-form eigenvalues of the 1D finite-difference Laplacian,
// lambda_j = (4/h^2) sin^2(j pi h / 2), h = 1/(n+1), j = 1..n.
inline VectorXd fd1d_eigenvalues(int n) {
  const double h = 1.0 / (n + 1);
  VectorXd lambda(n);
  for (int j = 1; j <= n; ++j) {
    const double s = std::sin(j * M_PI * h / 2.0);
    lambda[j - 1] = 4.0 / (h * h) * s * s;
  }
  return lambda;
}

// Orthonormal eigenvectors of the same matrix, v_j[i] = sqrt(2h) sin(i j pi h).
inline MatrixXd fd1d_eigenvectors(int n) {
  const double h = 1.0 / (n + 1);
  MatrixXd v(n, n);
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i)
      v(i - 1, j - 1) = std::sqrt(2.0 * h) * std::sin(i * j * M_PI * h);
  return v;
}

// u = L^{-s} b for the 1D FD Laplacian through the closed-form eigensystem.
inline VectorXd fd1d_fractional_power(int n, double s, const VectorXd& b) {
  const VectorXd lambda = fd1d_eigenvalues(n);
  const MatrixXd v = fd1d_eigenvectors(n);
  VectorXd u = VectorXd::Zero(n);
  for (int j = 0; j < n; ++j)
    u += std::pow(lambda[j], -s) * v.col(j).dot(b) * v.col(j);
  return u;
}

// Adaptive Simpson quadrature, used as the independent oracle for the
// elliptic integral.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 40) {
  auto simpson = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
  };
  std::function<double(double, double, double, int)> go =
      [&](double lo, double hi, double whole, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = simpson(lo, mid);
    const double right = simpson(mid, hi);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * tol)
      return left + right + (left + right - whole) / 15.0;
    return go(lo, mid, left, d - 1) + go(mid, hi, right, d - 1);
  };
  return go(a, b, simpson(a, b), depth);
}

}  // namespace testsupport
