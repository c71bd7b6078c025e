// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "fracdiff/densecore.hpp"
#include "support.hpp"

using namespace fracdiff;
using namespace fracdiff::densecore;
using testsupport::rel_err;

TEST_CASE("sym_eig on a diagonal matrix sorts ascending") {
  Matrix a = Eigen::Vector3d(3.0, 1.0, 2.0).asDiagonal();
  EigenPairs eig = sym_eig(DenseSym(a));
  CHECK(eig.values[0] == doctest::Approx(1.0));
  CHECK(eig.values[1] == doctest::Approx(2.0));
  CHECK(eig.values[2] == doctest::Approx(3.0));
}

TEST_CASE("sym_eig of [[0,1],[1,0]]") {
  Matrix a(2, 2);
  a << 0, 1, 1, 0;
  EigenPairs eig = sym_eig(DenseSym(a));
  CHECK(eig.values[0] == doctest::Approx(-1.0));
  CHECK(eig.values[1] == doctest::Approx(1.0));
  // Eigenvectors are (1, -1)/sqrt(2) and (1, 1)/sqrt(2) up to sign.
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(eig.vectors(0, j)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(eig.vectors(1, j)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
}

TEST_CASE("sym_eig recovers a synthesized spectrum to 1e-12") {
  std::mt19937_64 rng(42);
  const int n = 20;
  Matrix q = testsupport::random_orthogonal(n, rng);
  Vector lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = -3.0 + 0.7 * i;
  Matrix a = q * lambda.asDiagonal() * q.transpose();
  EigenPairs eig = sym_eig(DenseSym(a, 1e-10));
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(eig.values[i] - lambda[i]) <= 1e-12 * lambda.cwiseAbs().maxCoeff());

  SUBCASE("residuals and orthonormality meet the contract") {
    const double anorm = a.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      Vector r = a * eig.vectors.col(i) - eig.values[i] * eig.vectors.col(i);
      CHECK(r.norm() <= 1e-10 * anorm);
    }
    Matrix gram = eig.vectors.transpose() * eig.vectors - Matrix::Identity(n, n);
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("values invariant under orthogonal similarity") {
    std::mt19937_64 rng2(43);
    Matrix p = testsupport::random_orthogonal(n, rng2);
    EigenPairs eig2 = sym_eig(DenseSym(p * a * p.transpose(), 1e-10));
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(eig2.values[i] - eig.values[i]) <=
            1e-12 * lambda.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("gen_sym_eig basics") {
  SUBCASE("identity mass") {
    Matrix k = Eigen::Vector2d(1.0, 4.0).asDiagonal();
    Matrix m = Matrix::Identity(2, 2);
    EigenPairs eig = gen_sym_eig(DenseSym(k), DenseSym(m));
    CHECK(eig.values[0] == doctest::Approx(1.0));
    CHECK(eig.values[1] == doctest::Approx(4.0));
  }
  SUBCASE("scaling mass halves the spectrum") {
    Matrix k = Eigen::Vector2d(2.0, 8.0).asDiagonal();
    Matrix m = 2.0 * Matrix::Identity(2, 2);
    EigenPairs eig = gen_sym_eig(DenseSym(k), DenseSym(m));
    CHECK(eig.values[0] == doctest::Approx(1.0));
    CHECK(eig.values[1] == doctest::Approx(4.0));
  }
  SUBCASE("indefinite mass is rejected") {
    Matrix k = Matrix::Identity(2, 2);
    Matrix m = Eigen::Vector2d(1.0, -1.0).asDiagonal();
    CHECK_THROWS_AS(gen_sym_eig(DenseSym(k), DenseSym(m)), ValidationError);
  }
}

TEST_CASE("gen_sym_eig matches the closed-form FD spectrum") {
  const int n = 5;
  const double h = 1.0 / (n + 1);
  Matrix k = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = 2.0 / (h * h);
    if (i + 1 < n) k(i, i + 1) = k(i + 1, i) = -1.0 / (h * h);
  }
  EigenPairs eig = gen_sym_eig(DenseSym(k), DenseSym(Matrix::Identity(n, n)));
  Vector expect = testsupport::fd1d_eigenvalues(n);
  for (int i = 0; i < n; ++i) CHECK(rel_err(eig.values[i], expect[i]) <= 1e-10);
}

TEST_CASE("gen_sym_eig satisfies Parseval in the M-inner product") {
  std::mt19937_64 rng(7);
  const int n = 12;
  Matrix m = testsupport::random_spd(n, 0.5, 3.0, rng);
  Matrix k = testsupport::random_spd(n, 1.0, 50.0, rng);
  EigenPairs eig = gen_sym_eig(DenseSym(k, 1e-9), DenseSym(m, 1e-9));

  Vector b = testsupport::random_vector(n, rng);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double c = eig.vectors.col(j).dot(m * b);
    sum += c * c;
  }
  CHECK(rel_err(sum, b.dot(m * b)) <= 1e-11);

  Matrix gram = eig.vectors.transpose() * m * eig.vectors - Matrix::Identity(n, n);
  CHECK(gram.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("orthonormalize") {
  auto dot = [](const Vector& u, const Vector& v) { return u.dot(v); };

  SUBCASE("already orthogonal input is normalized") {
    Matrix x(2, 2);
    x << 1, 0, 0, 2;
    OrthonormalBasis ob = orthonormalize(x, dot);
    CHECK(ob.dropped.empty());
    CHECK((ob.basis - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
  }

  SUBCASE("exact duplicate is dropped and reported") {
    Matrix x(2, 2);
    x << 1, 1, 0, 0;
    OrthonormalBasis ob = orthonormalize(x, dot);
    CHECK(ob.basis.cols() == 1);
    REQUIRE(ob.dropped.size() == 1);
    CHECK(ob.dropped[0] == 1);
  }

  SUBCASE("zero column is dropped, not an error") {
    Matrix x(3, 2);
    x << 1, 0, 1, 0, 0, 0;
    OrthonormalBasis ob = orthonormalize(x, dot);
    CHECK(ob.basis.cols() == 1);
    CHECK(ob.dropped == std::vector<Eigen::Index>{1});
  }

  SUBCASE("hand Gram-Schmidt pair") {
    Matrix x(2, 2);
    x << 1, 1, 1, -1;
    OrthonormalBasis ob = orthonormalize(x, dot);
    Matrix gram = ob.basis.transpose() * ob.basis - Matrix::Identity(2, 2);
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-14);
  }

  SUBCASE("nearly dependent tall frame keeps Gram within 1e-12") {
    std::mt19937_64 rng(11);
    const int n = 40;
    Matrix m = testsupport::random_spd(n, 0.5, 2.0, rng);
    auto minner = [&m](const Vector& u, const Vector& v) { return u.dot(m * v); };
    Matrix x(n, 6);
    x.col(0) = testsupport::random_vector(n, rng);
    for (int j = 1; j < 6; ++j)
      x.col(j) = x.col(j - 1) + 1e-6 * testsupport::random_vector(n, rng);
    OrthonormalBasis ob = orthonormalize(x, minner);
    const auto cols = ob.basis.cols();
    Matrix gram = ob.basis.transpose() * m * ob.basis - Matrix::Identity(cols, cols);
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-12);
  }
}
