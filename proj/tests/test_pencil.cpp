// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "fracdiff/densecore.hpp"
#include "fracdiff/matrix_market.hpp"
#include "fracdiff/pencil.hpp"
#include "support.hpp"

using namespace fracdiff;
using testsupport::rel_err;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

OperatorPencil diag_pencil(std::initializer_list<double> kd,
                           std::initializer_list<double> md = {}) {
  const Eigen::Index n = static_cast<Eigen::Index>(kd.size());
  Eigen::SparseMatrix<double> k(n, n), m(n, n);
  Eigen::Index i = 0;
  for (double v : kd) k.insert(i, i) = v, ++i;
  i = 0;
  if (md.size() == 0) {
    m.setIdentity();
  } else {
    for (double v : md) m.insert(i, i) = v, ++i;
  }
  return OperatorPencil(std::move(k), std::move(m));
}

}  // namespace

TEST_CASE("fd_laplacian_1d") {
  SUBCASE("n = 1 gives the single entry 2/h^2 = 8") {
    OperatorPencil p = OperatorPencil::fd_laplacian_1d(1);
    CHECK(p.dim() == 1);
    CHECK(p.stiffness().coeff(0, 0) == doctest::Approx(8.0));
  }
  SUBCASE("n = 0 is rejected") {
    CHECK_THROWS_AS(OperatorPencil::fd_laplacian_1d(0), InvalidArgumentError);
  }
  SUBCASE("n = 3 eigenvalues match 16(2 -+ sqrt(2)) and 32") {
    OperatorPencil p = OperatorPencil::fd_laplacian_1d(3);
    auto eig = densecore::gen_sym_eig(densecore::DenseSym(Eigen::MatrixXd(p.stiffness())),
                                      densecore::DenseSym(Eigen::MatrixXd(p.mass())));
    CHECK(rel_err(eig.values[0], 16.0 * (2.0 - std::sqrt(2.0))) <= 1e-13);
    CHECK(rel_err(eig.values[1], 32.0) <= 1e-13);
    CHECK(rel_err(eig.values[2], 16.0 * (2.0 + std::sqrt(2.0))) <= 1e-13);
  }
  SUBCASE("n = 99 smallest eigenvalue approaches pi^2") {
    OperatorPencil p = OperatorPencil::fd_laplacian_1d(99);
    SpectralInterval iv = p.spectral_interval(1e-10);
    CHECK(rel_err(iv.lambda_min, M_PI * M_PI) <= 1e-3);
  }
  SUBCASE("eigenvalues match the closed form to 1e-10 up to n = 200") {
    for (int n : {17, 64, 200}) {
      OperatorPencil p = OperatorPencil::fd_laplacian_1d(n);
      auto eig =
          densecore::gen_sym_eig(densecore::DenseSym(Eigen::MatrixXd(p.stiffness())),
                                 densecore::DenseSym(Eigen::MatrixXd(p.mass())));
      Eigen::VectorXd expect = testsupport::fd1d_eigenvalues(n);
      for (int i = 0; i < n; ++i) CHECK(rel_err(eig.values[i], expect[i]) <= 1e-10);
    }
  }
}

TEST_CASE("fd_laplacian_2d") {
  SUBCASE("nx = 1 has the single eigenvalue 16") {
    OperatorPencil p = OperatorPencil::fd_laplacian_2d(1);
    CHECK(p.dim() == 1);
    CHECK(p.stiffness().coeff(0, 0) == doctest::Approx(16.0));
  }
  SUBCASE("nx = 2 spectrum is positive") {
    OperatorPencil p = OperatorPencil::fd_laplacian_2d(2);
    CHECK(p.dim() == 4);
    auto eig = densecore::gen_sym_eig(densecore::DenseSym(Eigen::MatrixXd(p.stiffness())),
                                      densecore::DenseSym(Eigen::MatrixXd(p.mass())));
    CHECK(eig.values[0] > 0.0);
    // Pairwise sums of the 1D eigenvalues.
    Eigen::VectorXd lam1 = testsupport::fd1d_eigenvalues(2);
    CHECK(rel_err(eig.values[0], 2.0 * lam1[0]) <= 1e-12);
    CHECK(rel_err(eig.values[3], 2.0 * lam1[1]) <= 1e-12);
  }
  SUBCASE("nx = 31 reproduces lambda_1 near 2 pi^2") {
    OperatorPencil p = OperatorPencil::fd_laplacian_2d(31);
    SpectralInterval iv = p.spectral_interval(1e-8);
    CHECK(rel_err(iv.lambda_min, 2.0 * M_PI * M_PI) <= 0.01);
  }
}

TEST_CASE("shifted_solve") {
  SUBCASE("diagonal resolvent") {
    OperatorPencil p = diag_pencil({1.0, 4.0});
    Vector rhs(2);
    rhs << 1.0, 1.0;
    Vector w = p.shifted_solve(Pole::at(-1.0), rhs);
    CHECK(rel_err(w[0], 0.5) <= 1e-14);
    CHECK(rel_err(w[1], 0.2) <= 1e-14);
  }
  SUBCASE("infinite pole returns rhs") {
    OperatorPencil p = diag_pencil({1.0, 4.0});
    Vector rhs(2);
    rhs << 3.0, -2.0;
    Vector w = p.shifted_solve(Pole::infinite(), rhs);
    CHECK(w == rhs);
  }
  SUBCASE("zero shift is a plain solve") {
    OperatorPencil p = diag_pencil({2.0});
    Vector rhs(1);
    rhs << 3.0;
    CHECK(rel_err(p.shifted_solve(Pole::at(0.0), rhs)[0], 1.5) <= 1e-14);
  }
  SUBCASE("positive shift is rejected at the pole type") {
    CHECK_THROWS_AS(Pole::at(0.5), InvalidArgumentError);
  }
  SUBCASE("residual contract on random pencils and shifts") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
      auto rp = testsupport::random_pencil(30, 1.0, 100.0, rng);
      Vector rhs = testsupport::random_vector(30, rng);
      for (double d : {0.0, -0.5, -20.0}) {
        Vector w = rp.pencil.shifted_solve(Pole::at(d), rhs);
        Vector mrhs = rp.m * rhs;
        Vector resid = mrhs - rp.k * w + d * (rp.m * w);
        CHECK(resid.norm() <= OperatorPencil::kSolveTol * mrhs.norm());
      }
    }
  }
}

TEST_CASE("apply_L and m_inner") {
  SUBCASE("identity mass") {
    OperatorPencil p = diag_pencil({1.0, 4.0});
    Vector v(2);
    v << 1.0, 1.0;
    Vector lv = p.apply_L(v);
    CHECK(lv[0] == doctest::Approx(1.0));
    CHECK(lv[1] == doctest::Approx(4.0));
  }
  SUBCASE("K = M gives L = I") {
    OperatorPencil p = diag_pencil({2.0}, {2.0});
    Vector v(1);
    v << 5.0;
    CHECK(rel_err(p.apply_L(v)[0], 5.0) <= 1e-14);
  }
  SUBCASE("(v, Lv)_M = v^T K v on a random pencil") {
    std::mt19937_64 rng(9);
    auto rp = testsupport::random_pencil(4, 1.0, 10.0, rng);
    Vector v = testsupport::random_vector(4, rng);
    CHECK(rel_err(rp.pencil.m_inner(v, rp.pencil.apply_L(v)), v.dot(rp.k * v)) <= 1e-12);
  }
  SUBCASE("m_inner basics") {
    OperatorPencil p = diag_pencil({1.0, 1.0});
    Vector u(2), v(2);
    u << 3.0, 4.0;
    CHECK(p.m_inner(u, u) == doctest::Approx(25.0));
    OperatorPencil p2 = diag_pencil({1.0, 1.0}, {2.0, 2.0});
    u << 1.0, 0.0;
    v << 0.0, 1.0;
    CHECK(p2.m_inner(u, v) == doctest::Approx(0.0));
  }
  SUBCASE("m_inner is symmetric on a random SPD mass") {
    std::mt19937_64 rng(13);
    auto rp = testsupport::random_pencil(3, 1.0, 5.0, rng);
    Vector u = testsupport::random_vector(3, rng);
    Vector v = testsupport::random_vector(3, rng);
    CHECK(rel_err(rp.pencil.m_inner(u, v), rp.pencil.m_inner(v, u)) <= 1e-14);
  }
  SUBCASE("dimension mismatch is rejected") {
    OperatorPencil p = diag_pencil({1.0, 4.0});
    Vector v(3);
    v.setOnes();
    CHECK_THROWS_AS(p.m_inner(v, v), InvalidArgumentError);
    CHECK_THROWS_AS(p.apply_L(v), InvalidArgumentError);
  }
}

TEST_CASE("spectral_interval") {
  SUBCASE("diagonal pencil outward-rounded") {
    OperatorPencil p = diag_pencil({1.0, 4.0});
    SpectralInterval iv = p.spectral_interval(1e-8);
    CHECK(iv.lambda_min <= 1.0);
    CHECK(iv.lambda_max >= 4.0);
    CHECK(rel_err(iv.lambda_min, 1.0) <= 1e-7);
    CHECK(rel_err(iv.lambda_max, 4.0) <= 1e-7);
  }
  SUBCASE("1D FD n = 3 encloses the closed-form spectrum") {
    OperatorPencil p = OperatorPencil::fd_laplacian_1d(3);
    SpectralInterval iv = p.spectral_interval(1e-10);
    CHECK(iv.lambda_min <= 16.0 * (2.0 - std::sqrt(2.0)));
    CHECK(iv.lambda_max >= 16.0 * (2.0 + std::sqrt(2.0)));
  }
  SUBCASE("Lanczos path agrees with the dense spectrum on fd1d n = 600") {
    OperatorPencil p = OperatorPencil::fd_laplacian_1d(600);
    SpectralInterval iv = p.spectral_interval(1e-8);
    Eigen::VectorXd expect = testsupport::fd1d_eigenvalues(600);
    CHECK(rel_err(iv.lambda_min, expect[0]) <= 1e-5);
    CHECK(rel_err(iv.lambda_max, expect[599]) <= 1e-5);
    CHECK(iv.lambda_min <= expect[0]);
    CHECK(iv.lambda_max >= expect[599]);
  }
}

TEST_CASE("matrix market ingestion") {
  SUBCASE("2x2 stiffness without mass") {
    auto path = temp_file("fracdiff_test_k1.mtx");
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real symmetric\n"
        << "% tridiagonal toy\n"
        << "2 2 3\n"
        << "1 1 2.0\n"
        << "2 1 -1.0\n"
        << "2 2 2.0\n";
    out.close();
    OperatorPencil p = OperatorPencil::load(path.string());
    auto eig = densecore::gen_sym_eig(densecore::DenseSym(Eigen::MatrixXd(p.stiffness())),
                                      densecore::DenseSym(Eigen::MatrixXd(p.mass())));
    CHECK(rel_err(eig.values[0], 1.0) <= 1e-13);
    CHECK(rel_err(eig.values[1], 3.0) <= 1e-13);
  }

  SUBCASE("header-only file is a format error") {
    auto path = temp_file("fracdiff_test_k2.mtx");
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out.close();
    CHECK_THROWS_AS(OperatorPencil::load(path.string()), FormatError);
  }

  SUBCASE("scaled mass halves the eigenvalues") {
    auto kpath = temp_file("fracdiff_test_k3.mtx");
    auto mpath = temp_file("fracdiff_test_m3.mtx");
    {
      std::ofstream out(kpath);
      out << "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n"
          << "1 1 2.0\n2 1 -1.0\n2 2 2.0\n";
    }
    {
      std::ofstream out(mpath);
      out << "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n"
          << "1 1 2.0\n2 2 2.0\n";
    }
    OperatorPencil p = OperatorPencil::load(kpath.string(), mpath.string());
    auto eig = densecore::gen_sym_eig(densecore::DenseSym(Eigen::MatrixXd(p.stiffness())),
                                      densecore::DenseSym(Eigen::MatrixXd(p.mass())));
    CHECK(rel_err(eig.values[0], 0.5) <= 1e-13);
    CHECK(rel_err(eig.values[1], 1.5) <= 1e-13);
  }

  SUBCASE("asymmetric general matrix is rejected") {
    auto path = temp_file("fracdiff_test_k4.mtx");
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real general\n2 2 4\n"
        << "1 1 2.0\n1 2 -1.0\n2 1 -0.5\n2 2 2.0\n";
    out.close();
    CHECK_THROWS_AS(OperatorPencil::load(path.string()), ValidationError);
  }

  SUBCASE("indefinite mass is rejected") {
    auto kpath = temp_file("fracdiff_test_k5.mtx");
    auto mpath = temp_file("fracdiff_test_m5.mtx");
    {
      std::ofstream out(kpath);
      out << "%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 1.0\n";
    }
    {
      std::ofstream out(mpath);
      out << "%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 -1.0\n";
    }
    CHECK_THROWS_AS(OperatorPencil::load(kpath.string(), mpath.string()),
                    ValidationError);
  }

  SUBCASE("save / load round-trips values bit-exactly") {
    std::mt19937_64 rng(17);
    auto rp = testsupport::random_pencil(12, 1.0, 77.0, rng);
    auto kpath = temp_file("fracdiff_test_k6.mtx");
    auto mpath = temp_file("fracdiff_test_m6.mtx");
    rp.pencil.save(kpath.string(), mpath.string());
    OperatorPencil back = OperatorPencil::load(kpath.string(), mpath.string());
    Eigen::MatrixXd dk = Eigen::MatrixXd(back.stiffness()) -
                         Eigen::MatrixXd(rp.pencil.stiffness());
    Eigen::MatrixXd dm = Eigen::MatrixXd(back.mass()) - Eigen::MatrixXd(rp.pencil.mass());
    CHECK(dk.cwiseAbs().maxCoeff() == 0.0);
    CHECK(dm.cwiseAbs().maxCoeff() == 0.0);
  }
}
