// SPDX-License-Identifier: Apache-2.0
#include "fracdiff/densecore.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace fracdiff::densecore {

DenseSym::DenseSym(Matrix a, double asym_tol) {
  if (a.rows() != a.cols())
    throw InvalidArgumentError("symmetric matrix must be square");
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > asym_tol * scale)
    throw ValidationError("matrix asymmetry " + std::to_string(asym / scale) +
                          " exceeds tolerance");
  a_ = 0.5 * (a + a.transpose());
}

EigenPairs sym_eig(const DenseSym& a) {
  if (a.dim() > kDenseCap)
    throw ResourceLimitError("dense eigensolve capped at n = " +
                             std::to_string(kDenseCap));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.get());
  if (solver.info() != Eigen::Success)
    throw InternalError("symmetric eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

EigenPairs gen_sym_eig(const DenseSym& k, const DenseSym& m) {
  if (k.dim() != m.dim())
    throw InvalidArgumentError("pencil matrices must have equal dimension");
  if (k.dim() > kDenseCap)
    throw ResourceLimitError("dense eigensolve capped at n = " +
                             std::to_string(kDenseCap));
  Eigen::LLT<Matrix> llt(m.get());
  if (llt.info() != Eigen::Success)
    throw ValidationError("mass matrix is not positive definite");
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> solver(k.get(), m.get(),
                                                          Eigen::ComputeEigenvectors |
                                                              Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw InternalError("generalized symmetric eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

OrthonormalBasis orthonormalize(const Matrix& vectors, const InnerProduct& inner,
                                double drop_tol) {
  const Eigen::Index n = vectors.rows();
  const Eigen::Index m = vectors.cols();
  OrthonormalBasis out;
  out.basis.resize(n, m);
  Eigen::Index kept = 0;

  for (Eigen::Index j = 0; j < m; ++j) {
    Vector v = vectors.col(j);
    const double norm0 = std::sqrt(std::max(0.0, inner(v, v)));
    if (!(norm0 > 0.0)) {
      out.dropped.push_back(j);
      continue;
    }
    // Two MGS passes; basis vectors lose orthogonality as the shifted solves
    // become numerically dependent, and one pass is not enough then.
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < kept; ++i)
        v -= inner(out.basis.col(i), v) * out.basis.col(i);
    const double norm1 = std::sqrt(std::max(0.0, inner(v, v)));
    if (norm1 < drop_tol * norm0) {
      out.dropped.push_back(j);
      continue;
    }
    out.basis.col(kept++) = v / norm1;
  }
  out.basis.conservativeResize(n, kept);
  return out;
}

}  // namespace fracdiff::densecore
