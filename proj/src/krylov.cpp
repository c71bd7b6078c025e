// SPDX-License-Identifier: Apache-2.0
#include "fracdiff/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace fracdiff::krylov {

KrylovBasis::KrylovBasis(const OperatorPencil& p, Matrix w, PoleSet poles, Vector coeffs,
                         std::vector<Eigen::Index> dropped)
    : pencil_(&p),
      w_(std::move(w)),
      coeffs_(std::move(coeffs)),
      poles_(std::move(poles)),
      dropped_(std::move(dropped)) {
  // L_{k+1} = W^T K W is the compression of L in the M-inner product; it is
  // symmetric because K is.
  Matrix raw = w_.transpose() * (p.stiffness() * w_);
  l_red_ = 0.5 * (raw + raw.transpose());
  densecore::EigenPairs eig = densecore::sym_eig(densecore::DenseSym(l_red_));
  ritz_ = std::move(eig.values);
  ritz_vec_ = std::move(eig.vectors);
}

KrylovBasis build_basis(const OperatorPencil& pencil, const Vector& b,
                        const PoleSet& poles) {
  if (b.size() != pencil.dim())
    throw InvalidArgumentError("right-hand side length does not match pencil");
  if (!(pencil.m_norm(b) > 0.0))
    throw InvalidArgumentError("right-hand side must be nonzero");

  Matrix snapshots(pencil.dim(), static_cast<Eigen::Index>(poles.size()));
  for (std::size_t j = 0; j < poles.size(); ++j)
    snapshots.col(static_cast<Eigen::Index>(j)) = pencil.shifted_solve(poles[j], b);

  auto inner = [&pencil](const Vector& u, const Vector& v) {
    return pencil.m_inner(u, v);
  };
  densecore::OrthonormalBasis ortho = densecore::orthonormalize(snapshots, inner);
  if (ortho.basis.cols() == 0)
    throw InternalError("empty rational Krylov basis from nonzero right-hand side");

  Vector coeffs = ortho.basis.transpose() * (pencil.mass() * b);
  return KrylovBasis(pencil, std::move(ortho.basis), poles, std::move(coeffs),
                     std::move(ortho.dropped));
}

Vector extract(const KrylovBasis& basis, const std::function<double(double)>& f) {
  const Eigen::Index m = basis.dim();
  Vector fval(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    fval[i] = f(basis.ritz_values()[i]);
    if (!std::isfinite(fval[i]))
      throw DomainError("f is not finite at rational Ritz value " +
                        std::to_string(basis.ritz_values()[i]));
  }
  const Vector y = basis.ritz_vectors().transpose() * basis.coeffs();
  return basis.basis() * (basis.ritz_vectors() * fval.cwiseProduct(y).matrix());
}

Vector rbm_resolvent(const KrylovBasis& basis, double t) {
  if (!(t >= 0.0)) throw InvalidArgumentError("resolvent parameter must satisfy t >= 0");
  return extract(basis, [t](double z) { return 1.0 / (t + z); });
}

Vector rbm_resolvent_scaled(const KrylovBasis& basis, double inv_t) {
  if (!(inv_t >= 0.0))
    throw InvalidArgumentError("scaled resolvent requires inv_t >= 0");
  return extract(basis, [inv_t](double z) { return 1.0 / (1.0 + inv_t * z); });
}

rational::BarycentricRational spectral_interpolant(
    const KrylovBasis& basis, const std::function<double(double)>& f) {
  const Eigen::Index m = basis.dim();
  const Vector& mu = basis.ritz_values();
  for (Eigen::Index i = 0; i + 1 < m; ++i)
    if (mu[i + 1] - mu[i] <= 1e-10 * std::max(std::abs(mu[i]), std::abs(mu[i + 1])))
      throw DegeneracyError("coincident rational Ritz values near " +
                            std::to_string(mu[i]));

  const auto q_k = [&](double z) {
    double q = 1.0;
    for (const Pole& p : basis.poles())
      if (!p.is_infinite()) q *= z - p.value();
    return q;
  };

  // With an infinite pole deg q_k <= k and the Ritz values alone support an
  // exact barycentric representation of p/q_k; otherwise deg q_k = k+1 and
  // one auxiliary node is appended.
  const bool needs_aux = !basis.poles().has_infinite();
  const Eigen::Index n_nodes = needs_aux ? m + 1 : m;

  Vector nodes(n_nodes), values(n_nodes);
  for (Eigen::Index i = 0; i < m; ++i) {
    nodes[i] = mu[i];
    values[i] = f(mu[i]);
    if (!std::isfinite(values[i]))
      throw DomainError("f is not finite at rational Ritz value");
  }
  if (needs_aux) {
    const double zeta = 2.0 * std::abs(mu[m - 1]) + 1.0;
    // p interpolates q_k * f at the Ritz values; evaluate p(zeta) by the
    // Lagrange formula.
    double p_zeta = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      double ell = 1.0;
      for (Eigen::Index j = 0; j < m; ++j)
        if (j != i) ell *= (zeta - mu[j]) / (mu[i] - mu[j]);
      p_zeta += q_k(mu[i]) * values[i] * ell;
    }
    nodes[m] = zeta;
    values[m] = p_zeta / q_k(zeta);
  }

  // Exact representation of p/q_k: weights w_i = q_k(x_i) / omega'(x_i).
  Vector weights(n_nodes);
  for (Eigen::Index i = 0; i < n_nodes; ++i) {
    double omega_prime = 1.0;
    for (Eigen::Index j = 0; j < n_nodes; ++j)
      if (j != i) omega_prime *= nodes[i] - nodes[j];
    weights[i] = q_k(nodes[i]) / omega_prime;
  }
  weights /= weights.cwiseAbs().maxCoeff();
  return rational::BarycentricRational(nodes, values, weights);
}

Vector dual_rbm(const OperatorPencil& pencil, const Vector& b, const PoleSet& snapshots,
                double s) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidArgumentError("dual reduced basis requires s in (0, 1)");
  if (!snapshots.has_infinite())
    throw InvalidArgumentError("dual reduced basis requires the infinite snapshot");

  KrylovBasis basis = build_basis(pencil, b, snapshots);
  const Matrix& v = basis.basis();
  const Eigen::Index m = basis.dim();

  const Pole zero = Pole::at(0.0);
  Matrix linv_v(pencil.dim(), m);
  for (Eigen::Index j = 0; j < m; ++j)
    linv_v.col(j) = pencil.shifted_solve(zero, v.col(j));

  Matrix raw = v.transpose() * (pencil.mass() * linv_v);  // V^T M L^{-1} V
  densecore::EigenPairs eig =
      densecore::sym_eig(densecore::DenseSym(0.5 * (raw + raw.transpose())));

  Vector powered(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!(eig.values[i] > 0.0))
      throw InternalError("compressed inverse operator is not positive definite");
    powered[i] = std::pow(eig.values[i], s - 1.0);
  }
  const Vector y = eig.vectors.transpose() * basis.coeffs();
  const Vector x = v * (eig.vectors * powered.cwiseProduct(y).matrix());
  return pencil.shifted_solve(zero, x);
}

void KrylovBasis::save(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  std::fprintf(f, "fracdiff-krylov-basis v1\n");
  std::fprintf(f, "n %ld\n", static_cast<long>(w_.rows()));
  std::fprintf(f, "dim %ld\n", static_cast<long>(w_.cols()));
  std::fprintf(f, "snapshots %ld\n", static_cast<long>(poles_.size()));
  for (const Pole& p : poles_) {
    if (p.is_infinite())
      std::fprintf(f, "inf\n");
    else
      std::fprintf(f, "%.17g\n", p.snapshot());
  }
  std::fprintf(f, "coeffs\n");
  for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
    std::fprintf(f, "%.17g\n", coeffs_[i]);
  std::fprintf(f, "basis\n");
  for (Eigen::Index r = 0; r < w_.rows(); ++r) {
    for (Eigen::Index c = 0; c < w_.cols(); ++c)
      std::fprintf(f, c + 1 == w_.cols() ? "%.17g\n" : "%.17g ", w_(r, c));
  }
  std::fclose(f);
}

KrylovBasis KrylovBasis::load(const std::string& path, const OperatorPencil& pencil) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  long line_no = 0;
  std::string line;
  auto next_line = [&]() -> const std::string& {
    if (!std::getline(in, line)) throw FormatError("unexpected end of file", line_no);
    ++line_no;
    return line;
  };

  if (next_line() != "fracdiff-krylov-basis v1")
    throw FormatError("not a fracdiff basis file", line_no);
  auto long_field = [&](const std::string& key) {
    std::istringstream ls(next_line());
    std::string got;
    long v;
    if (!(ls >> got >> v) || got != key)
      throw FormatError("expected '" + key + "' field", line_no);
    return v;
  };
  const long n = long_field("n");
  const long dim = long_field("dim");
  const long n_snaps = long_field("snapshots");
  if (n != pencil.dim())
    throw ValidationError("basis dimension does not match the supplied pencil");

  std::vector<double> snaps;
  for (long i = 0; i < n_snaps; ++i) {
    const std::string& tok = next_line();
    if (tok == "inf") {
      snaps.push_back(std::numeric_limits<double>::infinity());
    } else {
      std::istringstream ls(tok);
      double t;
      if (!(ls >> t)) throw FormatError("malformed snapshot", line_no);
      snaps.push_back(t);
    }
  }
  if (next_line() != "coeffs") throw FormatError("expected 'coeffs'", line_no);
  Vector coeffs(dim);
  for (long i = 0; i < dim; ++i) {
    std::istringstream ls(next_line());
    if (!(ls >> coeffs[i])) throw FormatError("malformed coefficient", line_no);
  }
  if (next_line() != "basis") throw FormatError("expected 'basis'", line_no);
  Matrix w(n, dim);
  for (long r = 0; r < n; ++r) {
    std::istringstream ls(next_line());
    for (long c = 0; c < dim; ++c)
      if (!(ls >> w(r, c))) throw FormatError("malformed basis row", line_no);
  }

  // Revalidate M-orthonormality before trusting the data.
  Matrix gram = w.transpose() * (pencil.mass() * w);
  gram -= Matrix::Identity(dim, dim);
  if (gram.cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("stored basis is not M-orthonormal for this pencil");

  return KrylovBasis(pencil, std::move(w), PoleSet::from_snapshots(snaps),
                     std::move(coeffs), {});
}

}  // namespace fracdiff::krylov
