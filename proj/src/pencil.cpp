// SPDX-License-Identifier: Apache-2.0
#include "fracdiff/pencil.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <vector>

#include "fracdiff/densecore.hpp"
#include "fracdiff/matrix_market.hpp"

namespace fracdiff {

namespace {

using Ldlt = Eigen::SimplicialLDLT<SparseMat>;

double max_abs_coeff(const SparseMat& a) {
  double m = 0.0;
  for (int c = 0; c < a.outerSize(); ++c)
    for (SparseMat::InnerIterator it(a, c); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

SparseMat symmetrized(const SparseMat& a, const char* name) {
  const double scale = max_abs_coeff(a);
  SparseMat at = a.transpose();
  const double asym = max_abs_coeff(SparseMat(a - at));
  if (scale > 0.0 && asym > 1e-12 * scale)
    throw ValidationError(std::string(name) + " matrix asymmetric beyond 1e-12 relative");
  SparseMat s = 0.5 * (a + at);
  s.makeCompressed();
  return s;
}

void require_positive_ldlt(const SparseMat& a, const char* what) {
  Ldlt f(a);
  if (f.info() != Eigen::Success || (f.vectorD().array() <= 0.0).any())
    throw ValidationError(std::string(what));
}

SparseMat sparse_identity(Eigen::Index n) {
  SparseMat id(n, n);
  id.setIdentity();
  return id;
}

}  // namespace

struct OperatorPencil::Cache {
  struct Slot {
    std::once_flag once;
    std::shared_ptr<const Ldlt> fact;
  };
  std::mutex mu;
  std::map<double, std::shared_ptr<Slot>> shifts;  // keyed by finite shift d
  std::once_flag mass_once;
  std::shared_ptr<const Ldlt> mass_fact;
  std::map<double, SpectralInterval> intervals;  // keyed by tolerance
};

OperatorPencil::OperatorPencil(SparseMat K, SparseMat M)
    : cache_(std::make_unique<Cache>()) {
  if (K.rows() != K.cols() || M.rows() != M.cols() || K.rows() != M.rows())
    throw InvalidArgumentError("pencil matrices must be square and of equal size");
  if (K.rows() == 0) throw InvalidArgumentError("pencil dimension must be positive");
  n_ = K.rows();
  k_ = symmetrized(K, "stiffness");
  m_ = symmetrized(M, "mass");
  require_positive_ldlt(m_, "mass matrix is not positive definite");
  require_positive_ldlt(k_, "pencil has nonpositive generalized eigenvalues");
  m_is_identity_ = (m_.nonZeros() == n_);
  if (m_is_identity_)
    for (Eigen::Index i = 0; i < n_ && m_is_identity_; ++i)
      m_is_identity_ = (m_.coeff(i, i) == 1.0);
  auto norm1 = [](const SparseMat& a) {
    double best = 0.0;
    for (int c = 0; c < a.outerSize(); ++c) {
      double col = 0.0;
      for (SparseMat::InnerIterator it(a, c); it; ++it) col += std::abs(it.value());
      best = std::max(best, col);
    }
    return best;
  };
  k_norm1_ = norm1(k_);
  m_norm1_ = norm1(m_);
}

OperatorPencil::~OperatorPencil() = default;
OperatorPencil::OperatorPencil(OperatorPencil&&) noexcept = default;
OperatorPencil& OperatorPencil::operator=(OperatorPencil&&) noexcept = default;

OperatorPencil OperatorPencil::fd_laplacian_1d(Eigen::Index n) {
  if (n < 1) throw InvalidArgumentError("fd_laplacian_1d requires n >= 1");
  if (n > kMaxDim) throw ResourceLimitError("fd_laplacian_1d dimension exceeds cap");
  const double h = 1.0 / static_cast<double>(n + 1);
  const double diag = 2.0 / (h * h);
  const double off = -1.0 / (h * h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(3 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    trip.emplace_back(i, i, diag);
    if (i + 1 < n) {
      trip.emplace_back(i, i + 1, off);
      trip.emplace_back(i + 1, i, off);
    }
  }
  SparseMat k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  return OperatorPencil(std::move(k), sparse_identity(n));
}

OperatorPencil OperatorPencil::fd_laplacian_2d(Eigen::Index nx) {
  if (nx < 1) throw InvalidArgumentError("fd_laplacian_2d requires nx >= 1");
  const Eigen::Index n = nx * nx;
  if (nx > kMaxDim / nx)
    throw ResourceLimitError("fd_laplacian_2d dimension nx^2 exceeds cap");
  const double h = 1.0 / static_cast<double>(nx + 1);
  const double diag = 4.0 / (h * h);
  const double off = -1.0 / (h * h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5 * n));
  auto idx = [nx](Eigen::Index ix, Eigen::Index iy) { return ix + nx * iy; };
  for (Eigen::Index iy = 0; iy < nx; ++iy)
    for (Eigen::Index ix = 0; ix < nx; ++ix) {
      const Eigen::Index row = idx(ix, iy);
      trip.emplace_back(row, row, diag);
      if (ix + 1 < nx) {
        trip.emplace_back(row, idx(ix + 1, iy), off);
        trip.emplace_back(idx(ix + 1, iy), row, off);
      }
      if (iy + 1 < nx) {
        trip.emplace_back(row, idx(ix, iy + 1), off);
        trip.emplace_back(idx(ix, iy + 1), row, off);
      }
    }
  SparseMat k(n, n);
  k.setFromTriplets(trip.begin(), trip.end());
  return OperatorPencil(std::move(k), sparse_identity(n));
}

OperatorPencil OperatorPencil::load(const std::string& path_k,
                                    const std::optional<std::string>& path_m) {
  SparseMat k = mm::read_symmetric(path_k);
  SparseMat m = path_m ? mm::read_symmetric(*path_m) : sparse_identity(k.rows());
  if (m.rows() != k.rows())
    throw ValidationError("stiffness and mass dimensions differ");
  return OperatorPencil(std::move(k), std::move(m));
}

void OperatorPencil::save(const std::string& path_k,
                          const std::optional<std::string>& path_m) const {
  mm::write_symmetric(k_, path_k);
  if (path_m) {
    mm::write_symmetric(m_, *path_m);
  } else if (!m_is_identity_) {
    throw InvalidArgumentError("mass matrix is not the identity; a mass path is required");
  }
}

Vector OperatorPencil::shifted_solve(const Pole& d, const Vector& rhs) const {
  if (rhs.size() != n_)
    throw InvalidArgumentError("rhs length does not match pencil dimension");
  if (d.is_infinite()) return rhs;  // (L - d I)^{-1} b := b at d = -inf

  const double shift = d.value();
  std::shared_ptr<Cache::Slot> slot;
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto& entry = cache_->shifts[shift];
    if (!entry) entry = std::make_shared<Cache::Slot>();
    slot = entry;
  }
  std::call_once(slot->once, [&] {
    auto fact = std::make_shared<Ldlt>();
    fact->compute(shift == 0.0 ? k_ : SparseMat(k_ - shift * m_));
    if (fact->info() != Eigen::Success)
      throw InternalError("factorization of (K - d M) failed for d <= 0");
    slot->fact = std::move(fact);
  });

  const Vector mrhs = m_ * rhs;
  Vector w = slot->fact->solve(mrhs);
  auto residual = [&](const Vector& x) -> Vector {
    Vector r = mrhs - k_ * x;
    if (shift != 0.0) r += shift * (m_ * x);
    return r;
  };
  // Backward-error form of the residual bound; for well-scaled systems the
  // second term is negligible and this is the plain relative bound. The
  // plain bound alone is unreachable in double precision once the condition
  // number passes ~1e4.
  auto tolerance = [&](const Vector& x) {
    return kSolveTol * (mrhs.norm() + (k_norm1_ - shift * m_norm1_) * x.norm());
  };
  Vector r = residual(w);
  if (r.norm() > tolerance(w)) {
    w += slot->fact->solve(r);
    r = residual(w);
    if (r.norm() > 4.0 * tolerance(w) && mrhs.norm() > 0.0)
      throw InternalError("shifted solve failed to reach residual tolerance");
  }
  return w;
}

Vector OperatorPencil::apply_L(const Vector& v) const {
  if (v.size() != n_)
    throw InvalidArgumentError("vector length does not match pencil dimension");
  Vector kv = k_ * v;
  if (m_is_identity_) return kv;
  std::call_once(cache_->mass_once, [&] {
    auto fact = std::make_shared<Ldlt>(m_);
    if (fact->info() != Eigen::Success)
      throw InternalError("mass factorization failed");
    cache_->mass_fact = std::move(fact);
  });
  return cache_->mass_fact->solve(kv);
}

double OperatorPencil::m_inner(const Vector& u, const Vector& v) const {
  if (u.size() != n_ || v.size() != n_)
    throw InvalidArgumentError("vector length does not match pencil dimension");
  return u.dot(m_ * v);
}

double OperatorPencil::m_norm(const Vector& u) const {
  return std::sqrt(std::max(0.0, m_inner(u, u)));
}

namespace {

// Lanczos in the M-inner product for the largest eigenvalue of the operator
// `apply`. Full reorthogonalization; n is small enough that this is cheap.
// The Ritz value approaches the extremal eigenvalue from below; `resid`
// bounds the distance to the nearest eigenvalue.
struct LanczosOutcome {
  double theta;
  double resid;
  bool converged;
};

LanczosOutcome lanczos_extremal(const OperatorPencil& p,
                                const std::function<Vector(const Vector&)>& apply,
                                double tol, int max_iter) {
  const Eigen::Index n = p.dim();
  std::mt19937_64 rng(0x5eed5eedULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  v /= p.m_norm(v);

  std::vector<Vector> basis{v};
  std::vector<double> alpha, beta;
  double theta = 0.0, theta_prev = 0.0, resid = 0.0;
  int streak = 0;  // consecutive iterations meeting both criteria

  for (int j = 0; j < max_iter; ++j) {
    Vector u = apply(basis.back());
    const double a = p.m_inner(basis.back(), u);
    alpha.push_back(a);
    u -= a * basis.back();
    if (j > 0) u -= beta.back() * basis[basis.size() - 2];
    for (const Vector& q : basis) u -= p.m_inner(q, u) * q;

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(j + 1, j + 1);
    for (int i = 0; i <= j; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i > 0) {
        t(i - 1, i) = beta[static_cast<std::size_t>(i - 1)];
        t(i, i - 1) = beta[static_cast<std::size_t>(i - 1)];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::Index which;
    theta = es.eigenvalues().maxCoeff(&which);
    const double b = p.m_norm(u);
    resid = b * std::abs(es.eigenvectors()(j, which));
    // A small residual alone can fire inside a cluster while the Ritz value
    // is still climbing; demand a few confirming iterations of stability.
    if (j > 0 && resid <= 0.5 * tol * std::abs(theta) &&
        theta - theta_prev <= 0.05 * tol * std::abs(theta)) {
      if (++streak >= 5) return {theta, resid, true};
    } else {
      streak = 0;
    }
    if (b <= 1e-14 * std::abs(a)) return {theta, resid, true};  // invariant subspace
    theta_prev = theta;
    beta.push_back(b);
    basis.push_back(u / b);
  }
  return {theta, resid, false};
}

}  // namespace

SpectralInterval OperatorPencil::spectral_interval(double tol) const {
  if (!(tol > 0.0) || tol >= 1.0)
    throw InvalidArgumentError("spectral interval tolerance must lie in (0, 1)");
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->intervals.find(tol);
    if (it != cache_->intervals.end()) return it->second;
  }

  double lo = 0.0, hi = 0.0;
  if (n_ <= 400) {
    densecore::EigenPairs eig =
        densecore::gen_sym_eig(densecore::DenseSym(Eigen::MatrixXd(k_)),
                               densecore::DenseSym(Eigen::MatrixXd(m_)));
    lo = eig.values(0);
    hi = eig.values(eig.values.size() - 1);
  } else {
    const int cap = static_cast<int>(std::min<Eigen::Index>(n_, 2000));
    LanczosOutcome top = lanczos_extremal(
        *this, [this](const Vector& v) { return apply_L(v); }, tol, cap);
    const Pole zero = Pole::at(0.0);
    LanczosOutcome inv = lanczos_extremal(
        *this, [this, &zero](const Vector& v) { return shifted_solve(zero, v); }, tol,
        cap);
    // Ritz values underestimate the extremes; the residual widens the
    // enclosure to cover the nearest true eigenvalue.
    hi = top.theta + top.resid;
    lo = 1.0 / (inv.theta + inv.resid);
    if (!top.converged || !inv.converged)
      throw SpectralConvergenceError(
          "extremal eigenvalue iteration did not converge",
          SpectralInterval(lo * (1.0 - tol), hi * (1.0 + tol)));
  }

  SpectralInterval out(lo * (1.0 - tol), hi * (1.0 + tol));
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->intervals.emplace(tol, out);
  return out;
}

}  // namespace fracdiff
