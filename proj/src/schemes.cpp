// SPDX-License-Identifier: Apache-2.0
#include "fracdiff/schemes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "fracdiff/densecore.hpp"
#include "fracdiff/specfun.hpp"

namespace fracdiff::schemes {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kPiSq = M_PI * M_PI;

long ceil_div_positive(double num, double den) {
  return static_cast<long>(std::ceil(num / den));
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::zolo: return "zolo";
    case Method::greedy: return "greedy";
    case Method::bura: return "bura";
    case Method::sinc: return "sinc";
    case Method::gauss: return "gauss";
    case Method::direct: return "direct";
    case Method::dual: return "dual";
    case Method::oracle: return "oracle";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (Method m : all_methods())
    if (name == method_name(m)) return m;
  return std::nullopt;
}

std::vector<Method> all_methods() {
  return {Method::zolo, Method::greedy, Method::bura,   Method::sinc,
          Method::gauss, Method::direct, Method::dual, Method::oracle};
}

SincGrid sinc_grid(double k_star, double s_min, double s_max) {
  if (!(k_star > 0.0))
    throw InvalidArgumentError("sinc grid requires k_star > 0");
  if (!(0.0 < s_min && s_min <= s_max && s_max < 1.0))
    throw InvalidArgumentError("sinc grid requires 0 < s_min <= s_max < 1");
  SincGrid g;
  g.k_star = k_star;
  g.s_min = s_min;
  g.s_max = s_max;
  g.m = ceil_div_positive(kPiSq, (1.0 - s_max) * k_star * k_star);
  g.n = ceil_div_positive(kPiSq, s_min * k_star * k_star);
  return g;
}

PoleSet zolotarev_snapshots(int k, const SpectralInterval& interval) {
  if (k < 1) throw InvalidArgumentError("zolotarev snapshots require k >= 1");
  if (!(interval.lambda_min < interval.lambda_max))
    throw InvalidArgumentError("zolotarev snapshots require lambda_min < lambda_max");

  const double delta = interval.lambda_min / interval.lambda_max;
  const double delta_p = std::sqrt((1.0 - delta) * (1.0 + delta));
  const double big_k = specfun::ellip_K(delta_p);

  std::vector<double> snaps;
  snaps.reserve(static_cast<std::size_t>(k) + 1);
  snaps.push_back(std::numeric_limits<double>::infinity());
  for (int j = 1; j <= k; ++j) {
    const double arg = (2.0 * (k - j) + 1.0) / (2.0 * k) * big_k;
    snaps.push_back(interval.lambda_max * specfun::jacobi_dn(arg, delta_p));
  }
  return PoleSet::from_snapshots(snaps);
}

std::vector<double> default_greedy_grid(double k_star, double s_min, double s_max,
                                        int points) {
  if (points < 1) throw InvalidArgumentError("greedy grid needs at least one point");
  const SincGrid g = sinc_grid(k_star, s_min, s_max);
  // [e^{-m k_star}, e^{n k_star}], traversed in log space.
  const double lo = -static_cast<double>(g.m) * k_star;
  const double hi = static_cast<double>(g.n) * k_star;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double y = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    grid[static_cast<std::size_t>(i)] = std::exp(y);
  }
  return grid;
}

GreedyResult greedy_snapshots(const OperatorPencil& pencil, const Vector& b,
                              const std::vector<double>& xi_grid, int k) {
  if (xi_grid.empty()) throw InvalidArgumentError("greedy grid must be nonempty");
  if (k < 0 || static_cast<std::size_t>(k) > xi_grid.size())
    throw InvalidArgumentError("greedy requires 0 <= k <= |grid|");

  const double b_norm = pencil.m_norm(b);
  if (!(b_norm > 0.0)) throw InvalidArgumentError("right-hand side must be nonzero");

  std::vector<double> snaps{std::numeric_limits<double>::infinity()};
  bool early = false;
  for (int pick = 0; pick < k; ++pick) {
    krylov::KrylovBasis basis =
        krylov::build_basis(pencil, b, PoleSet::from_snapshots(snaps));
    double best_res = -1.0;
    double best_t = xi_grid.front();
    for (double t : xi_grid) {
      if (std::find(snaps.begin(), snaps.end(), t) != snaps.end()) continue;
      const Vector w = krylov::rbm_resolvent(basis, t);
      const Vector resid = t * w + pencil.apply_L(w) - b;
      const double res = pencil.m_norm(resid);
      if (res > best_res) {
        best_res = res;
        best_t = t;
      } else if (res == best_res && t < best_t) {
        best_t = t;
      }
    }
    if (best_res <= 1e-14 * b_norm) {
      early = true;
      break;
    }
    snaps.push_back(best_t);
  }
  return {PoleSet::from_snapshots(snaps), early};
}

PoleSet bura_poles(double s, const SpectralInterval& interval, int k,
                   const rational::BrasilOptions& opts) {
  if (k < 0) throw InvalidArgumentError("bura poles require k >= 0");
  std::vector<Pole> ps{Pole::infinite()};
  if (k > 0) {
    rational::BestApproxReport rep = rational::brasil_best_approx(s, interval, k, opts);
    for (double d : rational::poles(rep.approximant)) {
      if (d > 0.0) throw ValidationError("positive best-approximation pole");
      ps.push_back(Pole::at(d));
    }
  }
  return PoleSet(std::move(ps));
}

MethodResult solve_rkm(const OperatorPencil& pencil, const Vector& b, double s,
                       const PoleSet& poles, Method label) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgumentError("solve requires s in (0, 1)");
  const auto t0 = Clock::now();
  krylov::KrylovBasis basis = krylov::build_basis(pencil, b, poles);
  const double t_build = seconds_since(t0);
  Vector u = krylov::extract(basis, [s](double z) { return std::pow(z, -s); });
  const double t_total = seconds_since(t0);
  return {std::move(u),          label, static_cast<int>(basis.dim()) - 1, s,
          t_total,               t_build, t_total - t_build,
          poles.snapshots()};
}

MethodResult solve_sinc_rbm(const OperatorPencil& pencil, const Vector& b, double s,
                            const PoleSet& snapshots, const SincGrid& grid) {
  if (!(s >= grid.s_min && s <= grid.s_max))
    throw InvalidArgumentError("s lies outside the sinc grid range [s_min, s_max]");
  const auto t0 = Clock::now();
  krylov::KrylovBasis basis = krylov::build_basis(pencil, b, snapshots);
  const double t_build = seconds_since(t0);

  Vector u = Vector::Zero(pencil.dim());
  for (long j = -grid.m; j <= grid.n; ++j) {
    const double y = static_cast<double>(j) * grid.k_star;
    u += std::exp((1.0 - s) * y) * krylov::rbm_resolvent(basis, std::exp(y));
  }
  u *= grid.k_star * std::sin(M_PI * s) / M_PI;
  const double t_total = seconds_since(t0);
  return {std::move(u),  Method::sinc, static_cast<int>(basis.dim()) - 1, s,
          t_total,       t_build,      t_total - t_build,
          snapshots.snapshots()};
}

MethodResult solve_gauss_rbm(const OperatorPencil& pencil, const Vector& b, double s,
                             const PoleSet& snapshots_minus, const PoleSet& snapshots_plus,
                             double k_star) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgumentError("solve requires s in (0, 1)");
  if (!(k_star > 0.0)) throw InvalidArgumentError("gauss scheme requires k_star > 0");
  if (!(snapshots_minus[0] == snapshots_plus[0]))
    throw InvalidArgumentError("the two snapshot sets must share their first snapshot");

  const double s_plus = s;          // s_+ = 1/2 + (s - 1/2)
  const double s_minus = 1.0 - s;   // s_- = 1/2 - (s - 1/2)
  const long m_plus = ceil_div_positive(kPiSq, 4.0 * s * k_star * k_star);
  const long m_minus = ceil_div_positive(kPiSq, 4.0 * (1.0 - s) * k_star * k_star);

  const auto t0 = Clock::now();
  krylov::KrylovBasis basis_minus = krylov::build_basis(pencil, b, snapshots_minus);
  krylov::KrylovBasis basis_plus = krylov::build_basis(pencil, b, snapshots_plus);
  const double t_build = seconds_since(t0);

  const specfun::QuadratureRule rule_minus =
      specfun::gauss_laguerre(static_cast<int>(m_minus));
  const specfun::QuadratureRule rule_plus =
      specfun::gauss_laguerre(static_cast<int>(m_plus));

  Vector u = Vector::Zero(pencil.dim());
  for (long j = 0; j < m_minus; ++j) {
    const double y = rule_minus.nodes[j];
    u += std::sin(M_PI * s_minus) / (M_PI * s_minus) * rule_minus.weights[j] *
         krylov::rbm_resolvent(basis_minus, std::exp(-y / s_minus));
  }
  for (long j = 0; j < m_plus; ++j) {
    const double y = rule_plus.nodes[j];
    // e^{y/s_+} w(e^{y/s_+}) computed through the scaled resolvent so that
    // large quadrature nodes cannot overflow.
    u += std::sin(M_PI * s_plus) / (M_PI * s_plus) * rule_plus.weights[j] *
         krylov::rbm_resolvent_scaled(basis_plus, std::exp(-y / s_plus));
  }
  const double t_total = seconds_since(t0);
  return {std::move(u),
          Method::gauss,
          static_cast<int>(std::max(basis_minus.dim(), basis_plus.dim())) - 1,
          s,
          t_total,
          t_build,
          t_total - t_build,
          snapshots_minus.snapshots()};
}

MethodResult solve_direct(const OperatorPencil& pencil, const Vector& b, double s,
                          int k, const rational::BrasilOptions& opts) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgumentError("solve requires s in (0, 1)");
  const auto t0 = Clock::now();
  const SpectralInterval interval = pencil.spectral_interval();
  rational::BestApproxReport rep = rational::brasil_best_approx(s, interval, k, opts);
  rational::PartialFraction pf = rational::to_partial_fractions(rep.approximant);
  const double t_build = seconds_since(t0);

  Vector u = pf.c0 * b;
  std::vector<double> snaps;
  for (const auto& term : pf.terms) {
    u += term.residue * pencil.shifted_solve(Pole::at(term.pole), b);
    snaps.push_back(-term.pole);
  }
  const double t_total = seconds_since(t0);
  return {std::move(u),  Method::direct, k, s, t_total, t_build, t_total - t_build,
          std::move(snaps)};
}

MethodResult solve_oracle(const OperatorPencil& pencil, const Vector& b, double s) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgumentError("solve requires s in (0, 1)");
  if (pencil.dim() > densecore::kDenseCap)
    throw ResourceLimitError("oracle needs n <= " + std::to_string(densecore::kDenseCap) +
                             "; use a smaller problem");
  const auto t0 = Clock::now();
  densecore::EigenPairs eig = densecore::gen_sym_eig(
      densecore::DenseSym(Eigen::MatrixXd(pencil.stiffness())),
      densecore::DenseSym(Eigen::MatrixXd(pencil.mass())));
  const double t_build = seconds_since(t0);

  const Vector y = eig.vectors.transpose() * (pencil.mass() * b);
  Vector scaled(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    scaled[i] = std::pow(eig.values[i], -s) * y[i];
  Vector u = eig.vectors * scaled;
  const double t_total = seconds_since(t0);
  return {std::move(u), Method::oracle, static_cast<int>(pencil.dim()) - 1, s,
          t_total,      t_build,        t_total - t_build,
          {}};
}

MethodResult solve_dual(const OperatorPencil& pencil, const Vector& b, double s,
                        const PoleSet& snapshots) {
  const auto t0 = Clock::now();
  Vector u = krylov::dual_rbm(pencil, b, snapshots, s);
  const double t_total = seconds_since(t0);
  return {std::move(u),  Method::dual, snapshots.degree(), s, t_total, t_total, 0.0,
          snapshots.snapshots()};
}

MethodResult run_method(const OperatorPencil& pencil, const Vector& b, Method method,
                        double s, int k, const RunOptions& opts) {
  switch (method) {
    case Method::oracle:
      return solve_oracle(pencil, b, s);
    case Method::direct:
      return solve_direct(pencil, b, s, k, opts.brasil);
    case Method::zolo: {
      const SpectralInterval iv = pencil.spectral_interval(opts.interval_tol);
      return solve_rkm(pencil, b, s, zolotarev_snapshots(k, iv), Method::zolo);
    }
    case Method::bura: {
      const SpectralInterval iv = pencil.spectral_interval(opts.interval_tol);
      return solve_rkm(pencil, b, s, bura_poles(s, iv, k, opts.brasil), Method::bura);
    }
    case Method::dual: {
      const SpectralInterval iv = pencil.spectral_interval(opts.interval_tol);
      return solve_dual(pencil, b, s, zolotarev_snapshots(k, iv));
    }
    case Method::greedy:
    case Method::sinc:
    case Method::gauss: {
      const std::vector<double> grid = default_greedy_grid(
          opts.k_star, opts.s_min, opts.s_max, opts.greedy_grid_points);
      const GreedyResult greedy = greedy_snapshots(pencil, b, grid, k);
      if (method == Method::greedy)
        return solve_rkm(pencil, b, s, greedy.snapshots, Method::greedy);
      if (method == Method::sinc)
        return solve_sinc_rbm(pencil, b, s, greedy.snapshots,
                              sinc_grid(opts.k_star, opts.s_min, opts.s_max));
      return solve_gauss_rbm(pencil, b, s, greedy.snapshots, greedy.snapshots,
                             opts.k_star);
    }
  }
  throw InvalidArgumentError("unknown method");
}

}  // namespace fracdiff::schemes
