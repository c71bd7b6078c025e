// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracdiff/krylov.hpp"
#include "fracdiff/pencil.hpp"
#include "fracdiff/poles.hpp"
#include "fracdiff/rational.hpp"

namespace fracdiff::schemes {

enum class Method { zolo, greedy, bura, sinc, gauss, direct, dual, oracle };

const char* method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);
std::vector<Method> all_methods();

/// Truncated sinc grid y_j = j * k_star, j in [-m, n], with
/// m = ceil(pi^2 / ((1-s_max) k_star^2)), n = ceil(pi^2 / (s_min k_star^2)).
struct SincGrid {
  double k_star;
  long m;  // left truncation index M_{s_max}
  long n;  // right truncation index N_{s_min}
  double s_min;
  double s_max;
};

SincGrid sinc_grid(double k_star, double s_min, double s_max);

/// Snapshots {inf, t_1 < ... < t_k} with t_j the scaled Zolotarev points
///   t_j = lambda_n dn((2(k-j)+1)/(2k) K(delta'), delta'),
/// delta' = sqrt(1 - delta^2), delta = lambda_1/lambda_n.
PoleSet zolotarev_snapshots(int k, const SpectralInterval& interval);

/// Log-spaced training grid on [e^{-m k_star}, e^{n k_star}].
std::vector<double> default_greedy_grid(double k_star, double s_min, double s_max,
                                        int points = 200);

struct GreedyResult {
  PoleSet snapshots;   // {inf} followed by the picks in selection order
  bool early_exit;     // all residuals fell below the floor before k picks
};

/// Residual-based weak greedy: starting from span{b}, repeatedly adds the
/// grid parameter maximizing || (t I + L) w_red(t) - b ||_M, computed exactly
/// through apply_L; ties break toward the smaller t. Stops early once every
/// residual is below 1e-14 * ||b||_M.
GreedyResult greedy_snapshots(const OperatorPencil& pencil, const Vector& b,
                              const std::vector<double>& xi_grid, int k);

/// Poles of the degree-(k,k) best uniform rational approximation of z^{-s}
/// on the interval, augmented with the infinite pole.
PoleSet bura_poles(double s, const SpectralInterval& interval, int k,
                   const rational::BrasilOptions& opts = {});

struct MethodResult {
  Vector solution;
  Method method;
  int k;      // built space dimension - 1
  double s;
  double wall_time_s;
  double build_time_s;    // basis construction (solves + orthonormalization)
  double extract_time_s;  // reduced-problem work
  std::vector<double> snapshots;  // snapshot view of the poles used, if any
};

/// Rayleigh-Ritz extraction of f(z) = z^{-s} from the pole-set space.
MethodResult solve_rkm(const OperatorPencil& pencil, const Vector& b, double s,
                       const PoleSet& poles, Method label = Method::zolo);

/// Sinc-quadrature reduced basis sum over the grid; s must lie inside the
/// grid's [s_min, s_max].
MethodResult solve_sinc_rbm(const OperatorPencil& pencil, const Vector& b, double s,
                            const PoleSet& snapshots, const SincGrid& grid);

/// Two-sided Gauss-Laguerre reduced basis sum with s_{+-} = 1/2 +- (s - 1/2)
/// and M_+ = ceil(pi^2/(4 s k_star^2)), M_- = ceil(pi^2/(4 (1-s) k_star^2)).
/// The two snapshot sets must share their first snapshot.
MethodResult solve_gauss_rbm(const OperatorPencil& pencil, const Vector& b, double s,
                             const PoleSet& snapshots_minus, const PoleSet& snapshots_plus,
                             double k_star);

/// Direct rational approximation: best-approximation of z^{-s} on the
/// spectral interval, applied through its partial fraction form.
MethodResult solve_direct(const OperatorPencil& pencil, const Vector& b, double s,
                          int k, const rational::BrasilOptions& opts = {});

/// Dense reference: u = U diag(lambda^{-s}) U^T M b from the full generalized
/// eigendecomposition; n is capped by densecore::kDenseCap.
MethodResult solve_oracle(const OperatorPencil& pencil, const Vector& b, double s);

/// Dual reduced basis approximation over the given snapshots (must include inf).
MethodResult solve_dual(const OperatorPencil& pencil, const Vector& b, double s,
                        const PoleSet& snapshots);

struct RunOptions {
  double k_star = 0.15;
  double s_min = 0.2;
  double s_max = 0.8;
  double interval_tol = 1e-8;
  int greedy_grid_points = 200;
  rational::BrasilOptions brasil{};
};

/// Front end used by the benchmark harness and the C API: generates the
/// method's snapshots/poles and runs it. Method ids are the stable strings
/// "zolo", "greedy", "bura", "sinc", "gauss", "direct", "dual", "oracle".
MethodResult run_method(const OperatorPencil& pencil, const Vector& b, Method method,
                        double s, int k, const RunOptions& opts = {});

}  // namespace fracdiff::schemes
