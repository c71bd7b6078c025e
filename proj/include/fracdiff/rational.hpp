// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fracdiff/errors.hpp"
#include "fracdiff/pencil.hpp"

namespace fracdiff::rational {

using Vector = Eigen::VectorXd;

/// Rational function in second-form barycentric representation,
///   r(z) = sum_i w_i v_i / (z - x_i)  /  sum_i w_i / (z - x_i),
/// with strictly increasing support nodes x_i and nonzero weights w_i.
/// A representation with m support nodes has degree at most (m-1, m-1).
class BarycentricRational {
 public:
  BarycentricRational(Vector nodes, Vector values, Vector weights);

  /// Evaluation; z within 1e-14 relative of a node returns the stored value,
  /// which keeps the interpolation property exact without perturbing z.
  double eval(double z) const;

  const Vector& nodes() const { return nodes_; }
  const Vector& values() const { return values_; }
  const Vector& weights() const { return weights_; }
  Eigen::Index support_size() const { return nodes_.size(); }

 private:
  Vector nodes_, values_, weights_;
};

/// Degree-(k,k) rational interpolant of f through 2k+1 distinct nodes.
/// The weights come from the null space of the Loewner system coupling the
/// k+1 odd-indexed support nodes to the k remaining samples; the returned
/// representation is supported on those k+1 nodes and reproduces all 2k+1
/// samples. Throws DegeneracyError when the computed interpolant fails to
/// reproduce a sample, naming the offending nodes.
BarycentricRational interpolate(const std::function<double(double)>& f,
                                const Vector& nodes);

/// Finite poles of r, ascending, via the (m+1)-dimensional arrowhead
/// generalized eigenproblem; the two structurally infinite eigenvalues are
/// discarded. Poles with an imaginary part beyond 1e-8 relative signal a
/// corrupted approximant and raise ValidationError.
std::vector<double> poles(const BarycentricRational& r);

struct PartialFraction {
  struct Term {
    double residue;  // c_j
    double pole;     // d_j <= 0
  };
  double c0;
  std::vector<Term> terms;  // poles pairwise distinct, ascending

  PartialFraction(double c0_in, std::vector<Term> terms_in);
};

/// Partial fraction form of r: c0 is the limit at +infinity (weighted value
/// ratio), residues come from the residue formula at each pole. The result is
/// verified against r on a 100-point grid to 1e-10 relative; clustered poles
/// (relative gap below 1e-10) raise ConditioningError.
PartialFraction to_partial_fractions(const BarycentricRational& r);

double eval(const PartialFraction& pf, double z);

struct BrasilOptions {
  int max_iter = 1000;
  double tolerance = 1e-3;  // equioscillation deviation target
};

struct BestApproxReport {
  BarycentricRational approximant;
  double max_error;
  double equioscillation_deviation;  // max/min local extremum magnitude - 1
  int iterations;
  std::vector<double> extrema;           // located local extremum abscissae
  std::vector<double> extremum_errors;   // signed f - r there; signs alternate
};

class BrasilConvergenceError : public ConvergenceError {
 public:
  BrasilConvergenceError(const std::string& what, BestApproxReport best_iterate)
      : ConvergenceError(what), best(std::move(best_iterate)) {}
  BestApproxReport best;
};

/// Best uniform rational approximation of z^{-s} on [lambda_min, lambda_max]
/// of degree (k,k), found by iteratively equilibrating the local maxima of
/// |z^{-s} - r(z)| over the 2k+2 intervals cut by the interpolation nodes.
/// Interval lengths are rescaled by (local_max / geometric_mean)^{-1/2} per
/// iteration; convergence once max/min of the local maxima is within
/// 1 + opts.tolerance. Standard double precision throughout.
BestApproxReport brasil_best_approx(double s, const SpectralInterval& interval,
                                    int k, const BrasilOptions& opts = {});

/// Reproducible text snapshot of an approximant together with the problem
/// it was computed for.
struct ApproximantFile {
  BarycentricRational r;
  double s;
  double lambda_min;
  double lambda_max;
  int degree;
  double max_error;
};

void save_approximant(const ApproximantFile& a, const std::string& path);
ApproximantFile load_approximant(const std::string& path);

}  // namespace fracdiff::rational
