// SPDX-License-Identifier: Apache-2.0
#include "fracdiff/rational.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace fracdiff::rational {

namespace {

constexpr double kNodeSnapTol = 1e-14;

double checked_sample(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v))
    throw InvalidArgumentError("function not finite at node " + std::to_string(x));
  return v;
}

}  // namespace

BarycentricRational::BarycentricRational(Vector nodes, Vector values, Vector weights)
    : nodes_(std::move(nodes)), values_(std::move(values)), weights_(std::move(weights)) {
  const Eigen::Index m = nodes_.size();
  if (m == 0) throw InvalidArgumentError("barycentric support must be nonempty");
  if (values_.size() != m || weights_.size() != m)
    throw InvalidArgumentError("barycentric nodes/values/weights sizes differ");
  for (Eigen::Index i = 0; i + 1 < m; ++i)
    if (!(nodes_[i] < nodes_[i + 1]))
      throw InvalidArgumentError("barycentric nodes must be strictly increasing");
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i]) ||
        !std::isfinite(weights_[i]))
      throw InvalidArgumentError("barycentric data must be finite");
    if (weights_[i] == 0.0)
      throw InvalidArgumentError("barycentric weights must be nonzero");
  }
}

double BarycentricRational::eval(double z) const {
  const Eigen::Index m = nodes_.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double gap = std::abs(z - nodes_[i]);
    if (gap <= kNodeSnapTol * std::max({1e-300, std::abs(z), std::abs(nodes_[i])}))
      return values_[i];
  }
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double c = weights_[i] / (z - nodes_[i]);
    num += c * values_[i];
    den += c;
  }
  return num / den;
}

BarycentricRational interpolate(const std::function<double(double)>& f,
                                const Vector& nodes_in) {
  const Eigen::Index m = nodes_in.size();
  if (m < 1 || m % 2 == 0)
    throw InvalidArgumentError("interpolation needs an odd number (2k+1) of nodes");

  Vector nodes = nodes_in;
  std::sort(nodes.data(), nodes.data() + m);
  for (Eigen::Index i = 0; i + 1 < m; ++i)
    if (!(nodes[i] < nodes[i + 1]))
      throw InvalidArgumentError("interpolation nodes must be distinct");

  Vector values(m);
  for (Eigen::Index i = 0; i < m; ++i) values[i] = checked_sample(f, nodes[i]);

  const Eigen::Index k = (m - 1) / 2;
  if (k == 0)
    return BarycentricRational(nodes, values, Vector::Ones(1));

  const double vscale = values.cwiseAbs().maxCoeff();
  if ((values.array() - values[0]).abs().maxCoeff() <= 1e-14 * std::max(vscale, 1e-300)) {
    // Constant samples: any weight vector reproduces the constant; the
    // Loewner matrix would be identically zero.
    Vector xa(k + 1), va(k + 1);
    for (Eigen::Index i = 0; i <= k; ++i) {
      xa[i] = nodes[2 * i];
      va[i] = values[2 * i];
    }
    return BarycentricRational(xa, va, Vector::Ones(k + 1));
  }

  // Support nodes are the even-indexed samples; the odd-indexed ones impose
  // the Loewner conditions whose null vector is the weight vector.
  Vector xa(k + 1), va(k + 1), xb(k), vb(k);
  for (Eigen::Index i = 0; i <= k; ++i) {
    xa[i] = nodes[2 * i];
    va[i] = values[2 * i];
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    xb[i] = nodes[2 * i + 1];
    vb[i] = values[2 * i + 1];
  }

  Eigen::MatrixXd loewner(k, k + 1);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j <= k; ++j)
      loewner(i, j) = (vb[i] - va[j]) / (xb[i] - xa[j]);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(loewner, Eigen::ComputeFullV);
  Vector w = svd.matrixV().col(k);
  const double wmax = w.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i <= k; ++i)
    if (std::abs(w[i]) <= 1e-15 * wmax)
      throw DegeneracyError("interpolation weight vanished at node " +
                            std::to_string(xa[i]));
  w /= wmax;

  BarycentricRational r(xa, va, w);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double got = r.eval(xb[i]);
    if (std::abs(got - vb[i]) > 1e-8 * std::max(vscale, 1e-300))
      throw DegeneracyError("interpolant misses sample at node " + std::to_string(xb[i]));
  }
  return r;
}

std::vector<double> poles(const BarycentricRational& r) {
  const Eigen::Index m = r.support_size();
  if (m == 1) return {};

  // Arrowhead pencil whose finite eigenvalues are the roots of the
  // barycentric denominator; the two structural eigenvalues at infinity
  // show up with vanishing beta.
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m + 1, m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    e(0, i + 1) = r.weights()[i];
    e(i + 1, 0) = 1.0;
    e(i + 1, i + 1) = r.nodes()[i];
    b(i + 1, i + 1) = 1.0;
  }

  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.compute(e, b, false);
  if (ges.info() != Eigen::Success)
    throw InternalError("QZ iteration failed on the pole pencil");

  const double beta_scale = ges.betas().cwiseAbs().maxCoeff();
  std::vector<double> out;
  for (Eigen::Index i = 0; i <= m; ++i) {
    const double beta = ges.betas()[i];
    if (std::abs(beta) <= 1e-10 * beta_scale) continue;  // eigenvalue at infinity
    const std::complex<double> lambda = ges.alphas()[i] / beta;
    if (std::abs(lambda.imag()) > 1e-8 * std::max(1.0, std::abs(lambda)))
      throw ValidationError("complex pole detected; approximant is corrupted");
    out.push_back(lambda.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

PartialFraction::PartialFraction(double c0_in, std::vector<Term> terms_in)
    : c0(c0_in), terms(std::move(terms_in)) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].pole > 0.0)
      throw ValidationError("partial fraction poles must be nonpositive");
    for (std::size_t j = i + 1; j < terms.size(); ++j)
      if (terms[i].pole == terms[j].pole)
        throw ValidationError("partial fraction poles must be pairwise distinct");
  }
}

double eval(const PartialFraction& pf, double z) {
  double v = pf.c0;
  for (const auto& t : pf.terms) v += t.residue / (z - t.pole);
  return v;
}

PartialFraction to_partial_fractions(const BarycentricRational& r) {
  const std::vector<double> ps = poles(r);
  const double node_scale = std::max(1.0, r.nodes().cwiseAbs().maxCoeff());

  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    const double gap = ps[i + 1] - ps[i];
    const double mag = std::max({std::abs(ps[i]), std::abs(ps[i + 1]), 1e-300});
    if (gap < 1e-10 * mag)
      throw ConditioningError("clustered poles near " + std::to_string(ps[i]));
  }

  const double sum_w = r.weights().sum();
  const double sum_abs_w = r.weights().cwiseAbs().sum();
  if (std::abs(sum_w) <= 1e-14 * sum_abs_w)
    throw ConditioningError("degenerate limit at infinity; weights sum to zero");
  const double c0 = r.weights().dot(r.values()) / sum_w;

  std::vector<PartialFraction::Term> terms;
  terms.reserve(ps.size());
  for (double p : ps) {
    if (p > 1e-12 * node_scale)
      throw ValidationError("positive pole " + std::to_string(p));
    p = std::min(p, 0.0);
    double num = 0.0, dden = 0.0;
    for (Eigen::Index i = 0; i < r.support_size(); ++i) {
      const double g = p - r.nodes()[i];
      num += r.weights()[i] * r.values()[i] / g;
      dden -= r.weights()[i] / (g * g);
    }
    terms.push_back({num / dden, p});
  }
  PartialFraction pf(c0, std::move(terms));

  const double lo = r.nodes()[0];
  const double hi = r.nodes()[r.support_size() - 1];
  double rscale = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double z = lo + (hi - lo) * (i + 0.5) / 100.0;
    rscale = std::max(rscale, std::abs(r.eval(z)));
  }
  for (int i = 0; i < 100; ++i) {
    const double z = lo + (hi - lo) * (i + 0.5) / 100.0;
    const double a = r.eval(z);
    const double b = eval(pf, z);
    if (std::abs(a - b) > 1e-10 * std::max(std::abs(a), 1e-6 * rscale))
      throw ConditioningError("partial fraction reconstruction failed at z = " +
                              std::to_string(z));
  }
  return pf;
}

namespace {

struct LocalMax {
  double z;
  double abs_err;
  double signed_err;
};

// Coarse scan then golden-section refinement of max |g| on [lo, hi].
LocalMax locate_max(const std::function<double(double)>& g, double lo, double hi) {
  constexpr int kScan = 16;
  constexpr int kGoldenIters = 60;
  const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;

  double best_z = lo, best = -1.0;
  int best_i = 0;
  for (int i = 0; i <= kScan; ++i) {
    const double z = lo + (hi - lo) * i / kScan;
    const double v = std::abs(g(z));
    if (v > best) {
      best = v;
      best_z = z;
      best_i = i;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best_i - 1) / kScan;
  double b = lo + (hi - lo) * std::min(kScan, best_i + 1) / kScan;

  double c = b - inv_gr * (b - a);
  double d = a + inv_gr * (b - a);
  double gc = std::abs(g(c));
  double gd = std::abs(g(d));
  for (int it = 0; it < kGoldenIters; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_gr * (b - a);
      gc = std::abs(g(c));
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_gr * (b - a);
      gd = std::abs(g(d));
    }
  }
  double z = 0.5 * (a + b);
  double v = std::abs(g(z));
  if (best > v) {
    z = best_z;  // endpoint extremum beats the interior bracket
    v = best;
  }
  return {z, v, g(z)};
}

}  // namespace

BestApproxReport brasil_best_approx(double s, const SpectralInterval& interval, int k,
                                    const BrasilOptions& opts) {
  if (!(s > 0.0 && s < 1.0))
    throw InvalidArgumentError("brasil requires s in (0, 1)");
  if (k < 0) throw InvalidArgumentError("brasil requires k >= 0");
  if (opts.max_iter < 1 || !(opts.tolerance > 0.0))
    throw InvalidArgumentError("brasil options out of range");

  const double a = interval.lambda_min;
  const double b = interval.lambda_max;
  const auto f = [s](double z) { return std::pow(z, -s); };

  if (a == b) {
    if (k > 0)
      throw InvalidArgumentError("interval must satisfy lambda_min < lambda_max for k >= 1");
    Vector node(1), value(1), weight(1);
    node[0] = a;
    value[0] = f(a);
    weight[0] = 1.0;
    return {BarycentricRational(node, value, weight), 0.0, 0.0, 0};
  }

  const Eigen::Index m = 2 * k + 1;
  const Eigen::Index n_int = 2 * k + 2;
  Vector nodes(m);
  for (Eigen::Index i = 1; i <= m; ++i)
    nodes[i - 1] = a * std::pow(b / a, static_cast<double>(i) / n_int);

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    BarycentricRational r = interpolate(f, nodes);
    const auto err = [&](double z) { return f(z) - r.eval(z); };

    std::vector<double> breakpoints(n_int + 1);
    breakpoints[0] = a;
    for (Eigen::Index i = 0; i < m; ++i) breakpoints[i + 1] = nodes[i];
    breakpoints[n_int] = b;

    std::vector<LocalMax> local(n_int);
    double emax = 0.0, emin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n_int; ++i) {
      local[i] = locate_max(err, breakpoints[i], breakpoints[i + 1]);
      emax = std::max(emax, local[i].abs_err);
      emin = std::min(emin, local[i].abs_err);
    }

    auto make_report = [&](int iterations) {
      BestApproxReport rep{std::move(r), emax, emax / std::max(emin, 1e-300) - 1.0,
                           iterations};
      rep.extrema.resize(n_int);
      rep.extremum_errors.resize(n_int);
      for (Eigen::Index i = 0; i < n_int; ++i) {
        rep.extrema[i] = local[i].z;
        rep.extremum_errors[i] = local[i].signed_err;
      }
      return rep;
    };

    if (emax <= 1e-300 || emax / std::max(emin, 1e-300) - 1.0 <= opts.tolerance)
      return make_report(iter);
    if (iter == opts.max_iter)
      throw BrasilConvergenceError(
          "equioscillation deviation " +
              std::to_string(emax / std::max(emin, 1e-300) - 1.0) +
              " above tolerance after " + std::to_string(iter) + " iterations",
          make_report(iter));

    // Shrink intervals carrying above-average error, grow the others.
    double log_mean = 0.0;
    for (const LocalMax& lm : local) log_mean += std::log(std::max(lm.abs_err, 1e-300));
    log_mean /= static_cast<double>(n_int);
    const double gmean = std::exp(log_mean);

    std::vector<double> lengths(n_int);
    double total = 0.0;
    for (Eigen::Index i = 0; i < n_int; ++i) {
      lengths[i] = (breakpoints[i + 1] - breakpoints[i]) *
                   std::pow(std::max(local[i].abs_err, 1e-300) / gmean, -0.5);
      total += lengths[i];
    }
    double acc = a;
    for (Eigen::Index i = 0; i < m; ++i) {
      acc += lengths[i] * (b - a) / total;
      nodes[i] = (i > 0 && acc <= nodes[i - 1])
                     ? std::nextafter(nodes[i - 1], b)
                     : acc;
    }
  }
  throw InternalError("unreachable brasil exit");
}

void save_approximant(const ApproximantFile& af, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  std::fprintf(f, "fracdiff-approximant v1\n");
  std::fprintf(f, "s %.17g\n", af.s);
  std::fprintf(f, "lambda_min %.17g\n", af.lambda_min);
  std::fprintf(f, "lambda_max %.17g\n", af.lambda_max);
  std::fprintf(f, "degree %d\n", af.degree);
  std::fprintf(f, "max_error %.17g\n", af.max_error);
  std::fprintf(f, "support %ld\n", static_cast<long>(af.r.support_size()));
  for (const char* section : {"nodes", "values", "weights"}) {
    std::fprintf(f, "%s\n", section);
    const Vector& v = section == std::string("nodes")    ? af.r.nodes()
                      : section == std::string("values") ? af.r.values()
                                                         : af.r.weights();
    for (Eigen::Index i = 0; i < v.size(); ++i) std::fprintf(f, "%.17g\n", v[i]);
  }
  std::fclose(f);
}

ApproximantFile load_approximant(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  long line_no = 0;
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw FormatError("unexpected end of file", line_no);
    ++line_no;
    return line;
  };

  if (next_line() != "fracdiff-approximant v1")
    throw FormatError("not a fracdiff approximant file", line_no);

  auto scalar_field = [&](const std::string& key) -> double {
    std::istringstream ls(next_line());
    std::string got;
    double v;
    if (!(ls >> got >> v) || got != key)
      throw FormatError("expected '" + key + "' field", line_no);
    return v;
  };

  const double s = scalar_field("s");
  const double lmin = scalar_field("lambda_min");
  const double lmax = scalar_field("lambda_max");
  const int degree = static_cast<int>(scalar_field("degree"));
  const double max_error = scalar_field("max_error");
  const long support = static_cast<long>(scalar_field("support"));
  if (support < 1) throw FormatError("invalid support size", line_no);

  Vector vecs[3];
  const char* names[3] = {"nodes", "values", "weights"};
  for (int v = 0; v < 3; ++v) {
    if (next_line() != names[v])
      throw FormatError(std::string("expected section '") + names[v] + "'", line_no);
    vecs[v].resize(support);
    for (long i = 0; i < support; ++i) {
      std::istringstream ls(next_line());
      if (!(ls >> vecs[v][i])) throw FormatError("malformed number", line_no);
    }
  }
  return {BarycentricRational(vecs[0], vecs[1], vecs[2]), s, lmin, lmax, degree,
          max_error};
}

}  // namespace fracdiff::rational
