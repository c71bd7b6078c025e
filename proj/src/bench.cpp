// SPDX-License-Identifier: Apache-2.0
#include "fracdiff/bench.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fracdiff::bench {

std::string to_csv_row(const ConvergenceRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%.17g,%d,%ld,%.17g,%.6f", r.method.c_str(), r.s,
                r.k, r.n, r.error_M, r.wall_time_s);
  return buf;
}

ConvergenceRecord from_csv_row(const std::string& line) {
  ConvergenceRecord r;
  std::istringstream in(line);
  std::string field;
  auto next = [&]() -> std::string {
    if (!std::getline(in, field, ',')) throw FormatError("short CSV row: " + line);
    return field;
  };
  r.method = next();
  r.s = std::stod(next());
  r.k = std::stoi(next());
  r.n = std::stol(next());
  r.error_M = std::stod(next());
  r.wall_time_s = std::stod(next());
  return r;
}

RateFit fit_rate(const std::vector<int>& ks, const std::vector<double>& errors,
                 double floor, double ceiling) {
  if (ks.size() != errors.size())
    throw InvalidArgumentError("fit_rate inputs differ in length");

  // Largest contiguous window with errors inside [floor, ceiling].
  std::size_t best_lo = 0, best_len = 0;
  std::size_t i = 0;
  while (i < ks.size()) {
    if (!(errors[i] >= floor && errors[i] <= ceiling && std::isfinite(errors[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < ks.size() && errors[j] >= floor && errors[j] <= ceiling &&
           std::isfinite(errors[j]))
      ++j;
    if (j - i > best_len) {
      best_len = j - i;
      best_lo = i;
    }
    i = j;
  }

  RateFit fit{std::numeric_limits<double>::quiet_NaN(), 0.0, 0, 0,
              static_cast<int>(best_len)};
  if (best_len < 2) return fit;

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(best_len);
  for (std::size_t t = best_lo; t < best_lo + best_len; ++t) {
    const double x = ks[t];
    const double y = std::log(errors[t]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return fit;
  const double slope = (n * sxy - sx * sy) / denom;
  const double var_y = syy - sy * sy / n;
  double r2 = 1.0;
  if (var_y > 0.0) {
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0.0;
    for (std::size_t t = best_lo; t < best_lo + best_len; ++t) {
      const double resid = std::log(errors[t]) - (intercept + slope * ks[t]);
      ss_res += resid * resid;
    }
    r2 = 1.0 - ss_res / var_y;
  }
  fit.rate = -slope;
  fit.r_squared = r2;
  fit.k_lo = ks[best_lo];
  fit.k_hi = ks[best_lo + best_len - 1];
  return fit;
}

}  // namespace fracdiff::bench
