// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "fracdiff/errors.hpp"

namespace fracdiff::bench {

/// One benchmark cell. error_M is the M-norm distance to the dense reference.
struct ConvergenceRecord {
  std::string method;
  double s;
  int k;
  long n;
  double error_M;
  double wall_time_s;
};

inline constexpr const char* kCsvHeader = "method,s,k,n,error_M,wall_time_s";

std::string to_csv_row(const ConvergenceRecord& r);
ConvergenceRecord from_csv_row(const std::string& line);

struct RateFit {
  double rate;       // rho in error ~ A e^{-rho k}
  double r_squared;
  int k_lo;          // fitted window (inclusive)
  int k_hi;
  int points;
};

/// Least squares on log(error) over the largest contiguous k-window with
/// error in [floor, ceiling]; excludes the stagnation floor and the
/// pre-asymptotic head. Fewer than two usable points yield rate = NaN.
RateFit fit_rate(const std::vector<int>& ks, const std::vector<double>& errors,
                 double floor = 1e-12, double ceiling = 1e-1);

}  // namespace fracdiff::bench
