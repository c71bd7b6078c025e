// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "fracdiff/errors.hpp"

namespace fracdiff {

/// Extended-real pole d in [-inf, 0]. The infinite pole is a tagged state;
/// it never enters floating-point arithmetic. The snapshot view t = -d maps
/// the infinite pole to +inf, which is only used for printing and for the
/// C boundary.
class Pole {
 public:
  static Pole infinite() { return Pole(0.0, true); }

  static Pole at(double d) {
    if (std::isnan(d) || std::isinf(d) || d > 0.0)
      throw InvalidArgumentError("pole must be a finite nonpositive real, got " +
                                 std::to_string(d));
    return Pole(d, false);
  }

  /// C-boundary helper: -inf maps to the infinite pole.
  static Pole from_real(double d) {
    return (std::isinf(d) && d < 0.0) ? infinite() : at(d);
  }

  bool is_infinite() const { return inf_; }

  double value() const {
    if (inf_) throw InternalError("value() called on the infinite pole");
    return d_;
  }

  /// Snapshot t = -d (reaction coefficient); +inf for the infinite pole.
  double snapshot() const {
    return inf_ ? std::numeric_limits<double>::infinity() : -d_;
  }

  friend bool operator==(const Pole& a, const Pole& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.d_ == b.d_);
  }

 private:
  Pole(double d, bool inf) : d_(d), inf_(inf) {}
  double d_;
  bool inf_;
};

/// Pole list (d_j)_{j=0}^k, pairwise distinct, at most one infinite entry.
class PoleSet {
 public:
  explicit PoleSet(std::vector<Pole> poles) : poles_(std::move(poles)) {
    if (poles_.empty()) throw InvalidArgumentError("pole set must be nonempty");
    std::size_t inf_count = 0;
    for (std::size_t i = 0; i < poles_.size(); ++i) {
      if (poles_[i].is_infinite()) ++inf_count;
      for (std::size_t j = i + 1; j < poles_.size(); ++j)
        if (poles_[i] == poles_[j])
          throw InvalidArgumentError("poles must be pairwise distinct");
    }
    if (inf_count > 1)
      throw InvalidArgumentError("at most one infinite pole is allowed");
  }

  /// Builds from snapshots t_j = -d_j in [0, inf]; +inf becomes the infinite pole.
  static PoleSet from_snapshots(const std::vector<double>& ts) {
    std::vector<Pole> ps;
    ps.reserve(ts.size());
    for (double t : ts) {
      if (std::isnan(t) || t < 0.0)
        throw InvalidArgumentError("snapshots must lie in [0, inf]");
      ps.push_back(std::isinf(t) ? Pole::infinite() : Pole::at(-t));
    }
    return PoleSet(std::move(ps));
  }

  std::size_t size() const { return poles_.size(); }
  int degree() const { return static_cast<int>(poles_.size()) - 1; }
  const Pole& operator[](std::size_t i) const { return poles_[i]; }
  auto begin() const { return poles_.begin(); }
  auto end() const { return poles_.end(); }

  bool has_infinite() const {
    for (const Pole& p : poles_)
      if (p.is_infinite()) return true;
    return false;
  }

  std::vector<double> snapshots() const {
    std::vector<double> ts;
    ts.reserve(poles_.size());
    for (const Pole& p : poles_) ts.push_back(p.snapshot());
    return ts;
  }

 private:
  std::vector<Pole> poles_;
};

}  // namespace fracdiff
