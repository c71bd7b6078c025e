// SPDX-License-Identifier: Apache-2.0
#include "fracdiff.h"

#include <cstring>
#include <new>
#include <string>

#include "fracdiff/bench.hpp"
#include "fracdiff/pencil.hpp"
#include "fracdiff/rational.hpp"
#include "fracdiff/schemes.hpp"

using fracdiff::OperatorPencil;
using fracdiff::Vector;

struct fracdiff_pencil {
  OperatorPencil impl;
};

struct fracdiff_result {
  fracdiff::schemes::MethodResult impl;
};

struct fracdiff_approximant {
  fracdiff::rational::ApproximantFile impl;
  double deviation = 0.0;  // from the computing run; zero for loaded files
  int iterations = 0;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

template <typename Fn>
fracdiff_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return FRACDIFF_OK;
  } catch (const fracdiff::InvalidArgumentError& e) {
    set_error(e.what());
    return FRACDIFF_ERR_INVALID_ARGUMENT;
  } catch (const fracdiff::FormatError& e) {
    set_error(e.what());
    return FRACDIFF_ERR_FORMAT;
  } catch (const fracdiff::ValidationError& e) {
    set_error(e.what());
    return FRACDIFF_ERR_VALIDATION;
  } catch (const fracdiff::ConvergenceError& e) {
    set_error(e.what());
    return FRACDIFF_ERR_CONVERGENCE;
  } catch (const fracdiff::DegeneracyError& e) {
    set_error(e.what());
    return FRACDIFF_ERR_DEGENERACY;
  } catch (const fracdiff::ConditioningError& e) {
    set_error(e.what());
    return FRACDIFF_ERR_CONDITIONING;
  } catch (const fracdiff::ResourceLimitError& e) {
    set_error(e.what());
    return FRACDIFF_ERR_RESOURCE_LIMIT;
  } catch (const fracdiff::DomainError& e) {
    set_error(e.what());
    return FRACDIFF_ERR_DOMAIN;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return FRACDIFF_ERR_RESOURCE_LIMIT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return FRACDIFF_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return FRACDIFF_ERR_INTERNAL;
  }
}

fracdiff_status require(bool ok, const char* what) {
  if (ok) return FRACDIFF_OK;
  set_error(what);
  return FRACDIFF_ERR_INVALID_ARGUMENT;
}

Vector to_vector(const double* data, size_t len) {
  return Eigen::Map<const Vector>(data, static_cast<Eigen::Index>(len));
}

}  // namespace

extern "C" {

const char* fracdiff_version(void) { return "0.1.0"; }

const char* fracdiff_status_name(fracdiff_status st) {
  switch (st) {
    case FRACDIFF_OK: return "ok";
    case FRACDIFF_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case FRACDIFF_ERR_FORMAT: return "format";
    case FRACDIFF_ERR_VALIDATION: return "validation";
    case FRACDIFF_ERR_CONVERGENCE: return "convergence";
    case FRACDIFF_ERR_DEGENERACY: return "degeneracy";
    case FRACDIFF_ERR_CONDITIONING: return "conditioning";
    case FRACDIFF_ERR_RESOURCE_LIMIT: return "resource-limit";
    case FRACDIFF_ERR_DOMAIN: return "domain";
    case FRACDIFF_ERR_INTERNAL: return "internal";
  }
  return "?";
}

const char* fracdiff_last_error(void) { return g_last_error.c_str(); }

fracdiff_status fracdiff_pencil_fd1d(long n, fracdiff_pencil** out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return guarded([&] {
    *out = new fracdiff_pencil{OperatorPencil::fd_laplacian_1d(n)};
  });
}

fracdiff_status fracdiff_pencil_fd2d(long nx, fracdiff_pencil** out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return guarded([&] {
    *out = new fracdiff_pencil{OperatorPencil::fd_laplacian_2d(nx)};
  });
}

fracdiff_status fracdiff_pencil_load(const char* path_k, const char* path_m,
                                     fracdiff_pencil** out) {
  if (auto st = require(out && path_k, "null argument")) return st;
  return guarded([&] {
    std::optional<std::string> m;
    if (path_m) m = path_m;
    *out = new fracdiff_pencil{OperatorPencil::load(path_k, m)};
  });
}

fracdiff_status fracdiff_pencil_save(const fracdiff_pencil* p, const char* path_k,
                                     const char* path_m) {
  if (auto st = require(p && path_k, "null argument")) return st;
  return guarded([&] {
    std::optional<std::string> m;
    if (path_m) m = path_m;
    p->impl.save(path_k, m);
  });
}

void fracdiff_pencil_free(fracdiff_pencil* p) { delete p; }

long fracdiff_pencil_dim(const fracdiff_pencil* p) {
  return p ? static_cast<long>(p->impl.dim()) : 0;
}

fracdiff_status fracdiff_pencil_interval(const fracdiff_pencil* p, double rel_tol,
                                         double* lambda_min, double* lambda_max) {
  if (auto st = require(p && lambda_min && lambda_max, "null argument")) return st;
  return guarded([&] {
    const fracdiff::SpectralInterval iv = p->impl.spectral_interval(rel_tol);
    *lambda_min = iv.lambda_min;
    *lambda_max = iv.lambda_max;
  });
}

fracdiff_status fracdiff_pencil_m_inner(const fracdiff_pencil* p, const double* u,
                                        const double* v, size_t len, double* out) {
  if (auto st = require(p && u && v && out, "null argument")) return st;
  return guarded([&] { *out = p->impl.m_inner(to_vector(u, len), to_vector(v, len)); });
}

fracdiff_status fracdiff_pencil_apply(const fracdiff_pencil* p, const double* v,
                                      size_t len, double* out) {
  if (auto st = require(p && v && out, "null argument")) return st;
  return guarded([&] {
    const Vector r = p->impl.apply_L(to_vector(v, len));
    std::memcpy(out, r.data(), sizeof(double) * len);
  });
}

fracdiff_status fracdiff_pencil_shifted_solve(const fracdiff_pencil* p, double pole,
                                              const double* rhs, size_t len,
                                              double* out) {
  if (auto st = require(p && rhs && out, "null argument")) return st;
  return guarded([&] {
    const Vector r =
        p->impl.shifted_solve(fracdiff::Pole::from_real(pole), to_vector(rhs, len));
    std::memcpy(out, r.data(), sizeof(double) * len);
  });
}

fracdiff_status fracdiff_snapshots_zolotarev(int k, double lambda_min, double lambda_max,
                                             double* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return guarded([&] {
    const auto snaps = fracdiff::schemes::zolotarev_snapshots(
                           k, fracdiff::SpectralInterval(lambda_min, lambda_max))
                           .snapshots();
    std::memcpy(out, snaps.data(), sizeof(double) * snaps.size());
  });
}

fracdiff_status fracdiff_snapshots_bura(double s, double lambda_min, double lambda_max,
                                        int k, double* out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return guarded([&] {
    const auto snaps = fracdiff::schemes::bura_poles(
                           s, fracdiff::SpectralInterval(lambda_min, lambda_max), k)
                           .snapshots();
    std::memcpy(out, snaps.data(), sizeof(double) * snaps.size());
  });
}

fracdiff_status fracdiff_snapshots_greedy(const fracdiff_pencil* p, const double* b,
                                          size_t len, int k, double k_star,
                                          double s_min, double s_max, double* out,
                                          int* out_len) {
  if (auto st = require(p && b && out && out_len, "null argument")) return st;
  return guarded([&] {
    const auto grid = fracdiff::schemes::default_greedy_grid(k_star, s_min, s_max);
    const auto res =
        fracdiff::schemes::greedy_snapshots(p->impl, to_vector(b, len), grid, k);
    const auto snaps = res.snapshots.snapshots();
    std::memcpy(out, snaps.data(), sizeof(double) * snaps.size());
    *out_len = static_cast<int>(snaps.size());
  });
}

fracdiff_status fracdiff_sinc_params(double k_star, double s_min, double s_max, long* m,
                                     long* n) {
  if (auto st = require(m && n, "null argument")) return st;
  return guarded([&] {
    const auto grid = fracdiff::schemes::sinc_grid(k_star, s_min, s_max);
    *m = grid.m;
    *n = grid.n;
  });
}

void fracdiff_solve_opts_init(fracdiff_solve_opts* opts) {
  if (!opts) return;
  opts->k_star = 0.15;
  opts->s_min = 0.2;
  opts->s_max = 0.8;
  opts->interval_tol = 1e-8;
  opts->greedy_grid_points = 200;
  opts->brasil_tol = 1e-3;
  opts->brasil_max_iter = 1000;
}

fracdiff_status fracdiff_solve(const fracdiff_pencil* p, const double* b, size_t len,
                               const char* method, double s, int k,
                               const fracdiff_solve_opts* opts, fracdiff_result** out) {
  if (auto st = require(p && b && method && out, "null argument")) return st;
  return guarded([&] {
    const auto m = fracdiff::schemes::method_from_name(method);
    if (!m)
      throw fracdiff::InvalidArgumentError(std::string("unknown method '") + method +
                                           "'");
    fracdiff::schemes::RunOptions ro;
    if (opts) {
      ro.k_star = opts->k_star;
      ro.s_min = opts->s_min;
      ro.s_max = opts->s_max;
      ro.interval_tol = opts->interval_tol;
      ro.greedy_grid_points = opts->greedy_grid_points;
      ro.brasil.tolerance = opts->brasil_tol;
      ro.brasil.max_iter = opts->brasil_max_iter;
    }
    *out = new fracdiff_result{
        fracdiff::schemes::run_method(p->impl, to_vector(b, len), *m, s, k, ro)};
  });
}

void fracdiff_result_free(fracdiff_result* r) { delete r; }

long fracdiff_result_dim(const fracdiff_result* r) {
  return r ? static_cast<long>(r->impl.solution.size()) : 0;
}

fracdiff_status fracdiff_result_solution(const fracdiff_result* r, double* out,
                                         size_t len) {
  if (auto st = require(r && out, "null argument")) return st;
  if (auto st = require(len == static_cast<size_t>(r->impl.solution.size()),
                        "solution buffer length mismatch"))
    return st;
  std::memcpy(out, r->impl.solution.data(), sizeof(double) * len);
  return FRACDIFF_OK;
}

int fracdiff_result_space_dim(const fracdiff_result* r) {
  return r ? r->impl.k + 1 : 0;
}

double fracdiff_result_wall_seconds(const fracdiff_result* r) {
  return r ? r->impl.wall_time_s : 0.0;
}

double fracdiff_result_build_seconds(const fracdiff_result* r) {
  return r ? r->impl.build_time_s : 0.0;
}

double fracdiff_result_extract_seconds(const fracdiff_result* r) {
  return r ? r->impl.extract_time_s : 0.0;
}

size_t fracdiff_result_snapshot_count(const fracdiff_result* r) {
  return r ? r->impl.snapshots.size() : 0;
}

fracdiff_status fracdiff_result_snapshots(const fracdiff_result* r, double* out,
                                          size_t cap) {
  if (auto st = require(r && out, "null argument")) return st;
  if (auto st = require(cap >= r->impl.snapshots.size(), "snapshot buffer too small"))
    return st;
  std::memcpy(out, r->impl.snapshots.data(),
              sizeof(double) * r->impl.snapshots.size());
  return FRACDIFF_OK;
}

fracdiff_status fracdiff_brasil(double s, double lambda_min, double lambda_max, int k,
                                double tol, int max_iter, fracdiff_approximant** out) {
  if (auto st = require(out != nullptr, "null output pointer")) return st;
  return guarded([&] {
    fracdiff::rational::BrasilOptions opts;
    if (tol > 0.0) opts.tolerance = tol;
    if (max_iter > 0) opts.max_iter = max_iter;
    const fracdiff::SpectralInterval iv(lambda_min, lambda_max);
    auto rep = fracdiff::rational::brasil_best_approx(s, iv, k, opts);
    *out = new fracdiff_approximant{{std::move(rep.approximant), s, lambda_min,
                                     lambda_max, k, rep.max_error},
                                    rep.equioscillation_deviation,
                                    rep.iterations};
  });
}

void fracdiff_approximant_free(fracdiff_approximant* a) { delete a; }

double fracdiff_approximant_max_error(const fracdiff_approximant* a) {
  return a ? a->impl.max_error : 0.0;
}

double fracdiff_approximant_deviation(const fracdiff_approximant* a) {
  return a ? a->deviation : 0.0;
}

int fracdiff_approximant_iterations(const fracdiff_approximant* a) {
  return a ? a->iterations : 0;
}

int fracdiff_approximant_degree(const fracdiff_approximant* a) {
  return a ? a->impl.degree : 0;
}

fracdiff_status fracdiff_approximant_eval(const fracdiff_approximant* a, double z,
                                          double* out) {
  if (auto st = require(a && out, "null argument")) return st;
  return guarded([&] { *out = a->impl.r.eval(z); });
}

size_t fracdiff_approximant_pole_count(const fracdiff_approximant* a) {
  if (!a) return 0;
  try {
    return fracdiff::rational::poles(a->impl.r).size();
  } catch (...) {
    return 0;
  }
}

fracdiff_status fracdiff_approximant_poles(const fracdiff_approximant* a, double* out,
                                           size_t cap) {
  if (auto st = require(a && out, "null argument")) return st;
  return guarded([&] {
    const auto ps = fracdiff::rational::poles(a->impl.r);
    if (cap < ps.size())
      throw fracdiff::InvalidArgumentError("pole buffer too small");
    std::memcpy(out, ps.data(), sizeof(double) * ps.size());
  });
}

fracdiff_status fracdiff_approximant_save(const fracdiff_approximant* a,
                                          const char* path) {
  if (auto st = require(a && path, "null argument")) return st;
  return guarded([&] { fracdiff::rational::save_approximant(a->impl, path); });
}

fracdiff_status fracdiff_approximant_load(const char* path, fracdiff_approximant** out) {
  if (auto st = require(path && out, "null argument")) return st;
  return guarded([&] {
    *out = new fracdiff_approximant{fracdiff::rational::load_approximant(path)};
  });
}

fracdiff_status fracdiff_fit_rate(const int* ks, const double* errors, size_t len,
                                  double* rate, double* r_squared) {
  if (auto st = require(ks && errors && rate && r_squared, "null argument")) return st;
  return guarded([&] {
    std::vector<int> kv(ks, ks + len);
    std::vector<double> ev(errors, errors + len);
    const auto fit = fracdiff::bench::fit_rate(kv, ev);
    *rate = fit.rate;
    *r_squared = fit.r_squared;
  });
}

}  // extern "C"
