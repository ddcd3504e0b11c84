#include "cmcglue.h"

#include <fstream>
#include <string>

#include "cmc/pipeline.hpp"

struct cmc_profile {
  cmc::MetricProfile p;
};

struct cmc_solution {
  cmc::BalancedSolution s;
};

struct cmc_surface {
  cmc::AssembledSurface s;
};

struct cmc_output {
  cmc::RunOutput o;
};

namespace {

thread_local std::string last_error;

cmc_status to_status(cmc::ErrorCode c) { return static_cast<cmc_status>(static_cast<int>(c)); }

template <class F>
cmc_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return CMC_OK;
  } catch (const cmc::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CMC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CMC_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) cmc::fail(cmc::ErrorCode::invalid_input, std::string("null argument: ") + what);
}

cmc::ChainKind chain_kind(cmc_chain_kind k) {
  if (k != CMC_FINITE && k != CMC_ONE_ENDED)
    cmc::fail(cmc::ErrorCode::invalid_input, "unknown chain kind");
  return k == CMC_FINITE ? cmc::ChainKind::finite : cmc::ChainKind::one_ended;
}

cmc::Calibration calibration(const cmc_constants& c) {
  cmc::Calibration cal;
  cal.C0 = c.C0;
  cal.C1 = c.C1;
  cal.C1p = c.C1p;
  cal.C2 = c.C2;
  return cal;
}

size_t copy_out(const std::vector<cmc::real>& v, double* out, size_t cap) {
  for (size_t i = 0; i < v.size() && i < cap; ++i) out[i] = static_cast<double>(v[i]);
  return v.size();
}

}  // namespace

extern "C" {

const char* cmc_status_name(cmc_status s) {
  if (s == CMC_ERR_INTERNAL) return "internal";
  if (s < CMC_OK || s > CMC_ERR_REGIME) return "unknown";
  return cmc::error_name(static_cast<cmc::ErrorCode>(static_cast<int>(s)));
}

const char* cmc_last_error(void) { return last_error.c_str(); }

const char* cmc_version(void) { return "1.0.0"; }

cmc_status cmc_profile_builtin(const char* name, double beta, double half_length,
                               cmc_profile** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    cmc::ProfileSpec s;
    s.name = name;
    s.beta = beta;
    s.half_length = half_length;
    *out = new cmc_profile{cmc::make_profile(s)};
  });
}

cmc_status cmc_profile_expression(const char* expr, int even, int one_ended, double lo,
                                  double hi, cmc_profile** out) {
  return guarded([&] {
    need(expr, "expr");
    need(out, "out");
    *out = new cmc_profile{cmc::MetricProfile::from_expression(
        expr, even ? cmc::Parity::even : cmc::Parity::none,
        one_ended ? cmc::Regime::one_ended : cmc::Regime::finite_length, lo, hi)};
  });
}

void cmc_profile_free(cmc_profile* p) { delete p; }

cmc_status cmc_profile_eval(const cmc_profile* p, double t, double out[5]) {
  return guarded([&] {
    need(p, "profile");
    need(out, "out");
    if (!p->p.in_domain(t)) cmc::fail(cmc::ErrorCode::domain, "t outside the profile domain");
    cmc::Derivs4 d = p->p.derivs(t);
    for (int i = 0; i < 5; ++i) out[i] = static_cast<double>(d[i]);
  });
}

cmc_status cmc_scalar_curvature(const cmc_profile* p, double t, double* S, double* dS) {
  return guarded([&] {
    need(p, "profile");
    if (!p->p.in_domain(t)) cmc::fail(cmc::ErrorCode::domain, "t outside the profile domain");
    if (S) *S = static_cast<double>(cmc::scalar_curvature(p->p, t));
    if (dS) *dS = static_cast<double>(cmc::scalar_curvature_gradient(p->p, t));
  });
}

cmc_status cmc_profile_check_regime(const cmc_profile* p, int* ok) {
  return guarded([&] {
    need(p, "profile");
    need(ok, "ok");
    cmc::RegimeCheck rc = cmc::check_regime(p->p);
    *ok = rc.ok ? 1 : 0;
    if (!rc.ok) last_error = rc.detail;
  });
}

cmc_status cmc_calibrate(double r, const double* eps_grid, size_t n, int with_c0,
                         cmc_constants* out) {
  return guarded([&] {
    need(eps_grid, "eps_grid");
    need(out, "out");
    std::vector<cmc::real> grid(eps_grid, eps_grid + n);
    cmc::Calibration c = with_c0 ? cmc::calibrate_constants(r, grid)
                                 : cmc::calibrate_flux_constants(r, grid);
    *out = {static_cast<double>(c.C0),          static_cast<double>(c.C1),
            static_cast<double>(c.C1p),         static_cast<double>(c.C2),
            static_cast<double>(c.c1_exponent), static_cast<double>(c.c1_fit_residual),
            static_cast<double>(c.c2_spread),   static_cast<double>(c.c0_spread)};
  });
}

void cmc_solver_options_default(cmc_solver_options* o) {
  if (!o) return;
  cmc::SolverOptions d;
  o->max_iterations = d.max_iterations;
  o->tolerance_factor = static_cast<double>(d.tolerance_factor);
  o->regime_C = static_cast<double>(d.regime_C);
}

cmc_status cmc_balance_solve(const cmc_profile* p, cmc_chain_kind kind, double r, int K,
                             double t0, const cmc_constants* constants,
                             const cmc_solver_options* opt, cmc_solution** out) {
  return guarded([&] {
    need(p, "profile");
    need(constants, "constants");
    need(out, "out");
    cmc::BalanceProblem b{chain_kind(kind), r, K, t0, calibration(*constants)};
    cmc::SolverOptions so;
    if (opt) {
      so.max_iterations = opt->max_iterations;
      so.tolerance_factor = opt->tolerance_factor;
      so.regime_C = opt->regime_C;
    }
    *out = new cmc_solution{cmc::solve_balancing(b, p->p, so)};
  });
}

void cmc_solution_free(cmc_solution* s) { delete s; }

cmc_status cmc_solution_get_info(const cmc_solution* s, cmc_solution_info* out) {
  return guarded([&] {
    need(s, "solution");
    need(out, "out");
    const cmc::BalancedSolution& b = s->s;
    out->spheres = static_cast<int>(b.positions.size());
    out->necks = static_cast<int>(b.eps.size());
    out->iterations = b.iterations;
    out->monotone = b.monotone;
    out->regime_ok = b.regime_ok ? 1 : 0;
    out->residual_norm = static_cast<double>(b.residual_norm);
    out->regime_ratio = static_cast<double>(b.regime_ratio);
    out->off_triangle = static_cast<double>(b.off_triangle);
    out->telescoped_gap = static_cast<double>(b.telescoped_gap);
  });
}

cmc_status cmc_solution_get_field(const cmc_solution* s, cmc_solution_field f, double* out,
                                  size_t cap, size_t* len) {
  return guarded([&] {
    need(s, "solution");
    if (cap > 0) need(out, "out");
    const cmc::BalancedSolution& b = s->s;
    const std::vector<cmc::real>* v = nullptr;
    switch (f) {
      case CMC_FIELD_EPS: v = &b.eps; break;
      case CMC_FIELD_SIGMA: v = &b.sigma; break;
      case CMC_FIELD_DELTA: v = &b.delta; break;
      case CMC_FIELD_POSITIONS: v = &b.positions; break;
      case CMC_FIELD_RESIDUAL: v = &b.residual; break;
      case CMC_FIELD_TRACE: v = &b.trace; break;
      default: cmc::fail(cmc::ErrorCode::invalid_input, "unknown solution field");
    }
    size_t n = copy_out(*v, out, cap);
    if (len) *len = n;
  });
}

cmc_status cmc_surface_assemble(const cmc_profile* p, cmc_chain_kind kind, double r, int K,
                                double t0, const double* eps, const double* delta, size_t n,
                                cmc_surface** out) {
  return guarded([&] {
    need(p, "profile");
    need(out, "out");
    if (n > 0) need(eps, "eps");
    std::vector<cmc::real> e(eps, eps + n), d;
    if (delta) d.assign(delta, delta + n);
    cmc::GluedConfiguration c = cmc::configure_from_eps(chain_kind(kind), r, K, t0, e, d);
    *out = new cmc_surface{cmc::assemble(c, p->p)};
  });
}

cmc_status cmc_surface_from_solution(const cmc_profile* p, const cmc_solution* s,
                                     cmc_surface** out) {
  return guarded([&] {
    need(p, "profile");
    need(s, "solution");
    need(out, "out");
    *out = new cmc_surface{cmc::assemble(s->s.config, p->p)};
  });
}

void cmc_surface_free(cmc_surface* s) { delete s; }

cmc_status cmc_surface_size(const cmc_surface* s, size_t* n) {
  return guarded([&] {
    need(s, "surface");
    need(n, "n");
    *n = s->s.curve.size();
  });
}

cmc_status cmc_surface_sample(const cmc_surface* s, size_t i, cmc_sample* out) {
  return guarded([&] {
    need(s, "surface");
    need(out, "out");
    if (i >= s->s.curve.size()) cmc::fail(cmc::ErrorCode::range, "sample index out of range");
    const cmc::CurveSample& c = s->s.curve.samples[i];
    *out = {static_cast<double>(c.s),     static_cast<double>(c.t),
            static_cast<double>(c.rho),   static_cast<double>(c.dt),
            static_cast<double>(c.drho),  static_cast<double>(c.d2t),
            static_cast<double>(c.d2rho), static_cast<double>(c.w),
            static_cast<int>(c.tag.kind), c.tag.index,
            c.tag.side,                   c.window};
  });
}

cmc_status cmc_surface_mean_curvature(const cmc_surface* s, const cmc_profile* p, double* out,
                                      size_t cap) {
  return guarded([&] {
    need(s, "surface");
    need(p, "profile");
    need(out, "out");
    const auto& v = s->s.curve.samples;
    if (cap < v.size()) cmc::fail(cmc::ErrorCode::range, "output buffer too small");
    for (size_t i = 0; i < v.size(); ++i)
      out[i] = static_cast<double>(cmc::ambient_forms_exact(p->p, v[i]).H);
  });
}

cmc_status cmc_surface_deviation(const cmc_surface* s, const cmc_profile* p, double nu,
                                 double nu_bar, int exponential_axial, cmc_norm_report* out) {
  return guarded([&] {
    need(s, "surface");
    need(p, "profile");
    need(out, "out");
    cmc::NormOptions o;
    o.nu = nu;
    o.nu_bar = nu_bar;
    o.exponential_axial = exponential_axial != 0;
    cmc::WeightedNormReport r = cmc::deviation_report(s->s, p->p, o);
    *out = {static_cast<double>(r.sphere),
            static_cast<double>(r.transition),
            static_cast<double>(r.neck),
            static_cast<double>(r.delaunay),
            static_cast<double>(r.global),
            static_cast<double>(r.holder),
            static_cast<double>(r.eps > 0 ? r.predicted.value() : 0),
            static_cast<double>(r.eps > 0 ? r.predicted.exponent() : 0),
            static_cast<double>(r.ratio),
            static_cast<double>(r.eps),
            static_cast<double>(r.delta)};
  });
}

cmc_status cmc_surface_projections(const cmc_surface* s, const cmc_profile* p, double tau_scale,
                                   double* neck, size_t neck_cap, size_t* necks, double* sphere,
                                   size_t sphere_cap, size_t* spheres) {
  return guarded([&] {
    need(s, "surface");
    need(p, "profile");
    if (neck_cap > 0) need(neck, "neck");
    if (sphere_cap > 0) need(sphere, "sphere");
    cmc::Projections pr = cmc::projections(s->s, p->p, tau_scale);
    size_t a = copy_out(pr.neck, neck, neck_cap), b = copy_out(pr.sphere, sphere, sphere_cap);
    if (necks) *necks = a;
    if (spheres) *spheres = b;
  });
}

cmc_status cmc_surface_write_csv(const cmc_surface* s, const char* path) {
  return guarded([&] {
    need(s, "surface");
    need(path, "path");
    std::ofstream f(path, std::ios::binary);
    if (!f) cmc::fail(cmc::ErrorCode::invalid_input, std::string("cannot open ") + path);
    cmc::write_curve_csv(s->s.curve, f);
  });
}

cmc_status cmc_surface_write_obj(const cmc_surface* s, int angular_res, const char* path) {
  return guarded([&] {
    need(s, "surface");
    need(path, "path");
    std::ofstream f(path, std::ios::binary);
    if (!f) cmc::fail(cmc::ErrorCode::invalid_input, std::string("cannot open ") + path);
    cmc::write_curve_obj(s->s.curve, angular_res, f);
  });
}

cmc_status cmc_run(const char* command, const char* config_json, int angular_res,
                   cmc_output** out) {
  if (!command || !config_json || !out) {
    last_error = "null argument";
    return CMC_ERR_INVALID_INPUT;
  }
  cmc_status st = guarded([&] {
    *out = new cmc_output{cmc::run_command(command, config_json, angular_res)};
  });
  if (st != CMC_OK) return st;
  const cmc::RunOutput& o = (*out)->o;
  last_error = o.message;
  return to_status(o.status);
}

void cmc_output_free(cmc_output* o) { delete o; }

const char* cmc_output_summary(const cmc_output* o) { return o ? o->o.summary.c_str() : ""; }

size_t cmc_output_file_count(const cmc_output* o) { return o ? o->o.files.size() : 0; }

const char* cmc_output_file_name(const cmc_output* o, size_t i) {
  if (!o || i >= o->o.files.size()) return nullptr;
  return o->o.files[i].first.c_str();
}

const char* cmc_output_file_data(const cmc_output* o, size_t i, size_t* size) {
  if (!o || i >= o->o.files.size()) return nullptr;
  if (size) *size = o->o.files[i].second.size();
  return o->o.files[i].second.data();
}

}  // extern "C"
