#include "cmc/balance.hpp"

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>

#include "cmc/chart.hpp"

namespace cmc {

real flux(const ProfileCurve& curve, real t_cut, const MetricProfile& p, real H_ref) {
  const auto& v = curve.samples;
  if (v.size() < 2) fail(ErrorCode::invalid_input, "curve has fewer than two samples");
  int crossings = 0;
  size_t seg = 0;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    bool a = v[i].t >= t_cut, b = v[i + 1].t >= t_cut;
    if (a != b) {
      ++crossings;
      seg = i;
    }
  }
  if (crossings != 1)
    fail(ErrorCode::invalid_cut, "cut must meet the curve in exactly one circle");
  auto f = [&](real s) { return curve.at(s).t - t_cut; };
  real lo = v[seg].s, hi = v[seg + 1].s;
  real s;
  if (f(lo) == 0) {
    s = lo;
  } else if (f(hi) == 0) {
    s = hi;
  } else {
    boost::uintmax_t iters = 200;
    auto tol = [](real a, real b) { return std::fabs(b - a) <= 1e-19L * (1 + std::fabs(a)); };
    auto res = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
    s = (res.first + res.second) / 2;
  }
  CurveSample c = curve.at(s);
  if (std::fabs(c.dt) < 1e-10L) fail(ErrorCode::invalid_cut, "cut is tangent to the curve");
  const real A = p.A(c.t);
  const real vg = std::sqrt(c.dt * c.dt + A * c.drho * c.drho);
  return 2 * kPi * std::sqrt(A) * std::fabs(c.rho) * std::fabs(c.dt) / vg -
         H_ref * kPi * A * c.rho * c.rho;
}

real q_neck(const Calibration& c, real eps) { return c.C1 * eps + c.C1p * eps * std::sqrt(eps); }

real q_delaunay(real eps) { return -2 * kPi * (eps - eps * eps); }

real invert_q(const Calibration& c, real target) {
  if (!(target < 0)) fail(ErrorCode::infeasible, "no positive neck scale for this flux");
  if (!(c.C1 < 0)) fail(ErrorCode::calibration_failure, "flux constant has the wrong sign");
  real turn = c.C1p > 0 ? std::pow(-c.C1 / (1.5L * c.C1p), 2) : 1;
  real hi = std::min<real>(turn, 1.0L / 16);
  auto f = [&](real le) { return q_neck(c, std::exp(le)) - target; };
  real lo = std::log(1e-300L), lhi = std::log(hi);
  if (f(lhi) > 0) fail(ErrorCode::infeasible, "flux target beyond the admissible neck range");
  boost::uintmax_t iters = 300;
  auto tol = [](real a, real b) { return std::fabs(b - a) <= 1e-18L; };
  auto res = boost::math::tools::toms748_solve(f, lo, lhi, tol, iters);
  return std::exp((res.first + res.second) / 2);
}

namespace {

// Euclidean catenoid of waist r eps, upper half, out to scaled radius x_max.
ProfileCurve catenoid_half(real r, real eps, real x_max) {
  const real tau_max = std::acosh(x_max / eps);
  const int panels = 24;
  std::vector<real> edges;
  for (int i = 0; i <= panels; ++i) edges.push_back(tau_max * i / panels);
  PanelNodes nodes = panel_nodes(edges, 8);
  std::vector<LocalSample> reg;
  const real a = r * eps;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    real tau = nodes.p[i];
    LocalSample q;
    q.p = tau;
    q.t = a * tau;
    q.rho = a * std::cosh(tau);
    q.dt = a;
    q.drho = a * std::sinh(tau);
    q.d2t = 0;
    q.d2rho = a * std::cosh(tau);
    q.wp = nodes.w[i];
    q.tag = {RegionKind::neck, 0, 0};
    reg.push_back(q);
  }
  CurveBuilder b;
  b.add_region(reg);
  return b.finish();
}

MetricProfile c2_reference() { return MetricProfile::even_bump(0.5L, 5); }

}  // namespace

ProfileCurve geodesic_sphere(const MetricProfile& p, real r, real center, int panels,
                             int order) {
  std::vector<real> edges;
  for (int i = 0; i <= panels; ++i) edges.push_back(-kPi + kPi * i / panels);
  PanelNodes nodes = panel_nodes(edges, order);
  std::vector<LocalSample> reg;
  using J2 = Taylor<real, 2>;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    J2 th = J2::variable(-nodes.p[i]);
    J2 s, c;
    sincos(th, s, c);
    FermiJet<2> f = exp_map<2>(p, center, c * r, s * r);
    LocalSample q;
    q.p = nodes.p[i];
    q.t = center + f.u.c[0];
    q.rho = f.x.c[0];
    q.dt = -f.u.c[1];
    q.drho = -f.x.c[1];
    q.d2t = 2 * f.u.c[2];
    q.d2rho = 2 * f.x.c[2];
    if (i == 0 || i + 1 == nodes.p.size()) q.rho = 0;
    q.wp = nodes.w[i];
    q.tag = {RegionKind::sphere, 0, 0};
    reg.push_back(q);
  }
  CurveBuilder b;
  b.add_region(reg);
  ProfileCurve out = b.finish();
  out.capped_lo = out.capped_hi = true;
  return out;
}

real geodesic_sphere_projection(const MetricProfile& p, real r, real center) {
  const int panels = 32, order = 8;
  ProfileCurve c = geodesic_sphere(p, r, center, panels, order);
  std::vector<real> edges;
  for (int i = 0; i <= panels; ++i) edges.push_back(-kPi + kPi * i / panels);
  PanelNodes nodes = panel_nodes(edges, order);
  real sum = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    const CurveSample& s = c.samples[i];
    if (s.w == 0) continue;
    real dev = ambient_forms_exact(p, s).H - 2 / r;
    sum += s.w * ambient_area_density(p, s) * dev * std::cos(-nodes.p[i]);
  }
  return sum;
}

Calibration calibrate_flux_constants(real r, const std::vector<real>& eps_grid) {
  if (eps_grid.size() < 2) fail(ErrorCode::invalid_input, "need at least two neck scales");
  Calibration cal;
  cal.eps_grid = eps_grid;
  // q = -flux / r at the inner edge of the gluing annulus
  std::vector<real> q;
  for (real e : eps_grid) {
    real xc = std::pow(e, 0.75L) / 2;
    ProfileCurve cat = catenoid_half(r, e, 2 * xc);
    real tcut = r * e * std::acosh(xc / e);
    q.push_back(-flux(cat, tcut, MetricProfile::flat(10), 2 / r) / r);
  }
  // least squares for q = C1 e + C1' e^{3/2}
  real s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (size_t i = 0; i < q.size(); ++i) {
    real e = eps_grid[i], w = 1 / (e * e);  // relative residuals
    real f1 = e, f2 = e * std::sqrt(e);
    s11 += w * f1 * f1;
    s12 += w * f1 * f2;
    s22 += w * f2 * f2;
    b1 += w * f1 * q[i];
    b2 += w * f2 * q[i];
  }
  real det = s11 * s22 - s12 * s12;
  cal.C1 = (s22 * b1 - s12 * b2) / det;
  cal.C1p = (s11 * b2 - s12 * b1) / det;
  real mx = 0, my = 0;
  for (size_t i = 0; i < q.size(); ++i) {
    cal.c1_fit_residual =
        std::max(cal.c1_fit_residual, std::fabs(q_neck(cal, eps_grid[i]) - q[i]) / std::fabs(q[i]));
    mx += std::log(eps_grid[i]);
    my += std::log(std::fabs(q[i]));
  }
  mx /= q.size();
  my /= q.size();
  real sxy = 0, sxx = 0;
  for (size_t i = 0; i < q.size(); ++i) {
    real dx = std::log(eps_grid[i]) - mx;
    sxy += dx * (std::log(std::fabs(q[i])) - my);
    sxx += dx * dx;
  }
  cal.c1_exponent = sxy / sxx;

  // curvature term from geodesic spheres: projection = -C2 r^4 S'
  const MetricProfile ref = c2_reference();
  const real dS = scalar_curvature_gradient(ref, kC2ReferenceT);
  for (real rr : {r, r / 2, r / 4}) {
    real pr = geodesic_sphere_projection(ref, rr, kC2ReferenceT);
    cal.c2_samples.push_back(-pr / (rr * rr * rr * rr * dS));
  }
  const auto& c2 = cal.c2_samples;
  cal.C2 = c2.back();
  cal.c2_spread = std::fabs(c2.front() - c2.back()) / std::fabs(c2.back());
  if (!(cal.C2 > 0) || cal.c2_spread > 0.01L || cal.c1_fit_residual > 0.01L ||
      std::fabs(cal.c1_exponent - 1) > 0.02L)
    fail(ErrorCode::calibration_failure, "flux or curvature constants do not fit");
  return cal;
}

real calibrate_C0(real r, real eps) {
  const MetricProfile flat = MetricProfile::flat(10);
  const real dl = std::sqrt(eps) / 4;
  auto run = [&](real delta) {
    GluedConfiguration c = configure_from_eps(ChainKind::finite, r, 1, 0, {eps}, {delta});
    AssembledSurface s = assemble(c, flat);
    return projections(s, flat).neck.at(0);
  };
  real slope = (run(dl) - run(-dl)) / (2 * dl);
  return slope / (r * eps * std::sqrt(eps));
}

Calibration calibrate_constants(real r, const std::vector<real>& eps_grid) {
  Calibration cal = calibrate_flux_constants(r, eps_grid);
  real lo = 0, hi = 0, sum = 0;
  for (size_t i = 0; i < eps_grid.size(); ++i) {
    real c0 = calibrate_C0(r, eps_grid[i]);
    cal.c0_samples.push_back(c0);
    lo = i == 0 ? c0 : std::min(lo, c0);
    hi = i == 0 ? c0 : std::max(hi, c0);
    sum += c0;
  }
  cal.C0 = sum / eps_grid.size();
  cal.c0_spread = (hi - lo) / std::fabs(cal.C0);
  return cal;
}

Projections projections(const AssembledSurface& s, const MetricProfile& p, real tau_scale) {
  const GluedConfiguration& cfg = s.config;
  const auto sites = neck_sites(cfg);
  const auto nc = neck_coordinates(s, p, sites);
  Projections out;
  out.tau_scale = tau_scale;
  out.neck.assign(cfg.neck_count(), 0);
  out.sphere.assign(cfg.K + 1, 0);
  const real target = 2 / cfg.r;
  for (size_t i = 0; i < s.curve.size(); ++i) {
    const CurveSample& c = s.curve.samples[i];
    if (c.w == 0) continue;
    const NeckCoords& n = nc[i];
    const NeckSite* site = n.site >= 0 ? &sites[n.site] : nullptr;
    const bool sphere_sample = c.tag.kind == RegionKind::sphere && c.tag.index >= 0;
    const bool neck_sample = site && !site->periodic && site->index >= 0;
    if (!sphere_sample && !neck_sample) continue;
    real scale = 0;
    if (site) scale = std::pow(site->eps, 0.75L) * tau_scale;
    real chi_neck = neck_sample ? cutoff(n.dist / (3 * scale)) : 0;
    real chi_ext = site ? 1 - cutoff(n.dist / (6 * scale)) : 1;
    if (chi_neck == 0 && !(sphere_sample && chi_ext > 0)) continue;
    const real dev = ambient_forms_exact(p, c).H - target;
    const real dvol = c.w * ambient_area_density(p, c);
    if (chi_neck > 0) {
      // odd about the undisplaced waist
      const real X0 = site->eps * site->d;
      const real side = n.X >= X0 ? 1 : -1;
      real I = std::fabs(n.x) > site->eps ? jacobi_neck(site->eps, side * std::fabs(n.x)) : 0;
      out.neck[site->index] += dev * chi_neck * I * dvol;
    }
    if (sphere_sample && chi_ext > 0)
      out.sphere[c.tag.index] += dev * chi_ext * s.aux_of(c).Ja * dvol;
  }
  return out;
}

real sphere_main_term(const GluedConfiguration& c, const MetricProfile& p,
                      const Calibration& cal, int k) {
  const SphereData& s = c.spheres.at(k);
  real q_out = 0, q_in = 0;
  if (s.outer_neck >= 0) {
    const NeckData& n = c.necks[s.outer_neck];
    q_out = n.delaunay ? q_delaunay(n.eps) : q_neck(cal, n.eps);
  }
  if (s.inner_neck >= 0) q_in = q_neck(cal, c.necks[s.inner_neck].eps);
  if (s.mirrored_inner) q_in = q_out;
  const real r = c.r;
  return r * (q_out - q_in) - cal.C2 * r * r * r * r * scalar_curvature_gradient(p, s.center);
}

int neck_count(const BalanceProblem& b) {
  return b.kind == ChainKind::finite ? b.K : b.K + 1;
}

int unknown_count(const BalanceProblem& b) { return neck_count(b) + std::max(0, b.K - 1); }

namespace {

// Sphere rows of the leading-order system given sphere centres.
std::vector<real> sphere_rows(const BalanceProblem& b, const MetricProfile& p,
                              const std::vector<real>& eps, const std::vector<real>& centers) {
  const real r3 = b.r * b.r * b.r;
  const Calibration& cal = b.constants;
  std::vector<real> rows;
  if (b.kind == ChainKind::finite) {
    for (int k = 1; k <= b.K; ++k) {
      real q_out = k < b.K ? q_neck(cal, eps[k]) : 0;
      rows.push_back(q_out - q_neck(cal, eps[k - 1]) -
                     cal.C2 * r3 * scalar_curvature_gradient(p, centers[k]));
    }
  } else {
    for (int k = 0; k <= b.K; ++k) {
      real q_out = k < b.K ? q_neck(cal, eps[k]) : q_delaunay(eps[k]);
      real q_in = k > 0 ? q_neck(cal, eps[k - 1]) : 0;
      rows.push_back(q_out - q_in - cal.C2 * r3 * scalar_curvature_gradient(p, centers[k]));
    }
  }
  return rows;
}

std::vector<real> centers_of(const GluedConfiguration& c) {
  std::vector<real> out;
  for (const SphereData& s : c.spheres) out.push_back(s.center);
  return out;
}

real inf_norm(const std::vector<real>& v) {
  real m = 0;
  for (real x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

std::vector<real> leading_residual(const BalanceProblem& b, const MetricProfile& p,
                                   const std::vector<real>& eps,
                                   const std::vector<real>& delta) {
  const int nn = neck_count(b);
  if (static_cast<int>(eps.size()) != nn) fail(ErrorCode::invalid_input, "wrong number of neck scales");
  GluedConfiguration c = configure_from_eps(b.kind, b.r, b.K, b.t0, eps, delta);
  std::vector<real> rows = sphere_rows(b, p, eps, centers_of(c));
  const real r3 = b.r * b.r * b.r;
  for (int j = 1; j < b.K; ++j) rows.push_back(r3 * (delta.empty() ? 0 : delta[j]));
  return rows;
}

std::vector<real> telescoped_guess(const BalanceProblem& b, const MetricProfile& p) {
  const real r3 = b.r * b.r * b.r;
  const Calibration& cal = b.constants;
  auto dS = [&](int k) { return scalar_curvature_gradient(p, b.t0 + 2 * k * b.r); };
  std::vector<real> eps(neck_count(b));
  if (b.kind == ChainKind::finite) {
    for (int j = 0; j < b.K; ++j) {
      real sum = 0;
      for (int l = j + 1; l <= b.K; ++l) sum += dS(l);
      eps[j] = invert_q(cal, -cal.C2 * r3 * sum);
    }
  } else {
    real sum = 0;
    for (int j = 0; j <= b.K; ++j) {
      sum += dS(j);
      real target = cal.C2 * r3 * sum;
      if (j < b.K) {
        eps[j] = invert_q(cal, target);
      } else {
        if (!(target < 0) || 1 + 2 * target / kPi < 0)
          fail(ErrorCode::infeasible, "no Delaunay neck matches the accumulated flux");
        eps[j] = (1 - std::sqrt(1 + 2 * target / kPi)) / 2;
      }
    }
  }
  return eps;
}

real telescoped_gap(const BalanceProblem& b, const MetricProfile& p,
                    const std::vector<real>& eps) {
  GluedConfiguration c = configure_from_eps(b.kind, b.r, b.K, b.t0, eps, {});
  const std::vector<real> centers = centers_of(c);
  const std::vector<real> rows = sphere_rows(b, p, eps, centers);
  const real r3 = b.r * b.r * b.r;
  const Calibration& cal = b.constants;
  real gap = 0, scale = 0;
  for (real x : rows) scale = std::max(scale, std::fabs(x));
  for (real e : eps) scale = std::max(scale, std::fabs(q_neck(cal, e)));
  if (b.kind == ChainKind::finite) {
    for (int j = 0; j < b.K; ++j) {
      real lhs = 0, sum = 0;
      for (int l = j + 1; l <= b.K; ++l) {
        lhs += rows[l - 1];
        sum += scalar_curvature_gradient(p, centers[l]);
      }
      gap = std::max(gap, std::fabs(lhs - (-q_neck(cal, eps[j]) - cal.C2 * r3 * sum)));
    }
  } else {
    real lhs = 0, sum = 0;
    for (int j = 0; j <= b.K; ++j) {
      lhs += rows[j];
      sum += scalar_curvature_gradient(p, centers[j]);
      real q = j < b.K ? q_neck(cal, eps[j]) : q_delaunay(eps[j]);
      gap = std::max(gap, std::fabs(lhs - (q - cal.C2 * r3 * sum)));
    }
  }
  return scale > 0 ? gap / scale : gap;
}

BalancedSolution solve_balancing(const BalanceProblem& b, const MetricProfile& p,
                                 const SolverOptions& opt) {
  if (b.kind == ChainKind::finite && p.parity() != Parity::even)
    fail(ErrorCode::invalid_config, "finite chains need an even profile");
  if (b.kind == ChainKind::one_ended && p.regime() != Regime::one_ended)
    fail(ErrorCode::invalid_config, "one-ended chains need a one-ended profile");
  const int nn = neck_count(b);
  const int n = unknown_count(b);
  const real r3 = b.r * b.r * b.r;
  const real tol = opt.tolerance_factor * r3;

  auto split = [&](const std::vector<real>& y, std::vector<real>& eps, std::vector<real>& delta) {
    eps.assign(y.begin(), y.begin() + nn);
    delta.assign(nn, 0);
    for (int j = 1; j < b.K; ++j) delta[j] = y[nn + j - 1];
  };
  auto residual = [&](const std::vector<real>& y) {
    std::vector<real> eps, delta;
    split(y, eps, delta);
    return leading_residual(b, p, eps, delta);
  };

  std::vector<real> y = telescoped_guess(b, p);
  y.resize(n, 0);
  std::vector<real> F = residual(y);
  real norm = inf_norm(F);
  BalancedSolution sol;
  sol.trace.push_back(norm);
  Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic> J(n, n);
  int it = 0;
  for (; it < opt.max_iterations && norm > tol; ++it) {
    for (int i = 0; i < n; ++i) {
      real h = i < nn ? 1e-6L * y[i] : 1e-6L;
      std::vector<real> yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      std::vector<real> fp = residual(yp), fm = residual(ym);
      for (int k = 0; k < n; ++k) J(k, i) = (fp[k] - fm[k]) / (2 * h);
    }
    Eigen::Matrix<real, Eigen::Dynamic, 1> rhs(n);
    for (int k = 0; k < n; ++k) rhs(k) = -F[k];
    Eigen::Matrix<real, Eigen::Dynamic, 1> dy = J.partialPivLu().solve(rhs);
    real lambda = 1;
    bool accepted = false, blocked = false;
    for (int ls = 0; ls < 40; ++ls, lambda /= 2) {
      std::vector<real> yn = y;
      bool positive = true;
      for (int i = 0; i < n; ++i) {
        yn[i] += lambda * dy(i);
        if (i < nn && !(yn[i] > 0)) positive = false;
      }
      if (!positive) {
        blocked = true;
        continue;
      }
      std::vector<real> Fn;
      try {
        Fn = residual(yn);
      } catch (const Error&) {
        continue;
      }
      real nn_norm = inf_norm(Fn);
      if (nn_norm < norm) {
        y = yn;
        F = Fn;
        norm = nn_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (blocked) fail(ErrorCode::infeasible, "Newton iterate leaves the positive neck scales");
      fail(ErrorCode::nonconvergence, "line search failed");
    }
    sol.trace.push_back(norm);
  }
  if (norm > tol) fail(ErrorCode::nonconvergence, "balancing did not reach the tolerance");

  sol.iterations = it;
  sol.residual = F;
  sol.residual_norm = norm;
  split(y, sol.eps, sol.delta);
  sol.config = configure_from_eps(b.kind, b.r, b.K, b.t0, sol.eps, sol.delta);
  for (const NeckData& nd : sol.config.necks) sol.sigma.push_back(nd.sigma);
  sol.positions = centers_of(sol.config);
  bool dec = true, inc = true;
  for (int j = 1; j < nn; ++j) {
    if (!(sol.eps[j] < sol.eps[j - 1])) dec = false;
    if (!(sol.eps[j] > sol.eps[j - 1])) inc = false;
  }
  sol.monotone = nn < 2 ? 0 : dec ? -1 : inc ? 1 : 0;
  for (real e : sol.eps)
    sol.regime_ratio = std::max({sol.regime_ratio, e / (b.r * b.r), r3 / e});
  sol.regime_ok = sol.regime_ratio <= opt.regime_C;
  for (int j = 1; j < b.K; ++j)
    if (std::fabs(sol.delta[j]) >= std::sqrt(sol.eps[j])) sol.regime_ok = false;

  // triangular structure of the sphere rows in the neck scales, at the solution
  if (it > 0) {
    const int rows = static_cast<int>(sphere_rows(b, p, sol.eps, sol.positions).size());
    real diag = std::numeric_limits<real>::infinity(), off = 0;
    for (int k = 0; k < rows; ++k) {
      // finite: row k pairs with eps_k; one-ended: row k pairs with eps_k
      for (int i = 0; i < nn; ++i) {
        real v = std::fabs(J(k, i));
        if (i == k) {
          diag = std::min(diag, v);
        } else if ((b.kind == ChainKind::finite && i < k) ||
                   (b.kind == ChainKind::one_ended && i > k)) {
          off = std::max(off, v);
        }
      }
    }
    sol.off_triangle = off / diag;
  }
  sol.telescoped_gap = telescoped_gap(b, p, sol.eps);
  return sol;
}

}  // namespace cmc
