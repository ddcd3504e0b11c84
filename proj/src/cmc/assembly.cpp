#include "cmc/assembly.hpp"

#include <boost/math/tools/roots.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cmc/chart.hpp"

namespace cmc {

namespace {

using J1 = Taylor<real, 1>;
using J2 = Taylor<real, 2>;

const real kLog2 = std::log(2.0L);

real slope_ratio(const ExpansionConstants& e, bool plus) {
  return plus ? e.c_plus / e.C_plus : e.c_minus / e.C_minus;
}

}  // namespace

real lambda_map(real r, real eps, const LambdaConstants& lc) {
  if (!(eps > 0) || eps > lambda_eps_max(lc))
    fail(ErrorCode::range, "neck scale outside the increasing range of the matching map");
  return r * eps * (2 * (kLog2 - std::log(eps)) - lc.m_upper - lc.m_lower);
}

real lambda_eps_max(const LambdaConstants& lc) {
  return 2 * std::exp(-1 - (lc.m_upper + lc.m_lower) / 2);
}

real invert_lambda(real r, real sigma, const LambdaConstants& lc) {
  if (!(sigma > 0)) fail(ErrorCode::no_solution, "separation must be positive");
  const real emax = lambda_eps_max(lc);
  if (sigma > lambda_map(r, emax, lc))
    fail(ErrorCode::no_solution, "separation beyond the range of the matching map");
  auto f = [&](real le) { return lambda_map(r, std::exp(le), lc) - sigma; };
  real lo = std::log(1e-300L), hi = std::log(emax);
  if (f(lo) > 0) fail(ErrorCode::no_solution, "separation too small");
  boost::uintmax_t iters = 300;
  auto tol = [](real a, real b) { return std::fabs(b - a) <= 1e-18L; };
  auto res = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return std::exp((res.first + res.second) / 2);
}

LambdaConstants lambda_constants(const GluedConfiguration& c, int j) {
  if (j < 0 || j + 1 >= static_cast<int>(c.spheres.size()) + (c.kind == ChainKind::one_ended))
    fail(ErrorCode::invalid_input, "neck index out of range");
  LambdaConstants lc;
  lc.m_lower = slope_ratio(c.spheres[j].constants, true);
  if (j + 1 < static_cast<int>(c.spheres.size()))
    lc.m_upper = slope_ratio(c.spheres[j + 1].constants, false);
  return lc;
}

GluedConfiguration configure_from_eps(ChainKind kind, real r, int K, real t0,
                                      const std::vector<real>& eps,
                                      const std::vector<real>& delta) {
  if (!(r > 0) || r >= 0.25L) fail(ErrorCode::invalid_input, "sphere radius must lie in (0, 1/4)");
  if (K < 0) fail(ErrorCode::invalid_input, "negative sphere count");
  const int nn = kind == ChainKind::finite ? K : K + 1;
  if (static_cast<int>(eps.size()) != nn)
    fail(ErrorCode::invalid_input, "wrong number of neck scales");
  if (!delta.empty() && static_cast<int>(delta.size()) != nn)
    fail(ErrorCode::invalid_input, "wrong number of neck displacements");
  for (real e : eps)
    if (!(e > 0) || e >= 1.0L / 16)
      fail(ErrorCode::regime, "neck scale outside (0, 1/16)");

  GluedConfiguration c;
  c.kind = kind;
  c.r = r;
  c.K = K;
  c.t0 = t0;
  c.spheres.resize(K + 1);
  for (int k = 0; k <= K; ++k) {
    SphereData& s = c.spheres[k];
    if (k < nn) {
      s.eps_plus = 2 * kPi * eps[k];
      s.outer_neck = k;
    }
    if (k > 0) {
      s.eps_minus = 2 * kPi * eps[k - 1];
      s.inner_neck = k - 1;
    } else if (kind == ChainKind::finite && nn > 0) {
      s.eps_minus = s.eps_plus;
      s.mirrored_inner = true;
    }
    s.green = solve_green(s.eps_plus, s.eps_minus);
    s.constants = expansion_constants(s.green);
  }

  c.necks.resize(nn);
  for (int j = 0; j < nn; ++j) {
    NeckData& n = c.necks[j];
    n.eps = eps[j];
    n.delta = delta.empty() ? 0 : delta[j];
    n.cap_radius = r * std::pow(n.eps, 0.75L);
    if (kind == ChainKind::one_ended && j == K) {
      n.delaunay = true;
      c.delaunay = delaunay_from_neck(n.eps);
      n.sigma = r * (c.delaunay.T - 2);
      n.d = (kLog2 - std::log(n.eps)) - n.sigma / (2 * r * n.eps) -
            slope_ratio(c.spheres[j].constants, true);
    } else {
      LambdaConstants lc = lambda_constants(c, j);
      if (n.eps > lambda_eps_max(lc))
        fail(ErrorCode::regime, "neck scale too large for the matching map");
      n.sigma = lambda_map(r, n.eps, lc);
      n.d = (lc.m_upper - lc.m_lower) / 2;
    }
    if (!(n.sigma > 0))
      fail(ErrorCode::regime, "neck scale too large: adjacent spheres overlap");
  }

  real t = t0;
  for (int k = 0; k <= K; ++k) {
    c.spheres[k].center = t;
    if (k < nn) {
      c.necks[k].center = t + r + c.necks[k].sigma / 2;
      t += 2 * r + c.necks[k].sigma;
    }
  }
  if (kind == ChainKind::one_ended) {
    const NeckData& n = c.necks[K];
    c.delaunay_waist = n.center + r * n.eps * (n.d + n.delta);
  }

  std::ostringstream os;
  const real lo = r * r * r * (1 - 1e-9L), hi = r * r * (1 + 1e-9L);
  for (int j = 0; j < nn; ++j) {
    const NeckData& n = c.necks[j];
    if (n.eps < lo || n.eps > hi) os << "neck " << j << ": eps outside [r^3, r^2]; ";
    if (std::fabs(n.delta) >= std::sqrt(n.eps)) os << "neck " << j << ": |delta| >= eps^(1/2); ";
  }
  c.regime_detail = os.str();
  c.regime_ok = c.regime_detail.empty();
  return c;
}

GluedConfiguration configure_from_sigma(ChainKind kind, real r, int K, real t0,
                                        const std::vector<real>& sigma,
                                        const std::vector<real>& delta) {
  const int nn = kind == ChainKind::finite ? K : K + 1;
  if (static_cast<int>(sigma.size()) != nn)
    fail(ErrorCode::invalid_input, "wrong number of separations");
  auto solve_neck = [&](const GluedConfiguration* c, int j) -> real {
    if (kind == ChainKind::one_ended && j == K) {
      return delaunay_solve(2 + sigma[j] / r).eps;
    }
    LambdaConstants lc;
    if (c) {
      lc = lambda_constants(*c, j);
    } else {
      lc.m_lower = lc.m_upper = 1 - kLog2;
    }
    return invert_lambda(r, sigma[j], lc);
  };
  std::vector<real> eps(nn);
  for (int j = 0; j < nn; ++j) eps[j] = solve_neck(nullptr, j);
  for (int it = 0; it < 200; ++it) {
    GluedConfiguration c = configure_from_eps(kind, r, K, t0, eps, delta);
    real change = 0;
    for (int j = 0; j < nn; ++j) {
      real e = solve_neck(&c, j);
      change = std::max(change, std::fabs(e - eps[j]) / eps[j]);
      eps[j] = e;
    }
    if (change <= 1e-17L) break;
    if (it == 199) fail(ErrorCode::nonconvergence, "separation-to-scale iteration stalled");
  }
  return configure_from_eps(kind, r, K, t0, eps, delta);
}

namespace {

template <int N>
Taylor<real, N> psi(const Taylor<real, N>& y) {
  return exp(-(1.0L / y));
}

}  // namespace

real cutoff(real s) {
  real u = 2 * (s - 0.5L);
  if (u <= 0) return 1;
  if (u >= 1) return 0;
  real a = std::exp(-1 / (1 - u)), b = std::exp(-1 / u);
  return a / (a + b);
}

J2 cutoff_jet(const J2& s) {
  J2 u = (s - 0.5L) * 2.0L;
  if (u.c[0] <= 0) return J2(1.0L);
  if (u.c[0] >= 1) return J2(0.0L);
  J2 a = psi(1.0L - u), b = psi(u);
  return a / (a + b);
}

namespace {

// Green function with the regular pole handled explicitly: at a pole with
// no source G is smooth and even, and (Lap + 2) G = -6 gamma x there.
template <int N>
Taylor<real, N> green_eval(const GreenSolution& g, const Taylor<real, N>& th) {
  const real t0 = th.c[0];
  if (t0 == 0 || t0 == kPi) {
    const real x0 = t0 == 0 ? 1 : -1;
    const real G0 = x0 * g.alpha + g.beta * (kLog2 - 1);
    const real G2 = -3 * g.gamma * x0 - G0;
    Taylor<real, N> h = th - t0;
    return h * h * (G2 / 2) + G0;
  }
  return g.eval(th);
}

template <int N>
ChartJet<N> sphere_chart(const SphereData& s, real r, const Taylor<real, N>& th) {
  Taylor<real, N> R = (1.0L - green_eval(s.green, th)) * r;
  Taylor<real, N> sn, cs;
  sincos(th, sn, cs);
  return {R * cs, R * sn};
}

// Sphere point in Fermi coordinates, t offset relative to `origin`.
template <int N>
FermiJet<N> sphere_fermi(const MetricProfile& p, const GluedConfiguration& c, int k,
                         const Taylor<real, N>& th, real origin) {
  const SphereData& s = c.spheres[k];
  ChartJet<N> sc = sphere_chart(s, c.r, th);
  FermiJet<N> f = exp_map<N>(p, s.center, sc.a, sc.b);
  f.u += s.center - origin;
  return f;
}

template <int N>
Taylor<real, N> delaunay_axial_jet(const DelaunayEnd& d, const Taylor<real, N>& phi) {
  const real f0 = phi.c[0];
  std::array<real, N + 1> fd{};
  fd[0] = d.axial(f0);
  if constexpr (N >= 1) fd[1] = d.speed(f0);
  if constexpr (N >= 2) fd[2] = d.dspeed(f0);
  static_assert(N <= 2, "Delaunay jets carry two derivatives");
  return compose(fd, phi);
}

// Delaunay point in the scaled chart of its neck.
template <int N>
ChartJet<N> delaunay_chart(const GluedConfiguration& c, const Taylor<real, N>& phi) {
  const NeckData& n = c.necks[c.K];
  const DelaunayEnd& d = c.delaunay;
  ChartJet<N> cj;
  cj.a = delaunay_axial_jet(d, phi) + n.eps * (n.d + n.delta);
  cj.b = 0.5L - cos(phi) * d.h;
  return cj;
}

// Period m of the Delaunay end drawn in the chart of its own waist, in
// Fermi coordinates with t offset relative to the neck centre.
FermiJet<2> delaunay_fermi_period(const MetricProfile& p, const GluedConfiguration& c, int m,
                                  const J2& phi) {
  const real shift = c.delaunay.axial(2 * kPi * m);
  const real cm = c.necks[c.K].center + c.r * shift;
  ChartJet<2> cj = delaunay_chart(c, phi);
  FermiJet<2> f = exp_map<2>(p, cm, (cj.a - shift) * c.r, cj.b * c.r);
  f.u += cm - c.necks[c.K].center;
  return f;
}

// Neighbouring period charts are blended across the bulge between them.
FermiJet<2> delaunay_fermi(const MetricProfile& p, const GluedConfiguration& c, const J2& phi) {
  const real f0 = phi.c[0];
  const int k = static_cast<int>(std::floor((f0 - kPi / 2) / (2 * kPi)));
  J2 s = (phi - (2 * kPi * k + kPi / 2)) / (2 * kPi) + 0.5L;
  J2 chi = cutoff_jet(s);
  if (k < 0 || chi.c[0] == 0) return delaunay_fermi_period(p, c, k + 1, phi);
  if (chi.c[0] == 1) return delaunay_fermi_period(p, c, k, phi);
  FermiJet<2> a = delaunay_fermi_period(p, c, k, phi), b = delaunay_fermi_period(p, c, k + 1, phi);
  return {chi * a.u + (1.0L - chi) * b.u, chi * a.x + (1.0L - chi) * b.x};
}

// X as a jet in x given both as jets in a common parameter h at h = 0.
J2 reparametrize(const J2& X, const J2& x) {
  const real x1 = x.c[1], x2 = x.c[2];
  if (x1 == 0) fail(ErrorCode::singular_point, "graph is vertical in the neck chart");
  J2 h;
  h.c = {0, 1 / x1, -x2 / (x1 * x1 * x1)};
  J2 out = h * h * X.c[2] + h * X.c[1];
  out.c[0] = X.c[0];
  return out;
}

// Newton for the block parameter whose neck-chart x equals target.
template <class Chain>
real solve_chart_x(Chain chain, real target, real guess, const char* what) {
  real q = guess;
  for (int it = 0; it < 80; ++it) {
    ChartJet<1> cj = chain(J1::variable(q));
    real f = cj.b.c[0] - target;
    real step = f / cj.b.c[1];
    q -= step;
    if (std::fabs(step) <= 1e-18L * (1 + std::fabs(q))) return q;
  }
  ChartJet<1> cj = chain(J1::variable(q));
  if (std::fabs(cj.b.c[0] - target) > 1e-14L * std::fabs(target))
    fail(ErrorCode::nonconvergence, std::string("chart root find failed: ") + what);
  return q;
}

template <int N>
ChartJet<N> sphere_in_neck_chart(const MetricProfile& p, const GluedConfiguration& c, int k,
                                 int j, const Taylor<real, N>& th) {
  const real pc = c.necks[j].center;
  FermiJet<N> f = sphere_fermi(p, c, k, th, pc);
  ChartJet<N> cj = log_map<N>(p, pc, f.u, f.x);
  cj.a /= c.r;
  cj.b /= c.r;
  return cj;
}

template <int N>
ChartJet<N> delaunay_in_neck_chart(const MetricProfile&, const GluedConfiguration& c,
                                   const Taylor<real, N>& phi) {
  return delaunay_chart(c, phi);
}

real sphere_theta_at(const MetricProfile& p, const GluedConfiguration& c, int k, int j,
                     real x0) {
  const bool lower = k == j;
  auto chain = [&](const J1& th) { return sphere_in_neck_chart<1>(p, c, k, j, th); };
  return solve_chart_x(chain, x0, lower ? x0 : kPi - x0, "sphere");
}

real delaunay_phi_at(const MetricProfile& p, const GluedConfiguration& c, real x0) {
  const DelaunayEnd& d = c.delaunay;
  real cphi = std::clamp<real>((0.5L - x0) / d.h, -1, 1);
  auto chain = [&](const J1& phi) { return delaunay_in_neck_chart<1>(p, c, phi); };
  return solve_chart_x(chain, x0, -std::acos(cphi), "delaunay");
}

}  // namespace

J2 sphere_graph_in_neck(const MetricProfile& p, const GluedConfiguration& c, int sphere,
                        int neck, real x0) {
  if (sphere != neck && sphere != neck + 1)
    fail(ErrorCode::invalid_input, "sphere is not adjacent to the neck");
  real th = sphere_theta_at(p, c, sphere, neck, x0);
  ChartJet<2> cj = sphere_in_neck_chart<2>(p, c, sphere, neck, J2::variable(th));
  return reparametrize(cj.a, cj.b);
}

J2 delaunay_graph_in_neck(const MetricProfile& p, const GluedConfiguration& c, real x0) {
  if (c.kind != ChainKind::one_ended) fail(ErrorCode::invalid_input, "no Delaunay end");
  real phi = delaunay_phi_at(p, c, x0);
  ChartJet<2> cj = delaunay_in_neck_chart<2>(p, c, J2::variable(phi));
  return reparametrize(cj.a, cj.b);
}

std::vector<NeckSite> neck_sites(const GluedConfiguration& c) {
  std::vector<NeckSite> out;
  for (int j = 0; j < c.neck_count(); ++j) {
    const NeckData& n = c.necks[j];
    NeckSite s;
    s.center = n.center;
    s.eps = n.eps;
    s.d = n.d;
    s.delta = n.delta;
    s.index = j;
    s.delaunay = n.delaunay;
    out.push_back(s);
    if (c.kind == ChainKind::finite) {
      NeckSite m = s;
      m.center = 2 * c.t0 - n.center;
      m.d = -n.d;
      m.delta = -n.delta;
      m.index = -(j + 1);
      out.push_back(m);
    }
  }
  if (c.kind == ChainKind::one_ended) {
    for (int m = 1; m <= c.delaunay_periods; ++m) {
      NeckSite s;
      s.center = c.delaunay_waist + m * c.r * c.delaunay.T;
      s.eps = c.delaunay.eps;
      s.index = c.K + m;
      s.delaunay = true;
      s.periodic = true;
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const NeckSite& a, const NeckSite& b) { return a.center < b.center; });
  return out;
}

void neck_chart_coords(const MetricProfile& p, const GluedConfiguration& c,
                       const NeckSite& site, real t, real rho, real& X, real& x) {
  ChartJet<0> cj = log_map<0>(p, site.center, Taylor<real, 0>(t - site.center),
                              Taylor<real, 0>(rho));
  X = cj.a.c[0] / c.r;
  x = cj.b.c[0] / c.r;
}

std::vector<NeckCoords> neck_coordinates(const AssembledSurface& s, const MetricProfile& p,
                                         const std::vector<NeckSite>& sites) {
  const real r = s.config.r;
  std::vector<NeckCoords> out(s.curve.size());
  for (size_t i = 0; i < s.curve.size(); ++i) {
    const CurveSample& c = s.curve.samples[i];
    NeckCoords& nc = out[i];
    nc.dist = std::numeric_limits<real>::infinity();
    int best = -1;
    real bd = 0;
    for (size_t k = 0; k < sites.size(); ++k) {
      real d = std::fabs(c.t - sites[k].center);
      if (best < 0 || d < bd) {
        best = static_cast<int>(k);
        bd = d;
      }
    }
    if (best < 0 || bd > 1.5L * r || c.rho > 1.5L * r) continue;
    nc.site = best;
    neck_chart_coords(p, s.config, sites[best], c.t, c.rho, nc.X, nc.x);
    nc.dist = std::hypot(nc.X, nc.x);
  }
  return out;
}

namespace {

class Assembler {
 public:
  Assembler(const GluedConfiguration& c, const MetricProfile& p, const AssemblyOptions& o)
      : c_(c), p_(p), o_(o) {}

  AssembledSurface run();

 private:
  using Region = std::vector<LocalSample>;

  const GluedConfiguration& c_;
  const MetricProfile& p_;
  const AssemblyOptions& o_;
  std::vector<SampleAux> aux_;

  int add_aux(const SampleAux& a) {
    aux_.push_back(a);
    return static_cast<int>(aux_.size()) - 1;
  }

  real theta_cut(int k, int j) const {
    return sphere_theta_at(p_, c_, k, j, std::pow(c_.necks[j].eps, 0.75L));
  }
  Region sphere_region(int k, real th_lo, bool neck_lo, real th_hi, bool neck_hi);
  Region transition_region(int j, int side);
  Region neck_region(int j);
  Region delaunay_region();
  LocalSample from_fermi(const FermiJet<2>& f, real origin, real p, real dsign, real w,
                         RegionTag tag) const;
  Region mirror(const Region& r);
};

LocalSample Assembler::from_fermi(const FermiJet<2>& f, real origin, real p, real dsign,
                                  real w, RegionTag tag) const {
  LocalSample q;
  q.p = p;
  q.t = origin + f.u.c[0];
  q.rho = f.x.c[0];
  q.dt = dsign * f.u.c[1];
  q.drho = dsign * f.x.c[1];
  q.d2t = 2 * f.u.c[2];
  q.d2rho = 2 * f.x.c[2];
  q.wp = w;
  q.tag = tag;
  return q;
}

Assembler::Region Assembler::sphere_region(int k, real th_lo, bool neck_lo, real th_hi,
                                           bool neck_hi) {
  const real knee = 0.6L;
  std::vector<real> left{th_lo}, right{th_hi};
  if (neck_lo)
    for (real e = th_lo * o_.sphere_ratio; e < knee; e *= o_.sphere_ratio) left.push_back(e);
  if (neck_hi)
    for (real e = (kPi - th_hi) * o_.sphere_ratio; e < knee; e *= o_.sphere_ratio)
      right.insert(right.begin(), kPi - e);
  std::vector<real> edges = left;
  const real a = left.back(), b = right.front();
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / (kPi / 16))));
  for (int i = 1; i < n; ++i) edges.push_back(a + (b - a) * i / n);
  edges.insert(edges.end(), right.begin(), right.end());
  // parameter p = -theta increases with t
  std::vector<real> pe(edges.rbegin(), edges.rend());
  for (real& e : pe) e = -e;
  PanelNodes nodes = panel_nodes(pe, o_.order);
  Region out;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    real th = -nodes.p[i];
    J2 tj = J2::variable(th);
    FermiJet<2> f = sphere_fermi(p_, c_, k, tj, c_.spheres[k].center);
    LocalSample q = from_fermi(f, c_.spheres[k].center, nodes.p[i], -1, nodes.w[i],
                               {RegionKind::sphere, k, 0});
    if (th == 0 || th == kPi) q.rho = 0;
    ChartJet<1> sc = sphere_chart(c_.spheres[k], c_.r, J1::variable(th));
    SampleAux ax;
    ax.sphere = k;
    ax.Ja = sc.b.c[1] / std::hypot(sc.a.c[1], sc.b.c[1]);
    q.ref = add_aux(ax);
    out.push_back(q);
  }
  return out;
}

Assembler::Region Assembler::transition_region(int j, int side) {
  const NeckData& n = c_.necks[j];
  const real x_out = std::pow(n.eps, 0.75L);
  const real x_in = x_out / 2;
  std::vector<real> edges;
  for (int i = 0; i <= o_.transition_panels; ++i)
    edges.push_back(x_in + (x_out - x_in) * i / o_.transition_panels);
  PanelNodes nodes = panel_nodes(edges, o_.order);
  Region out;
  for (size_t ii = 0; ii < nodes.p.size(); ++ii) {
    // lower sheet runs toward the neck with x decreasing
    size_t i = side < 0 ? nodes.p.size() - 1 - ii : ii;
    const real x0 = nodes.p[i];
    J2 xj = J2::variable(x0);
    J2 Fblock;
    if (side > 0)
      Fblock = sphere_graph_in_neck(p_, c_, j + 1, j, x0);
    else
      Fblock = sphere_graph_in_neck(p_, c_, j, j, x0);
    J2 Fneck = n.delaunay ? delaunay_graph_in_neck(p_, c_, x0)
                          : catenoid_graph_jet(n.eps, n.d + n.delta, side, xj);
    J2 chi = cutoff_jet(xj / x_out);
    J2 F = chi * Fneck + (1.0L - chi) * Fblock;
    FermiJet<2> f = exp_map<2>(p_, n.center, F * c_.r, xj * c_.r);
    LocalSample q = from_fermi(f, n.center, side * x0, side, nodes.w[i],
                               {RegionKind::transition, j, side});
    q.ref = add_aux({});
    out.push_back(q);
  }
  return out;
}

Assembler::Region Assembler::neck_region(int j) {
  const NeckData& n = c_.necks[j];
  const real tau_m = std::acosh(std::pow(n.eps, -0.25L) / 2);
  std::vector<real> edges;
  for (int i = 0; i <= o_.neck_panels; ++i)
    edges.push_back(-tau_m + 2 * tau_m * i / o_.neck_panels);
  PanelNodes nodes = panel_nodes(edges, o_.order);
  Region out;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    J2 tau = J2::variable(nodes.p[i]);
    J2 X = tau * n.eps + n.eps * (n.d + n.delta);
    J2 x = cosh(tau) * n.eps;
    FermiJet<2> f = exp_map<2>(p_, n.center, X * c_.r, x * c_.r);
    LocalSample q = from_fermi(f, n.center, nodes.p[i], 1, nodes.w[i],
                               {RegionKind::neck, j, 0});
    q.ref = add_aux({});
    out.push_back(q);
  }
  return out;
}

Assembler::Region Assembler::delaunay_region() {
  const NeckData& n = c_.necks[c_.K];
  const real phi_m = -delaunay_phi_at(p_, c_, std::pow(n.eps, 0.75L) / 2);
  const real s0 = std::min<real>(std::sqrt(n.eps) / 8, phi_m / 4);
  // geometric toward each waist, uniform elsewhere
  auto waist_side = [&](real limit) {
    std::vector<real> g{0};
    for (real e = s0; e < limit; e *= 2) g.push_back(e);
    g.push_back(limit);
    return g;
  };
  std::vector<real> edges;
  for (real e : waist_side(phi_m)) edges.insert(edges.begin(), -e);
  const real knee = 0.5L;
  const int M = c_.delaunay_periods;
  for (int m = 0; m < M; ++m) {
    const real base = 2 * kPi * m;
    std::vector<real> lw = waist_side(knee);
    for (size_t i = 1; i < lw.size(); ++i) edges.push_back(base + lw[i]);
    const real a = base + knee, b = base + 2 * kPi - knee;
    const int nu = static_cast<int>(std::ceil((b - a) / 0.25L));
    for (int i = 1; i < nu; ++i) edges.push_back(a + (b - a) * i / nu);
    std::vector<real> rw = waist_side(knee);
    for (auto it = rw.rbegin(); it != rw.rend(); ++it)
      edges.push_back(base + 2 * kPi - *it);
  }
  PanelNodes nodes = panel_nodes(edges, o_.order);
  Region out;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    const real phi = nodes.p[i];
    FermiJet<2> f = delaunay_fermi(p_, c_, J2::variable(phi));
    RegionTag tag{RegionKind::delaunay, c_.K + 1, 0};
    int window = 0;
    if (phi <= phi_m) {
      tag = {RegionKind::neck, c_.K, 0};
    } else {
      window = std::min(M, static_cast<int>(std::floor(phi / (2 * kPi))) + 1);
    }
    LocalSample q = from_fermi(f, n.center, phi, 1, nodes.w[i], tag);
    q.window = window;
    q.ref = add_aux({});
    out.push_back(q);
  }
  return out;
}

Assembler::Region Assembler::mirror(const Region& r) {
  Region out(r.rbegin(), r.rend());
  for (LocalSample& q : out) {
    q.p = -q.p;
    q.t = 2 * c_.t0 - q.t;
    q.drho = -q.drho;
    q.d2t = -q.d2t;
    switch (q.tag.kind) {
      case RegionKind::sphere: q.tag.index = -q.tag.index; break;
      case RegionKind::transition:
        q.tag.index = -(q.tag.index + 1);
        q.tag.side = -q.tag.side;
        break;
      case RegionKind::neck: q.tag.index = -(q.tag.index + 1); break;
      default: break;
    }
    SampleAux ax = aux_[q.ref];
    ax.sphere = -ax.sphere;
    if (q.tag.kind != RegionKind::sphere) ax.sphere = -1;
    ax.Ja = -ax.Ja;
    q.ref = add_aux(ax);
  }
  return out;
}

AssembledSurface Assembler::run() {
  const int K = c_.K;
  const int nn = c_.neck_count();
  std::vector<Region> half;
  for (int k = 0; k <= K; ++k) {
    const SphereData& s = c_.spheres[k];
    bool neck_lo = s.outer_neck >= 0;
    real th_lo = neck_lo ? theta_cut(k, k) : 0;
    real th_hi;
    bool neck_hi = false;
    if (c_.kind == ChainKind::finite && k == 0) {
      th_hi = kPi / 2;
    } else if (s.inner_neck >= 0) {
      neck_hi = true;
      th_hi = theta_cut(k, k - 1);
    } else {
      th_hi = kPi;
    }
    half.push_back(sphere_region(k, th_lo, neck_lo, th_hi, neck_hi));
    if (k < nn) {
      half.push_back(transition_region(k, -1));
      if (c_.necks[k].delaunay) {
        half.push_back(delaunay_region());
      } else {
        half.push_back(neck_region(k));
        half.push_back(transition_region(k, +1));
      }
    }
  }

  CurveBuilder builder;
  if (c_.kind == ChainKind::finite) {
    for (auto it = half.rbegin(); it != half.rend(); ++it) builder.add_region(mirror(*it));
  }
  for (const Region& r : half) builder.add_region(r);
  AssembledSurface out;
  out.config = c_;
  out.curve = builder.finish();
  out.curve.capped_lo = true;
  out.curve.capped_hi = c_.kind == ChainKind::finite;
  out.curve.reflection_symmetric = c_.kind == ChainKind::finite;
  out.curve.semi_infinite = c_.kind == ChainKind::one_ended;
  out.aux = std::move(aux_);
  return out;
}

}  // namespace

AssembledSurface assemble(const GluedConfiguration& config, const MetricProfile& profile,
                          const AssemblyOptions& opt) {
  if (config.kind == ChainKind::finite) {
    if (profile.parity() != Parity::even)
      fail(ErrorCode::invalid_config, "finite chains need an even profile");
    if (config.t0 != 0) fail(ErrorCode::invalid_config, "finite chains are centred at t = 0");
  }
  if (config.kind == ChainKind::one_ended && profile.regime() != Regime::one_ended)
    fail(ErrorCode::invalid_config, "one-ended chains need a one-ended profile");
  const real first = config.spheres.front().center - 2 * config.r;
  if (config.kind == ChainKind::one_ended && !profile.in_domain(first))
    fail(ErrorCode::domain, "first sphere leaves the profile domain");
  Assembler a(config, profile, opt);
  return a.run();
}

}  // namespace cmc
