#include "cmc/blocks.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "cmc/revgeom.hpp"

namespace cmc {

GreenSolution solve_green(real eps_plus, real eps_minus) {
  if (eps_plus < 0 || eps_minus < 0)
    fail(ErrorCode::invalid_input, "source strengths must be non-negative");
  GreenSolution g;
  g.eps_plus = eps_plus;
  g.eps_minus = eps_minus;
  // Log coefficients at the poles are -beta +- 2 gamma = eps_pm / (2 pi).
  g.beta = -(eps_plus + eps_minus) / (4 * kPi);
  g.gamma = (eps_plus - eps_minus) / (8 * kPi);
  // (Lap + 2)[x log(1 - x^2)] = -6x, so the J-component of the source is
  // -6 gamma x = A sqrt(3/4pi) x.
  g.A = -jacobi_sphere_norm() * (eps_plus - eps_minus);
  // <G, x> = 0; <x, x> = 4pi/3 and <x log(1-x^2), x> = 2pi(4/3 log2 - 16/9).
  g.alpha = -g.gamma * (2 * std::log(2.0L) - 8.0L / 3);
  return g;
}

real jacobi_sphere(real theta) { return jacobi_sphere_norm() * std::cos(theta); }

ExpansionConstants expansion_constants(const GreenSolution& g) {
  ExpansionConstants e;
  const real l2 = std::log(2.0L);
  // Near theta = 0: alpha x -> alpha, Q1 -> log 2 - 1 - log sin(theta).
  if (g.eps_plus > 0) {
    e.has_plus = true;
    e.C_plus = 1 / (2 * kPi);
    e.c_plus = (g.alpha + g.beta * (l2 - 1)) / g.eps_plus;
  }
  if (g.eps_minus > 0) {
    e.has_minus = true;
    e.C_minus = 1 / (2 * kPi);
    e.c_minus = (-g.alpha + g.beta * (l2 - 1)) / g.eps_minus;
  }
  return e;
}

real catenoid_graph(real eps, real d, int sign, real x) {
  if (x < eps) fail(ErrorCode::domain, "catenoid graph needs x >= eps");
  return sign * eps * std::acosh(x / eps) + eps * d;
}

Taylor<real, 2> catenoid_graph_jet(real eps, real d, int sign, const Taylor<real, 2>& x) {
  if (x.c[0] < eps) fail(ErrorCode::domain, "catenoid graph needs x >= eps");
  return acosh(x / eps) * (sign * eps) + eps * d;
}

real jacobi_neck(real eps, real x) {
  real ax = std::fabs(x);
  if (ax < eps) fail(ErrorCode::domain, "neck Jacobi field needs |x| >= eps");
  real v = std::sqrt((ax - eps) * (ax + eps)) / ax;
  return x < 0 ? -v : v;
}

real DelaunayEnd::speed(real phi) const {
  real r = rho(phi);
  return (r * r + c) / std::sqrt(r * r + r + c);
}

real DelaunayEnd::dspeed(real phi) const {
  real r = rho(phi);
  real dr = h * std::sin(phi);
  real q = r * r + r + c;
  return dr * (2 * r / std::sqrt(q) - (r * r + c) * (2 * r + 1) / (2 * q * std::sqrt(q)));
}

namespace {

// Integral of speed over [0, phi] for phi in [0, pi], on geometric panels
// clustered at the neck where the integrand varies on the scale sqrt(eps).
real axial_half(const DelaunayEnd& d, real phi) {
  static std::vector<real> gx, gw;
  if (gx.empty()) gauss_legendre(16, gx, gw);
  if (phi <= 0) return 0;
  std::vector<real> edges{0};
  real e = std::max<real>(std::sqrt(d.eps) / 8, 1e-12L);
  while (e < phi) {
    edges.push_back(e);
    e *= 2;
  }
  edges.push_back(phi);
  real sum = 0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    real m = (edges[i] + edges[i + 1]) / 2, hh = (edges[i + 1] - edges[i]) / 2;
    for (size_t k = 0; k < gx.size(); ++k) sum += hh * gw[k] * d.speed(m + hh * gx[k]);
  }
  return sum;
}

}  // namespace

real DelaunayEnd::axial(real phi) const {
  if (phi < 0) return -axial(-phi);
  const real two_pi = 2 * kPi;
  real m = std::floor(phi / two_pi);
  real rem = phi - m * two_pi;
  real x = rem <= kPi ? axial_half(*this, rem) : T - axial_half(*this, two_pi - rem);
  return m * T + x;
}

real delaunay_period(real eps) {
  DelaunayEnd d;
  d.eps = eps;
  d.h = 0.5L - eps;
  d.c = eps - eps * eps;
  return 2 * axial_half(d, kPi);
}

DelaunayEnd delaunay_from_neck(real eps) {
  if (!(eps > 0) || eps > 0.5L) fail(ErrorCode::no_solution, "Delaunay neck outside (0, 1/2]");
  DelaunayEnd d;
  d.eps = eps;
  d.h = 0.5L - eps;
  d.c = eps - eps * eps;
  d.T = delaunay_period(eps);
  return d;
}

DelaunayEnd delaunay_solve(real T) {
  if (!(T > 2) || T > kDelaunayMaxPeriod)
    fail(ErrorCode::no_solution, "period outside the unduloid branch (2, pi]");
  // T(eps) - 2 ~ 2 eps (2 log 2 - 1 - log eps); bracket in log eps.
  auto f = [T](real le) { return delaunay_period(std::exp(le)) - T; };
  real lo = std::log(1e-40L), hi = std::log(0.5L);
  if (f(hi) < 0) fail(ErrorCode::no_solution, "period beyond the unduloid branch");
  if (T == kDelaunayMaxPeriod) return delaunay_from_neck(0.5L);
  boost::uintmax_t iters = 400;
  auto tol = [](real a, real b) { return std::fabs(b - a) <= 1e-15L; };
  auto res = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return delaunay_from_neck(std::exp((res.first + res.second) / 2));
}

}  // namespace cmc
