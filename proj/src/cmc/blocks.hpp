#pragma once

// Building blocks: Green-perturbed spheres, catenoidal necks, Delaunay
// unduloids and the Jacobi fields used by the projections.

#include <cmath>
#include <vector>

#include "cmc/common.hpp"
#include "cmc/taylor.hpp"

namespace cmc {

// Solution of (Lap_{S^2} + 2) G = e+ delta_N + e- delta_S + A J on the unit
// sphere, with J = sqrt(3/4pi) cos(theta) and <G, J> = 0. In x = cos(theta),
//   G = alpha x + beta Q1(x) + gamma x log(1 - x^2),
// Q1 the Legendre function of the second kind.
struct GreenSolution {
  real eps_plus = 0, eps_minus = 0;
  real A = 0;
  real alpha = 0, beta = 0, gamma = 0;

  template <int N>
  Taylor<real, N> eval(const Taylor<real, N>& theta) const {
    Taylor<real, N> s, c, sh, ch;
    sincos(theta, s, c);
    sincos(theta * 0.5L, sh, ch);
    Taylor<real, N> q1 = c * log(ch / sh) - 1.0L;
    return c * alpha + q1 * beta + c * log(s) * (2 * gamma);
  }
  real value(real theta) const { return eval<0>(Taylor<real, 0>(theta)).c[0]; }
};

GreenSolution solve_green(real eps_plus, real eps_minus);

// Normalized unit-sphere Jacobi field and its normalization constant.
real jacobi_sphere(real theta);
inline real jacobi_sphere_norm() { return std::sqrt(3 / (4 * kPi)); }

// Near the poles, G = e(c + C log sin(theta)) + O(theta^2 log theta).
struct ExpansionConstants {
  real c_plus = 0, C_plus = 0, c_minus = 0, C_minus = 0;
  bool has_plus = false, has_minus = false;
};

ExpansionConstants expansion_constants(const GreenSolution& g);

// Scaled catenoid graph F = sign * eps * arccosh(x / eps) + eps * d.
real catenoid_graph(real eps, real d, int sign, real x);
Taylor<real, 2> catenoid_graph_jet(real eps, real d, int sign, const Taylor<real, 2>& x);

// Axial Jacobi field of the unit-waist-eps catenoid, sqrt(x^2 - eps^2)/x,
// extended oddly through the neck (x < 0 on the lower end).
real jacobi_neck(real eps, real x);

// Delaunay unduloid of mean curvature 2 with neck eps on the axis x = 0.
// The profile is parametrized by phi with rho = 1/2 - h cos(phi),
// h = 1/2 - eps, which linearizes the first integral
//   rho / sqrt(1 + rho'^2) - rho^2 = eps - eps^2.
struct DelaunayEnd {
  real T = 2;
  real eps = 0;
  real h = 0.5L;
  real c = 0;  // first-integral constant eps - eps^2

  real rho(real phi) const { return 0.5L - h * std::cos(phi); }
  // dx/dphi and its derivative
  real speed(real phi) const;
  real dspeed(real phi) const;
  // Axial coordinate of the profile point at phi; odd, and x(phi + 2pi) = x(phi) + T.
  real axial(real phi) const;
  real max_rho() const { return 1 - eps; }
};

real delaunay_period(real eps);
// Branch connected to the chain of tangent unit spheres: T in (2, pi].
DelaunayEnd delaunay_solve(real T);
inline constexpr real kDelaunayMaxPeriod = kPi;
DelaunayEnd delaunay_from_neck(real eps);

}  // namespace cmc
