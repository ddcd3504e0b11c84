#pragma once

// Flux, projections onto the Jacobi fields, the leading-order balancing
// system and its Newton solution.

#include <string>
#include <vector>

#include "cmc/assembly.hpp"

namespace cmc {

// Flux through the disk {t = t_cut} for the axial field d/dt:
//   2 pi sqrt(A) rho |t'| / v - H_ref pi A rho^2,  v = sqrt(t'^2 + A rho'^2).
real flux(const ProfileCurve& curve, real t_cut, const MetricProfile& p, real H_ref);

struct Calibration {
  real C0 = 0, C1 = 0, C1p = 0, C2 = 0;
  // diagnostics
  real c1_exponent = 0;      // fitted leading power of q on the eps grid
  real c1_fit_residual = 0;  // relative
  real c2_spread = 0;        // relative spread of the extrapolated values
  real c0_spread = 0;
  std::vector<real> eps_grid;
  std::vector<real> c0_samples;
  std::vector<real> c2_samples;
};

// q(eps) = C1 eps + C1' eps^{3/2} for catenoidal necks.
real q_neck(const Calibration& c, real eps);
// The Delaunay neck: q = -2 pi (eps - eps^2) at every cut.
real q_delaunay(real eps);

// Neck scale with q_neck(eps) = target on the decreasing branch.
real invert_q(const Calibration& c, real target);

// Reference point for the curvature constant: A = 1 + e^{-t^2}/2 at t = 1/2.
inline constexpr real kC2ReferenceT = 0.5L;

Calibration calibrate_constants(real r, const std::vector<real>& eps_grid);
// Constants without the C0 paired runs (C0 = 0); cheap.
Calibration calibrate_flux_constants(real r, const std::vector<real>& eps_grid);
real calibrate_C0(real r, real eps);

// Geodesic sphere of radius r about gamma(center); p = -theta.
ProfileCurve geodesic_sphere(const MetricProfile& p, real r, real center, int panels = 32,
                             int order = 8);
// Integral of (H - 2/r) cos(theta) over a geodesic sphere.
real geodesic_sphere_projection(const MetricProfile& p, real r, real center);

struct Projections {
  real tau_scale = 1;
  std::vector<real> neck;    // necks 0..n-1 of the configuration
  std::vector<real> sphere;  // spheres 0..K
};

// tau_i = (2 + i) r eps^{3/4} tau_scale; chi_neck = chi(d / tau_1) and
// chi_ext = 1 - chi(d / tau_4), d the chart distance to the nearest neck.
Projections projections(const AssembledSurface& s, const MetricProfile& p,
                        real tau_scale = 1);

// Analytic main terms r (q_out - q_in) - C2 r^4 S'(t_k) of sphere k.
real sphere_main_term(const GluedConfiguration& c, const MetricProfile& p,
                      const Calibration& cal, int k);

struct BalanceProblem {
  ChainKind kind = ChainKind::finite;
  real r = 0.01L;
  int K = 10;
  real t0 = 0;
  Calibration constants;
};

int neck_count(const BalanceProblem& b);
int unknown_count(const BalanceProblem& b);

// Rows: sphere rows in chain order, then r^3 delta_j for the interior necks.
std::vector<real> leading_residual(const BalanceProblem& b, const MetricProfile& p,
                                   const std::vector<real>& eps,
                                   const std::vector<real>& delta);

// Neck scales from the telescoped rows with positions at zero separation.
// Fails with `infeasible` when some target has the wrong sign.
std::vector<real> telescoped_guess(const BalanceProblem& b, const MetricProfile& p);

// Largest deviation between the summed rows and the telescoped closed form.
real telescoped_gap(const BalanceProblem& b, const MetricProfile& p,
                    const std::vector<real>& eps);

struct SolverOptions {
  int max_iterations = 50;
  real tolerance_factor = 1e-12L;  // times r^3
  real regime_C = 100;
};

struct BalancedSolution {
  std::vector<real> eps, sigma, delta;
  std::vector<real> positions;  // sphere centres
  std::vector<real> residual;
  std::vector<real> trace;  // residual norm per iteration
  int iterations = 0;
  real residual_norm = 0;
  int monotone = 0;  // -1 decreasing, +1 increasing, 0 neither
  bool regime_ok = false;
  real regime_ratio = 0;        // max over necks of max(eps/r^2, r^3/eps)
  // Sphere-row Jacobian block: largest entry on the weak side of the
  // diagonal relative to the smallest diagonal entry (upper-triangular for
  // the finite kind, lower-triangular for the one-ended kind).
  real off_triangle = 0;
  real telescoped_gap = 0;
  GluedConfiguration config;
};

BalancedSolution solve_balancing(const BalanceProblem& b, const MetricProfile& p,
                                 const SolverOptions& opt = {});

}  // namespace cmc
