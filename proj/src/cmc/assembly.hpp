#pragma once

// Matched asymptotics and gluing of spheres, catenoidal necks and an
// optional Delaunay end into one axially symmetric approximate CMC surface.
//
// Indexing: sphere k is centred at t_k; neck j joins sphere j to sphere j+1
// and is centred at p_j = t_j + r + sigma_j / 2. The finite kind stores the
// half chain k = 0..K (sphere 0 central) and is mirrored through t = 0. The
// one-ended kind has spheres 0..K with a capped sphere 0 and a Delaunay end
// attached through neck K.

#include <string>
#include <vector>

#include "cmc/ambient.hpp"
#include "cmc/blocks.hpp"
#include "cmc/revgeom.hpp"

namespace cmc {

enum class ChainKind { finite, one_ended };

// Chart radii: the neck charts are used for ||x|| <= R' (scaled) and the
// sphere regions are measured at scale R.
inline constexpr real kChartRprime = 0.5L;
inline constexpr real kChartRfactor = 2.0L;  // R = 2r

struct SphereData {
  real center = 0;
  real eps_plus = 0, eps_minus = 0;  // Green source strengths
  GreenSolution green;
  ExpansionConstants constants;
  int inner_neck = -1, outer_neck = -1;  // -1: capped pole
  bool mirrored_inner = false;           // finite sphere 0: inner neck is the mirror of neck 0
};

struct NeckData {
  real eps = 0;
  real delta = 0;
  real d = 0;      // translation
  real sigma = 0;  // separation
  real center = 0; // p_j
  real cap_radius = 0;  // r eps^{3/4}
  bool delaunay = false;
};

struct GluedConfiguration {
  ChainKind kind = ChainKind::finite;
  real r = 0.01L;
  int K = 1;
  real t0 = 0;  // centre of sphere 0
  std::vector<SphereData> spheres;  // 0..K
  std::vector<NeckData> necks;      // finite 0..K-1, one-ended 0..K
  DelaunayEnd delaunay;             // one-ended only
  real delaunay_waist = 0;          // Fermi t of the first Delaunay neck
  int delaunay_periods = 2;
  bool regime_ok = true;
  std::string regime_detail;

  int neck_count() const { return static_cast<int>(necks.size()); }
};

// sigma = r eps (2(log 2 - log eps) - m_upper - m_lower), with
// m_upper = c^-/C^- of the sphere above and m_lower = c^+/C^+ of the one below.
struct LambdaConstants {
  real m_upper = 0, m_lower = 0;
};

real lambda_map(real r, real eps, const LambdaConstants& lc);
// Largest eps on which lambda_map is increasing.
real lambda_eps_max(const LambdaConstants& lc);
real invert_lambda(real r, real sigma, const LambdaConstants& lc);

// Constants the matching uses for neck j given the configuration's spheres.
LambdaConstants lambda_constants(const GluedConfiguration& c, int j);

// Derive everything from neck scales eps (and displacements delta).
GluedConfiguration configure_from_eps(ChainKind kind, real r, int K, real t0,
                                      const std::vector<real>& eps,
                                      const std::vector<real>& delta);
// Same from separations sigma; eps solves sigma_j = Lambda_j(eps_j) jointly.
GluedConfiguration configure_from_sigma(ChainKind kind, real r, int K, real t0,
                                        const std::vector<real>& sigma,
                                        const std::vector<real>& delta);

// Smooth monotone cutoff: 1 on [0, 1/2], 0 on [1, inf).
real cutoff(real s);
Taylor<real, 2> cutoff_jet(const Taylor<real, 2>& s);
// Argument convention used by the gluing: chi(||x|| / eps^{3/4}).
inline real cutoff(real x, real eps) { return cutoff(x / std::pow(eps, 0.75L)); }

struct AssemblyOptions {
  int order = 8;              // Gauss nodes per panel
  real sphere_ratio = 1.41421356237309504880L;  // geometric panel ratio near necks
  int neck_panels = 28;
  int transition_panels = 16;
};

// Extra per-sample data kept alongside the curve.
struct SampleAux {
  int sphere = -1;  // sphere index for sphere-region samples (negative on the mirror side)
  real Ja = 0;      // axial component of the Euclidean normal in the sphere chart
};

struct AssembledSurface {
  GluedConfiguration config;
  ProfileCurve curve;
  std::vector<SampleAux> aux;  // indexed by CurveSample::ref
  const SampleAux& aux_of(const CurveSample& c) const { return aux[c.ref]; }
};

AssembledSurface assemble(const GluedConfiguration& config, const MetricProfile& profile,
                          const AssemblyOptions& opt = {});

// Neck centre and scale of every neck of the assembled surface, including
// the mirror side and the periodic necks of a Delaunay end.
struct NeckSite {
  real center = 0;
  real eps = 0;
  real d = 0, delta = 0;  // X offset of the catenoid centre is eps(d + delta)
  int index = 0;          // signed neck label as used in region tags
  bool delaunay = false;
  bool periodic = false;  // repeated neck of the Delaunay end
};
std::vector<NeckSite> neck_sites(const GluedConfiguration& c);

// Scaled neck-chart coordinates (X, x) of a Fermi point.
void neck_chart_coords(const MetricProfile& p, const GluedConfiguration& c,
                       const NeckSite& site, real t, real rho, real& X, real& x);

// Scaled chart coordinates of every curve sample relative to its nearest
// neck site; samples farther than one sphere radius are marked far.
struct NeckCoords {
  int site = -1;  // index into neck_sites(), -1 when far
  real X = 0, x = 0;
  real dist = 0;  // sqrt(X^2 + x^2), infinite when far
};
std::vector<NeckCoords> neck_coordinates(const AssembledSurface& s, const MetricProfile& p,
                                         const std::vector<NeckSite>& sites);

// Graph function X(x) of a block over the scaled transverse coordinate of
// neck j's chart, as a 2-jet at x0: sphere j from below, sphere j+1 (or
// the Delaunay end) from above.
Taylor<real, 2> sphere_graph_in_neck(const MetricProfile& p, const GluedConfiguration& c,
                                     int sphere, int neck, real x0);
Taylor<real, 2> delaunay_graph_in_neck(const MetricProfile& p, const GluedConfiguration& c,
                                       real x0);

}  // namespace cmc
