#pragma once

// Surfaces of revolution about the axis, described by their generating
// curve (t(s), rho(s)) in Fermi coordinates.

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cmc/ambient.hpp"

namespace cmc {

enum class RegionKind { sphere = 0, transition = 1, neck = 2, delaunay = 3, free = 4 };

struct RegionTag {
  RegionKind kind = RegionKind::free;
  int index = 0;  // sphere index, or neck index for transitions and necks
  int side = 0;   // transitions: -1 toward sphere index, +1 toward index+1
  bool operator==(const RegionTag&) const = default;
};

std::string region_label(const RegionTag& tag);

// Derivatives are with respect to s, the arclength of the curve in the
// coordinate plane (t, rho); s-derivatives are therefore unit speed.
struct CurveSample {
  real s = 0;
  real t = 0, rho = 0;
  real dt = 0, drho = 0;
  real d2t = 0, d2rho = 0;
  real w = 0;  // quadrature weight: integral of f ds ~ sum w_i f_i
  RegionTag tag;
  int window = 0;  // axial period window on a Delaunay end (1-based)
  int ref = -1;    // caller-owned index into side data
};

class ProfileCurve {
 public:
  std::vector<CurveSample> samples;
  bool reflection_symmetric = false;
  bool capped_lo = false;
  bool capped_hi = false;
  bool semi_infinite = false;

  real s_min() const { return samples.front().s; }
  real s_max() const { return samples.back().s; }
  // Sample at parameter s; exact at nodes, quintic Hermite in between.
  CurveSample at(real s) const;
  // Third derivatives (t''', rho''') at node i from the Hermite pieces.
  std::array<real, 2> third_derivative(size_t i) const;
  size_t size() const { return samples.size(); }
};

// Local-parameter sample fed to the builder.
struct LocalSample {
  real p = 0;
  real t = 0, rho = 0;
  real dt = 0, drho = 0;    // d/dp
  real d2t = 0, d2rho = 0;  // d2/dp2
  real wp = 0;              // quadrature weight in p
  RegionTag tag;
  int window = 0;
  int ref = -1;
};

// Concatenates regions given in their own parameters into one curve with a
// common unit-speed parameter.
class CurveBuilder {
 public:
  void add_region(const std::vector<LocalSample>& region);
  ProfileCurve finish();

 private:
  ProfileCurve curve_;
  real s_ = 0;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<real>& x, std::vector<real>& w);

// Panels [edges[i], edges[i+1]] each with n Gauss nodes, plus the two outer
// endpoints with zero weight.
struct PanelNodes {
  std::vector<real> p, w;
};
PanelNodes panel_nodes(const std::vector<real>& edges, int n);

struct FundamentalForms {
  enum class Metric { euclidean, ambient } metric = Metric::euclidean;
  real h[2][2] = {};  // basis (d/ds, d/dphi)
  real B[2][2] = {};
  real H = 0;
  real N[2] = {};  // (t, rho) components
  real k_meridian = 0, k_parallel = 0;
  real normB2 = 0;
};

FundamentalForms euclidean_forms(const CurveSample& c);
FundamentalForms euclidean_forms(const ProfileCurve& curve, real s);
FundamentalForms ambient_forms_exact(const MetricProfile& p, const CurveSample& c);
FundamentalForms ambient_forms_exact(const MetricProfile& p, const ProfileCurve& curve, real s);

// Surface area element of the ambient metric per unit s (includes 2 pi).
real ambient_area_density(const MetricProfile& p, const CurveSample& c);

// Mean curvature from the normal-coordinate expansion at gamma(center).
real ambient_mean_curvature_expansion(const MetricProfile& p, const CurveSample& c,
                                      real center);
real ambient_mean_curvature_expansion(const MetricProfile& p, const ProfileCurve& curve,
                                      real s, real center);

// Graph x0 = F(x) over the plane, upward normal.
FundamentalForms graph_forms(real F, real dF, real d2F, real x);

// Axisymmetric function on the curve: returns (f, f_s, f_ss) at a sample.
using CurveFunction = std::function<std::array<real, 3>(const CurveSample&)>;

ProfileCurve normal_graph(const ProfileCurve& curve, const CurveFunction& f);
real linearized_operator(const CurveSample& c, const std::array<real, 3>& f);

// Round sphere of radius r centred at t = center, Euclidean, pole to pole.
ProfileCurve make_round_sphere(real r, real center, int panels = 24, int order = 8);

void write_curve_csv(const ProfileCurve& curve, std::ostream& os);
ProfileCurve read_curve_csv(std::istream& is);
void write_curve_obj(const ProfileCurve& curve, int angular_res, std::ostream& os);

}  // namespace cmc
