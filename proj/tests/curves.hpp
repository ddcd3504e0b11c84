#pragma once

// Exact Euclidean pieces as profile curves, for tests.

#include <cmath>
#include <vector>

#include "cmc/blocks.hpp"
#include "cmc/revgeom.hpp"

namespace testcurves {

using cmc::real;

inline std::vector<real> uniform_edges(real a, real b, int panels) {
  std::vector<real> e;
  for (int i = 0; i <= panels; ++i) e.push_back(a + (b - a) * i / panels);
  return e;
}

// rho = a cosh(t / a) for |t| <= a * tau_max.
inline cmc::ProfileCurve catenoid(real a, real tau_max, int panels = 32) {
  auto nodes = cmc::panel_nodes(uniform_edges(-tau_max, tau_max, panels), 8);
  std::vector<cmc::LocalSample> reg;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    real tau = nodes.p[i];
    cmc::LocalSample q;
    q.p = tau;
    q.t = a * tau;
    q.rho = a * std::cosh(tau);
    q.dt = a;
    q.drho = a * std::sinh(tau);
    q.d2t = 0;
    q.d2rho = a * std::cosh(tau);
    q.wp = nodes.w[i];
    q.tag = {cmc::RegionKind::neck, 0, 0};
    reg.push_back(q);
  }
  cmc::CurveBuilder b;
  b.add_region(reg);
  return b.finish();
}

// Unduloid of mean curvature 2 over phi in [phi0, phi1], necks at phi = 2 pi k.
inline cmc::ProfileCurve unduloid(const cmc::DelaunayEnd& d, real phi0, real phi1,
                                  int panels = 96) {
  auto nodes = cmc::panel_nodes(uniform_edges(phi0, phi1, panels), 8);
  std::vector<cmc::LocalSample> reg;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    real phi = nodes.p[i];
    cmc::LocalSample q;
    q.p = phi;
    q.t = d.axial(phi);
    q.rho = d.rho(phi);
    q.dt = d.speed(phi);
    q.drho = d.h * std::sin(phi);
    q.d2t = d.dspeed(phi);
    q.d2rho = d.h * std::cos(phi);
    q.wp = nodes.w[i];
    q.tag = {cmc::RegionKind::delaunay, 0, 0};
    reg.push_back(q);
  }
  cmc::CurveBuilder b;
  b.add_region(reg);
  return b.finish();
}

inline cmc::ProfileCurve cylinder(real radius, real length, int panels = 8) {
  auto nodes = cmc::panel_nodes(uniform_edges(0, length, panels), 8);
  std::vector<cmc::LocalSample> reg;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    cmc::LocalSample q;
    q.p = nodes.p[i];
    q.t = nodes.p[i];
    q.rho = radius;
    q.dt = 1;
    q.wp = nodes.w[i];
    reg.push_back(q);
  }
  cmc::CurveBuilder b;
  b.add_region(reg);
  return b.finish();
}

// Least-squares slope of log y against log x.
inline real loglog_slope(const std::vector<real>& x, const std::vector<real>& y) {
  real n = static_cast<real>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    real lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testcurves
