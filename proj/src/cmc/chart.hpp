#pragma once

// Geodesic normal charts at axis points. A normal chart at t_c uses the
// frame (e0, e1) of the meridian plane {y = 0}, which is totally geodesic,
// so exp and log reduce to a 2D problem. Fermi coordinates are (t, x) with x
// the signed transverse coordinate; positions are carried as the offset
// u = t - t_c so that small charts keep full precision.

#include <cmath>

#include "cmc/ambient.hpp"
#include "cmc/taylor.hpp"

namespace cmc {

inline constexpr int kGeodesicSteps = 48;

template <int N>
struct FermiJet {
  Taylor<real, N> u, x;
};

template <int N>
struct ChartJet {
  Taylor<real, N> a, b;
};

namespace detail {

// A(t_c + u) and A'(t_c + u) as series in the curve parameter.
template <int N>
void warp_series(const MetricProfile& p, real tc, const Taylor<real, N>& u,
                 Taylor<real, N>& A, Taylor<real, N>& dA) {
  static_assert(N <= 3, "profiles carry four derivatives");
  auto d = p.derivs(tc + u.c[0]);
  std::array<real, N + 1> fa, fd;
  for (int k = 0; k <= N; ++k) {
    fa[k] = d[k];
    fd[k] = d[k + 1];
  }
  A = compose(fa, u);
  dA = compose(fd, u);
}

}  // namespace detail

// Geodesic from gamma(tc) with initial frame velocity (a, b), evaluated at
// parameter 1. Fixed-step RK4 so the map is smooth in (a, b).
template <int N>
FermiJet<N> exp_map(const MetricProfile& p, real tc, const Taylor<real, N>& a,
                    const Taylor<real, N>& b, int steps = kGeodesicSteps) {
  using J = Taylor<real, N>;
  if (p.is_flat()) return {a, b};
  struct State {
    J u, x, du, dx;
  };
  auto rhs = [&](const State& s) {
    J A, dA;
    detail::warp_series<N>(p, tc, s.u, A, dA);
    State r;
    r.u = s.du;
    r.x = s.dx;
    r.du = dA * s.dx * s.dx * 0.5L;
    r.dx = -(dA / A) * s.du * s.dx;
    return r;
  };
  auto axpy = [](const State& s, real h, const State& k) {
    State r = s;
    r.u += k.u * h;
    r.x += k.x * h;
    r.du += k.du * h;
    r.dx += k.dx * h;
    return r;
  };
  State s;
  s.u = J(0.0L);
  s.x = J(0.0L);
  s.du = a;
  s.dx = b / std::sqrt(p.A(tc));
  const real h = 1.0L / steps;
  for (int i = 0; i < steps; ++i) {
    State k1 = rhs(s);
    State k2 = rhs(axpy(s, h / 2, k1));
    State k3 = rhs(axpy(s, h / 2, k2));
    State k4 = rhs(axpy(s, h, k3));
    s.u += (k1.u + (k2.u + k3.u) * 2.0L + k4.u) * (h / 6);
    s.x += (k1.x + (k2.x + k3.x) * 2.0L + k4.x) * (h / 6);
    s.du += (k1.du + (k2.du + k3.du) * 2.0L + k4.du) * (h / 6);
    s.dx += (k1.dx + (k2.dx + k3.dx) * 2.0L + k4.dx) * (h / 6);
  }
  return {s.u, s.x};
}

// Scalar exp with its 2x2 Jacobian d(u,x)/d(a,b).
inline void exp_map_jacobian(const MetricProfile& p, real tc, real a, real b,
                             real& u, real& x, real jac[2][2]) {
  using J1 = Taylor<real, 1>;
  J1 ja = J1::variable(a), jb(b);
  auto r1 = exp_map<1>(p, tc, ja, jb);
  ja = J1(a);
  jb = J1::variable(b);
  auto r2 = exp_map<1>(p, tc, ja, jb);
  u = r1.u.c[0];
  x = r1.x.c[0];
  jac[0][0] = r1.u.c[1];
  jac[1][0] = r1.x.c[1];
  jac[0][1] = r2.u.c[1];
  jac[1][1] = r2.x.c[1];
}

// Inverse of exp_map. Newton on the values, then jet fixed-point sweeps;
// each sweep fixes one more Taylor order.
template <int N>
ChartJet<N> log_map(const MetricProfile& p, real tc, const Taylor<real, N>& u,
                    const Taylor<real, N>& x) {
  using J = Taylor<real, N>;
  if (p.is_flat()) return {u, x};
  const real u0 = u.c[0], x0 = x.c[0];
  real a = u0, b = x0 * std::sqrt(p.A(tc + u0 / 2));
  real jac[2][2];
  const real scale = std::fabs(u0) + std::fabs(x0) + 1e-300L;
  bool converged = false;
  for (int it = 0; it < 60; ++it) {
    real eu, ex;
    exp_map_jacobian(p, tc, a, b, eu, ex, jac);
    real fu = eu - u0, fx = ex - x0;
    real det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    real da = (jac[1][1] * fu - jac[0][1] * fx) / det;
    real db = (-jac[1][0] * fu + jac[0][0] * fx) / det;
    a -= da;
    b -= db;
    if (std::fabs(da) + std::fabs(db) <= 1e-17L * scale) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    real eu, ex;
    exp_map_jacobian(p, tc, a, b, eu, ex, jac);
    if (std::fabs(eu - u0) + std::fabs(ex - x0) > 1e-14L * scale)
      fail(ErrorCode::nonconvergence, "log map did not converge");
  }
  ChartJet<N> out{J(a), J(b)};
  if constexpr (N > 0) {
    real eu, ex;
    exp_map_jacobian(p, tc, a, b, eu, ex, jac);
    real det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    for (int sweep = 0; sweep < N; ++sweep) {
      auto e = exp_map<N>(p, tc, out.a, out.b);
      J fu = e.u - u, fx = e.x - x;
      fu.c[0] = 0;
      fx.c[0] = 0;
      out.a -= (fu * jac[1][1] - fx * jac[0][1]) / det;
      out.b -= (fx * jac[0][0] - fu * jac[1][0]) / det;
    }
  }
  return out;
}

}  // namespace cmc
