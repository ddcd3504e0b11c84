#include "cmc/ambient.hpp"

#include <cmath>
#include <sstream>

#include "cmc/taylor.hpp"

namespace cmc {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::domain: return "domain";
    case ErrorCode::range: return "range";
    case ErrorCode::singular_point: return "singular-point";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::perturbation_too_large: return "perturbation-too-large";
    case ErrorCode::no_solution: return "no-solution";
    case ErrorCode::calibration_failure: return "calibration-failure";
    case ErrorCode::invalid_cut: return "invalid-cut";
    case ErrorCode::quadrature: return "quadrature";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::nonconvergence: return "nonconvergence";
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::regime: return "regime";
  }
  return "unknown";
}

namespace {

// Positivity and declared parity on a sample grid; a ray is checked on
// [lo, lo + 60], past which e^{-t}-type profiles are flat to roundoff.
void validate(const std::function<real(real)>& a, Parity parity, real lo, real hi) {
  if (!(lo < hi)) fail(ErrorCode::invalid_input, "profile domain is empty");
  if (parity == Parity::even && lo != -hi)
    fail(ErrorCode::invalid_input, "an even profile needs a symmetric domain");
  const real top = std::min(hi, lo + 60);
  const int n = 400;
  for (int i = 0; i <= n; ++i) {
    real t = lo + (top - lo) * i / n;
    real v = a(t);
    if (!std::isfinite(v) || v <= 0) {
      std::ostringstream os;
      os << "A(t) must be positive; A(" << static_cast<double>(t) << ") = " << static_cast<double>(v);
      fail(ErrorCode::invalid_input, os.str());
    }
    if (parity == Parity::even && std::fabs(v - a(-t)) > 1e-12L * (1 + std::fabs(v))) {
      std::ostringstream os;
      os << "profile declared even but A(" << static_cast<double>(t) << ") != A(-t)";
      fail(ErrorCode::invalid_input, os.str());
    }
  }
}

}  // namespace

MetricProfile MetricProfile::flat(real half_length) {
  MetricProfile p;
  p.name_ = "flat";
  p.parity_ = Parity::even;
  p.regime_ = Regime::finite_length;
  p.lo_ = -half_length;
  p.hi_ = half_length;
  p.flat_ = true;
  p.eval_ = [](real) { return Derivs4{1, 0, 0, 0, 0}; };
  p.plain_ = [](real) { return real(1); };
  return p;
}

MetricProfile MetricProfile::one_ended_exp(real beta) {
  MetricProfile p;
  p.name_ = "one-ended-exp";
  p.parity_ = Parity::none;
  p.regime_ = Regime::one_ended;
  p.lo_ = 0;
  p.hi_ = std::numeric_limits<real>::infinity();
  p.eval_ = [beta](real t) {
    real e = beta * std::exp(-t);
    return Derivs4{1 + e, -e, e, -e, e};
  };
  p.plain_ = [beta](real t) { return 1 + beta * std::exp(-t); };
  validate(p.plain_, p.parity_, p.lo_, p.hi_);
  return p;
}

MetricProfile MetricProfile::even_bump(real beta, real half_length) {
  MetricProfile p;
  p.name_ = "even-bump";
  p.parity_ = Parity::even;
  p.regime_ = Regime::finite_length;
  p.lo_ = -half_length;
  p.hi_ = half_length;
  p.eval_ = [beta](real t) {
    // d^k/dt^k e^{-t^2} = (-1)^k H_k(t) e^{-t^2} (physicists' Hermite)
    real g = beta * std::exp(-t * t);
    real t2 = t * t;
    return Derivs4{1 + g, -2 * t * g, (4 * t2 - 2) * g,
                   -(8 * t2 * t - 12 * t) * g, (16 * t2 * t2 - 48 * t2 + 12) * g};
  };
  p.plain_ = [beta](real t) { return 1 + beta * std::exp(-t * t); };
  validate(p.plain_, p.parity_, p.lo_, p.hi_);
  return p;
}

MetricProfile MetricProfile::from_expression(const std::string& text,
                                             Parity parity, Regime regime,
                                             real lo, real hi) {
  auto ex = Expression::parse(text);
  MetricProfile p;
  p.name_ = "expression:" + text;
  p.parity_ = parity;
  p.regime_ = regime;
  p.lo_ = lo;
  p.hi_ = hi;
  p.eval_ = [ex](real t) {
    auto j = ex.eval(t);
    return Derivs4{j.d(0), j.d(1), j.d(2), j.d(3), j.d(4)};
  };
  p.plain_ = [ex](real t) { return ex.eval(t).c[0]; };
  validate(p.plain_, parity, lo, hi);
  return p;
}

MetricProfile MetricProfile::from_function(std::function<real(real)> a,
                                           const std::string& name,
                                           Parity parity, Regime regime,
                                           real lo, real hi) {
  MetricProfile p;
  p.name_ = name;
  p.parity_ = parity;
  p.regime_ = regime;
  p.lo_ = lo;
  p.hi_ = hi;
  p.plain_ = a;
  p.eval_ = [a](real t) {
    // 6th-order central stencils. The step grows with the order so that
    // roundoff (~ eps / h^k) stays below the truncation error.
    const real scale = std::max<real>(1, std::fabs(t));
    auto samples = [&](real h, real* f) {
      for (int i = -4; i <= 4; ++i) f[i + 4] = a(t + i * h);
    };
    real f[9], g[9], q[9];
    const real h = 1e-4L * scale, h3 = 1e-3L * scale, h4 = 1e-2L * scale;
    samples(h, f);
    samples(h3, g);
    samples(h4, q);
    auto at = [](const real* v, int i) { return v[i + 4]; };
    real d1 = (-at(f, -3) + 9 * at(f, -2) - 45 * at(f, -1) + 45 * at(f, 1) - 9 * at(f, 2) +
               at(f, 3)) / (60 * h);
    real d2 = (2 * at(f, -3) - 27 * at(f, -2) + 270 * at(f, -1) - 490 * at(f, 0) +
               270 * at(f, 1) - 27 * at(f, 2) + 2 * at(f, 3)) / (180 * h * h);
    real d3 = (-7 * at(g, -4) + 72 * at(g, -3) - 338 * at(g, -2) + 488 * at(g, -1) -
               488 * at(g, 1) + 338 * at(g, 2) - 72 * at(g, 3) + 7 * at(g, 4)) /
              (240 * h3 * h3 * h3);
    real d4 = (7 * at(q, -4) - 96 * at(q, -3) + 676 * at(q, -2) - 1952 * at(q, -1) +
               2730 * at(q, 0) - 1952 * at(q, 1) + 676 * at(q, 2) - 96 * at(q, 3) +
               7 * at(q, 4)) / (240 * h4 * h4 * h4 * h4);
    return Derivs4{at(f, 0), d1, d2, d3, d4};
  };
  validate(a, parity, lo, hi);
  return p;
}

Derivs4 MetricProfile::derivs(real t) const {
  if (!in_domain(t)) {
    std::ostringstream os;
    os << "t = " << static_cast<double>(t) << " outside profile domain ["
       << static_cast<double>(lo_) << ", " << static_cast<double>(hi_) << "]";
    fail(ErrorCode::domain, os.str());
  }
  return eval_(t);
}

real MetricProfile::value_only(real t) const {
  if (!in_domain(t)) fail(ErrorCode::domain, "t outside profile domain");
  return plain_(t);
}

real scalar_curvature(const MetricProfile& p, real t) {
  auto d = p.derivs(t);
  real a = d[0], a1 = d[1], a2 = d[2];
  return (-2 * a * a2 + 0.5L * a1 * a1) / (a * a);
}

real scalar_curvature_gradient(const MetricProfile& p, real t) {
  auto d = p.derivs(t);
  real a = d[0], a1 = d[1], a2 = d[2], a3 = d[3];
  return (-a1 * a2 - 2 * a * a3) / (a * a) +
         (4 * a * a1 * a2 - a1 * a1 * a1) / (a * a * a);
}

namespace {

using J3 = Taylor<real, 3>;

}  // namespace

CurvatureData curvature_frame_data(const MetricProfile& p, real t) {
  auto d = p.derivs(t);
  J3 A;
  for (int k = 0; k <= 3; ++k) A.c[k] = d[k];
  {
    real f = 1;
    for (int k = 1; k <= 3; ++k) {
      f *= k;
      A.c[k] = d[k] / f;
    }
  }
  J3 g[3], ginv[3];  // diagonal metric
  g[0] = J3(1.0L);
  g[1] = g[2] = A;
  ginv[0] = J3(1.0L);
  ginv[1] = ginv[2] = J3(1.0L) / A;
  auto dmetric = [&](int k, int i, int j) -> J3 {
    if (k != 0 || i != j) return J3(0.0L);
    return derivative(g[i]);
  };
  // Gamma^a_{bc}
  J3 G[3][3][3];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        G[a][b][c] = ginv[a] * (dmetric(b, a, c) + dmetric(c, a, b) - dmetric(a, b, c)) * 0.5L;
  auto dG = [&](int i, int a, int b, int c) -> J3 {
    return i == 0 ? derivative(G[a][b][c]) : J3(0.0L);
  };
  // R^m_{kij}: R(d_i, d_j) d_k = R^m_{kij} d_m
  J3 Rup[3][3][3][3];
  for (int m = 0; m < 3; ++m)
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          J3 v = dG(i, m, j, k) - dG(j, m, i, k);
          for (int e = 0; e < 3; ++e) v += G[m][i][e] * G[e][j][k] - G[m][j][e] * G[e][i][k];
          Rup[m][k][i][j] = v;
        }
  // Rm(i,j,k,l) = g_{lm} R^m_{kij}, coordinate components as jets in t
  J3 Rm[3][3][3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) Rm[i][j][k][l] = g[l] * Rup[l][k][i][j];

  CurvatureData out;
  out.t = t;
  out.A = d[0];
  const real s[3] = {1, 1 / std::sqrt(d[0]), 1 / std::sqrt(d[0])};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          out.Rm[i][j][k][l] = Rm[i][j][k][l].c[0] * s[i] * s[j] * s[k] * s[l];
          for (int e = 0; e < 3; ++e) {
            real v = (e == 0 ? Rm[i][j][k][l].c[1] : 0);
            for (int f = 0; f < 3; ++f) {
              v -= G[f][e][i].c[0] * Rm[f][j][k][l].c[0];
              v -= G[f][e][j].c[0] * Rm[i][f][k][l].c[0];
              v -= G[f][e][k].c[0] * Rm[i][j][f][l].c[0];
              v -= G[f][e][l].c[0] * Rm[i][j][k][f].c[0];
            }
            out.dRm[i][j][k][l][e] = v * s[i] * s[j] * s[k] * s[l] * s[e];
          }
        }
  // Ric(Y,Z) = trace of X -> R(X,Y)Z; in the orthonormal frame the
  // contraction is over the first and last slots.
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      real v = 0;
      for (int i = 0; i < 3; ++i) v += out.Rm[i][j][k][i];
      out.Ric[j][k] = v;
      for (int e = 0; e < 3; ++e) {
        real w = 0;
        for (int i = 0; i < 3; ++i) w += out.dRm[i][j][k][i][e];
        out.dRic[j][k][e] = w;
      }
    }
  out.S = out.Ric[0][0] + out.Ric[1][1] + out.Ric[2][2];
  out.dS = out.dRic[0][0][0] + out.dRic[1][1][0] + out.dRic[2][2][0];
  return out;
}

RegimeCheck check_regime(const MetricProfile& p, int samples) {
  RegimeCheck rc;
  std::ostringstream os;
  real lo = p.lo();
  real hi = std::isfinite(static_cast<double>(p.hi())) ? p.hi() : lo + 20;
  for (int i = 0; i <= samples; ++i) {
    real t = lo + (hi - lo) * i / samples;
    if (p.A(t) <= 0) {
      rc.ok = false;
      os << "A(t) <= 0 at t=" << static_cast<double>(t) << "; ";
      break;
    }
    if (p.parity() == Parity::even && p.in_domain(-t)) {
      real a = p.A(t), b = p.A(-t);
      if (std::fabs(a - b) > 1e-12L * (1 + std::fabs(a))) {
        rc.ok = false;
        os << "parity violated at t=" << static_cast<double>(t) << "; ";
        break;
      }
    }
  }
  if (p.regime() == Regime::finite_length) {
    if (!p.in_domain(0)) {
      rc.ok = false;
      os << "finite-length regime needs t=0 in domain; ";
    } else {
      real ds0 = scalar_curvature_gradient(p, 0);
      real h = 1e-3L;
      real s2 = (scalar_curvature_gradient(p, h) - scalar_curvature_gradient(p, -h)) / (2 * h);
      if (std::fabs(ds0) > 1e-10L) {
        rc.ok = false;
        os << "S'(0) = " << static_cast<double>(ds0) << " is not zero; ";
      }
      if (!(s2 < 0)) {
        rc.ok = false;
        os << "S''(0) = " << static_cast<double>(s2)
           << " is not negative (no non-degenerate maximum at 0); ";
      }
    }
  } else {
    // S < 0, increasing to 0, and |S| <= C e^{alpha t} with alpha < 0.
    real prev = -std::numeric_limits<real>::infinity();
    real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int i = 1; i <= samples; ++i) {
      real t = lo + (hi - lo) * i / samples;
      real S = scalar_curvature(p, t);
      if (!(S < 0)) {
        rc.ok = false;
        os << "S(" << static_cast<double>(t) << ") = " << static_cast<double>(S)
           << " is not negative; ";
        break;
      }
      if (S < prev) {
        rc.ok = false;
        os << "S not increasing at t=" << static_cast<double>(t) << "; ";
        break;
      }
      prev = S;
      if (S < -1e-300L) {
        real y = std::log(-S);
        sx += t; sy += y; sxx += t * t; sxy += t * y;
        ++n;
      }
    }
    if (rc.ok && n > 2) {
      real alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      if (!(alpha < 0)) {
        rc.ok = false;
        os << "fitted decay rate " << static_cast<double>(alpha) << " is not negative; ";
      }
    }
  }
  rc.detail = os.str();
  if (rc.ok) rc.detail = "all regime assumptions hold on the sample grid";
  return rc;
}

}  // namespace cmc
