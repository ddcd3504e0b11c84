#include "cmc/revgeom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "cmc/chart.hpp"

namespace cmc {

std::string region_label(const RegionTag& tag) {
  switch (tag.kind) {
    case RegionKind::sphere: return "sphere " + std::to_string(tag.index);
    case RegionKind::transition:
      return "transition " + std::to_string(tag.index) + (tag.side < 0 ? "-" : "+");
    case RegionKind::neck: return "neck " + std::to_string(tag.index);
    case RegionKind::delaunay: return "delaunay";
    case RegionKind::free: return "free";
  }
  return "free";
}

namespace {

// Coefficients of the quintic Hermite interpolant on tau in [0,1].
struct Quintic {
  real a[6];
  Quintic(real y0, real d0, real dd0, real y1, real d1, real dd1, real h) {
    a[0] = y0;
    a[1] = h * d0;
    a[2] = h * h * dd0 / 2;
    real Y = y1 - (a[0] + a[1] + a[2]);
    real Yp = h * d1 - (a[1] + 2 * a[2]);
    real Ypp = h * h * dd1 - 2 * a[2];
    a[3] = 10 * Y - 4 * Yp + Ypp / 2;
    a[4] = -15 * Y + 7 * Yp - Ypp;
    a[5] = 6 * Y - 3 * Yp + Ypp / 2;
  }
  // k-th derivative in tau
  real eval(real tau, int k) const {
    real r = 0;
    for (int i = 5; i >= k; --i) {
      real c = a[i];
      for (int j = 0; j < k; ++j) c *= (i - j);
      r = r * tau + c;
    }
    return r;
  }
};

const std::vector<real>& gauss8_x() {
  static std::vector<real> x, w;
  if (x.empty()) gauss_legendre(8, x, w);
  return x;
}
const std::vector<real>& gauss8_w() {
  static std::vector<real> x, w;
  if (w.empty()) gauss_legendre(8, x, w);
  return w;
}

}  // namespace

void gauss_legendre(int n, std::vector<real>& x, std::vector<real>& w) {
  x.assign(n, 0);
  w.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    real z = std::cos(kPi * (i + 0.75L) / (n + 0.5L));
    real dp = 0;
    for (int it = 0; it < 100; ++it) {
      real p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      real dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-19L) break;
    }
    x[n - 1 - i] = z;
    w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
}

PanelNodes panel_nodes(const std::vector<real>& edges, int n) {
  std::vector<real> gx, gw;
  gauss_legendre(n, gx, gw);
  PanelNodes out;
  out.p.push_back(edges.front());
  out.w.push_back(0);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    real a = edges[i], b = edges[i + 1];
    real m = (a + b) / 2, h = (b - a) / 2;
    for (int k = 0; k < n; ++k) {
      out.p.push_back(m + h * gx[k]);
      out.w.push_back(std::fabs(h) * gw[k]);
    }
  }
  out.p.push_back(edges.back());
  out.w.push_back(0);
  return out;
}

void CurveBuilder::add_region(const std::vector<LocalSample>& region) {
  if (region.empty()) return;
  const auto& gx = gauss8_x();
  const auto& gw = gauss8_w();
  for (size_t i = 0; i < region.size(); ++i) {
    const LocalSample& q = region[i];
    if (i > 0) {
      const LocalSample& a = region[i - 1];
      real h = q.p - a.p;
      Quintic qt(a.t, a.dt, a.d2t, q.t, q.dt, q.d2t, h);
      Quintic qr(a.rho, a.drho, a.d2rho, q.rho, q.drho, q.d2rho, h);
      real len = 0;
      for (size_t k = 0; k < gx.size(); ++k) {
        real tau = (gx[k] + 1) / 2;
        real vt = qt.eval(tau, 1), vr = qr.eval(tau, 1);
        len += gw[k] / 2 * std::sqrt(vt * vt + vr * vr);
      }
      s_ += len;
    }
    real v2 = q.dt * q.dt + q.drho * q.drho;
    if (!(v2 > 0)) fail(ErrorCode::singular_point, "irregular curve sample");
    real v = std::sqrt(v2);
    real dot = (q.dt * q.d2t + q.drho * q.d2rho) / v2;
    CurveSample c;
    c.s = s_;
    c.t = q.t;
    c.rho = q.rho;
    c.dt = q.dt / v;
    c.drho = q.drho / v;
    c.d2t = (q.d2t - dot * q.dt) / v2;
    c.d2rho = (q.d2rho - dot * q.drho) / v2;
    c.w = q.wp * v;
    c.tag = q.tag;
    c.window = q.window;
    c.ref = q.ref;
    if (i == 0 && !curve_.samples.empty()) {
      const CurveSample& last = curve_.samples.back();
      real scale = std::fabs(last.t) + std::fabs(last.rho) + 1e-300L;
      real gap = std::fabs(last.t - c.t) + std::fabs(last.rho - c.rho);
      if (gap <= 1e-14L * scale) {
        // Shared junction node: keep one copy and merge weights.
        curve_.samples.back().w += c.w;
        continue;
      }
      fail(ErrorCode::invalid_input, "regions are not contiguous");
    }
    curve_.samples.push_back(c);
  }
}

ProfileCurve CurveBuilder::finish() {
  ProfileCurve out = std::move(curve_);
  curve_ = ProfileCurve{};
  s_ = 0;
  return out;
}

namespace {

size_t segment_of(const ProfileCurve& curve, real s) {
  const auto& v = curve.samples;
  auto it = std::upper_bound(v.begin(), v.end(), s,
                             [](real x, const CurveSample& c) { return x < c.s; });
  size_t i = static_cast<size_t>(it - v.begin());
  if (i == 0) return 0;
  if (i >= v.size()) return v.size() - 2;
  return i - 1;
}

}  // namespace

CurveSample ProfileCurve::at(real s) const {
  if (samples.size() < 2) fail(ErrorCode::invalid_input, "curve has fewer than two samples");
  if (s < s_min() || s > s_max()) fail(ErrorCode::domain, "parameter outside curve range");
  size_t i = segment_of(*this, s);
  const CurveSample& a = samples[i];
  const CurveSample& b = samples[i + 1];
  if (s == a.s) return a;
  if (s == b.s) return b;
  real h = b.s - a.s;
  real tau = (s - a.s) / h;
  Quintic qt(a.t, a.dt, a.d2t, b.t, b.dt, b.d2t, h);
  Quintic qr(a.rho, a.drho, a.d2rho, b.rho, b.drho, b.d2rho, h);
  CurveSample c = tau < 0.5L ? a : b;
  c.s = s;
  c.t = qt.eval(tau, 0);
  c.rho = qr.eval(tau, 0);
  c.dt = qt.eval(tau, 1) / h;
  c.drho = qr.eval(tau, 1) / h;
  c.d2t = qt.eval(tau, 2) / (h * h);
  c.d2rho = qr.eval(tau, 2) / (h * h);
  c.w = 0;
  return c;
}

std::array<real, 2> ProfileCurve::third_derivative(size_t i) const {
  real sum_t = 0, sum_r = 0;
  int n = 0;
  auto piece = [&](size_t k, real tau) {
    const CurveSample& a = samples[k];
    const CurveSample& b = samples[k + 1];
    real h = b.s - a.s;
    Quintic qt(a.t, a.dt, a.d2t, b.t, b.dt, b.d2t, h);
    Quintic qr(a.rho, a.drho, a.d2rho, b.rho, b.drho, b.d2rho, h);
    sum_t += qt.eval(tau, 3) / (h * h * h);
    sum_r += qr.eval(tau, 3) / (h * h * h);
    ++n;
  };
  if (i > 0) piece(i - 1, 1);
  if (i + 1 < samples.size()) piece(i, 0);
  return {sum_t / n, sum_r / n};
}

namespace {

constexpr real kAxisTol = 1e-300L;

FundamentalForms finish_forms(FundamentalForms f, real hss, real hpp) {
  f.h[0][0] = hss;
  f.h[1][1] = hpp;
  f.B[0][0] = f.k_meridian * hss;
  f.B[1][1] = f.k_parallel * hpp;
  f.H = f.k_meridian + f.k_parallel;
  f.normB2 = f.k_meridian * f.k_meridian + f.k_parallel * f.k_parallel;
  return f;
}

}  // namespace

FundamentalForms euclidean_forms(const CurveSample& c) {
  FundamentalForms f;
  f.metric = FundamentalForms::Metric::euclidean;
  real v2 = c.dt * c.dt + c.drho * c.drho;
  real v = std::sqrt(v2);
  f.N[0] = -c.drho / v;
  f.N[1] = c.dt / v;
  f.k_meridian = (c.drho * c.d2t - c.dt * c.d2rho) / (v2 * v);
  if (std::fabs(c.rho) <= kAxisTol) {
    if (std::fabs(c.dt) > 1e-12L * v)
      fail(ErrorCode::singular_point, "curve meets the axis at a cone point");
    f.k_parallel = f.k_meridian;
  } else {
    f.k_parallel = f.N[1] / c.rho;
  }
  return finish_forms(f, v2, c.rho * c.rho);
}

FundamentalForms euclidean_forms(const ProfileCurve& curve, real s) {
  return euclidean_forms(curve.at(s));
}

FundamentalForms ambient_forms_exact(const MetricProfile& p, const CurveSample& c) {
  auto d = p.derivs(c.t);
  const real A = d[0], dA = d[1];
  const real sA = std::sqrt(A);
  FundamentalForms f;
  f.metric = FundamentalForms::Metric::ambient;
  real v2 = c.dt * c.dt + A * c.drho * c.drho;
  real v = std::sqrt(v2);
  f.N[0] = -sA * c.drho / v;
  f.N[1] = c.dt / (sA * v);
  f.k_meridian = -(sA * (c.dt * c.d2rho - c.drho * c.d2t) +
                   dA * c.drho * (A * c.drho * c.drho / 2 + c.dt * c.dt) / sA) /
                 (v2 * v);
  if (std::fabs(c.rho) <= kAxisTol) {
    if (std::fabs(c.dt) > 1e-12L * v)
      fail(ErrorCode::singular_point, "curve meets the axis at a cone point");
    f.k_parallel = f.k_meridian;
  } else {
    f.k_parallel = f.N[0] * dA / (2 * A) + f.N[1] / c.rho;
  }
  return finish_forms(f, v2, A * c.rho * c.rho);
}

FundamentalForms ambient_forms_exact(const MetricProfile& p, const ProfileCurve& curve,
                                     real s) {
  return ambient_forms_exact(p, curve.at(s));
}

real ambient_area_density(const MetricProfile& p, const CurveSample& c) {
  real A = p.A(c.t);
  return 2 * kPi * std::sqrt(A) * std::fabs(c.rho) *
         std::sqrt(c.dt * c.dt + A * c.drho * c.drho);
}

real ambient_mean_curvature_expansion(const MetricProfile& p, const CurveSample& c,
                                      real center) {
  using J2 = Taylor<real, 2>;
  J2 u, x;
  u.c = {c.t - center, c.dt, c.d2t / 2};
  x.c = {c.rho, c.drho, c.d2rho / 2};
  if (std::hypot(static_cast<double>(u.c[0]), static_cast<double>(x.c[0])) > 0.5)
    fail(ErrorCode::range, "point too far from the expansion centre");
  auto nc = log_map<2>(p, center, u, x);
  CurveSample e;
  e.t = nc.a.c[0];
  e.rho = nc.b.c[0];
  e.dt = nc.a.c[1];
  e.drho = nc.b.c[1];
  e.d2t = 2 * nc.a.c[2];
  e.d2rho = 2 * nc.b.c[2];
  FundamentalForms ef = euclidean_forms(e);
  if (p.is_flat()) return ef.H;
  const CurvatureData cd = curvature_frame_data(p, center);

  const real Y[3] = {e.t, e.rho, 0};
  const real Nn[3] = {ef.N[0], ef.N[1], 0};
  real vt = std::hypot(static_cast<double>(e.dt), static_cast<double>(e.drho));
  const real E1[3] = {e.dt / vt, e.drho / vt, 0};
  const real E2[3] = {0, 0, 1};

  auto rm = [&](const real* a, const real* b, const real* c3, const real* d) {
    real s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) s += cd.Rm[i][j][k][l] * a[i] * b[j] * c3[k] * d[l];
    return s;
  };
  auto drm = [&](const real* a, const real* b, const real* c3, const real* d, const real* m) {
    real s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            for (int q = 0; q < 3; ++q)
              s += cd.dRm[i][j][k][l][q] * a[i] * b[j] * c3[k] * d[l] * m[q];
    return s;
  };
  auto ric = [&](const real* a, const real* b) {
    real s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) s += cd.Ric[i][j] * a[i] * b[j];
    return s;
  };
  auto dric = [&](const real* a, const real* b, const real* m) {
    real s = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int q = 0; q < 3; ++q) s += cd.dRic[i][j][q] * a[i] * b[j] * m[q];
    return s;
  };

  // Second fundamental form is diagonal in (E1, E2).
  real curv_B = ef.k_meridian * (rm(E1, Y, E1, Y) / 3 + drm(E1, Y, E1, Y, Y) / 6) +
                ef.k_parallel * (rm(E2, Y, E2, Y) / 3 + drm(E2, Y, E2, Y, Y) / 6);
  real factor = 1 + rm(Nn, Y, Nn, Y) / 6 + drm(Nn, Y, Nn, Y, Y) / 12;
  return factor * ef.H - curv_B - 2 * ric(Y, Nn) / 3 - dric(Y, Nn, Y) / 2 +
         dric(Y, Y, Nn) / 12 - drm(Nn, Y, Nn, Y, Nn) / 6;
}

real ambient_mean_curvature_expansion(const MetricProfile& p, const ProfileCurve& curve,
                                      real s, real center) {
  return ambient_mean_curvature_expansion(p, curve.at(s), center);
}

FundamentalForms graph_forms(real F, real dF, real d2F, real x) {
  (void)F;
  if (!(x > 0)) fail(ErrorCode::domain, "graph radius must be positive");
  FundamentalForms f;
  f.metric = FundamentalForms::Metric::euclidean;
  real D = std::sqrt(1 + dF * dF);
  f.N[0] = 1 / D;
  f.N[1] = -dF / D;
  f.k_meridian = -d2F / (D * D * D);
  f.k_parallel = -dF / (x * D);
  return finish_forms(f, D * D, x * x);
}

ProfileCurve normal_graph(const ProfileCurve& curve, const CurveFunction& f) {
  std::vector<LocalSample> region;
  region.reserve(curve.size());
  CurveBuilder builder;
  for (size_t i = 0; i < curve.size(); ++i) {
    const CurveSample& c = curve.samples[i];
    auto fv = f(c);
    FundamentalForms ef = euclidean_forms(c);
    real grad = std::fabs(fv[1]);
    if (std::fabs(fv[0]) * std::sqrt(ef.normB2) + grad > 0.1L)
      fail(ErrorCode::perturbation_too_large, "normal graph perturbation too large");
    auto d3 = curve.third_derivative(i);
    // unit-speed normal and its derivatives
    real N[2] = {-c.drho, c.dt};
    real dN[2] = {-c.d2rho, c.d2t};
    real d2N[2] = {-d3[1], d3[0]};
    LocalSample q;
    q.p = c.s;
    q.t = c.t + fv[0] * N[0];
    q.rho = c.rho + fv[0] * N[1];
    q.dt = c.dt + fv[1] * N[0] + fv[0] * dN[0];
    q.drho = c.drho + fv[1] * N[1] + fv[0] * dN[1];
    q.d2t = c.d2t + fv[2] * N[0] + 2 * fv[1] * dN[0] + fv[0] * d2N[0];
    q.d2rho = c.d2rho + fv[2] * N[1] + 2 * fv[1] * dN[1] + fv[0] * d2N[1];
    if (std::fabs(c.rho) <= kAxisTol) {
      // an axis point moves along the axis
      q.rho = 0;
      q.dt = 0;
      q.d2rho = 0;
    }
    q.wp = c.w;
    q.tag = c.tag;
    q.window = c.window;
    q.ref = c.ref;
    region.push_back(q);
  }
  builder.add_region(region);
  ProfileCurve out = builder.finish();
  out.reflection_symmetric = curve.reflection_symmetric;
  out.capped_lo = curve.capped_lo;
  out.capped_hi = curve.capped_hi;
  out.semi_infinite = curve.semi_infinite;
  return out;
}

real linearized_operator(const CurveSample& c, const std::array<real, 3>& f) {
  FundamentalForms ef = euclidean_forms(c);
  real v2 = c.dt * c.dt + c.drho * c.drho;
  real v = std::sqrt(v2);
  real dv = (c.dt * c.d2t + c.drho * c.d2rho) / v;
  real lap;
  if (std::fabs(c.rho) <= kAxisTol) {
    lap = 2 * f[2] / v2 - f[1] * dv / (v2 * v);
  } else {
    lap = ((c.drho * f[1] + c.rho * f[2]) / v - c.rho * f[1] * dv / v2) / (v * c.rho);
  }
  return lap + ef.normB2 * f[0];
}

ProfileCurve make_round_sphere(real r, real center, int panels, int order) {
  std::vector<real> edges;
  for (int i = 0; i <= panels; ++i) edges.push_back(kPi - kPi * i / panels);
  auto nodes = panel_nodes(edges, order);
  std::vector<LocalSample> region;
  for (size_t i = 0; i < nodes.p.size(); ++i) {
    real th = nodes.p[i];
    LocalSample q;
    q.p = -th;  // parameter increases with t
    q.t = center + r * std::cos(th);
    q.rho = r * std::sin(th);
    q.dt = r * std::sin(th);
    q.drho = -r * std::cos(th);
    q.d2t = -r * std::cos(th);
    q.d2rho = -r * std::sin(th);
    if (i == 0 || i + 1 == nodes.p.size()) q.rho = 0;
    q.wp = nodes.w[i];
    q.tag = {RegionKind::sphere, 0, 0};
    region.push_back(q);
  }
  CurveBuilder b;
  b.add_region(region);
  ProfileCurve c = b.finish();
  c.capped_lo = c.capped_hi = true;
  return c;
}

void write_curve_csv(const ProfileCurve& curve, std::ostream& os) {
  os << "s,t,rho,dt,drho,d2t,d2rho,w,region,kind,index,side,window\n";
  char buf[512];
  for (const auto& c : curve.samples) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%d,%d,%d,%d\n",
                  static_cast<double>(c.s), static_cast<double>(c.t),
                  static_cast<double>(c.rho), static_cast<double>(c.dt),
                  static_cast<double>(c.drho), static_cast<double>(c.d2t),
                  static_cast<double>(c.d2rho), static_cast<double>(c.w),
                  region_label(c.tag).c_str(), static_cast<int>(c.tag.kind), c.tag.index,
                  c.tag.side, c.window);
    os << buf;
  }
}

ProfileCurve read_curve_csv(std::istream& is) {
  ProfileCurve curve;
  std::string line;
  if (!std::getline(is, line)) fail(ErrorCode::invalid_input, "empty curve CSV");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 13) fail(ErrorCode::invalid_input, "malformed curve CSV row");
    CurveSample c;
    real* fields[] = {&c.s, &c.t, &c.rho, &c.dt, &c.drho, &c.d2t, &c.d2rho, &c.w};
    for (int k = 0; k < 8; ++k) *fields[k] = std::strtod(cols[k].c_str(), nullptr);
    c.tag.kind = static_cast<RegionKind>(std::stoi(cols[9]));
    c.tag.index = std::stoi(cols[10]);
    c.tag.side = std::stoi(cols[11]);
    c.window = std::stoi(cols[12]);
    curve.samples.push_back(c);
  }
  return curve;
}

void write_curve_obj(const ProfileCurve& curve, int angular_res, std::ostream& os) {
  if (angular_res < 3) fail(ErrorCode::invalid_input, "angular resolution must be >= 3");
  const size_t n = curve.size();
  char buf[256];
  os << "# surface of revolution: " << n << " profile samples x " << angular_res
     << " angles\n";
  for (const auto& c : curve.samples) {
    for (int k = 0; k < angular_res; ++k) {
      double ph = 2 * M_PI * k / angular_res;
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", static_cast<double>(c.t),
                    static_cast<double>(c.rho) * std::cos(ph),
                    static_cast<double>(c.rho) * std::sin(ph));
      os << buf;
    }
  }
  auto vid = [&](size_t i, int k) { return i * angular_res + (k % angular_res) + 1; };
  for (size_t i = 0; i + 1 < n; ++i) {
    bool cap_a = curve.samples[i].rho == 0;
    bool cap_b = curve.samples[i + 1].rho == 0;
    for (int k = 0; k < angular_res; ++k) {
      if (cap_a && cap_b) continue;
      if (cap_a) {
        os << "f " << vid(i, 0) << ' ' << vid(i + 1, k) << ' ' << vid(i + 1, k + 1) << '\n';
      } else if (cap_b) {
        os << "f " << vid(i, k) << ' ' << vid(i + 1, 0) << ' ' << vid(i, k + 1) << '\n';
      } else {
        os << "f " << vid(i, k) << ' ' << vid(i + 1, k) << ' ' << vid(i + 1, k + 1) << ' '
           << vid(i, k + 1) << '\n';
      }
    }
  }
}

}  // namespace cmc
