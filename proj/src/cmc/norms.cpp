#include "cmc/norms.hpp"

#include <algorithm>
#include <cmath>

namespace cmc {

real weight_in_chart(real r, real x) {
  if (!(x > 0)) fail(ErrorCode::domain, "weight needs a positive transverse radius");
  return r * std::pow(x, cutoff(x / kChartRprime));
}

std::vector<real> weights(const AssembledSurface& s, const std::vector<NeckCoords>& nc) {
  const real r = s.config.r;
  std::vector<real> z(s.curve.size(), r);
  for (size_t i = 0; i < z.size(); ++i) {
    // only neck charts within unit distance carry the neck weight
    if (nc[i].site >= 0 && nc[i].dist < 1 && nc[i].x > 0) z[i] = weight_in_chart(r, nc[i].x);
  }
  return z;
}

real axial_factor(int window, const NormOptions& opt) {
  if (window < 1) return 1;
  return opt.exponential_axial ? std::exp(-opt.nu_bar * window)
                               : std::pow(static_cast<real>(window), -opt.nu_bar);
}

real weighted_sup(const std::vector<real>& field, const std::vector<real>& zeta,
                  const std::vector<int>& windows, real mu, const NormOptions& opt) {
  if (field.empty()) fail(ErrorCode::invalid_input, "empty field");
  if (zeta.size() != field.size() || (!windows.empty() && windows.size() != field.size()))
    fail(ErrorCode::invalid_input, "field and weight sizes differ");
  real m = 0;
  for (size_t i = 0; i < field.size(); ++i) {
    real v = std::pow(zeta[i], -mu) * std::fabs(field[i]);
    if (!windows.empty()) v *= axial_factor(windows[i], opt);
    m = std::max(m, v);
  }
  return m;
}

PredictedBound predicted_bound(real r, real eps, real delta, real nu) {
  PredictedBound b;
  const real p = std::log(eps) / std::log(r);
  b.terms[0] = std::pow(r, 3 - nu);
  b.exponents[0] = 3 - nu;
  b.terms[1] = std::pow(r, 5 - nu) * std::pow(eps, 0.5L - 0.75L * nu);
  b.exponents[1] = 5 - nu + p * (0.5L - 0.75L * nu);
  b.terms[2] = std::pow(r, 1 - nu) * std::pow(eps, 1.5L - 0.75L * nu);
  b.exponents[2] = 1 - nu + p * (1.5L - 0.75L * nu);
  b.terms[3] = std::fabs(delta) * std::pow(r, 1 - nu) * std::pow(eps, 1 - 0.75L * nu);
  b.exponents[3] = 1 - nu + p * (1 - 0.75L * nu);
  for (int i = 1; i < 4; ++i)
    if (b.terms[i] > b.terms[b.dominant]) b.dominant = i;
  return b;
}

namespace {

real holder_estimate(const ProfileCurve& c, const std::vector<real>& f,
                     const std::vector<real>& zeta, real mu, real alpha) {
  const auto& v = c.samples;
  real best = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    for (int k = 1; k <= 4; ++k) {
      real target = v[i].s + zeta[i] * std::ldexp(1.0L, -k);
      auto it = std::lower_bound(v.begin() + i + 1, v.end(), target,
                                 [](const CurveSample& a, real s) { return a.s < s; });
      if (it == v.end()) break;
      size_t j = static_cast<size_t>(it - v.begin());
      if (!(v[j].tag == v[i].tag)) break;
      real dist = std::hypot(v[j].t - v[i].t, v[j].rho - v[i].rho);
      if (!(dist > 0)) continue;
      real z = std::min(zeta[i], zeta[j]);
      best = std::max(best, std::pow(z, alpha - mu) * std::fabs(f[j] - f[i]) /
                                std::pow(dist, alpha));
    }
  }
  return best;
}

}  // namespace

WeightedNormReport deviation_report(const AssembledSurface& s, const MetricProfile& p,
                                    const NormOptions& opt) {
  if (!(opt.nu > 1 && opt.nu < 2)) fail(ErrorCode::invalid_input, "nu must lie in (1, 2)");
  if (s.config.kind == ChainKind::one_ended && !(opt.nu_bar > -1 && opt.nu_bar < 0))
    fail(ErrorCode::invalid_input, "nu_bar must lie in (-1, 0)");
  WeightedNormReport rep;
  rep.options = opt;
  rep.r = s.config.r;
  rep.chart_R = kChartRfactor * s.config.r;
  rep.chart_Rprime = kChartRprime;
  for (const NeckData& n : s.config.necks) {
    rep.eps = std::max(rep.eps, n.eps);
    rep.delta = std::max(rep.delta, std::fabs(n.delta));
  }
  const auto sites = neck_sites(s.config);
  const auto nc = neck_coordinates(s, p, sites);
  rep.zeta = weights(s, nc);
  const size_t n = s.curve.size();
  rep.deviation.resize(n);
  std::vector<int> windows(n);
  const real target = 2 / s.config.r;
  for (size_t i = 0; i < n; ++i) {
    rep.deviation[i] = ambient_forms_exact(p, s.curve.samples[i]).H - target;
    windows[i] = s.curve.samples[i].window;
  }
  const real mu = opt.nu - 2;
  for (size_t i = 0; i < n; ++i) {
    real v = std::pow(rep.zeta[i], -mu) * std::fabs(rep.deviation[i]) *
             axial_factor(windows[i], opt);
    switch (s.curve.samples[i].tag.kind) {
      case RegionKind::sphere: rep.sphere = std::max(rep.sphere, v); break;
      case RegionKind::transition: rep.transition = std::max(rep.transition, v); break;
      case RegionKind::neck: rep.neck = std::max(rep.neck, v); break;
      default: rep.delaunay = std::max(rep.delaunay, v); break;
    }
  }
  rep.global = weighted_sup(rep.deviation, rep.zeta, windows, mu, opt);
  rep.holder = holder_estimate(s.curve, rep.deviation, rep.zeta, mu, opt.alpha);
  if (rep.eps > 0) {
    rep.predicted = predicted_bound(rep.r, rep.eps, rep.delta, opt.nu);
    rep.ratio = rep.global / rep.predicted.value();
  }
  return rep;
}

}  // namespace cmc
