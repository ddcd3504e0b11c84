#include "cmc/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"

namespace cmc {

using nlohmann::ordered_json;

namespace {

ordered_json num(real x) {
  if (!std::isfinite(static_cast<double>(x))) return nullptr;
  return static_cast<double>(x);
}

ordered_json nums(const std::vector<real>& v) {
  ordered_json a = ordered_json::array();
  for (real x : v) a.push_back(num(x));
  return a;
}

std::string fmt(real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(x));
  return buf;
}

[[noreturn]] void bad_config(const std::string& what) { fail(ErrorCode::invalid_config, what); }

template <class T>
T field(const ordered_json& o, const char* key, T def) {
  if (!o.is_object() || !o.contains(key) || o.at(key).is_null()) return def;
  try {
    return o.at(key).get<T>();
  } catch (const std::exception&) {
    bad_config(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<real> real_list(const ordered_json& o, const char* key, std::vector<real> def) {
  if (!o.is_object() || !o.contains(key)) return def;
  const ordered_json& a = o.at(key);
  if (!a.is_array()) bad_config(std::string("field '") + key + "' must be an array");
  std::vector<real> out;
  for (const auto& x : a) {
    if (!x.is_number()) bad_config(std::string("field '") + key + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

const char* kind_name(ChainKind k) { return k == ChainKind::finite ? "finite" : "one-ended"; }

ordered_json run_config_json(const RunConfig& c) {
  ordered_json j;
  ordered_json pr;
  if (c.profile.expression.empty()) {
    pr["name"] = c.profile.name;
    if (c.profile.name != "flat") pr["beta"] = num(c.profile.beta);
    if (c.profile.name != "one-ended-exp") pr["half_length"] = num(c.profile.half_length);
  } else {
    pr["expression"] = c.profile.expression;
    pr["parity"] = c.profile.parity == Parity::even ? "even" : "none";
    pr["regime"] = c.profile.regime == Regime::one_ended ? "one-ended" : "finite";
    pr["domain"] = {num(c.profile.lo), num(c.profile.hi)};
  }
  j["profile"] = pr;
  j["geometry"] = {{"kind", kind_name(c.kind)}, {"r", num(c.r)}, {"K", c.K}, {"t0", num(c.t0)}};
  j["calibration"] = {{"r", num(c.calibration_r)}, {"eps_grid", nums(c.eps_grid)},
                      {"c0", c.calibrate_c0}};
  j["solver"] = {{"max_iterations", c.solver.max_iterations},
                 {"tolerance_factor", num(c.solver.tolerance_factor)},
                 {"regime_C", num(c.solver.regime_C)}};
  j["norms"] = {{"nu", num(c.norms.nu)},
                {"nu_bar", num(c.norms.nu_bar)},
                {"alpha", num(c.norms.alpha)},
                {"exponential_axial", c.norms.exponential_axial}};
  ordered_json s;
  switch (c.surface.mode) {
    case SurfaceSpec::Mode::solved: s["eps"] = "solved"; break;
    case SurfaceSpec::Mode::power: s["eps_power"] = num(c.surface.power); break;
    case SurfaceSpec::Mode::values: s["eps"] = nums(c.surface.eps); break;
  }
  if (!c.surface.delta.empty()) s["delta"] = nums(c.surface.delta);
  j["surface"] = s;
  j["sweep"] = {{"r", nums(c.sweep_r)}};
  j["curvature"] = {{"range", {num(c.curvature_lo), num(c.curvature_hi)}},
                    {"points", c.curvature_points}};
  j["balance"] = {{"projections", c.balance_projections}};
  return j;
}

ordered_json calibration_json(const Calibration& c) {
  return {{"C0", num(c.C0)},
          {"C1", num(c.C1)},
          {"C1p", num(c.C1p)},
          {"C2", num(c.C2)},
          {"c1_exponent", num(c.c1_exponent)},
          {"c1_fit_residual", num(c.c1_fit_residual)},
          {"c2_spread", num(c.c2_spread)},
          {"c0_spread", num(c.c0_spread)},
          {"eps_grid", nums(c.eps_grid)},
          {"c0_samples", nums(c.c0_samples)},
          {"c2_samples", nums(c.c2_samples)}};
}

ordered_json configuration_json(const GluedConfiguration& c) {
  ordered_json j;
  j["kind"] = kind_name(c.kind);
  j["r"] = num(c.r);
  j["K"] = c.K;
  j["t0"] = num(c.t0);
  ordered_json sp = ordered_json::array();
  for (const SphereData& s : c.spheres)
    sp.push_back({{"center", num(s.center)},
                  {"eps_plus", num(s.eps_plus)},
                  {"eps_minus", num(s.eps_minus)}});
  j["spheres"] = sp;
  ordered_json nk = ordered_json::array();
  for (const NeckData& n : c.necks)
    nk.push_back({{"eps", num(n.eps)},
                  {"sigma", num(n.sigma)},
                  {"delta", num(n.delta)},
                  {"d", num(n.d)},
                  {"center", num(n.center)},
                  {"delaunay", n.delaunay}});
  j["necks"] = nk;
  if (c.kind == ChainKind::one_ended) {
    j["delaunay"] = {{"T", num(c.delaunay.T)},
                     {"eps", num(c.delaunay.eps)},
                     {"waist", num(c.delaunay_waist)},
                     {"periods", c.delaunay_periods}};
  }
  j["regime_ok"] = c.regime_ok;
  j["regime_detail"] = c.regime_detail;
  return j;
}

ordered_json solution_json(const BalancedSolution& s, const MetricProfile& p) {
  std::vector<real> dS;
  for (real t : s.positions) dS.push_back(scalar_curvature_gradient(p, t));
  const char* mono = s.monotone < 0 ? "decreasing" : s.monotone > 0 ? "increasing" : "none";
  return {{"eps", nums(s.eps)},
          {"sigma", nums(s.sigma)},
          {"delta", nums(s.delta)},
          {"positions", nums(s.positions)},
          {"dS_at_positions", nums(dS)},
          {"residual", nums(s.residual)},
          {"trace", nums(s.trace)},
          {"iterations", s.iterations},
          {"residual_norm", num(s.residual_norm)},
          {"monotone", mono},
          {"regime_ok", s.regime_ok},
          {"regime_ratio", num(s.regime_ratio)},
          {"off_triangle", num(s.off_triangle)},
          {"telescoped_gap", num(s.telescoped_gap)}};
}

struct Context {
  RunConfig rc;
  MetricProfile profile;
  int angular_res;
  ordered_json report;
  std::vector<std::pair<std::string, std::string>> files;
  std::optional<Calibration> flux_cal;

  const Calibration& flux_constants() {
    if (!flux_cal) flux_cal = calibrate_flux_constants(rc.calibration_r, rc.eps_grid);
    return *flux_cal;
  }

  // Configuration at radius r according to the surface spec.
  GluedConfiguration configuration(real r, ordered_json& info) {
    const int nn = rc.kind == ChainKind::finite ? rc.K : rc.K + 1;
    switch (rc.surface.mode) {
      case SurfaceSpec::Mode::solved: {
        BalanceProblem b{rc.kind, r, rc.K, rc.t0, flux_constants()};
        BalancedSolution s = solve_balancing(b, profile, rc.solver);
        info["solution"] = solution_json(s, profile);
        return s.config;
      }
      case SurfaceSpec::Mode::power: {
        std::vector<real> eps(nn, std::pow(r, rc.surface.power));
        return configure_from_eps(rc.kind, r, rc.K, rc.t0, eps, rc.surface.delta);
      }
      case SurfaceSpec::Mode::values:
        if (static_cast<int>(rc.surface.eps.size()) != nn)
          bad_config("surface.eps needs one value per neck");
        return configure_from_eps(rc.kind, r, rc.K, rc.t0, rc.surface.eps, rc.surface.delta);
    }
    bad_config("unknown surface mode");
  }

  void add_file(const std::string& name, std::string contents) {
    files.emplace_back(name, std::move(contents));
  }
};

std::string curve_csv(const ProfileCurve& c) {
  std::ostringstream os;
  write_curve_csv(c, os);
  return os.str();
}

void cmd_curvature(Context& cx) {
  const MetricProfile& p = cx.profile;
  real lo = cx.rc.curvature_lo, hi = cx.rc.curvature_hi;
  if (lo == hi) {
    lo = p.lo();
    hi = std::min(p.hi(), p.lo() + 20);
  }
  if (!p.in_domain(lo) || !p.in_domain(hi) || !(hi > lo))
    bad_config("curvature range must be an increasing interval inside the profile domain");
  const int n = cx.rc.curvature_points;
  std::string csv = "t,A,S,dS\n";
  real max_abs = 0;
  bool negative = true, increasing = true;
  real prev = 0;
  for (int i = 0; i < n; ++i) {
    real t = lo + (hi - lo) * i / (n - 1);
    real S = scalar_curvature(p, t), dS = scalar_curvature_gradient(p, t);
    max_abs = std::max({max_abs, std::fabs(S), std::fabs(dS)});
    if (t > 0 && !(S < 0)) negative = false;
    if (i > 0 && t > 0 && !(S > prev)) increasing = false;
    prev = S;
    csv += fmt(t) + "," + fmt(p.A(t)) + "," + fmt(S) + "," + fmt(dS) + "\n";
  }
  cx.add_file("curvature.csv", csv);
  RegimeCheck rc = check_regime(p);
  ordered_json checks;
  checks["max_abs_S_dS"] = num(max_abs);
  if (p.is_flat()) checks["flat_all_zero"] = max_abs == 0;
  if (p.regime() == Regime::one_ended) {
    checks["S_negative_for_t_gt_0"] = negative;
    checks["S_increasing_for_t_gt_0"] = increasing;
  }
  if (p.parity() == Parity::even && p.in_domain(0))
    checks["dS_at_0"] = num(scalar_curvature_gradient(p, 0));
  cx.report["profile"] = p.name();
  cx.report["range"] = {num(lo), num(hi)};
  cx.report["points"] = n;
  cx.report["regime_assumptions"] = {{"ok", rc.ok}, {"detail", rc.detail}};
  cx.report["checks"] = checks;
}

void cmd_balance(Context& cx) {
  const RunConfig& rc = cx.rc;
  const MetricProfile& p = cx.profile;
  RegimeCheck reg = check_regime(p);
  cx.report["regime_assumptions"] = {{"ok", reg.ok}, {"detail", reg.detail}};
  Calibration cal = rc.calibrate_c0 ? calibrate_constants(rc.calibration_r, rc.eps_grid)
                                    : calibrate_flux_constants(rc.calibration_r, rc.eps_grid);
  cx.report["constants"] = calibration_json(cal);
  BalanceProblem b{rc.kind, rc.r, rc.K, rc.t0, cal};
  BalancedSolution s = solve_balancing(b, p, rc.solver);
  cx.report["solution"] = solution_json(s, p);
  cx.report["configuration"] = configuration_json(s.config);

  std::string csv = "k,t_k,dS,eps,sigma,delta,residual\n";
  const int rows_offset = rc.kind == ChainKind::finite ? 1 : 0;
  for (int k = 0; k <= rc.K; ++k) {
    const SphereData& sp = s.config.spheres[k];
    csv += std::to_string(k) + "," + fmt(sp.center) + "," +
           fmt(scalar_curvature_gradient(p, sp.center)) + ",";
    if (sp.outer_neck >= 0) {
      const NeckData& n = s.config.necks[sp.outer_neck];
      csv += fmt(n.eps) + "," + fmt(n.sigma) + "," + fmt(n.delta) + ",";
    } else {
      csv += ",,,";
    }
    int row = k - rows_offset;
    if (row >= 0 && row < static_cast<int>(s.residual.size())) csv += fmt(s.residual[row]);
    csv += "\n";
  }

  if (rc.balance_projections) {
    AssembledSurface surf = assemble(s.config, p);
    Projections pr = projections(surf, p);
    std::vector<real> main, flux_neck, flux_sphere;
    for (int k = 0; k <= rc.K; ++k) main.push_back(sphere_main_term(s.config, p, cal, k));
    for (const NeckData& n : s.config.necks)
      flux_neck.push_back(flux(surf.curve, n.center, p, 2 / rc.r));
    for (int k = 0; k <= rc.K; ++k) {
      const SphereData& sp = s.config.spheres[k];
      real out = sp.outer_neck >= 0 ? flux_neck[sp.outer_neck] : 0;
      real in = sp.inner_neck >= 0 ? flux_neck[sp.inner_neck] : sp.mirrored_inner ? out : 0;
      flux_sphere.push_back(out - in);
    }
    cx.report["projections"] = {{"neck", nums(pr.neck)},
                                {"sphere", nums(pr.sphere)},
                                {"sphere_main_terms", nums(main)}};
    cx.report["flux"] = {{"neck", nums(flux_neck)}, {"sphere_difference", nums(flux_sphere)}};
  }
  cx.add_file("balance.csv", csv);
}

void cmd_assemble(Context& cx, bool mesh) {
  ordered_json info;
  GluedConfiguration c = cx.configuration(cx.rc.r, info);
  for (auto& [k, v] : info.items()) cx.report[k] = v;
  cx.report["configuration"] = configuration_json(c);
  AssembledSurface s = assemble(c, cx.profile);
  cx.report["samples"] = s.curve.size();
  cx.add_file("surface.csv", curve_csv(s.curve));
  if (mesh) {
    std::ostringstream os;
    write_curve_obj(s.curve, cx.angular_res, os);
    cx.add_file("surface.obj", os.str());
    cx.report["angular_res"] = cx.angular_res;
  }
}

ordered_json norm_json(const WeightedNormReport& r) {
  ordered_json terms = ordered_json::array();
  for (int i = 0; i < 4; ++i)
    terms.push_back({{"value", num(r.predicted.terms[i])}, {"exponent", num(r.predicted.exponents[i])}});
  return {{"nu", num(r.options.nu)},
          {"nu_bar", num(r.options.nu_bar)},
          {"chart_R", num(r.chart_R)},
          {"chart_Rprime", num(r.chart_Rprime)},
          {"eps", num(r.eps)},
          {"delta", num(r.delta)},
          {"sphere", num(r.sphere)},
          {"transition", num(r.transition)},
          {"neck", num(r.neck)},
          {"delaunay", num(r.delaunay)},
          {"global", num(r.global)},
          {"holder", num(r.holder)},
          {"predicted_terms", terms},
          {"predicted_dominant", r.predicted.dominant},
          {"ratio", num(r.ratio)}};
}

void cmd_verify(Context& cx) {
  ordered_json info;
  GluedConfiguration c = cx.configuration(cx.rc.r, info);
  for (auto& [k, v] : info.items()) cx.report[k] = v;
  cx.report["configuration"] = configuration_json(c);
  AssembledSurface s = assemble(c, cx.profile);
  WeightedNormReport rep = deviation_report(s, cx.profile, cx.rc.norms);
  cx.report["norms"] = norm_json(rep);
  Projections p1 = projections(s, cx.profile, 1), p2 = projections(s, cx.profile, 2);
  std::vector<real> main;
  if (c.K > 0 || c.neck_count() > 0) {
    const Calibration& cal = cx.flux_constants();
    for (int k = 0; k <= c.K; ++k) main.push_back(sphere_main_term(c, cx.profile, cal, k));
  }
  real sens = 0, scale = 0;
  for (size_t k = 0; k < p1.sphere.size(); ++k) {
    sens = std::max(sens, std::fabs(p2.sphere[k] - p1.sphere[k]));
    scale = std::max(scale, std::fabs(p1.sphere[k]));
  }
  cx.report["projections"] = {{"neck", nums(p1.neck)},
                              {"sphere", nums(p1.sphere)},
                              {"sphere_main_terms", nums(main)}};
  cx.report["tau_sensitivity"] = {{"tau_scale", 2},
                                  {"neck", nums(p2.neck)},
                                  {"sphere", nums(p2.sphere)},
                                  {"max_sphere_change", num(sens)},
                                  {"relative", num(scale > 0 ? sens / scale : 0)}};
}

void cmd_sweep(Context& cx) {
  const std::vector<real>& grid = cx.rc.sweep_r;
  if (grid.empty()) bad_config("sweep needs a non-empty r grid");
  std::string csv = "r,eps,measured,predicted,predicted_exponent\n";
  std::vector<real> lr, lm, expo;
  ordered_json rows = ordered_json::array();
  for (real r : grid) {
    ordered_json info;
    GluedConfiguration c = cx.configuration(r, info);
    AssembledSurface s = assemble(c, cx.profile);
    WeightedNormReport rep = deviation_report(s, cx.profile, cx.rc.norms);
    real pred = rep.eps > 0 ? rep.predicted.value() : 0;
    real pe = rep.eps > 0 ? rep.predicted.exponent() : 0;
    csv += fmt(r) + "," + fmt(rep.eps) + "," + fmt(rep.global) + "," + fmt(pred) + "," + fmt(pe) +
           "\n";
    real dev = 0;
    for (real v : rep.deviation) dev = std::max(dev, std::fabs(v));
    const bool vanishing = dev <= 1e-12L * (2 / r);
    rows.push_back({{"r", num(r)}, {"eps", num(rep.eps)}, {"measured", num(rep.global)},
                    {"predicted", num(pred)}, {"predicted_exponent", num(pe)},
                    {"vanishing", vanishing}});
    if (!vanishing) {
      lr.push_back(std::log(r));
      lm.push_back(std::log(rep.global));
    }
    expo.push_back(pe);
  }
  cx.add_file("sweep.csv", csv);
  cx.report["rows"] = rows;
  if (lr.size() >= 2 && lr.size() == grid.size()) {
    real mx = 0, my = 0;
    for (size_t i = 0; i < lr.size(); ++i) {
      mx += lr[i];
      my += lm[i];
    }
    mx /= lr.size();
    my /= lr.size();
    real sxy = 0, sxx = 0;
    for (size_t i = 0; i < lr.size(); ++i) {
      sxy += (lr[i] - mx) * (lm[i] - my);
      sxx += (lr[i] - mx) * (lr[i] - mx);
    }
    real slope = sxy / sxx;
    real mean_pe = 0;
    for (real e : expo) mean_pe += e;
    mean_pe /= expo.size();
    cx.report["slope"] = num(slope);
    cx.report["predicted_exponent"] = num(mean_pe);
    cx.report["within_0_2"] = std::fabs(slope - mean_pe) <= 0.2L;
  } else {
    cx.report["slope"] = nullptr;
    cx.report["note"] = "deviation vanishes to rounding at some grid point; no slope";
  }
}

}  // namespace

MetricProfile make_profile(const ProfileSpec& s) {
  try {
    if (!s.expression.empty())
      return MetricProfile::from_expression(s.expression, s.parity, s.regime, s.lo, s.hi);
    if (s.name == "flat") return MetricProfile::flat(s.half_length);
    if (s.name == "one-ended-exp") return MetricProfile::one_ended_exp(s.beta);
    if (s.name == "even-bump") return MetricProfile::even_bump(s.beta, s.half_length);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_input) bad_config(std::string("profile: ") + e.what());
    throw;
  }
  bad_config("unknown profile '" + s.name + "'");
}

RunConfig parse_run_config(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    bad_config(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_config("configuration must be a JSON object");
  RunConfig c;
  const ordered_json empty = ordered_json::object();
  auto section = [&](const char* k) -> const ordered_json& {
    if (!j.contains(k)) return empty;
    if (!j.at(k).is_object()) bad_config(std::string("section '") + k + "' must be an object");
    return j.at(k);
  };

  const ordered_json& pr = section("profile");
  c.profile.expression = field<std::string>(pr, "expression", "");
  if (c.profile.expression.empty()) {
    c.profile.name = field<std::string>(pr, "name", "even-bump");
    c.profile.beta = field<double>(pr, "beta", c.profile.name == "even-bump" ? -0.5 : 1.0);
    c.profile.half_length = field<double>(pr, "half_length", c.profile.name == "flat" ? 10 : 5);
  } else {
    std::string par = field<std::string>(pr, "parity", "none");
    std::string reg = field<std::string>(pr, "regime", "finite");
    if (par != "even" && par != "none") bad_config("profile.parity must be 'even' or 'none'");
    if (reg != "finite" && reg != "one-ended")
      bad_config("profile.regime must be 'finite' or 'one-ended'");
    c.profile.parity = par == "even" ? Parity::even : Parity::none;
    c.profile.regime = reg == "one-ended" ? Regime::one_ended : Regime::finite_length;
    std::vector<real> dom = real_list(pr, "domain", {-5, 5});
    if (dom.size() != 2 || !(dom[1] > dom[0])) bad_config("profile.domain must be [lo, hi]");
    c.profile.lo = dom[0];
    c.profile.hi = dom[1];
  }

  const ordered_json& g = section("geometry");
  std::string kind = field<std::string>(g, "kind", "finite");
  if (kind != "finite" && kind != "one-ended") bad_config("geometry.kind must be 'finite' or 'one-ended'");
  c.kind = kind == "finite" ? ChainKind::finite : ChainKind::one_ended;
  c.r = field<double>(g, "r", 0.01);
  c.K = field<int>(g, "K", 10);
  c.t0 = field<double>(g, "t0", c.kind == ChainKind::finite ? 0.0 : 1.0);
  if (!(c.r > 0)) bad_config("geometry.r must be positive");
  if (c.K < 0 || (c.kind == ChainKind::one_ended && c.K < 1)) bad_config("geometry.K out of range");

  const ordered_json& cal = section("calibration");
  c.calibration_r = field<double>(cal, "r", 0.01);
  c.eps_grid = real_list(cal, "eps_grid", c.eps_grid);
  c.calibrate_c0 = field<bool>(cal, "c0", true);
  if (!(c.calibration_r > 0)) bad_config("calibration.r must be positive");
  for (real e : c.eps_grid)
    if (!(e > 0)) bad_config("calibration.eps_grid must be positive");

  const ordered_json& so = section("solver");
  c.solver.max_iterations = field<int>(so, "max_iterations", 50);
  c.solver.tolerance_factor = field<double>(so, "tolerance_factor", 1e-12);
  c.solver.regime_C = field<double>(so, "regime_C", 100);
  if (c.solver.max_iterations < 1 || !(c.solver.tolerance_factor > 0))
    bad_config("solver settings out of range");

  const ordered_json& no = section("norms");
  c.norms.nu = field<double>(no, "nu", 1.5);
  c.norms.nu_bar = field<double>(no, "nu_bar", -0.1);
  c.norms.alpha = field<double>(no, "alpha", 0.5);
  c.norms.exponential_axial = field<bool>(no, "exponential_axial", false);
  if (!(c.norms.nu > 1 && c.norms.nu < 2)) bad_config("norms.nu must lie in (1, 2)");
  if (c.kind == ChainKind::one_ended && !(c.norms.nu_bar > -1 && c.norms.nu_bar < 0))
    bad_config("norms.nu_bar must lie in (-1, 0)");
  if (!(c.norms.alpha > 0 && c.norms.alpha < 1)) bad_config("norms.alpha must lie in (0, 1)");

  const ordered_json& su = section("surface");
  if (su.contains("eps_power")) {
    c.surface.mode = SurfaceSpec::Mode::power;
    c.surface.power = field<double>(su, "eps_power", 3);
  } else if (su.contains("eps") && su.at("eps").is_array()) {
    c.surface.mode = SurfaceSpec::Mode::values;
    c.surface.eps = real_list(su, "eps", {});
  } else {
    std::string e = field<std::string>(su, "eps", "solved");
    if (e != "solved") bad_config("surface.eps must be 'solved' or an array");
  }
  c.surface.delta = real_list(su, "delta", {});

  const ordered_json& sw = section("sweep");
  c.sweep_r = real_list(sw, "r", c.sweep_r);
  for (size_t i = 0; i < c.sweep_r.size(); ++i) {
    if (!(c.sweep_r[i] > 0)) bad_config("sweep.r must be positive");
    if (i > 0 && !(c.sweep_r[i] < c.sweep_r[i - 1])) bad_config("sweep.r must be decreasing");
  }

  const ordered_json& cu = section("curvature");
  std::vector<real> range = real_list(cu, "range", {0, 0});
  if (range.size() != 2) bad_config("curvature.range must be [lo, hi]");
  c.curvature_lo = range[0];
  c.curvature_hi = range[1];
  c.curvature_points = field<int>(cu, "points", 50);
  if (c.curvature_points < 2) bad_config("curvature.points must be at least 2");

  c.balance_projections = field<bool>(section("balance"), "projections", true);
  return c;
}

RunOutput run_command(const std::string& command, const std::string& config_json,
                      int angular_res) {
  static const std::map<std::string, std::string> report_name{
      {"curvature", "curvature.json"}, {"balance", "balance.json"},
      {"assemble", "assemble.json"},   {"verify", "verify.json"},
      {"sweep", "sweep.json"},         {"export", "export.json"}};
  RunOutput out;
  ordered_json summary;
  summary["command"] = command;
  std::optional<Context> cx;
  try {
    auto it = report_name.find(command);
    if (it == report_name.end()) bad_config("unknown command '" + command + "'");
    if (angular_res < 3) bad_config("angular resolution must be at least 3");
    RunConfig rc = parse_run_config(config_json);
    cx.emplace(Context{rc, make_profile(rc.profile), angular_res, {}, {}, {}});
    cx->report["config"] = run_config_json(rc);
    if (command == "curvature") cmd_curvature(*cx);
    else if (command == "balance") cmd_balance(*cx);
    else if (command == "assemble") cmd_assemble(*cx, false);
    else if (command == "verify") cmd_verify(*cx);
    else if (command == "sweep") cmd_sweep(*cx);
    else cmd_assemble(*cx, true);
  } catch (const Error& e) {
    out.status = e.code();
    out.message = e.what();
  } catch (const std::exception& e) {
    out.status = ErrorCode::invalid_input;
    out.message = e.what();
  }
  summary["status"] = error_name(out.status);
  if (out.status != ErrorCode::ok) summary["message"] = out.message;
  if (cx) {
    ordered_json rep = cx->report;
    rep["status"] = summary["status"];
    if (out.status != ErrorCode::ok) rep["message"] = out.message;
    out.files = cx->files;
    out.files.emplace_back(report_name.at(command), rep.dump(2) + "\n");
  }
  ordered_json names = ordered_json::array();
  for (const auto& f : out.files) names.push_back(f.first);
  summary["files"] = names;
  out.summary = summary.dump(2) + "\n";
  return out;
}

}  // namespace cmc
