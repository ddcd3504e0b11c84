// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cmc/balance.hpp"
#include "cmc/pipeline.hpp"
#include "curves.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace cmc;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void check(Verdict& v, bool ok, const std::string& what) {
  if (!ok) v.pass = false;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += what + (ok ? "" : " [x]");
}

template <class F>
real worst_over(const ProfileCurve& c, F&& f) {
  real w = 0;
  for (const auto& s : c.samples) w = std::max(w, std::fabs(f(s)));
  return w;
}

// ---------------------------------------------------------------------------

Verdict exact_residuals() {
  Verdict v;
  auto flat = MetricProfile::flat();
  {
    Stopwatch sw;
    real w = 0, wm = 0;
    for (real r : {1.0L, 0.1L, 0.01L}) {
      ProfileCurve s = make_round_sphere(r, 0.3L, 48);
      w = std::max(w, worst_over(s, [&](const CurveSample& c) { return euclidean_forms(c).H - 2 / r; }));
      // between nodes the curve is interpolated
      for (size_t i = 0; i + 1 < s.size(); ++i) {
        real m = (s.samples[i].s + s.samples[i + 1].s) / 2;
        wm = std::max(wm, std::fabs(euclidean_forms(s, m).H - 2 / r));
      }
    }
    double t = sw.seconds();
    check(v, w <= 1e-8L && wm <= 1e-8L && t < 1,
          fmt("sphere %.1Le, between nodes %.1Le (%.2fs)", w, wm, t));
  }
  {
    Stopwatch sw;
    real w = 0;
    for (real a : {1.0L, 0.1L, 1e-3L}) {
      ProfileCurve c = testcurves::catenoid(a, 4);
      w = std::max(w, worst_over(c, [](const CurveSample& s) { return euclidean_forms(s).H; }));
    }
    double t = sw.seconds();
    check(v, w <= 1e-8L && t < 1, fmt("catenoid %.1Le (%.2fs)", w, t));
  }
  {
    Stopwatch sw;
    real w = 0;
    for (real eps : {0.3L, 0.05L, 1e-3L}) {
      ProfileCurve u = testcurves::unduloid(delaunay_from_neck(eps), 0, 2 * kPi);
      w = std::max(w, worst_over(u, [&](const CurveSample& s) { return ambient_forms_exact(flat, s).H - 2; }));
    }
    double t = sw.seconds();
    check(v, w <= 1e-6L && t < 1, fmt("Delaunay %.1Le (%.2fs)", w, t));
  }
  return v;
}

Verdict conservation() {
  Verdict v;
  real fi = 0;
  for (real eps : {0.2L, 1e-3L, 1e-5L}) {
    real c = eps - eps * eps;
    oracle::Orbit orb = oracle::integrate_unduloid(eps);
    for (const auto& p : orb.points) fi = std::max(fi, std::fabs(oracle::unduloid_first_integral(p) - c));
    DelaunayEnd d = delaunay_from_neck(eps);
    for (int i = 0; i <= 400; ++i) {
      real phi = 2 * kPi * i / 400;
      real rho = d.rho(phi), slope = d.h * std::sin(phi) / d.speed(phi);
      fi = std::max(fi, std::fabs(rho / std::sqrt(1 + slope * slope) - rho * rho - c));
    }
  }
  check(v, fi <= 1e-8L, fmt("first integral %.1Le", fi));

  auto flat = MetricProfile::flat();
  auto spread = [&](const ProfileCurve& c, real H, real lo, real hi) {
    real mn = 0, mx = 0;
    for (int i = 1; i < 16; ++i) {
      real f = flux(c, lo + (hi - lo) * i / 16, flat, H);
      mn = i == 1 ? f : std::min(mn, f);
      mx = i == 1 ? f : std::max(mx, f);
    }
    return mx - mn;
  };
  real fl = 0;
  for (real eps : {0.3L, 0.05L, 1e-3L}) {
    ProfileCurve u = testcurves::unduloid(delaunay_from_neck(eps), 0, 2 * kPi);
    fl = std::max(fl, spread(u, 2, u.samples.front().t, u.samples.back().t));
  }
  ProfileCurve cat = testcurves::catenoid(0.2L, 3);
  fl = std::max(fl, spread(cat, 0, -0.55L, 0.55L));
  ProfileCurve sph = make_round_sphere(0.05L, 0);
  fl = std::max(fl, spread(sph, 40, -0.049L, 0.049L));
  check(v, fl <= 1e-8L, fmt("flux spread %.1Le", fl));
  return v;
}

Verdict curvature_oracle() {
  struct Named {
    MetricProfile p;
    std::function<real(real)> A;
    real lo, hi;
  };
  std::vector<Named> all{
      {MetricProfile::flat(10), [](real) { return 1.0L; }, -3, 3},
      {MetricProfile::one_ended_exp(), [](real t) { return 1 + std::exp(-t); }, 0.05L, 6},
      {MetricProfile::even_bump(), [](real t) { return 1 + std::exp(-t * t); }, -3, 3},
      {MetricProfile::one_ended_exp(-0.5L), [](real t) { return 1 - 0.5L * std::exp(-t); }, 0.05L, 6},
      {MetricProfile::even_bump(-0.5L), [](real t) { return 1 - 0.5L * std::exp(-t * t); }, -3, 3},
  };
  real worst = 0;
  auto rel = [](real a, real b, real scale, real floor) {
    return std::fabs(a - b) / (std::fabs(scale) + floor);
  };
  for (auto& n : all) {
    oracle::TensorOracle o{n.A};
    for (int i = 0; i < 50; ++i) {
      real t = n.lo + (n.hi - n.lo) * i / 49;
      auto ref = o.frame(t);
      real dS_ref = o.scalar_gradient(t);
      CurvatureData cd = curvature_frame_data(n.p, t);
      worst = std::max(worst, rel(scalar_curvature(n.p, t), ref.S, ref.S, 1e-8L));
      worst = std::max(worst, rel(scalar_curvature_gradient(n.p, t), dS_ref, dS_ref, 1e-6L));
      worst = std::max(worst, rel(cd.S, ref.S, ref.S, 1e-8L));
      real rs = 0, drs = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          rs = std::max(rs, std::fabs(ref.Ric[a][b]));
          for (int m = 0; m < 3; ++m) drs = std::max(drs, std::fabs(ref.dRic[m][a][b]));
          for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) {
              rs = std::max(rs, std::fabs(ref.Rm[a][b][c][d]));
              for (int m = 0; m < 3; ++m) drs = std::max(drs, std::fabs(ref.dRm[m][a][b][c][d]));
            }
        }
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          worst = std::max(worst, rel(cd.Ric[a][b], ref.Ric[a][b], rs, 1e-8L));
          for (int m = 0; m < 3; ++m)
            worst = std::max(worst, rel(cd.dRic[a][b][m], ref.dRic[m][a][b], drs, 1e-6L));
          for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) {
              worst = std::max(worst, rel(cd.Rm[a][b][c][d], ref.Rm[a][b][c][d], rs, 1e-8L));
              for (int m = 0; m < 3; ++m)
                worst = std::max(worst, rel(cd.dRm[a][b][c][d][m], ref.dRm[m][a][b][c][d], drs, 1e-6L));
            }
        }
    }
  }
  Verdict v;
  check(v, worst <= 1e-6L, fmt("5 profiles x 50 points, worst relative %.1Le", worst));
  return v;
}

Verdict expansion_order() {
  Stopwatch sw;
  auto p = MetricProfile::one_ended_exp();
  std::vector<real> rs{1e-1L, 3e-2L, 1e-2L, 3e-3L, 1e-3L}, dev;
  for (real r : rs) {
    ProfileCurve g = geodesic_sphere(p, r, 1);
    dev.push_back(worst_over(g, [&](const CurveSample& s) {
      return ambient_mean_curvature_expansion(p, s, 1) - ambient_forms_exact(p, s).H;
    }));
  }
  real slope = testcurves::loglog_slope(rs, dev);
  double t = sw.seconds();
  Verdict v;
  check(v, slope >= 2.7L, fmt("slope %.3Lf", slope));
  check(v, t < 10, fmt("%.2fs", t));
  return v;
}

Verdict green_matching() {
  Verdict v;
  real gw = 0;
  for (auto [ep, em] : {std::pair{1.0L, 0.0L}, {0.3L, 0.7L}, {0.5L, 0.5L}}) {
    GreenSolution g = solve_green(ep, em);
    for (real th : {0.01L, 0.2L, 0.7L, 1.0L, 1.9L, 2.6L, 3.1L}) {
      real ref = oracle::green_value(ep, em, th);
      gw = std::max(gw, std::fabs(g.value(th) - ref) / (1 + std::fabs(ref)));
    }
  }
  check(v, gw <= 1e-6L, fmt("Green vs spectral %.1Le", gw));

  std::vector<real> Cs;
  real sharp = 0;
  for (real e : {1e-3L, 1e-4L}) {
    GreenSolution g = solve_green(e, 0);
    ExpansionConstants k = expansion_constants(g);
    real C = 0;
    for (real th : {1e-1L, 3e-2L, 1e-2L, 3e-3L, 1e-3L}) {
      real rho = std::sin(th);
      C = std::max(C, std::fabs(g.value(th) - e * k.C_plus * std::log(rho)) / e);
      real rem = g.value(th) - e * (k.c_plus + k.C_plus * std::log(rho));
      sharp = std::max(sharp, std::fabs(rem) / (e * th * th * std::fabs(std::log(th))));
    }
    Cs.push_back(C);
  }
  real drift = std::fabs(Cs[0] / Cs[1] - 1);
  check(v, drift < 1e-3L, fmt("near-pole C %.4Lf / %.4Lf", Cs[0], Cs[1]));

  real rt = 0;
  LambdaConstants lc{-0.1L, 0.05L};
  for (real r : {0.04L, 0.01L})
    for (real e : {1e-6L, 1e-5L, 3e-4L, 1e-2L})
      rt = std::max(rt, std::fabs(invert_lambda(r, lambda_map(r, e, lc), lc) / e - 1));
  check(v, rt <= 1e-12L, fmt("Lambda round trip %.1Le", rt));
  return v;
}

std::string read_text(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Verdict scaling_law() {
  Stopwatch sw;
  RunOutput out = run_command("sweep", read_text(fs::path(CMCGLUE_CONFIGS) / "scaling.json"));
  double t = sw.seconds();
  Verdict v;
  if (out.status != ErrorCode::ok) {
    check(v, false, "sweep failed: " + out.message);
    return v;
  }
  nlohmann::json j;
  for (auto& f : out.files)
    if (f.first == "sweep.json") j = nlohmann::json::parse(f.second);
  double slope = j.at("slope").get<double>();
  double pred = j.at("predicted_exponent").get<double>();
  std::string pts;
  for (auto& row : j.at("rows"))
    pts += fmt(" %.3g", row.at("predicted_exponent").get<double>());
  check(v, std::fabs(slope - pred) <= 0.2, fmt("slope %.3f vs %.3f (per point:%s)", slope, pred, pts.c_str()));
  check(v, t < 120, fmt("%.1fs", t));
  return v;
}

Verdict balancing_formula() {
  Verdict v;
  const Calibration cal = calibrate_flux_constants(0.01L, {1e-4L, 1e-5L, 1e-6L});
  auto bump = MetricProfile::even_bump();
  std::vector<real> errs;
  for (real r : {0.04L, 0.02L, 0.01L}) {
    real eps = r * r * r;
    GluedConfiguration c = configure_from_eps(ChainKind::finite, r, 2, 0, {eps, eps}, {});
    Projections pr = projections(assemble(c, bump), bump);
    real e = 0;
    for (int k = 1; k <= c.K; ++k) {
      real main = sphere_main_term(c, bump, cal, k);
      e = std::max(e, std::fabs(pr.sphere[k] - main) / std::fabs(main));
    }
    errs.push_back(e);
  }
  bool mono = errs[1] < errs[0] && errs[2] < errs[1];
  check(v, mono && errs[2] < 0.1L,
        fmt("sphere rel. error %.1Le / %.1Le / %.1Le", errs[0], errs[1], errs[2]));

  // neck slope in delta at eps = r^3, r = 0.01, against C0 calibrated at r = 0.02
  const real r = 0.01L, eps = r * r * r, dl = std::sqrt(eps) / 4;
  const real C0 = calibrate_C0(0.02L, eps);
  auto flat = MetricProfile::flat(10);
  auto neck_proj = [&](real delta) {
    GluedConfiguration c = configure_from_eps(ChainKind::finite, r, 1, 0, {eps}, {delta});
    return projections(assemble(c, flat), flat).neck.at(0);
  };
  real p0 = neck_proj(0), pp = neck_proj(dl), pm = neck_proj(-dl);
  real pred = C0 * r * eps * std::sqrt(eps);
  real sc = (pp - pm) / (2 * dl), sr = (pp - p0) / dl, sl = (p0 - pm) / dl;
  real dev = std::max({std::fabs(sc / pred - 1), std::fabs(sr / pred - 1), std::fabs(sl / pred - 1)});
  check(v, dev <= 0.05L, fmt("neck slope vs C0 r eps^1.5 off by %.2Lf%% (C0 %.4Lf)", 100 * dev, C0));
  std::string per;
  for (real e : {1e-4L, 1e-5L}) per += fmt(" %.3Lf@%.0Le", calibrate_C0(r, e), e);
  v.detail += "; C0 at other eps:" + per;
  return v;
}

struct SolveRun {
  bool ok = false;
  std::string error;
  BalancedSolution s;
  double seconds = 0;
};

SolveRun solve(ChainKind kind, const MetricProfile& p, real r, real t0, const Calibration& cal) {
  BalanceProblem b;
  b.kind = kind;
  b.r = r;
  b.K = 10;
  b.t0 = t0;
  b.constants = cal;
  SolveRun out;
  Stopwatch sw;
  try {
    out.s = solve_balancing(b, p);
    out.ok = true;
  } catch (const Error& e) {
    out.error = std::string(error_name(e.code())) + ": " + e.what();
  }
  out.seconds = sw.seconds();
  return out;
}

Verdict balancing_solver(const Calibration& cal) {
  Verdict v;
  {
    SolveRun f = solve(ChainKind::finite, MetricProfile::flat(), 0.01L, 0, cal);
    check(v, !f.ok && f.error.rfind("infeasible", 0) == 0, "flat " + (f.ok ? "solved" : f.error.substr(0, 10)));
  }
  // profiles exactly as named: A = 1 + e^{-t}, A = 1 + beta e^{-t^2}
  SolveRun oe1 = solve(ChainKind::one_ended, MetricProfile::one_ended_exp(), 0.01L, 1, cal);
  check(v, oe1.ok, "one-ended-exp " + (oe1.ok ? "solved" : oe1.error.substr(0, 10)));
  SolveRun eb1 = solve(ChainKind::finite, MetricProfile::even_bump(1), 0.01L, 0, cal);
  v.detail += "; even-bump beta=1 " + (eb1.ok ? std::string("solved") : eb1.error.substr(0, 10));

  const real r3 = 1e-6L;
  auto report = [&](const char* name, const SolveRun& s, bool want_decreasing) {
    if (!s.ok) {
      check(v, false, std::string(name) + " " + s.error);
      return;
    }
    bool conv = s.s.iterations <= 20 && s.s.residual_norm <= 1e-12L * r3;
    check(v, conv, fmt("%s %d it, |F| %.1Le", name, s.s.iterations, s.s.residual_norm));
    bool dec = s.s.monotone < 0;
    check(v, dec || !want_decreasing, fmt("%s eps %s", name, dec ? "decreasing" : s.s.monotone > 0 ? "increasing" : "not monotone"));
    check(v, s.s.telescoped_gap <= 1e-14L, fmt("%s telescoped gap %.1Le", name, s.s.telescoped_gap));
  };
  auto eb = MetricProfile::even_bump(-0.5L);
  auto oe = MetricProfile::one_ended_exp(-0.5L);
  SolveRun ebs = solve(ChainKind::finite, eb, 0.01L, 0, cal);
  SolveRun oes = solve(ChainKind::one_ended, oe, 0.01L, 1, cal);
  report("even-bump beta=-0.5", ebs, true);
  report("one-ended beta=-0.5", oes, true);

  real C = 0;
  bool all_ok = true;
  for (real r : {0.04L, 0.02L, 0.01L}) {
    for (int kind = 0; kind < 2; ++kind) {
      SolveRun s = kind == 0 ? solve(ChainKind::finite, eb, r, 0, cal)
                             : solve(ChainKind::one_ended, oe, r, 1, cal);
      if (!s.ok) {
        all_ok = false;
        continue;
      }
      for (real e : s.s.eps) C = std::max({C, e / (r * r), r * r * r / e});
    }
  }
  check(v, all_ok && C <= 100, fmt("regime C %.2Lf over r sweep", C));
  double t = std::max(ebs.seconds, oes.seconds);
  check(v, t < 60, fmt("solve %.2fs", t));
  return v;
}

Verdict one_ended_closure(const Calibration& cal) {
  Verdict v;
  SolveRun s = solve(ChainKind::one_ended, MetricProfile::one_ended_exp(-0.5L), 0.01L, 1, cal);
  if (!s.ok) {
    check(v, false, s.error);
    return v;
  }
  const int K = 10;
  real sigma = s.s.config.necks.at(K).sigma;
  real T = 2 + sigma / 0.01L;
  real rhoT = delaunay_solve(T).eps;
  real gap = std::fabs(s.s.eps.at(K) - rhoT);
  check(v, gap <= 1e-8L, fmt("|eps_K - rho_T(0)| %.1Le (eps_K %.4Le, beta=-0.5)", gap, s.s.eps.at(K)));
  return v;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(CMCGLUE_CLI) + " " + args;
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

Verdict determinism() {
  Verdict v;
  fs::path root = fs::temp_directory_path() / "cmcglue_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string common =
      R"("calibration": {"c0": false}, "sweep": {"r": [0.04, 0.02]}, "norms": {"nu": 1.5})";
  const std::string finite = R"({"profile": {"name": "even-bump", "beta": -0.5},
    "geometry": {"kind": "finite", "r": 0.02, "K": 3}, "surface": {"eps": "solved"}, )" + common + "}";
  const std::string oneend = R"({"profile": {"name": "one-ended-exp", "beta": -0.5},
    "geometry": {"kind": "one-ended", "r": 0.02, "K": 3, "t0": 1}, "surface": {"eps": "solved"}, )" + common + "}";
  const std::string flat = R"({"profile": {"name": "flat"}, "geometry": {"kind": "finite", "r": 0.01, "K": 3}})";
  std::ofstream(root / "finite.json") << finite;
  std::ofstream(root / "oneend.json") << oneend;
  std::ofstream(root / "flat.json") << flat;
  int runs = 0, mismatches = 0;
  for (const char* cfg : {"finite", "oneend", "flat"}) {
    for (const char* cmd : {"curvature", "balance", "assemble", "verify", "sweep", "export"}) {
      if (std::string(cfg) == "flat" && std::string(cmd) != "balance" && std::string(cmd) != "curvature")
        continue;
      std::string out[2];
      int code[2];
      for (int k = 0; k < 2; ++k) {
        fs::path dir = root / fmt("%s_%s_%d", cfg, cmd, k);
        code[k] = run_cli(std::string(cmd) + " --config " + (root / (std::string(cfg) + ".json")).string() +
                          " --angular-res 8 --out " + dir.string() + " > " + (dir.string() + ".stdout") +
                          " 2>&1");
        out[k] = read_text(dir.string() + ".stdout");
        std::vector<fs::path> files;
        if (fs::exists(dir))
          for (auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (auto& f : files) out[k] += f.filename().string() + "\n" + read_text(f);
      }
      ++runs;
      if (out[0] != out[1] || code[0] != code[1] || out[0].empty()) {
        ++mismatches;
        check(v, false, fmt("%s %s differs", cfg, cmd));
      }
    }
  }
  check(v, mismatches == 0, fmt("%d command runs byte-identical on rerun", runs - mismatches));
  fs::remove_all(root);
  return v;
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  Calibration cal;
  try {
    cal = calibrate_flux_constants(0.01L, {1e-4L, 1e-5L, 1e-6L});
  } catch (const Error& e) {
    std::printf("calibration failed: %s\n", e.what());
    return 1;
  }
  std::vector<Row> rows{
      {1, "exact-solution residuals", exact_residuals},
      {2, "conservation", conservation},
      {3, "curvature oracle equivalence", curvature_oracle},
      {4, "expansion order", expansion_order},
      {5, "Green function and matching", green_matching},
      {6, "scaling law", scaling_law},
      {7, "balancing formula", balancing_formula},
      {8, "balancing solver", [&] { return balancing_solver(cal); }},
      {9, "one-ended closure", [&] { return one_ended_closure(cal); }},
      {10, "determinism", determinism},
  };
  int failed = 0;
  for (auto& row : rows) {
    Stopwatch sw;
    Verdict v;
    try {
      v = row.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("criterion %2d %-30s %s  %s  [%.1fs]\n", row.id, row.name, v.pass ? "PASS" : "FAIL",
                v.detail.c_str(), sw.seconds());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(rows.size()) - failed, rows.size());
  return failed == 0 ? 0 : 1;
}
