#pragma once

// Batch pipeline behind the command line: a JSON run configuration in,
// named report files out.

#include <string>
#include <utility>
#include <vector>

#include "cmc/balance.hpp"
#include "cmc/norms.hpp"

namespace cmc {

struct ProfileSpec {
  std::string name = "even-bump";  // flat | one-ended-exp | even-bump
  real beta = 1;
  real half_length = 5;
  std::string expression;  // overrides name when set
  Parity parity = Parity::even;
  Regime regime = Regime::finite_length;
  real lo = -5, hi = 5;
};

struct SurfaceSpec {
  enum class Mode { solved, power, values } mode = Mode::solved;
  real power = 3;             // eps = r^power
  std::vector<real> eps;      // explicit values (mode values)
  std::vector<real> delta;
};

struct RunConfig {
  ProfileSpec profile;
  ChainKind kind = ChainKind::finite;
  real r = 0.01L;
  int K = 10;
  real t0 = 0;
  real calibration_r = 0.01L;
  std::vector<real> eps_grid{1e-4L, 1e-5L, 1e-6L};
  bool calibrate_c0 = true;
  SolverOptions solver;
  NormOptions norms;
  SurfaceSpec surface;
  std::vector<real> sweep_r{0.04L, 0.02L, 0.01L};
  real curvature_lo = 0, curvature_hi = 0;  // 0, 0: profile domain clipped to 10
  int curvature_points = 50;
  bool balance_projections = true;
};

// Parses and validates; throws invalid_config.
RunConfig parse_run_config(const std::string& json_text);
MetricProfile make_profile(const ProfileSpec& s);

struct RunOutput {
  ErrorCode status = ErrorCode::ok;
  std::string message;
  std::string summary;  // JSON
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
};

// command: curvature | balance | assemble | verify | sweep | export.
// Never throws; failures are reported through status and summary.
RunOutput run_command(const std::string& command, const std::string& config_json,
                      int angular_res = 64);

}  // namespace cmc
