// Command-line front end over the C interface.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cmcglue.h"

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitError = 1,
  kExitInfeasible = 2,
  kExitNonconvergence = 3,
  kExitInvalidConfig = 4,
  kExitUsage = 64,
};

int exit_code(cmc_status s) {
  switch (s) {
    case CMC_OK: return kExitOk;
    case CMC_ERR_INFEASIBLE: return kExitInfeasible;
    case CMC_ERR_NONCONVERGENCE: return kExitNonconvergence;
    case CMC_ERR_INVALID_CONFIG: return kExitInvalidConfig;
    default: return kExitError;
  }
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::ostringstream os;
  os << f.rdbuf();
  out = os.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gluing constructions of CMC surfaces in axially symmetric metrics"};
  app.require_subcommand(1, 1);
  std::string config_path, out_dir = ".";
  int angular_res = 64;
  bool seedless = false;
  app.add_option("--config", config_path, "Run configuration (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--angular-res", angular_res, "Angular resolution of OBJ meshes")
      ->check(CLI::Range(3, 1 << 16));
  app.add_flag("--seedless", seedless, "Accepted for compatibility; nothing here is random");
  const char* commands[][2] = {
      {"curvature", "Scalar curvature tables and regime checks"},
      {"balance", "Calibrate constants and solve the balancing system"},
      {"assemble", "Build the glued profile curve"},
      {"verify", "Weighted mean-curvature norms and projections"},
      {"sweep", "Scaling sweep over the radius grid"},
      {"export", "OBJ mesh and CSV of the glued surface"},
  };
  for (auto& c : commands) app.add_subcommand(c[0], c[1])->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::string config;
  if (!read_file(config_path, config)) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return kExitInvalidConfig;
  }
  cmc_output* out = nullptr;
  cmc_status st = cmc_run(command.c_str(), config.c_str(), angular_res, &out);
  if (!out) {
    std::cerr << "error: " << cmc_status_name(st) << ": " << cmc_last_error() << "\n";
    return exit_code(st);
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
    cmc_output_free(out);
    return kExitError;
  }
  for (size_t i = 0; i < cmc_output_file_count(out); ++i) {
    size_t n = 0;
    const char* data = cmc_output_file_data(out, i, &n);
    std::filesystem::path path = std::filesystem::path(out_dir) / cmc_output_file_name(out, i);
    std::ofstream f(path, std::ios::binary);
    f.write(data, static_cast<std::streamsize>(n));
    if (!f) {
      std::cerr << "error: cannot write " << path << "\n";
      cmc_output_free(out);
      return kExitError;
    }
  }
  std::cout << cmc_output_summary(out);
  if (st != CMC_OK) std::cerr << "error: " << cmc_status_name(st) << ": " << cmc_last_error() << "\n";
  cmc_output_free(out);
  return exit_code(st);
}
