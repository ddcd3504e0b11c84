#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace cmc {

// Geometry kernels run in extended precision; the public API speaks double.
using real = long double;

inline constexpr real kPi = std::numbers::pi_v<long double>;

enum class ErrorCode {
  ok = 0,
  domain,
  range,
  singular_point,
  invalid_input,
  perturbation_too_large,
  no_solution,
  calibration_failure,
  invalid_cut,
  quadrature,
  infeasible,
  nonconvergence,
  invalid_config,
  regime,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace cmc
