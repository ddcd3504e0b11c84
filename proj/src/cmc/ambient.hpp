#pragma once

// Axially symmetric ambient metric g = dt^2 + A(t)(dx^2 + dy^2) and its
// curvature along the axis t -> (t, 0, 0).

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "cmc/common.hpp"
#include "cmc/expr.hpp"

namespace cmc {

enum class Parity { even, none };
enum class Regime { finite_length, one_ended };

using Derivs4 = std::array<real, 5>;  // A, A', A'', A''', A''''

class MetricProfile {
 public:
  static MetricProfile flat(real half_length = 10);
  // A = 1 + beta e^{-t} on [0, inf).
  static MetricProfile one_ended_exp(real beta = 1);
  // A = 1 + beta e^{-t^2} on [-L, L].
  static MetricProfile even_bump(real beta = 1, real half_length = 5);
  static MetricProfile from_expression(const std::string& text, Parity parity,
                                       Regime regime, real lo, real hi);
  // Plain callable; derivatives by 6th-order central differences with
  // step 1e-4 * max(1, |t|) for A', A'', 1e-3 for A''' and 1e-2 for A''''.
  static MetricProfile from_function(std::function<real(real)> a,
                                     const std::string& name, Parity parity,
                                     Regime regime, real lo, real hi);

  Derivs4 derivs(real t) const;
  real A(real t) const { return derivs(t)[0]; }

  const std::string& name() const { return name_; }
  Parity parity() const { return parity_; }
  Regime regime() const { return regime_; }
  real lo() const { return lo_; }
  real hi() const { return hi_; }
  bool in_domain(real t) const { return t >= lo_ && t <= hi_; }
  bool is_flat() const { return flat_; }
  // Raw A(t) only, no derivative machinery; used by the grid oracle.
  real value_only(real t) const;

 private:
  std::string name_;
  Parity parity_ = Parity::none;
  Regime regime_ = Regime::finite_length;
  real lo_ = 0, hi_ = 0;
  bool flat_ = false;
  std::function<Derivs4(real)> eval_;
  std::function<real(real)> plain_;
};

real scalar_curvature(const MetricProfile& p, real t);
real scalar_curvature_gradient(const MetricProfile& p, real t);

// Components in the orthonormal frame e0 = d/dt, e1 = d/dx / sqrt(A),
// e2 = d/dy / sqrt(A) at the axis point. Rm(X,Y,Z,W) = g(R(X,Y)Z, W) with
// R(X,Y) = [D_X, D_Y] - D_[X,Y]; sectional curvature is -Rm(X,Y,X,Y) for
// orthonormal X, Y. dRm[i][j][k][l][m] is (D_{e_m} Rm)(e_i,e_j,e_k,e_l).
struct CurvatureData {
  real t = 0;
  real A = 1;
  real Rm[3][3][3][3] = {};
  real dRm[3][3][3][3][3] = {};
  real Ric[3][3] = {};
  real dRic[3][3][3] = {};  // dRic[j][k][m] = (D_{e_m} Ric)(e_j, e_k)
  real S = 0;
  real dS = 0;
};

CurvatureData curvature_frame_data(const MetricProfile& p, real t);

struct RegimeCheck {
  bool ok = true;
  std::string detail;
};

// Numerical verification of the regime assumptions on a sample grid.
RegimeCheck check_regime(const MetricProfile& p, int samples = 200);

}  // namespace cmc
