#pragma once

// Weight function and weighted sup / Hoelder estimators on assembled
// surfaces, and mean-curvature deviation reports against the scaling law.

#include <string>
#include <vector>

#include "cmc/assembly.hpp"

namespace cmc {

struct NormOptions {
  real nu = 1.5L;
  real nu_bar = -0.1L;             // one-ended axial exponent
  bool exponential_axial = false;  // e^{-nu_bar m} instead of m^{-nu_bar}
  real alpha = 0.5L;               // Hoelder exponent of the reported seminorm
};

// zeta = r ||x||^{chi(||x|| / R')} inside a neck chart (||x|| the scaled
// transverse radius), r elsewhere.
real weight_in_chart(real r, real x);
std::vector<real> weights(const AssembledSurface& s, const std::vector<NeckCoords>& nc);

// max_i zeta_i^{-mu} |f_i| times the axial factor of the sample's Delaunay window.
real weighted_sup(const std::vector<real>& field, const std::vector<real>& zeta,
                  const std::vector<int>& windows, real mu, const NormOptions& opt);
real axial_factor(int window, const NormOptions& opt);

struct PredictedBound {
  // r^{3-nu}, r^{5-nu} eps^{1/2-3nu/4}, r^{1-nu} eps^{3/2-3nu/4}, |delta| r^{1-nu} eps^{1-3nu/4}
  real terms[4] = {};
  real exponents[4] = {};  // d log(term) / d log r along eps = r^p, delta fixed
  int dominant = 0;
  real value() const { return terms[dominant]; }
  real exponent() const { return exponents[dominant]; }
};

PredictedBound predicted_bound(real r, real eps, real delta, real nu);

struct WeightedNormReport {
  NormOptions options;
  real r = 0;
  real chart_R = 0, chart_Rprime = 0;
  real eps = 0, delta = 0;  // largest neck scale and |displacement|
  real sphere = 0, transition = 0, neck = 0, delaunay = 0;
  real global = 0;
  real holder = 0;
  PredictedBound predicted;
  real ratio = 0;  // global / predicted dominant term
  std::vector<real> zeta, deviation;
};

WeightedNormReport deviation_report(const AssembledSurface& s, const MetricProfile& p,
                                    const NormOptions& opt = {});

}  // namespace cmc
