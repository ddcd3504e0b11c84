#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cmc/ambient.hpp"
#include "oracles.hpp"

using namespace cmc;

namespace {

struct NamedProfile {
  MetricProfile profile;
  std::function<real(real)> A;  // plain values for the oracle
  real lo, hi;
};

std::vector<NamedProfile> builtin_profiles() {
  return {
      {MetricProfile::flat(10), [](real) { return 1.0L; }, -3, 3},
      {MetricProfile::one_ended_exp(1), [](real t) { return 1 + std::exp(-t); }, 0.05L, 6},
      {MetricProfile::one_ended_exp(-0.5L), [](real t) { return 1 - 0.5L * std::exp(-t); },
       0.05L, 6},
      {MetricProfile::even_bump(1, 5), [](real t) { return 1 + std::exp(-t * t); }, -3, 3},
      {MetricProfile::even_bump(-0.5L, 5), [](real t) { return 1 - 0.5L * std::exp(-t * t); },
       -3, 3},
  };
}

template <class F>
real max_abs(F&& each) {
  real m = 0;
  each([&](real v) { m = std::max(m, std::fabs(v)); });
  return m;
}

}  // namespace

TEST(ScalarCurvature, FlatIsZero) {
  auto p = MetricProfile::flat();
  for (real t : {-2.0L, 0.0L, 3.5L}) {
    EXPECT_EQ(scalar_curvature(p, t), 0);
    EXPECT_EQ(scalar_curvature_gradient(p, t), 0);
  }
}

TEST(ScalarCurvature, ExponentialProfileAtOne) {
  // Frozen from the grid tensor oracle.
  auto p = MetricProfile::one_ended_exp(1);
  EXPECT_NEAR(scalar_curvature(p, 1), -0.501718098675285L, 1e-10);
  EXPECT_NEAR(scalar_curvature_gradient(p, 1), 0.340346773701444L, 1e-9);
}

TEST(ScalarCurvature, ExponentialProfileNegativeAndIncreasing) {
  auto p = MetricProfile::one_ended_exp(1);
  real prev = -1e300L;
  for (int i = 1; i <= 200; ++i) {
    real t = 0.05L * i;
    real S = scalar_curvature(p, t);
    EXPECT_LT(S, 0) << t;
    EXPECT_GT(S, prev) << t;
    prev = S;
  }
}

TEST(ScalarCurvature, GradientMatchesFiniteDifferences) {
  for (auto& np : builtin_profiles()) {
    for (int i = 0; i < 20; ++i) {
      real t = np.lo + (np.hi - np.lo) * (i + 0.5L) / 20;
      real k = 1e-3L;
      real fd = (45 * (scalar_curvature(np.profile, t + k) - scalar_curvature(np.profile, t - k)) -
                 9 * (scalar_curvature(np.profile, t + 2 * k) -
                      scalar_curvature(np.profile, t - 2 * k)) +
                 (scalar_curvature(np.profile, t + 3 * k) -
                  scalar_curvature(np.profile, t - 3 * k))) /
                (60 * k);
      real g = scalar_curvature_gradient(np.profile, t);
      EXPECT_LE(std::fabs(g - fd), 1e-6L * std::max<real>(std::fabs(fd), 1e-12L))
          << np.profile.name() << " t=" << t;
    }
  }
}

TEST(ScalarCurvature, EvenProfileHasCriticalPointAtZero) {
  EXPECT_NEAR(scalar_curvature_gradient(MetricProfile::even_bump(1, 5), 0), 0, 1e-15);
  EXPECT_NEAR(scalar_curvature_gradient(MetricProfile::even_bump(-0.5L, 5), 0), 0, 1e-15);
}

TEST(ScalarCurvature, OutsideDomainThrows) {
  auto p = MetricProfile::one_ended_exp(1);
  try {
    scalar_curvature(p, -1);
    FAIL() << "expected a domain error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::domain);
  }
  EXPECT_THROW(scalar_curvature_gradient(MetricProfile::even_bump(1, 5), 6), Error);
}

TEST(ScalarCurvature, ParityOfEvenProfiles) {
  for (real beta : {1.0L, -0.5L}) {
    auto p = MetricProfile::even_bump(beta, 5);
    for (real t : {0.1L, 0.7L, 1.3L, 2.9L}) {
      EXPECT_NEAR(scalar_curvature(p, t), scalar_curvature(p, -t), 1e-10);
      EXPECT_NEAR(scalar_curvature_gradient(p, t), -scalar_curvature_gradient(p, -t), 1e-10);
    }
  }
}

// The tensor oracle on a 50-point grid for every built-in profile.
TEST(CurvatureOracle, FiftyPointGridAgreement) {
  for (auto& np : builtin_profiles()) {
    oracle::TensorOracle o{np.A};
    for (int i = 0; i < 50; ++i) {
      real t = np.lo + (np.hi - np.lo) * i / 49;
      auto ref = o.frame(t);
      CurvatureData cd = curvature_frame_data(np.profile, t);
      real S = scalar_curvature(np.profile, t);
      real dS = scalar_curvature_gradient(np.profile, t);
      real S_ref = ref.S, dS_ref = o.scalar_gradient(t);
      const std::string where = np.profile.name() + " t=" + std::to_string(double(t));
      EXPECT_LE(std::fabs(S - S_ref), 1e-6L * std::fabs(S_ref) + 1e-14L) << where;
      EXPECT_LE(std::fabs(cd.S - S_ref), 1e-6L * std::fabs(S_ref) + 1e-14L) << where;
      EXPECT_LE(std::fabs(dS - dS_ref), 1e-6L * std::fabs(dS_ref) + 1e-12L) << where;
      EXPECT_LE(std::fabs(cd.dS - dS_ref), 1e-6L * std::fabs(dS_ref) + 1e-12L) << where;

      real rm_scale = max_abs([&](auto f) {
        for (auto& a : ref.Rm) for (auto& b : a) for (auto& c : b) for (real v : c) f(v);
      });
      real drm_scale = max_abs([&](auto f) {
        for (auto& m : ref.dRm) for (auto& a : m) for (auto& b : a) for (auto& c : b) for (real v : c) f(v);
      });
      real ric_scale = max_abs([&](auto f) {
        for (auto& a : ref.Ric) for (real v : a) f(v);
      });
      real dric_scale = max_abs([&](auto f) {
        for (auto& m : ref.dRic) for (auto& a : m) for (real v : a) f(v);
      });
      real worst_rm = 0, worst_drm = 0, worst_ric = 0, worst_dric = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          for (int m = 0; m < 3; ++m)
            worst_dric = std::max(worst_dric, std::fabs(cd.dRic[a][b][m] - ref.dRic[m][a][b]));
          worst_ric = std::max(worst_ric, std::fabs(cd.Ric[a][b] - ref.Ric[a][b]));
          for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) {
              worst_rm = std::max(worst_rm, std::fabs(cd.Rm[a][b][c][d] - ref.Rm[a][b][c][d]));
              for (int m = 0; m < 3; ++m)
                worst_drm = std::max(
                    worst_drm, std::fabs(cd.dRm[a][b][c][d][m] - ref.dRm[m][a][b][c][d]));
            }
        }
      EXPECT_LE(worst_rm, 1e-6L * rm_scale + 1e-14L) << where;
      EXPECT_LE(worst_ric, 1e-6L * ric_scale + 1e-14L) << where;
      EXPECT_LE(worst_drm, 1e-6L * drm_scale + 1e-12L) << where;
      EXPECT_LE(worst_dric, 1e-6L * dric_scale + 1e-12L) << where;
    }
  }
}

TEST(CurvatureFrame, FlatIsZero) {
  CurvatureData cd = curvature_frame_data(MetricProfile::flat(), 0.3L);
  for (auto& a : cd.Rm) for (auto& b : a) for (auto& c : b) for (real v : c) EXPECT_EQ(v, 0);
  for (auto& a : cd.Ric) for (real v : a) EXPECT_EQ(v, 0);
  EXPECT_EQ(cd.S, 0);
}

TEST(CurvatureFrame, ExponentialProfileAtHalf) {
  // Frozen from the grid tensor oracle.
  CurvatureData cd = curvature_frame_data(MetricProfile::one_ended_exp(1), 0.5L);
  EXPECT_NEAR(cd.Rm[0][1][0][1], 0.153136095249798L, 1e-10);
  EXPECT_NEAR(cd.Rm[1][2][1][2], 0.035634239149100L, 1e-10);
  EXPECT_NEAR(cd.Ric[0][0], -0.306272190499596L, 1e-10);
  EXPECT_NEAR(cd.Ric[1][1], -0.188770334398871L, 1e-10);
  EXPECT_NEAR(cd.S, -0.683812859297339L, 1e-10);
  EXPECT_NEAR(cd.dRm[0][1][0][1][0], -0.073140126766317L, 1e-9);
  EXPECT_NEAR(cd.dRic[0][0][0], 0.146280253532558L, 1e-9);
  EXPECT_NEAR(cd.dRic[0][1][1], 0.022180864668634L, 1e-9);
}

TEST(CurvatureFrame, SymmetriesAndContractions) {
  for (auto& np : builtin_profiles()) {
    for (real t : {np.lo, (np.lo + np.hi) / 3, np.hi}) {
      CurvatureData cd = curvature_frame_data(np.profile, t);
      real trace = 0;
      for (int a = 0; a < 3; ++a) {
        trace += cd.Ric[a][a];
        for (int b = 0; b < 3; ++b) {
          real ric = 0;
          for (int i = 0; i < 3; ++i) ric += cd.Rm[i][a][b][i];
          EXPECT_NEAR(ric, cd.Ric[a][b], 1e-8);
          for (int c = 0; c < 3; ++c)
            for (int d = 0; d < 3; ++d) {
              real v = cd.Rm[a][b][c][d];
              EXPECT_NEAR(v, -cd.Rm[b][a][c][d], 1e-10);
              EXPECT_NEAR(v, -cd.Rm[a][b][d][c], 1e-10);
              EXPECT_NEAR(v, cd.Rm[c][d][a][b], 1e-10);
              EXPECT_NEAR(v + cd.Rm[b][c][a][d] + cd.Rm[c][a][b][d], 0, 1e-10);
            }
        }
      }
      EXPECT_NEAR(trace, scalar_curvature(np.profile, t), 1e-8);
    }
  }
}

// Rotating the transverse legs of the frame leaves every component unchanged.
TEST(CurvatureFrame, AxialSymmetry) {
  CurvatureData cd = curvature_frame_data(MetricProfile::even_bump(1, 5), 0.8L);
  const real a = 0.37L, c = std::cos(a), s = std::sin(a);
  real R[3][3] = {{1, 0, 0}, {0, c, -s}, {0, s, c}};
  real worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          real v = 0, dv = 0;
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q)
              for (int u = 0; u < 3; ++u)
                for (int w = 0; w < 3; ++w) {
                  real f = R[p][i] * R[q][j] * R[u][k] * R[w][l];
                  v += f * cd.Rm[p][q][u][w];
                  dv += f * cd.dRm[p][q][u][w][0];
                }
          worst = std::max(worst, std::fabs(v - cd.Rm[i][j][k][l]));
          worst = std::max(worst, std::fabs(dv - cd.dRm[i][j][k][l][0]));
        }
  EXPECT_LE(worst, 1e-10);
}

TEST(Profiles, ExpressionMatchesBuiltin) {
  auto expr = MetricProfile::from_expression("1 + exp(-t^2)", Parity::even,
                                             Regime::finite_length, -5, 5);
  auto builtin = MetricProfile::even_bump(1, 5);
  for (real t : {-2.0L, 0.0L, 0.4L, 1.7L}) {
    auto a = expr.derivs(t), b = builtin.derivs(t);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(a[k], b[k], 1e-12 * (1 + std::fabs(b[k])));
  }
}

TEST(Profiles, FiniteDifferenceDerivatives) {
  auto f = MetricProfile::from_function([](real t) { return 1 + std::exp(-t); }, "fd",
                                        Parity::none, Regime::one_ended, 0, 50);
  auto b = MetricProfile::one_ended_exp(1);
  for (real t : {0.5L, 1.0L, 3.0L}) {
    auto x = f.derivs(t), y = b.derivs(t);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(x[k], y[k], 1e-9 * (1 + std::fabs(y[k]))) << k;
  }
}

TEST(Profiles, RegimeChecks) {
  EXPECT_TRUE(check_regime(MetricProfile::one_ended_exp(1)).ok);
  EXPECT_TRUE(check_regime(MetricProfile::even_bump(1, 5)).ok);
  // S has a minimum at the centre: not the non-degenerate maximum the
  // finite regime asks for.
  EXPECT_FALSE(check_regime(MetricProfile::even_bump(-0.5L, 5)).ok);
  // S positive and decreasing on the ray.
  EXPECT_FALSE(check_regime(MetricProfile::one_ended_exp(-0.5L)).ok);
}

TEST(Profiles, InvalidProfilesRejected) {
  EXPECT_THROW(MetricProfile::from_expression("1 + t", Parity::even, Regime::finite_length, -1, 1),
               Error);
  EXPECT_THROW(MetricProfile::from_expression("t - 2", Parity::none, Regime::finite_length, 0, 1),
               Error);
  EXPECT_THROW(MetricProfile::from_expression("1 + (t", Parity::none, Regime::finite_length, 0, 1),
               Error);
}
