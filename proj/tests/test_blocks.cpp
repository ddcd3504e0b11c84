#include <gtest/gtest.h>

#include <cmath>

#include "cmc/blocks.hpp"
#include "cmc/revgeom.hpp"
#include "oracles.hpp"

using namespace cmc;

namespace {

// Legendre coefficients of the library's G by quadrature in theta, on
// uniform panels with geometric refinement toward both poles.
std::vector<real> project_green(const GreenSolution& g, int lmax) {
  std::vector<real> gx, gw;
  gauss_legendre(16, gx, gw);
  std::vector<real> edges{0};
  for (int k = 30; k >= 1; --k) edges.push_back(std::ldexp(kPi / 400, -k));
  for (int i = 1; i < 400; ++i) edges.push_back(kPi * i / 400);
  for (int k = 1; k <= 30; ++k) edges.push_back(kPi - std::ldexp(kPi / 400, -k));
  edges.push_back(kPi);
  std::sort(edges.begin(), edges.end());
  std::vector<real> c(lmax + 1, 0);
  for (size_t e = 0; e + 1 < edges.size(); ++e) {
    real m = (edges[e] + edges[e + 1]) / 2, h = (edges[e + 1] - edges[e]) / 2;
    for (size_t k = 0; k < gx.size(); ++k) {
      real th = m + h * gx[k];
      real x = std::cos(th);
      real f = g.value(th) * std::sin(th) * h * gw[k];
      real p0 = 1, p1 = x;
      c[0] += f;
      for (int l = 1; l <= lmax; ++l) {
        c[l] += f * p1;
        real p2 = ((2 * l + 1) * x * p1 - l * p0) / (l + 1);
        p0 = p1;
        p1 = p2;
      }
    }
  }
  for (int l = 0; l <= lmax; ++l) c[l] *= (2 * l + 1) / 2.0L;
  return c;
}

}  // namespace

TEST(Green, SpectralCoefficientsUpTo200) {
  for (auto [ep, em] : {std::pair{1.0L, 0.0L}, {0.3L, 0.7L}, {0.5L, 0.5L}}) {
    GreenSolution g = solve_green(ep, em);
    auto c = project_green(g, 200);
    for (int l = 0; l <= 200; ++l) {
      real ref = oracle::green_coefficient(ep, em, l);
      EXPECT_LE(std::fabs(c[l] - ref), 1e-6L * std::fabs(ref) + 1e-14L) << "l=" << l;
    }
  }
}

TEST(Green, SpectralValues) {
  for (auto [ep, em] : {std::pair{1.0L, 0.0L}, {0.3L, 0.7L}}) {
    GreenSolution g = solve_green(ep, em);
    for (real th : {0.01L, 0.2L, 1.0L, 1.9L, 3.1L}) {
      real ref = oracle::green_value(ep, em, th);
      EXPECT_NEAR(g.value(th), ref, 1e-6L * (1 + std::fabs(ref))) << th;
    }
  }
}

TEST(Green, PoleConstantsAgainstSpectralOracle) {
  ExpansionConstants e = expansion_constants(solve_green(1, 0));
  EXPECT_TRUE(e.has_plus);
  EXPECT_FALSE(e.has_minus);
  EXPECT_NEAR(e.C_plus, 1 / (2 * kPi), 1e-15);
  EXPECT_NEAR(e.c_plus, oracle::green_pole_constant_north(), 1e-6);
}

TEST(Green, ZeroSourcesGiveZero) {
  GreenSolution g = solve_green(0, 0);
  EXPECT_EQ(g.A, 0);
  for (real th : {0.3L, 1.5L, 2.8L}) EXPECT_EQ(g.value(th), 0);
  EXPECT_THROW(solve_green(-1e-3L, 0), Error);
}

TEST(Green, SymmetricSourcesNeedNoKernelTerm) {
  for (real e : {1e-3L, 1e-4L}) {
    GreenSolution g = solve_green(e, e);
    EXPECT_NEAR(g.A, 0, 1e-12);
    ExpansionConstants k = expansion_constants(g);
    EXPECT_NEAR(k.c_plus, k.c_minus, 1e-12);
    EXPECT_NEAR(k.C_plus, k.C_minus, 1e-15);
  }
}

TEST(Green, SolvabilityAndKernelBound) {
  for (auto [ep, em] : {std::pair{1e-3L, 0.0L}, {2e-3L, 5e-4L}}) {
    GreenSolution g = solve_green(ep, em);
    // <e+ delta_N + e- delta_S + A J, J> = 0 with J = sqrt(3/4pi) cos(theta)
    real n = jacobi_sphere_norm();
    EXPECT_NEAR(ep * n - em * n + g.A, 0, 1e-12);
    EXPECT_LE(std::fabs(g.A), std::max(ep, em));
  }
}

TEST(Green, ReciprocityAndLinearity) {
  GreenSolution a = solve_green(0.3L, 0.8L), b = solve_green(0.8L, 0.3L);
  GreenSolution u = solve_green(1, 0), v = solve_green(0, 1);
  for (real th : {0.05L, 0.7L, 1.6L, 2.9L}) {
    EXPECT_NEAR(a.value(th), b.value(kPi - th), 1e-10);
    EXPECT_NEAR(a.value(th), 0.3L * u.value(th) + 0.8L * v.value(th), 1e-10);
  }
}

TEST(Green, OrthogonalToTranslationField) {
  GreenSolution g = solve_green(1, 0.2L);
  auto c = project_green(g, 1);
  EXPECT_NEAR(c[1], 0, 1e-12);
}

TEST(Green, OdeResidualAwayFromPoles) {
  GreenSolution g = solve_green(0.7L, 0.2L);
  for (real th : {0.1L, 0.5L, 1.2L, 2.0L, 3.0L}) {
    auto G = g.eval<2>(Taylor<real, 2>::variable(th));
    real lap = 2 * G.c[2] + std::cos(th) / std::sin(th) * G.c[1];
    real rhs = g.A * jacobi_sphere(th);
    EXPECT_NEAR(lap + 2 * G.c[0], rhs, 1e-8) << th;
  }
}

// G - e (c + C log sin(theta)) near the north pole is O(e theta^2 |log theta|),
// with the same constant at every strength.
TEST(Green, NearPoleExpansion) {
  std::vector<real> consts;
  for (real e : {1e-3L, 1e-4L}) {
    GreenSolution g = solve_green(e, 0);
    ExpansionConstants k = expansion_constants(g);
    real worst = 0;
    for (real th : {1e-1L, 3e-2L, 1e-2L, 3e-3L, 1e-3L}) {
      real rem = g.value(th) - e * (k.c_plus + k.C_plus * std::log(std::sin(th)));
      worst = std::max(worst, std::fabs(rem) / (e * th * th * std::fabs(std::log(th))));
    }
    consts.push_back(worst);
    EXPECT_NEAR(k.C_plus, 1 / (2 * kPi), 1e-15);
  }
  EXPECT_LT(consts[0], 10);
  EXPECT_NEAR(consts[0] / consts[1], 1, 1e-6);
}

TEST(Catenoid, GraphIdentities) {
  const real e = 1e-3L;
  EXPECT_EQ(catenoid_graph(e, 0, 1, e), 0);
  for (real x : {2e-3L, 0.01L, 0.3L})
    EXPECT_NEAR(catenoid_graph(e, 0.4L, 1, x) - catenoid_graph(e, 0.4L, -1, x),
                2 * e * std::acosh(x / e), 1e-15);
  EXPECT_THROW(catenoid_graph(e, 0, 1, 0.5L * e), Error);
}

TEST(Catenoid, LogarithmicAsymptotics) {
  const real e = 1e-3L;
  for (real x : {std::pow(e, 0.75L), 2 * e, 5 * e, 0.1L}) {
    real lead = e * (std::log(2.0L) - std::log(e)) + e * std::log(x);
    EXPECT_LE(std::fabs(catenoid_graph(e, 0, 1, x) - lead), 2 * e * e * e / (x * x)) << x;
  }
}

TEST(Jacobi, SphereFieldNormalized) {
  // 2 pi int J^2 sin(theta) d theta = 1
  std::vector<real> x, w;
  gauss_legendre(24, x, w);
  real s = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    real th = kPi / 2 * (x[i] + 1);
    s += kPi / 2 * w[i] * 2 * kPi * std::pow(jacobi_sphere(th), 2) * std::sin(th);
  }
  EXPECT_NEAR(s, 1, 1e-14);
}

// The library's neck field is the axial translation field sqrt(x^2 - e^2)/x.
TEST(Jacobi, NeckFieldValues) {
  const real e = 1e-3L;
  EXPECT_NEAR(jacobi_neck(e, e * std::sqrt(2.0L)), 1 / std::sqrt(2.0L), 1e-15);
  EXPECT_NEAR(jacobi_neck(e, 1e3L), 1, 1e-12);
  EXPECT_NEAR(jacobi_neck(e, -1e3L), -1, 1e-12);
  EXPECT_THROW(jacobi_neck(e, 0.5L * e), Error);
}

TEST(Delaunay, MatchesIntegratedOrbit) {
  for (real eps : {0.2L, 0.05L, 1e-3L, 1e-4L}) {
    oracle::Orbit orb = oracle::integrate_unduloid(eps);
    DelaunayEnd d = delaunay_from_neck(eps);
    EXPECT_NEAR(d.T, orb.period, 1e-9) << eps;
    EXPECT_NEAR(d.max_rho(), orb.max_rho, 1e-9) << eps;
    // radius at the same axial position; x(phi) is increasing
    for (const auto& p : orb.points) {
      real a = 0, b = 2 * kPi;
      for (int it = 0; it < 100; ++it) {
        real m = (a + b) / 2;
        (d.axial(m) < p.x ? a : b) = m;
      }
      EXPECT_NEAR(d.rho((a + b) / 2), p.rho, 1e-9) << eps << " x=" << p.x;
    }
  }
}

TEST(Delaunay, FirstIntegralConserved) {
  for (real eps : {0.2L, 1e-3L, 1e-5L}) {
    // along the integrated orbit
    oracle::Orbit orb = oracle::integrate_unduloid(eps);
    real c = eps - eps * eps;
    for (const auto& p : orb.points) EXPECT_NEAR(oracle::unduloid_first_integral(p), c, 1e-8);
    // along the library profile
    DelaunayEnd d = delaunay_from_neck(eps);
    for (int i = 0; i <= 400; ++i) {
      real phi = 2 * kPi * i / 400;
      real rho = d.rho(phi), slope = d.h * std::sin(phi) / d.speed(phi);
      EXPECT_NEAR(rho / std::sqrt(1 + slope * slope) - rho * rho, c, 1e-8);
    }
  }
}

TEST(Delaunay, UnitSphereHasZeroFirstIntegral) {
  for (real x : {-0.9L, -0.3L, 0.0L, 0.6L}) {
    real rho = std::sqrt(1 - x * x), slope = -x / rho;
    EXPECT_NEAR(rho / std::sqrt(1 + slope * slope) - rho * rho, 0, 1e-15);
  }
}

TEST(Delaunay, DegeneratesToTangentSpheres) {
  DelaunayEnd d = delaunay_from_neck(1e-4L);
  EXPECT_NEAR(d.max_rho(), 1, 1e-3);
  EXPECT_NEAR(d.T, 2, 0.01);
  EXPECT_GT(d.T, 2);
}

TEST(Delaunay, SolveByPeriod) {
  real prev = 0;
  for (real T : {2.001L, 2.01L, 2.1L, 2.5L, 3.0L}) {
    DelaunayEnd d = delaunay_solve(T);
    EXPECT_NEAR(d.T, T, 1e-12);
    EXPECT_NEAR(delaunay_period(d.eps), T, 1e-12);
    EXPECT_GT(d.eps, prev);
    prev = d.eps;
  }
  for (real eps : {1e-6L, 1e-3L, 0.1L}) EXPECT_NEAR(delaunay_solve(delaunay_period(eps)).eps, eps, 1e-12 * (1 + 1 / eps) * eps);
  try {
    delaunay_solve(2);
    FAIL() << "expected no-solution";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_solution);
  }
  EXPECT_THROW(delaunay_solve(3.2L), Error);
}

TEST(Delaunay, AxialCoordinateIsOddAndPeriodic) {
  DelaunayEnd d = delaunay_from_neck(0.01L);
  for (real phi : {0.3L, 2.0L, 4.0L}) {
    EXPECT_NEAR(d.axial(-phi), -d.axial(phi), 1e-15);
    EXPECT_NEAR(d.axial(phi + 2 * kPi), d.axial(phi) + d.T, 1e-13);
  }
  EXPECT_NEAR(d.axial(kPi), d.T / 2, 1e-15);
}
