#include <gtest/gtest.h>

#include <cmath>

#include "himc/conformal.hpp"
#include "himc/corpus.hpp"
#include "support.hpp"

using namespace himc;
using himc::test::dist;

namespace {

GridSpec ref_grid(double h = 0.01) { return corpus::square_grid(-1, -1, 2, h); }

double abs_h_deviation(const SphereData& sd, double target) {
  return interior_stats(map_field(sd.H, [target](const Quaternion& q) {
                          return Quaternion(norm(q) - target);
                        }),
                        kMarginH, &sd.mask)
      .max;
}

}  // namespace

TEST(Normals, PlaneExamples) {
  const auto g = corpus::square_grid(0, 0, 1, 0.1);
  const auto a = normals(sample_surface(g, [](double x, double y) { return Quaternion(x, y, 0, 0); }));
  const auto b = normals(corpus::plane(g));
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_LT(dist(a.N[k], kI), 1e-12);
    EXPECT_LT(dist(a.R[k], -kI), 1e-12);
    EXPECT_LT(dist(b.N[k], kK), 1e-12);
    EXPECT_LT(dist(b.R[k], kK), 1e-12);
  }
}

TEST(Normals, SphereHasEqualNormals) {
  const auto nd = normals(corpus::sphere(ref_grid()));
  EXPECT_LE(interior_stats(nd.N - nd.R, 0).max, 1e-10);
  EXPECT_LE(interior_stats(map_field(nd.N, [](const Quaternion& q) { return Quaternion(norm(q) - 1); }), 0)
                .max,
            1e-12);
}

TEST(Normals, AllBranchThrows) {
  const auto g = corpus::square_grid(0, 0, 1, 0.1);
  try {
    (void)normals(sample_surface(g, [](double, double) { return kJ; }));
    FAIL() << "no throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllBranch);
  }
}

TEST(Conformality, Examples) {
  const auto g = ref_grid();
  EXPECT_LE(conformality_residual(corpus::plane(g)).max(), 1e-12);
  const auto sq = conformality_residual(
      sample_surface(g, [](double x, double y) { return Quaternion(0, x, 2 * y, 0); }));
  EXPECT_NEAR(sq.metric.max, 3.0, 1e-9);
  const double e1 = conformality_residual(corpus::sphere(ref_grid(0.02))).max();
  const double e2 = conformality_residual(corpus::sphere(ref_grid(0.01))).max();
  EXPECT_LE(e2, 1e-3);
  EXPECT_NEAR(test::order(e1, e2), 2.0, 0.5);
}

TEST(MeanCurvature, Oracles) {
  const auto g = ref_grid();
  const auto p = mean_curvature(corpus::plane(g));
  EXPECT_LE(interior_stats(p.H, 0).max, 1e-12);
  EXPECT_LE(abs_h_deviation(mean_curvature(corpus::cylinder(g)), 0.5), 1e-3);
  EXPECT_LE(abs_h_deviation(mean_curvature(corpus::sphere(g)), 1.0), 1e-3);
  const double e1 = abs_h_deviation(mean_curvature(corpus::sphere(ref_grid(0.02))), 1.0);
  const double e2 = abs_h_deviation(mean_curvature(corpus::sphere(ref_grid(0.01))), 1.0);
  EXPECT_NEAR(test::order(e1, e2), 2.0, 0.5);
}

TEST(MeanCurvature, FrameInvariants) {
  for (const auto& s : {corpus::sphere(ref_grid()), corpus::cylinder(ref_grid()),
                        corpus::clifford_torus(ref_grid())}) {
    const auto sd = mean_curvature(s);
    for (const auto& r : sphere_invariants(s, sd)) EXPECT_LE(r.max, 5e-3) << r.name;
  }
}

TEST(HopfField, PlaneAndSphere) {
  const auto g = ref_grid();
  const auto pl = corpus::plane(g);
  EXPECT_LE(interior_stats(hopf_w(pl, mean_curvature(pl)), 0).max, 1e-12);
  const auto sp = corpus::sphere(g);
  EXPECT_LE(interior_stats(hopf_w(sp, mean_curvature(sp)), kMarginW).max, 5e-3);
}

TEST(Eta, SecondOrderOnCorpus) {
  auto eta = [](double h, int which) {
    const auto g = ref_grid(h);
    const SurfaceGrid s = which == 0 ? corpus::sphere(g)
                          : which == 1 ? corpus::cone(g)
                                       : corpus::clifford_torus(g);
    return eta_residual(s, mean_curvature(s)).max;
  };
  for (int w = 0; w < 3; ++w) {
    const double a = eta(0.02, w), b = eta(0.01, w);
    EXPECT_LE(b, 5e-3) << w;
    if (b > 1e-10) {
      EXPECT_NEAR(test::order(a, b), 2.0, 0.5) << w;
    }
  }
  const auto pl = corpus::plane(ref_grid());
  EXPECT_LE(eta_residual(pl, mean_curvature(pl)).max, 1e-12);
}

TEST(Ghimc, Oracles) {
  const auto g = ref_grid();
  const auto cy = corpus::cylinder(g);
  EXPECT_LE(ghimc_residual(cy, mean_curvature(cy)).max, 1e-6);
  const auto sp = corpus::sphere(g);
  EXPECT_LE(ghimc_residual(sp, mean_curvature(sp)).max, 1e-2);
  const auto co = corpus::cone(g);
  EXPECT_GT(ghimc_residual(co, mean_curvature(co)).max, 0.1);
  const auto pl = corpus::plane(g);
  try {
    (void)ghimc_residual(pl, mean_curvature(pl));
    FAIL() << "no throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MinimalPoint);
  }
}

TEST(Willmore, SphereAndCylinder) {
  const auto g = ref_grid();
  const auto sp = corpus::sphere(g);
  const auto ws = willmore_diagnostics(sp, mean_curvature(sp));
  EXPECT_LE(ws.energy, 1e-3);
  EXPECT_LE(ws.dw.max, 5e-3);
  const auto cy = corpus::cylinder(g);
  // Density 1/16 per unit area over the margin-2 interior.
  const double side = 2.0 - 4 * 0.01;
  EXPECT_NEAR(willmore_diagnostics(cy, mean_curvature(cy)).energy, side * side / 16.0 / M_PI, 1e-4);
  const auto pl = corpus::plane(g);
  EXPECT_LE(willmore_diagnostics(pl, mean_curvature(pl)).energy, 1e-12);
}

TEST(Willmore, GhimcRevolutionSurfaceIsNotWillmore) {
  const auto s = corpus::piii_surface(corpus::reference_phi(0), 0.01, 41);
  EXPECT_GT(willmore_diagnostics(s, mean_curvature(s)).dw.max, 1e-2);
}

TEST(Cond, IdentityAndClosedness) {
  for (const auto& s : {corpus::sphere(ref_grid()), corpus::cylinder(ref_grid()), corpus::cone(ref_grid())}) {
    const auto sd = mean_curvature(s);
    const auto c0 = cond_characterization(s, sd, Quaternion{});
    EXPECT_LE(c0.identity.max, 5e-3);
    const auto c1 = cond_characterization(s, sd, kOne);
    EXPECT_LE(c1.closed.max, 5e-3);
  }
  const auto sp = corpus::sphere(ref_grid());
  EXPECT_LE(cond_characterization(sp, mean_curvature(sp), Quaternion{}).closed.max, 5e-3);
  const auto co = corpus::cone(ref_grid());
  EXPECT_GT(cond_characterization(co, mean_curvature(co), Quaternion{}).closed.max, 0.1);
}

TEST(InverseH, RevolutionSurfaceIsLinearInX) {
  const auto s = corpus::piii_surface(corpus::reference_phi(0), 0.01, 41);
  const auto sd = mean_curvature(s);
  const auto fit = inverse_h_linear_fit(sd, default_hmin(s.grid()));
  EXPECT_NEAR(std::abs(fit.slope), 1.0, 1e-3);
  EXPECT_LE(fit.max_deviation, 1e-3);
  const auto rh = detect_real_h(sd);
  EXPECT_TRUE(rh.real_valued);
  EXPECT_LE(rh.normal_gap, 1e-6);
  EXPECT_FALSE(detect_real_h(mean_curvature(corpus::clifford_torus(ref_grid()))).normal_gap < 1e-2);
}
