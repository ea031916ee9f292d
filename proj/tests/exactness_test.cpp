#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sutured/exactness.hpp"

namespace sutured {
namespace {

using std::numbers::pi;

TorusModel make(int n, double mu = 0.25) {
  ModelParams p;
  p.n = n;
  p.mu = mu;
  return TorusModel(p);
}

// Wide saddle chart so that chart coordinates (1, 2) are inside it.
TorusModel wide_saddle(double eps) {
  ModelParams p;
  p.n = 2;
  p.c = 2.0;
  p.r_sing = 10.0;
  p.R = 20.0;
  p.R_star = 40.0;
  p.eps = eps;
  p.a = 1.0;
  return TorusModel(p);
}

TEST(ExactnessTest, BetaOfXhEqualsH) {
  const TorusModel outer = make(3, 1.0);
  auto rep = verify_beta_XH_identity(outer, {polar_point(3.0, 0.7)});
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.max_defect, 1e-12);

  const TorusModel sad = wide_saddle(0.5);
  rep = verify_beta_XH_identity(sad, {sad.from_chart(1, Vec2(1, 2)), sad.chart_center(1)});
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.samples[1].defect, 0.0);  // both sides vanish at the chart origin
}

TEST(ExactnessTest, BetaOfXhSmoothingSamplesExcluded) {
  const TorusModel m = make(3);
  const auto rep = verify_beta_XH_identity(m, {Vec2(0, 0.9), polar_point(2, 1)});
  EXPECT_FALSE(rep.samples[0].included);
  EXPECT_TRUE(rep.samples[1].included);
  EXPECT_TRUE(rep.pass);
}

TEST(ExactnessTest, ExactnessFunctionVanishesOnSaddlesAndS) {
  for (int n = 2; n <= 5; ++n) {
    const TorusModel m = make(n);
    for (const auto& p : saddle_points(m)) {
      EXPECT_EQ(exactness_function(m, p, 0.7), 0.0);
      EXPECT_EQ(exactness_function(m, p, 1.0), 0.0);
    }
    const Vec2 q = polar_point(8.0, 0.2);
    ASSERT_TRUE(chart_trajectory(m, q).in_invariant_set);
    EXPECT_LT(std::abs(exactness_function(m, q, 1.0)), m.tol().quad);
    EXPECT_EQ(exactness_function(m, q, 0.0), 0.0);
  }
}

TEST(ExactnessTest, StrictPolicyRefusesSmoothingChart) {
  const TorusModel m = make(3);
  // Starts outside D(r_sing) on the inward prong ray, reaches the smoothing chart.
  const Vec2 p = polar_point(1.2, pi / 2);
  ASSERT_FALSE(chart_trajectory(m, p).in_invariant_set);
  EXPECT_THROW(exactness_function(m, p, 1.0), LeftChartDomainError);
  EXPECT_THROW(exactness_function(m, Vec2(0, 0.9), 1.0), Error);
  // The proxy policy computes a value, generally nonzero.
  EXPECT_NO_THROW(exactness_function(m, p, 1.0, BetaPolicy::AllowProxy));
  EXPECT_GT(std::abs(exactness_function(m, Vec2(0.3, 0.7), 1.0, BetaPolicy::AllowProxy)), 1e-4);
}

TEST(ExactnessTest, PullbackInvarianceOnCircleAndVk) {
  const TorusModel m = make(3);
  std::vector<Vec2> samples;
  const double r = 0.5 * (m.R() + m.R_star());
  for (int i = 0; i < 24; ++i) samples.push_back(polar_point(r, 2 * pi * i / 24));
  for (int k = 1; k < m.n(); ++k)
    for (const auto& p : sample_vk(m, k, 6, 100 + k)) samples.push_back(p);
  const auto reps = verify_exact_symplectomorphism(m, samples);
  EXPECT_EQ(reps.pullback.included_count(), samples.size());
  EXPECT_TRUE(reps.pullback.pass) << reps.pullback.max_defect;
  EXPECT_TRUE(reps.exactness.pass) << reps.exactness.max_defect;
}

TEST(ExactnessTest, ExitingSampleExcludedFromInvarianceButInDfCheck) {
  const TorusModel m = make(3);
  const std::vector<Vec2> samples = {polar_point(1.2, pi / 2), Vec2(0.05, 0.85), polar_point(6, 0.3)};
  const auto reps = verify_exact_symplectomorphism(m, samples);
  EXPECT_FALSE(reps.pullback.samples[0].included);
  EXPECT_FALSE(reps.pullback.samples[1].included);
  EXPECT_TRUE(reps.pullback.samples[2].included);
  EXPECT_TRUE(reps.exactness.samples[0].included);
  EXPECT_TRUE(reps.exactness.samples[1].included);
  EXPECT_TRUE(reps.exactness.pass) << reps.exactness.max_defect;
  // In the smoothing chart phi^* beta - beta is genuinely nonzero.
  EXPECT_GT(reps.pullback.samples[1].defect, 1e-3);
}

TEST(ExactnessTest, OuterFlowIsEquivariant) {
  for (int n = 2; n <= 5; ++n) {
    const TorusModel m = make(n);
    const auto rep = verify_symmetry(m, sample_annulus(1.5, 10.0, 20, 5));
    EXPECT_TRUE(rep.pass) << rep.max_defect;
    // Prong ray: the image stays on the (rotated) ray.
    const double th = 3 * pi / (2 * n);
    const Vec2 img = flow(ChartVectorField(m, {RegionKind::OuterExact}), polar_point(8, th), 1.0).endpoint;
    EXPECT_NEAR(std::remainder(angle(img) - th, 2 * pi), 0.0, 1e-9);
    EXPECT_EQ(verify_symmetry(m, {polar_point(3, 0.1)}, 0.0).max_defect, 0.0);
  }
}

}  // namespace
}  // namespace sutured
