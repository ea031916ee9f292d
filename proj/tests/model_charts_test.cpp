#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sutured/model.hpp"

namespace sutured {
namespace {

using std::numbers::pi;

TorusModel make(int n, double mu = 1.0) {
  ModelParams p;
  p.n = n;
  p.mu = mu;
  return TorusModel(p);
}

TEST(ModelChartsTest, OuterHamiltonianValues) {
  EXPECT_NEAR(eval_H(make(3, 1.0), polar_point(2, 0)), 4.0, 1e-14);
  EXPECT_NEAR(eval_H(make(3, 2.0), polar_point(2, pi / 3)), -8.0, 1e-13);
}

TEST(ModelChartsTest, SaddleChartHamiltonian) {
  ModelParams p;
  p.a = 1.0;
  const TorusModel m(p);
  const Vec2 pt = m.from_chart(1, Vec2(0.1, 0.2));
  EXPECT_EQ(classify_region(m, pt), (Region{RegionKind::SaddleChart, 1}));
  EXPECT_NEAR(eval_H(m, pt), 0.02, 1e-15);
}

TEST(ModelChartsTest, BetaCoefficients) {
  const TorusModel m = make(3);
  const Covector b1 = eval_beta(m, Vec2(1, 0));
  EXPECT_DOUBLE_EQ(b1.p, 0.0);
  EXPECT_DOUBLE_EQ(b1.q, 0.5);
  const Covector b2 = eval_beta(m, Vec2(0, 2));
  EXPECT_DOUBLE_EQ(b2.p, -1.0);
  EXPECT_DOUBLE_EQ(b2.q, 0.0);
  const Covector b3 = unit_liouville(Vec2(1, 1));
  EXPECT_DOUBLE_EQ(b3.p, -0.5);
  EXPECT_DOUBLE_EQ(b3.q, 0.5);
}

TEST(ModelChartsTest, BetaUnavailableInSmoothingChart) {
  const TorusModel m = make(3);
  const Vec2 p(0.0, 0.9);  // inside D(r_sing), outside both saddle squares
  ASSERT_EQ(classify_region(m, p).kind, RegionKind::PolySmoothing);
  try {
    eval_beta(m, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoFormulaInSmoothingChart);
  }
}

TEST(ModelChartsTest, SaddlePointsClosedForm) {
  ModelParams p;
  p.n = 2;
  p.c = 2.0;
  p.r_sing = 2.0;
  p.R = 8;
  p.R_star = 32;
  auto s = saddle_points(TorusModel(p));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].x(), 1.0, 1e-15);
  EXPECT_NEAR(s[0].y(), 0.0, 1e-15);

  p.n = 3;
  p.c = 3.0;
  s = saddle_points(TorusModel(p));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s[0].x(), 1.0, 1e-15);
  EXPECT_NEAR(s[1].x(), -1.0, 1e-15);
  EXPECT_NEAR(s[1].y(), 0.0, 1e-15);
}

TEST(ModelChartsTest, SaddleCountAndNondegeneracy) {
  for (int n = 2; n <= 8; ++n) {
    const TorusModel m = make(n);
    const auto s = saddle_points(m);
    ASSERT_EQ(s.size(), static_cast<std::size_t>(n - 1));
    for (const auto& p : s) {
      EXPECT_LT(eval_H_jet(m, {RegionKind::PolySmoothing}, p).hess.determinant(), 0.0);
      EXPECT_LT(eval_H_jet(m, {RegionKind::PolySmoothing}, p).grad.norm(), 1e-12);
    }
  }
}

TEST(ModelChartsTest, ClassifyRegion) {
  const TorusModel m = make(4);
  EXPECT_EQ(classify_region(m, polar_point(2 * m.r_sing(), 0.3)).kind, RegionKind::OuterExact);
  EXPECT_EQ(classify_region(m, m.chart_center(1)), (Region{RegionKind::SaddleChart, 1}));
  EXPECT_EQ(classify_region(m, Vec2(0, 0)).kind, RegionKind::PolySmoothing);
  EXPECT_EQ(classify_region(m, Vec2(NAN, 0)).kind, RegionKind::NoChart);
  // Annulus V(R) sits inside the outer chart.
  const Vec2 q = polar_point(0.5 * (m.R() + m.R_star()), 1.0);
  EXPECT_TRUE(contains(m, {RegionKind::AnnulusVR}, q));
  EXPECT_TRUE(contains(m, {RegionKind::OuterExact}, q));
}

TEST(ModelChartsTest, SaddleChartsDisjointAndInsideSmoothingDisk) {
  for (int n = 2; n <= 8; ++n) {
    const TorusModel m = make(n);
    const double w = m.chart_half_width();
    for (int k = 1; k < n; ++k) {
      const Vec2 c = m.chart_center(k);
      for (double sx : {-1.0, 1.0})
        for (double sy : {-1.0, 1.0}) EXPECT_LT(radius(c + Vec2(sx * w, sy * w)), m.r_sing());
      for (int l = k + 1; l < n; ++l) {
        const Vec2 d = c - m.chart_center(l);
        EXPECT_GT(std::max(std::abs(d.x()), std::abs(d.y())), 2 * w);
      }
    }
  }
}

TEST(ModelChartsTest, OuterHamiltonianIsPeriodic) {
  for (int n = 2; n <= 6; ++n) {
    const TorusModel m = make(n);
    for (double th = 0; th < 2 * pi; th += 0.37) {
      const double h0 = eval_H(m, polar_point(3.0, th));
      const double h1 = eval_H(m, polar_point(3.0, th + 2 * pi / n));
      EXPECT_NEAR(h0, h1, 1e-13 * std::max(1.0, std::abs(h0)));
    }
  }
}

// Closed-form derivatives against central differences, every chart.
TEST(ModelChartsTest, JetsMatchFiniteDifferences) {
  for (int n = 2; n <= 6; ++n) {
    const TorusModel m = make(n);
    const std::vector<std::pair<Region, Vec2>> pts = {
        {{RegionKind::OuterExact}, polar_point(2.3, 0.4)},
        {{RegionKind::OuterExact}, polar_point(1.1, -2.0)},
        {{RegionKind::PolySmoothing}, Vec2(0.2, -0.3)},
        {{RegionKind::SaddleChart, 1}, m.from_chart(1, Vec2(0.05, -0.02))}};
    for (const auto& [r, p] : pts) {
      const Jet j = eval_H_jet(m, r, p);
      const double h = 1e-5;
      for (int d = 0; d < 2; ++d) {
        Vec2 e = Vec2::Zero();
        e[d] = h;
        const Jet jp = eval_H_jet(m, r, p + e), jm = eval_H_jet(m, r, p - e);
        EXPECT_NEAR(j.grad[d], (jp.value - jm.value) / (2 * h), 1e-7 * std::max(1.0, std::abs(j.grad[d])));
        for (int c = 0; c < 2; ++c)
          EXPECT_NEAR(j.hess(c, d), (jp.grad[c] - jm.grad[c]) / (2 * h), 1e-6 * std::max(1.0, j.hess.norm()));
      }
    }
  }
}

TEST(ModelChartsTest, AreaDensityPositive) {
  const TorusModel m = make(5);
  for (int k = 1; k <= 4; ++k) EXPECT_GT(liouville_scale(m, {RegionKind::SaddleChart, k}), 0.0);
  EXPECT_GT(liouville_scale(m, {RegionKind::OuterExact}), 0.0);
  // d(1/2 (x dy - y dx)) = dx ^ dy: check by finite differences of the coefficients.
  const Vec2 p(3.0, -1.5);
  const double h = 1e-6;
  const double dq_dx = (unit_liouville(p + Vec2(h, 0)).q - unit_liouville(p - Vec2(h, 0)).q) / (2 * h);
  const double dp_dy = (unit_liouville(p + Vec2(0, h)).p - unit_liouville(p - Vec2(0, h)).p) / (2 * h);
  EXPECT_NEAR(dq_dx - dp_dy, 1.0, 1e-9);
}

TEST(ModelChartsTest, InvalidModelsRejected) {
  ModelParams p;
  p.n = 1;
  EXPECT_THROW(TorusModel{p}, Error);
  p = {};
  p.R = 0.5;
  EXPECT_THROW(TorusModel{p}, Error);
  p = {};
  p.c = 100.0;  // saddles outside D(r_sing)
  EXPECT_THROW(TorusModel{p}, Error);
}

TEST(ModelChartsTest, JsonRoundTrip) {
  ModelParams p;
  p.n = 5;
  p.c = 0.3;
  p.tol.ode_rel = 1e-11;
  const nlohmann::json j = p;
  const ModelParams q = j.get<ModelParams>();
  EXPECT_EQ(q.n, 5);
  EXPECT_DOUBLE_EQ(*q.c, 0.3);
  EXPECT_DOUBLE_EQ(q.tol.ode_rel, 1e-11);
  EXPECT_FALSE(q.mu_smooth.has_value());
}

}  // namespace
}  // namespace sutured
