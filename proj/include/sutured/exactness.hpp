#pragma once

// Certification of the exactness identities of the time-1 Hamiltonian flow:
// beta(X_H) = H on the closed-form charts, phi^* beta - beta = d f, and
// phi^* beta = beta on trajectories that stay in S or in some V_k.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "sutured/flow.hpp"
#include "sutured/report.hpp"

namespace sutured {

/// f_t(p) = integral_0^t (-H + beta(X_H))(phi^s p) ds along the model flow.
/// With BetaPolicy::Strict the trajectory must avoid the smoothing chart
/// (where beta has no closed form) or LeftChartDomain is raised.
inline double exactness_function(const TorusModel& m, const Vec2& p, double t,
                                 BetaPolicy policy = BetaPolicy::Strict, const FlowOptions& base = {}) {
  if (t == 0.0) return 0.0;
  if (policy == BetaPolicy::Strict && classify_region(m, p).kind == RegionKind::PolySmoothing)
    throw Error(ErrorCode::NoFormulaInSmoothingChart, "beta has no closed form at the start point");
  FlowOptions opt = base;
  opt.integrate_exactness = true;
  const FlowResult r = flow(ModelVectorField(m), p, t, opt);
  if (policy == BetaPolicy::Strict && r.visited_smoothing)
    throw LeftChartDomainError(t, "trajectory entered the smoothing chart");
  return r.exactness;
}

/// (phi^* beta)_p = DPhi^T beta(phi(p)), as a plane covector.
inline Vec2 pullback(const Covector& at_image, const Mat2& jacobian) {
  return jacobian.transpose() * at_image.as_vector();
}

/// Whether the time-1 trajectory of p stays in S (outer chart) or in V_k
/// (the saddle chart it starts in). Returns the chart and the flow.
struct ChartTrajectory {
  Region chart;
  FlowResult flow;
  bool in_invariant_set = false;
};

inline ChartTrajectory chart_trajectory(const TorusModel& m, const Vec2& p, double t = 1.0,
                                        const FlowOptions& opt = {}) {
  ChartTrajectory ct;
  ct.chart = classify_region(m, p);
  ct.flow = flow(ChartVectorField(m, ct.chart), p, t, opt);
  ct.in_invariant_set = ct.chart.kind != RegionKind::PolySmoothing && ct.flow.stayed_in_chart;
  return ct;
}

inline VerificationReport verify_beta_XH_identity(const TorusModel& m, const std::vector<Vec2>& samples) {
  VerificationReport rep;
  rep.check = "beta(X_H) = H";
  rep.tolerance = m.tol().identity;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SampleDefect s{i, samples[i]};
    const Region r = classify_region(m, samples[i]);
    if (r.kind != RegionKind::OuterExact && r.kind != RegionKind::SaddleChart) {
      s.included = false;
      s.note = "not in a closed-form chart";
    } else {
      const Jet h = eval_H_jet(m, r, samples[i]);
      const VectorFieldSample x = hamiltonian_vector_field(h, liouville_scale(m, r), samples[i]);
      s.defect = std::abs(liouville_form(m, r, samples[i])(x.v) - h.value);
    }
    rep.samples.push_back(s);
  }
  rep.finalize();
  return rep;
}

struct SymplectomorphismReports {
  VerificationReport pullback;  // phi^* beta = beta on S and V_k
  VerificationReport exactness;  // phi^* beta - beta = d f
};

/// Pushes tangent vectors through the numeric Jacobian. Samples whose
/// trajectory leaves their chart are excluded from the invariance check; the
/// d f identity is checked on every sample with the chart flow of its own
/// chart (the smoothing chart uses the proxy form there), against a central
/// difference gradient of f.
inline SymplectomorphismReports verify_exact_symplectomorphism(const TorusModel& m,
                                                               const std::vector<Vec2>& samples,
                                                               double df_tolerance = 1e-5) {
  SymplectomorphismReports out;
  out.pullback.check = "phi^* beta = beta on S u V_k";
  out.pullback.tolerance = m.tol().pullback;
  out.exactness.check = "phi^* beta - beta = df";
  out.exactness.tolerance = df_tolerance;

  FlowOptions tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-15;
  tight.integrate_exactness = true;

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vec2& p = samples[i];
    const ChartTrajectory ct = chart_trajectory(m, p, 1.0, tight);
    const Vec2 defect = pullback(liouville_form(m, ct.chart, ct.flow.endpoint), ct.flow.jacobian) -
                        liouville_form(m, ct.chart, p).as_vector();

    SampleDefect pb{i, p, defect.norm()};
    if (!ct.in_invariant_set) {
      pb.included = false;
      pb.note = "trajectory leaves S u V_k";
    }
    out.pullback.samples.push_back(pb);

    const ChartVectorField field(m, ct.chart);
    const double h = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, radius(p));
    auto f = [&](const Vec2& q) { return flow(field, q, 1.0, tight).exactness; };
    const Vec2 grad((f(p + Vec2(h, 0)) - f(p - Vec2(h, 0))) / (2 * h),
                    (f(p + Vec2(0, h)) - f(p - Vec2(0, h))) / (2 * h));
    const double scale = std::max(1.0, liouville_form(m, ct.chart, p).as_vector().norm());
    out.exactness.samples.push_back({i, p, (defect - grad).norm() / scale});
  }
  out.pullback.finalize();
  out.exactness.finalize();
  return out;
}

/// rot(2 pi / n) o phi = phi o rot(2 pi / n) for the outer-chart flow.
inline VerificationReport verify_symmetry(const TorusModel& m, const std::vector<Vec2>& samples,
                                          double t = 1.0) {
  VerificationReport rep;
  rep.check = "2pi/n equivariance of the outer flow";
  rep.tolerance = m.tol().flow;
  const Mat2 rot = rotation(2 * std::numbers::pi / m.n());
  const ChartVectorField outer(m, {RegionKind::OuterExact});
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vec2& p = samples[i];
    SampleDefect s{i, p};
    if (classify_region(m, p).kind != RegionKind::OuterExact) {
      s.included = false;
      s.note = "not in the outer chart";
    } else {
      const Vec2 a = rot * flow(outer, p, t).endpoint;
      const Vec2 b = flow(outer, rot * p, t).endpoint;
      s.defect = (a - b).norm() / std::max(1.0, a.norm());
    }
    rep.samples.push_back(s);
  }
  rep.finalize();
  return rep;
}

// ---------------------------------------------------------------------------
// Deterministic sampling helpers

/// Uniform samples in the annulus r0 <= r <= r1.
inline std::vector<Vec2> sample_annulus(double r0, double r1, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = std::sqrt(r0 * r0 + (r1 * r1 - r0 * r0) * u(rng));
    out.push_back(polar_point(r, 2 * std::numbers::pi * u(rng)));
  }
  return out;
}

/// Uniform samples in the square of half-width w (chart coordinates) of SaddleChart(k).
inline std::vector<Vec2> sample_saddle_chart(const TorusModel& m, int k, double w, std::size_t count,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-w, w);
  std::vector<Vec2> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(m.from_chart(k, Vec2(u(rng), u(rng))));
  return out;
}

/// Points of V_k near p_k: a box small enough that the time-1 saddle flow
/// (expansion e^{a/eps}) keeps it inside the chart.
inline std::vector<Vec2> sample_vk(const TorusModel& m, int k, std::size_t count, std::uint64_t seed) {
  const double grow = std::exp(m.a() / m.eps());
  return sample_saddle_chart(m, k, 0.5 * m.chart_half_width() / grow, count, seed);
}

}  // namespace sutured
