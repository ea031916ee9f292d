#pragma once

// The interpolated contact form on [-1, 1] x D(R_star)
//
//   alpha = (1 + eps chi1(t) h) dt + eps ((1 - chi0(t)) beta0 + chi0(t) beta1),
//
// with beta1 = phi^* beta0 and h the time-1 exactness primitive, and its
// Reeb field R = (1 + eps chi1 h)^-1 d/dt.

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "sutured/exactness.hpp"

namespace sutured {

/// chi0 rises from 0 to 1 over [-1 + eps_chi, 1 - eps_chi]; chi1 = chi0'.
/// Realized as the normalized integral of the bump exp(-1 / (u (1 - u))).
class CutoffPair {
 public:
  explicit CutoffPair(double eps_chi = 0.1) : eps_chi_(eps_chi) {
    if (!(eps_chi > 0 && eps_chi < 0.5)) throw Error(ErrorCode::InvalidModel, "eps_chi must lie in (0, 1/2)");
    norm_ = 2 * partial_integral(0.5);
  }

  double eps_chi() const { return eps_chi_; }

  double chi0(double t) const {
    const double u = to_unit(t);
    if (u <= 0) return 0.0;
    if (u >= 1) return 1.0;
    // The bump is symmetric about 1/2; integrating the shorter tail keeps
    // chi0 monotone up to the flat end.
    if (u <= 0.5) return std::min(0.5, partial_integral(u) / norm_);
    return std::max(0.5, 1.0 - partial_integral(1.0 - u) / norm_);
  }

  double chi1(double t) const { return bump(to_unit(t)) / (norm_ * (2 - 2 * eps_chi_)); }

 private:
  static double bump(double u) { return (u <= 0 || u >= 1) ? 0.0 : std::exp(-1.0 / (u * (1 - u))); }
  static double partial_integral(double u) {
    return boost::math::quadrature::gauss<double, 40>::integrate(bump, 0.0, u);
  }
  double to_unit(double t) const { return (t + 1 - eps_chi_) / (2 - 2 * eps_chi_); }

  double eps_chi_;
  double norm_ = 1.0;
};

inline CutoffPair build_cutoffs(double eps_chi) { return CutoffPair(eps_chi); }

/// Everything alpha needs at one disk point: beta0, beta1 = phi^* beta0, h,
/// and the area density w of d(beta0).
struct DiskData {
  Vec2 point = Vec2::Zero();
  Covector beta0;
  Covector beta1;
  double h = 0.0;
  double w = 1.0;
  bool proxy = false;  // used the smoothing-chart stand-in form somewhere
};

struct AlphaCoefficients {
  double dt = 0.0;
  double dx = 0.0;
  double dy = 0.0;

  double operator()(double vt, const Vec2& v) const { return dt * vt + dx * v.x() + dy * v.y(); }
};

struct ReebSample {
  double t_component = 1.0;
  Vec2 spatial = Vec2::Zero();
  double alpha_of_reeb_defect = 0.0;  // |alpha(R) - 1|
  double contraction_defect = 0.0;    // |i_R d alpha|, central differences
};

class ContactFormModel {
 public:
  ContactFormModel(TorusModel model, CutoffPair cutoffs = CutoffPair(),
                   BetaPolicy policy = BetaPolicy::AllowProxy)
      : model_(std::move(model)), cutoffs_(cutoffs), policy_(policy) {}

  const TorusModel& model() const { return model_; }
  const CutoffPair& cutoffs() const { return cutoffs_; }
  BetaPolicy policy() const { return policy_; }

  DiskData disk_data(const Vec2& p) const {
    const Region r0 = classify_region(model_, p);
    if (r0.kind == RegionKind::NoChart) throw Error(ErrorCode::PointOutsideCharts, "point in no chart");
    const bool smoothing = r0.kind == RegionKind::PolySmoothing;
    if (smoothing && policy_ == BetaPolicy::Strict)
      throw Error(ErrorCode::PointOutsideCharts, "beta0 is not evaluable in the smoothing chart");

    FlowOptions opt;
    opt.integrate_exactness = true;
    const FlowResult fr = flow(ModelVectorField(model_), p, 1.0, opt);
    if (fr.visited_smoothing && policy_ == BetaPolicy::Strict)
      throw Error(ErrorCode::PointOutsideCharts, "beta1 is not evaluable: trajectory enters the smoothing chart");
    const Region r1 = classify_region(model_, fr.endpoint);

    DiskData d;
    d.point = p;
    d.beta0 = liouville_form(model_, r0, p);
    const Vec2 b1 = pullback(liouville_form(model_, r1, fr.endpoint), fr.jacobian);
    d.beta1 = {b1.x(), b1.y()};
    d.h = fr.exactness;
    d.w = liouville_scale(model_, r0);
    d.proxy = smoothing || fr.visited_smoothing;
    return d;
  }

  /// h is the time-1 exactness primitive; it vanishes on S and on the V_k.
  double h(const Vec2& p) const { return disk_data(p).h; }

  AlphaCoefficients alpha(double t, const DiskData& d) const {
    const double eps = model_.eps();
    const double c0 = cutoffs_.chi0(t), c1 = cutoffs_.chi1(t);
    return {1 + eps * c1 * d.h, eps * ((1 - c0) * d.beta0.p + c0 * d.beta1.p),
            eps * ((1 - c0) * d.beta0.q + c0 * d.beta1.q)};
  }

  double reeb_denominator(double t, const DiskData& d) const {
    return 1 + model_.eps() * cutoffs_.chi1(t) * d.h;
  }

  /// Density of alpha ^ d alpha against dt ^ dx ^ dy. With d alpha = eps w
  /// dx ^ dy the eps^2 beta ^ omega terms vanish on the 2-disk, leaving
  /// eps (1 + eps chi1 h) w.
  double contact_density(double t, const DiskData& d) const {
    return model_.eps() * reeb_denominator(t, d) * d.w;
  }

 private:
  TorusModel model_;
  CutoffPair cutoffs_;
  BetaPolicy policy_;
};

inline AlphaCoefficients eval_alpha(const ContactFormModel& cfm, double t, const Vec2& p) {
  return cfm.alpha(t, cfm.disk_data(p));
}

/// Reeb field at (t, p), certified numerically: alpha(R) = 1 from the alpha
/// formula, and i_R d alpha = 0 via central differences of alpha in (t, x, y).
inline ReebSample reeb_field(const ContactFormModel& cfm, double t, const Vec2& p, bool certify_contraction = true) {
  const DiskData d = cfm.disk_data(p);
  const double denom = cfm.reeb_denominator(t, d);
  if (!(denom > 0))
    throw Error(ErrorCode::NonpositiveDenominator, "1 + eps chi1 h <= 0: eps is too large for this h");
  ReebSample s;
  s.t_component = 1.0 / denom;
  const AlphaCoefficients a = cfm.alpha(t, d);
  s.alpha_of_reeb_defect = std::abs(a(s.t_component, s.spatial) - 1.0);

  if (certify_contraction && cfm.cutoffs().chi1(t) != 0.0) {
    // (i_R d alpha)(v) = R_t (d alpha)(dt, v) for spatial v:
    // (d alpha)(d_t, d_x) = d_t alpha_x - d_x alpha_t.
    const double ht = 1e-5;
    const double hx = 1e-5 * std::max(1.0, radius(p));
    const AlphaCoefficients ap = cfm.alpha(t + ht, d), am = cfm.alpha(t - ht, d);
    const DiskData dxp = cfm.disk_data(p + Vec2(hx, 0)), dxm = cfm.disk_data(p - Vec2(hx, 0));
    const DiskData dyp = cfm.disk_data(p + Vec2(0, hx)), dym = cfm.disk_data(p - Vec2(0, hx));
    const double dt_ax = (ap.dx - am.dx) / (2 * ht), dt_ay = (ap.dy - am.dy) / (2 * ht);
    const double dx_at = (cfm.alpha(t, dxp).dt - cfm.alpha(t, dxm).dt) / (2 * hx);
    const double dy_at = (cfm.alpha(t, dyp).dt - cfm.alpha(t, dym).dt) / (2 * hx);
    s.contraction_defect = s.t_component * std::hypot(dt_ax - dx_at, dt_ay - dy_at);
  }
  return s;
}

struct ContactGrid {
  int nx = 50;
  int ny = 50;
  int nt = 20;
  double half_extent = 0.0;  // 0: use R_star
};

/// Minimum of the alpha ^ d alpha density over a (t, x, y) grid covering
/// [-1, 1] x D(R_star). One report sample per disk point (the minimum over
/// t); defect = -density, so the report passes iff every density is > 0.
inline VerificationReport verify_contact_condition(const ContactFormModel& cfm, const ContactGrid& g = {}) {
  const TorusModel& m = cfm.model();
  const double L = g.half_extent > 0 ? g.half_extent : m.R_star();
  VerificationReport rep;
  rep.check = "alpha ^ d alpha > 0";
  rep.tolerance = 0.0;
  double min_density = std::numeric_limits<double>::infinity();
  std::size_t excluded = 0, proxy_points = 0;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) {
      const Vec2 p(-L + 2 * L * (i + 0.5) / g.nx, -L + 2 * L * (j + 0.5) / g.ny);
      if (radius(p) > L) continue;
      SampleDefect s{rep.samples.size(), p};
      try {
        const DiskData d = cfm.disk_data(p);
        if (d.proxy) ++proxy_points;
        double lo = std::numeric_limits<double>::infinity();
        for (int k = 0; k < g.nt; ++k) {
          const double t = g.nt == 1 ? -1.0 : -1.0 + 2.0 * k / (g.nt - 1);
          lo = std::min(lo, cfm.contact_density(t, d));
        }
        s.defect = -lo;
        min_density = std::min(min_density, lo);
      } catch (const Error& e) {
        s.included = false;
        s.note = e.what();
        ++excluded;
      }
      rep.samples.push_back(s);
    }
  }
  rep.finalize();
  rep.details = {{"min_density", min_density}, {"grid", {g.nx, g.ny, g.nt}}, {"excluded", excluded},
                 {"proxy_points", proxy_points}, {"eps", m.eps()}, {"eps_chi", cfm.cutoffs().eps_chi()}};
  return rep;
}

/// Smallest eps on a bisection bracket for which the contact condition fails
/// on the grid (nullopt if it holds at eps_hi).
inline std::optional<double> find_failing_eps(const TorusModel& m, const CutoffPair& cut, double eps_hi,
                                              const ContactGrid& g, int iterations = 20) {
  auto fails = [&](double eps) { return !verify_contact_condition(ContactFormModel(m.with_eps(eps), cut), g).pass; };
  if (!fails(eps_hi)) return std::nullopt;
  double lo = m.eps(), hi = eps_hi;
  if (fails(lo)) return lo;
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    (fails(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace sutured
