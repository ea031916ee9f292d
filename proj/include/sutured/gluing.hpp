#pragma once

// Gluing data on D(R_star): the arcs a+-, b+-, c+- in the annulus V(R), the
// regions P+ (bounded by a+ and b+), P- = phi(P+) and the disk D whose
// boundary runs a+_k, c-_k, b-_k, c+_k for k = 0..n-1.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "sutured/contact.hpp"

namespace sutured {

enum class ArcFamily { APlus, AMinus, BPlus, BMinus, CPlus, CMinus };

inline std::string to_string(ArcFamily f) {
  switch (f) {
    case ArcFamily::APlus: return "a_plus";
    case ArcFamily::AMinus: return "a_minus";
    case ArcFamily::BPlus: return "b_plus";
    case ArcFamily::BMinus: return "b_minus";
    case ArcFamily::CPlus: return "c_plus";
    case ArcFamily::CMinus: return "c_minus";
  }
  return "?";
}

/// An oriented polyline; orientation follows the counterclockwise boundary
/// of the region it bounds.
struct Arc {
  ArcFamily family = ArcFamily::APlus;
  int k = 0;
  std::vector<Vec2> points;
};

struct PropertyCheck {
  std::string name;
  double margin = 0.0;  // > 0 iff the property holds
  bool pass = false;
  std::string note;
};

struct GluingOptions {
  int samples_per_arc = 129;
  int samples_per_segment = 33;
  double delta = 0.1;         // initial bump height of b_plus, relative to R
  int max_delta_halvings = 12;
  double fillet_fraction = 0.05;
  int max_doublings = 8;     // of (R, R_star) while searching for V(R)
};

struct GluingData {
  TorusModel model;  // carries the admissible (R, R_star)
  double r_V = 0.0;  // V(R) = {r_V <= r <= R_star}
  double delta = 0.0;
  double fillet_radius = 0.0;
  double R_tilde = 0.0;
  double R_tilde_spread = 0.0;
  int doublings = 0;
  std::vector<double> theta_minus, theta_plus;
  std::vector<Arc> a_plus, a_minus, b_plus, b_minus, c_plus, c_minus;
  std::vector<Vec2> boundary_P_plus, boundary_P_minus, boundary_D;  // closed, last point not repeated
  std::vector<PropertyCheck> properties;  // P1..P5 and the endpoint facts, at construction

  const std::vector<Arc>& family(ArcFamily f) const {
    switch (f) {
      case ArcFamily::APlus: return a_plus;
      case ArcFamily::AMinus: return a_minus;
      case ArcFamily::BPlus: return b_plus;
      case ArcFamily::BMinus: return b_minus;
      case ArcFamily::CPlus: return c_plus;
      case ArcFamily::CMinus: return c_minus;
    }
    return a_plus;
  }
};

namespace detail {

inline constexpr ArcFamily kAllFamilies[] = {ArcFamily::APlus, ArcFamily::AMinus, ArcFamily::BPlus,
                                             ArcFamily::BMinus, ArcFamily::CPlus, ArcFamily::CMinus};

/// exp(4 - 1/(u(1-u))): peak 1 at u = 1/2, flat to all orders at 0 and 1.
inline double unit_bump(double u) { return (u <= 0 || u >= 1) ? 0.0 : std::exp(4.0 - 1.0 / (u * (1 - u))); }
inline double unit_bump_derivative(double u) {
  if (u <= 0 || u >= 1) return 0.0;
  const double q = u * (1 - u);
  return unit_bump(u) * (1 - 2 * u) / (q * q);
}

inline std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? a : a + (b - a) * i / (count - 1);
  return out;
}

inline std::vector<Vec2> segment(const Vec2& a, const Vec2& b, int count) {
  std::vector<Vec2> out;
  for (double s : linspace(0.0, 1.0, count)) out.push_back((1 - s) * a + s * b);
  return out;
}

inline double polyline_length(const std::vector<Vec2>& pts) {
  double L = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) L += (pts[i] - pts[i - 1]).norm();
  return L;
}

/// Point at arc length s from the start (or from the end when from_end).
inline std::pair<Vec2, std::size_t> point_at_length(const std::vector<Vec2>& pts, double s, bool from_end) {
  const std::size_t n = pts.size();
  auto at = [&](std::size_t i) -> const Vec2& { return from_end ? pts[n - 1 - i] : pts[i]; };
  double acc = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double len = (at(i) - at(i - 1)).norm();
    if (acc + len >= s) {
      const double w = len > 0 ? (s - acc) / len : 0.0;
      return {at(i - 1) + w * (at(i) - at(i - 1)), i};
    }
    acc += len;
  }
  return {at(n - 1), n - 1};
}

/// Concatenates a closed cycle of polylines, replacing each corner by a
/// quadratic Bezier blend with legs of length `fillet` (capped at 30% of the
/// shorter neighbour).
inline std::vector<Vec2> filleted_cycle(const std::vector<std::vector<Vec2>>& pieces, double fillet, int blend_points) {
  const std::size_t m = pieces.size();
  std::vector<double> cut(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double prev = polyline_length(pieces[(i + m - 1) % m]);
    const double here = polyline_length(pieces[i]);
    cut[i] = std::min(fillet, 0.3 * std::min(prev, here));  // cut at the start of piece i
  }
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = pieces[i];
    const auto& next = pieces[(i + 1) % m];
    const auto [start, i0] = point_at_length(p, cut[i], false);
    const double end_cut = cut[(i + 1) % m];
    const auto [end, j0] = point_at_length(p, end_cut, true);
    out.push_back(start);
    for (std::size_t j = i0; j + j0 < p.size(); ++j) out.push_back(p[j]);
    out.push_back(end);
    const Vec2 corner = p.back();
    const Vec2 resume = point_at_length(next, end_cut, false).first;
    for (int b = 1; b < blend_points; ++b) {
      const double s = static_cast<double>(b) / blend_points;
      out.push_back((1 - s) * (1 - s) * end + 2 * s * (1 - s) * corner + s * s * resume);
    }
  }
  // drop consecutive duplicates
  std::vector<Vec2> clean;
  for (const Vec2& q : out)
    if (clean.empty() || (q - clean.back()).norm() > 1e-14) clean.push_back(q);
  if (clean.size() > 1 && (clean.front() - clean.back()).norm() <= 1e-14) clean.pop_back();
  return clean;
}

inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double L2 = d.squaredNorm();
  const double s = L2 > 0 ? std::clamp((p - a).dot(d) / L2, 0.0, 1.0) : 0.0;
  return (p - (a + s * d)).norm();
}

inline double polyline_distance(const std::vector<Vec2>& u, const std::vector<Vec2>& v) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& p : u)
    for (std::size_t j = 1; j < v.size(); ++j) best = std::min(best, point_segment_distance(p, v[j - 1], v[j]));
  for (const Vec2& p : v)
    for (std::size_t j = 1; j < u.size(); ++j) best = std::min(best, point_segment_distance(p, u[j - 1], u[j]));
  return best;
}

inline double family_distance(const std::vector<Arc>& f, const std::vector<Arc>& g) {
  double best = std::numeric_limits<double>::infinity();
  for (const Arc& x : f)
    for (const Arc& y : g) best = std::min(best, polyline_distance(x.points, y.points));
  return best;
}

/// Signed angle in (-pi, pi] from the direction theta0 to p.
inline double angle_from(double theta0, const Vec2& p) { return std::remainder(angle(p) - theta0, 2 * std::numbers::pi); }

/// 1/2 r d_r paired with the outward normal of a counterclockwise curve:
/// (x dy - y dx) / (2 |ds|) with central-difference tangents, at every vertex
/// of a closed curve and at the interior vertices of an open one.
inline std::vector<std::pair<std::size_t, double>> transversality_margins(const std::vector<Vec2>& pts, bool closed) {
  const std::size_t n = pts.size();
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = closed ? 0 : 1; i + (closed ? 0 : 1) < n; ++i) {
    const Vec2 d = pts[(i + 1) % n] - pts[(i + n - 1) % n];
    out.emplace_back(i, 0.5 * (pts[i].x() * d.y() - pts[i].y() * d.x()) / d.norm());
  }
  return out;
}

inline double max_turning_angle(const std::vector<Vec2>& pts, bool closed) {
  const std::size_t n = pts.size();
  double best = 0;
  for (std::size_t i = closed ? 0 : 1; i + (closed ? 0 : 1) < n; ++i) {
    const Vec2 u = pts[i] - pts[(i + n - 1) % n], v = pts[(i + 1) % n] - pts[i];
    best = std::max(best, std::abs(std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v))));
  }
  return best;
}

inline std::vector<Vec2> flow_points(const TorusModel& m, const std::vector<Vec2>& pts, const FlowOptions& opt,
                                     double* min_r = nullptr, double* max_r = nullptr, bool* smoothing = nullptr) {
  const ModelVectorField field(m);
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const Vec2& p : pts) {
    const FlowResult r = flow(field, p, 1.0, opt);
    if (min_r) *min_r = std::min(*min_r, r.min_radius);
    if (max_r) *max_r = std::max(*max_r, r.max_radius);
    if (smoothing && r.visited_smoothing) *smoothing = true;
    out.push_back(r.endpoint);
  }
  return out;
}

inline std::vector<Vec2> concat_cycle(const std::vector<const Arc*>& arcs) {
  std::vector<Vec2> out;
  for (const Arc* a : arcs)
    for (std::size_t i = 0; i + 1 < a->points.size(); ++i) out.push_back(a->points[i]);
  return out;
}

}  // namespace detail

/// Searches (R, R_star) by doubling until the time-1 image of the circle
/// r = R stays in S with room to spare (r_V = 0.95 min r >= r_sing) and the
/// image of the outer b_plus envelope r = R (1 + delta) stays inside
/// D(R_star). Returns the admissible model, r_V and the number of doublings.
struct AnnulusChoice {
  TorusModel model;
  double r_V = 0.0;
  int doublings = 0;
};

inline AnnulusChoice find_admissible_annulus(const TorusModel& start, double delta, int max_doublings,
                                             int circle_samples = 360) {
  TorusModel m = start;
  for (int d = 0;; ++d) {
    std::vector<Vec2> inner, outer;
    // the separatrix directions cos(n theta) = 0 carry the extreme radii of the
    // flowed circles, and a uniform grid can miss them by a wide margin
    std::vector<double> angles = detail::linspace(0, 2 * std::numbers::pi, circle_samples + 1);
    for (int j = 0; j < 2 * m.n(); ++j) angles.push_back((2 * j + 1) * std::numbers::pi / (2 * m.n()));
    for (double th : angles) {
      inner.push_back(polar_point(m.R(), th));
      outer.push_back(polar_point(m.R() * (1 + delta), th));
    }
    double min_r = std::numeric_limits<double>::infinity(), max_r = 0;
    bool smoothing = false;
    detail::flow_points(m, inner, {}, &min_r, nullptr, &smoothing);
    detail::flow_points(m, outer, {}, nullptr, &max_r, &smoothing);
    const double r_V = 0.95 * min_r;
    const bool inner_ok = !smoothing && r_V >= m.r_sing();
    const bool outer_ok = max_r < m.R_star();
    if (inner_ok && outer_ok) return {m, r_V, d};
    if (d >= max_doublings)
      throw Error(ErrorCode::ArcConstructionFailure, "no admissible annulus V(R) after " + std::to_string(d) +
                                                         " doublings of (R, R_star)");
    m = inner_ok ? m.with_radii(m.R(), 2 * m.R_star()) : m.with_radii(2 * m.R(), 2 * m.R_star());
  }
}

namespace detail {

/// P1..P5 for the current b_plus / b_minus, plus the c-segment fact that c
/// meets D(R) only at its endpoint on a_plus.
inline std::vector<PropertyCheck> property_checks(const GluingData& gd) {
  const TorusModel& m = gd.model;
  const int n = m.n();
  const double R = m.R();
  const double pos_tol = 1e-12 * R;
  std::vector<PropertyCheck> out;

  double p1 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double d0 = (gd.b_plus[k].points.front() - gd.a_plus[k].points.back()).norm();
    const double d1 = (gd.b_plus[k].points.back() - gd.a_plus[(k + 1) % n].points.front()).norm();
    p1 = std::min(p1, pos_tol - std::max(d0, d1));
  }
  out.push_back({"P1", p1, p1 > 0, "b_plus[k] runs from the end of a_plus[k] to the start of a_plus[k+1]"});

  double p2 = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double span = gd.theta_minus[(k + 1) % n] + (k + 1 == n ? 2 * std::numbers::pi : 0) - gd.theta_plus[k];
    for (const Vec2& p : gd.b_plus[k].points) {
      const double rel = angle_from(gd.theta_plus[k], p);
      const double r = radius(p);
      const double angular = std::min(rel + 1e-12, span + 1e-12 - rel);
      p2 = std::min({p2, r - m.r_sing(), r - gd.r_V, m.R_star() - r, angular});
    }
  }
  out.push_back({"P2", p2, p2 > 0, "b_plus inside its angular sector and inside V(R)"});

  double p3 = std::numeric_limits<double>::infinity();
  for (const Arc& b : gd.b_minus)
    for (const Vec2& p : b.points) p3 = std::min({p3, radius(p) - R, m.R_star() - radius(p)});
  out.push_back({"P3", p3, p3 > 0, "phi(b_plus) inside {r > R} n V(R)"});

  // b_plus meets a_plus tangentially (the bump is flat at both ends) and the
  // sampled boundary of P_plus has no kink.
  double slope = 0;
  for (double u : {0.0, 1.0}) slope = std::max(slope, gd.delta * std::abs(unit_bump_derivative(u)));
  const double turn = max_turning_angle(gd.boundary_P_plus, true);
  const double p4 = std::min(1e-12 - slope, 0.2 - turn);
  out.push_back({"P4", p4, p4 > 0, "boundary of P_plus is smooth (turning " + std::to_string(turn) + " rad/vertex)"});

  // P5: H strictly monotone along each b_plus, so each level set meets it once
  double p5 = std::numeric_limits<double>::infinity();
  for (const Arc& b : gd.b_plus) {
    for (std::size_t i = 1; i < b.points.size(); ++i) {
      const double dh = eval_H(m, b.points[i - 1]) - eval_H(m, b.points[i]);
      p5 = std::min(p5, dh / (m.mu() * R * R));
    }
  }
  out.push_back({"P5", p5, p5 > 0, "H strictly decreasing along b_plus"});

  double a_mono = std::numeric_limits<double>::infinity();
  for (const Arc& a : gd.a_plus)
    for (std::size_t i = 1; i < a.points.size(); ++i)
      a_mono = std::min(a_mono, (eval_H(m, a.points[i]) - eval_H(m, a.points[i - 1])) / (m.mu() * R * R));
  out.push_back({"a_plus_level_sets", a_mono, a_mono > 0, "H strictly increasing along a_plus"});

  double c_margin = std::numeric_limits<double>::infinity();
  for (const Arc& c : gd.c_minus)
    for (std::size_t i = 1; i < c.points.size(); ++i) c_margin = std::min(c_margin, radius(c.points[i]) - R);
  for (const Arc& c : gd.c_plus)
    for (std::size_t i = 0; i + 1 < c.points.size(); ++i) c_margin = std::min(c_margin, radius(c.points[i]) - R);
  out.push_back({"c_meets_DR_at_endpoint", c_margin, c_margin > 0, "c arcs meet D(R) only at their a_plus endpoint"});

  // endpoint facts: one R_tilde > R, angles shifted by less than pi/(2n)
  double ang = std::numeric_limits<double>::infinity();
  const double w = std::numbers::pi / (2 * n);
  for (int k = 0; k < n; ++k) {
    const double lo = angle_from(gd.theta_minus[k], gd.a_minus[k].points.front());
    const double hi = angle_from(gd.theta_plus[k], gd.a_minus[k].points.back());
    ang = std::min({ang, -lo, w + lo, hi, w - hi});
  }
  out.push_back({"endpoint_angles", ang, ang > 0, "a_minus endpoints inside (theta- - pi/2n, theta-) and (theta+, theta+ + pi/2n)"});
  const double rt = std::min(gd.R_tilde - R, m.tol().flow * R - gd.R_tilde_spread);
  out.push_back({"R_tilde", rt, rt > 0, "a_minus endpoints share one radius R_tilde > R"});
  return out;
}

}  // namespace detail

inline GluingData construct_gluing_data(const TorusModel& base, const GluingOptions& opt = {}) {
  const AnnulusChoice choice = find_admissible_annulus(base, opt.delta, opt.max_doublings);
  const TorusModel& m = choice.model;
  const int n = m.n();
  const double R = m.R();
  const double pi = std::numbers::pi;

  GluingData gd{m};
  gd.r_V = choice.r_V;
  gd.doublings = choice.doublings;
  gd.fillet_radius = opt.fillet_fraction * R;
  for (int k = 0; k < n; ++k) {
    gd.theta_minus.push_back(pi / n + 2 * pi * k / n);
    gd.theta_plus.push_back(2 * pi / n + 2 * pi * k / n);
  }

  for (int k = 0; k < n; ++k) {
    Arc a{ArcFamily::APlus, k};
    for (double th : detail::linspace(gd.theta_minus[k], gd.theta_plus[k], opt.samples_per_arc))
      a.points.push_back(polar_point(R, th));
    gd.a_plus.push_back(a);
    gd.a_minus.push_back({ArcFamily::AMinus, k, detail::flow_points(m, a.points, {})});
  }
  std::vector<double> end_radii;
  for (const Arc& a : gd.a_minus) {
    end_radii.push_back(radius(a.points.front()));
    end_radii.push_back(radius(a.points.back()));
  }
  const auto [lo, hi] = std::minmax_element(end_radii.begin(), end_radii.end());
  gd.R_tilde = 0.5 * (*lo + *hi);
  gd.R_tilde_spread = *hi - *lo;

  std::string failed;
  double delta = opt.delta;
  for (int attempt = 0; attempt <= opt.max_delta_halvings; ++attempt, delta *= 0.5) {
    gd.delta = delta;
    gd.b_plus.clear();
    gd.b_minus.clear();
    for (int k = 0; k < n; ++k) {
      const double t0 = gd.theta_plus[k], t1 = gd.theta_minus[0] + 2 * pi * (k + 1) / n;
      Arc b{ArcFamily::BPlus, k};
      for (double u : detail::linspace(0.0, 1.0, opt.samples_per_arc))
        b.points.push_back(polar_point(R * (1 + delta * detail::unit_bump(u)), t0 + u * (t1 - t0)));
      // close up exactly onto a_plus
      b.points.front() = gd.a_plus[k].points.back();
      b.points.back() = gd.a_plus[(k + 1) % n].points.front();
      gd.b_plus.push_back(b);
      gd.b_minus.push_back({ArcFamily::BMinus, k, detail::flow_points(m, b.points, {})});
    }

    gd.c_minus.clear();
    gd.c_plus.clear();
    for (int k = 0; k < n; ++k) {
      gd.c_minus.push_back({ArcFamily::CMinus, k,
                            detail::segment(gd.a_plus[k].points.back(), gd.b_minus[k].points.front(),
                                            opt.samples_per_segment)});
      gd.c_plus.push_back({ArcFamily::CPlus, k,
                           detail::segment(gd.b_minus[k].points.back(), gd.a_plus[(k + 1) % n].points.front(),
                                           opt.samples_per_segment)});
    }

    std::vector<const Arc*> pp, pm;
    std::vector<std::vector<Vec2>> dd;
    for (int k = 0; k < n; ++k) {
      pp.push_back(&gd.a_plus[k]);
      pp.push_back(&gd.b_plus[k]);
      pm.push_back(&gd.a_minus[k]);
      pm.push_back(&gd.b_minus[k]);
      for (const Arc* a : {&gd.a_plus[k], &gd.c_minus[k], &gd.b_minus[k], &gd.c_plus[k]}) dd.push_back(a->points);
    }
    gd.boundary_P_plus = detail::concat_cycle(pp);
    gd.boundary_P_minus = detail::concat_cycle(pm);
    gd.boundary_D = detail::filleted_cycle(dd, gd.fillet_radius, 16);

    gd.properties = detail::property_checks(gd);
    failed.clear();
    for (const auto& p : gd.properties)
      if (!p.pass) failed += (failed.empty() ? "" : ", ") + p.name;
    if (failed.empty()) return gd;
  }
  throw Error(ErrorCode::ArcConstructionFailure, "gluing properties fail after shrinking delta: " + failed);
}

inline GluingData construct_gluing_data(const ContactFormModel& cfm, const GluingOptions& opt = {}) {
  return construct_gluing_data(cfm.model(), opt);
}

struct GluingReport {
  VerificationReport transversality;  // 1/2 r d_r against every boundary arc, margin > 0
  VerificationReport identification;  // phi(a_plus) = a_minus, phi(b_plus) = b_minus
  VerificationReport containment;     // every arc inside V(R)
  nlohmann::json disjointness;        // minimum distances between arc families
  std::vector<PropertyCheck> properties;
  bool disjoint = false;
  bool pass = false;
};

/// Re-certifies the constructed data: transversality, flow identification
/// (re-integrated at tighter tolerance), containment and disjointness.
inline GluingReport verify_gluing(const GluingData& gd) {
  const TorusModel& m = gd.model;
  GluingReport rep;

  rep.transversality.check = "1/2 r d_r positively transverse to the boundary arcs";
  rep.transversality.tolerance = 0.0;
  nlohmann::json per_family = nlohmann::json::object();
  auto add_margins = [&](const std::string& name, const std::vector<Vec2>& pts, bool closed) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& [i, margin] : detail::transversality_margins(pts, closed)) {
      rep.transversality.samples.push_back({rep.transversality.samples.size(), pts[i], -margin});
      lo = std::min(lo, margin);
    }
    per_family[name] = std::min(per_family.value(name, lo), lo);
  };
  for (ArcFamily f : detail::kAllFamilies)
    for (const Arc& a : gd.family(f)) add_margins(to_string(f), a.points, false);
  add_margins("boundary_D", gd.boundary_D, true);
  add_margins("boundary_P_plus", gd.boundary_P_plus, true);
  add_margins("boundary_P_minus", gd.boundary_P_minus, true);
  rep.transversality.finalize();
  rep.transversality.details = {{"min_margin", per_family}};

  rep.identification.check = "phi(a_plus) = a_minus, phi(b_plus) = b_minus";
  rep.identification.tolerance = m.tol().flow;
  FlowOptions tight;
  tight.rel_tol = 1e-13;
  tight.abs_tol = 1e-15;
  auto identify = [&](const std::vector<Arc>& src, const std::vector<Arc>& dst) {
    for (std::size_t k = 0; k < src.size(); ++k) {
      const std::vector<Vec2> img = detail::flow_points(m, src[k].points, tight);
      for (std::size_t i = 0; i < img.size(); ++i)
        rep.identification.samples.push_back({rep.identification.samples.size(), src[k].points[i],
                                              (img[i] - dst[k].points[i]).norm()});
    }
  };
  identify(gd.a_plus, gd.a_minus);
  identify(gd.b_plus, gd.b_minus);
  rep.identification.finalize();

  rep.containment.check = "arcs inside V(R) = {r_V <= r <= R_star}";
  rep.containment.tolerance = 0.0;
  for (ArcFamily f : detail::kAllFamilies)
    for (const Arc& a : gd.family(f))
      for (const Vec2& p : a.points) {
        const double r = radius(p);
        rep.containment.samples.push_back({rep.containment.samples.size(), p, std::max(gd.r_V - r, r - m.R_star())});
      }
  for (const Vec2& p : gd.boundary_D) {
    const double r = radius(p);
    rep.containment.samples.push_back({rep.containment.samples.size(), p, std::max(gd.r_V - r, r - m.R_star())});
  }
  rep.containment.finalize();
  rep.containment.details = {{"r_V", gd.r_V}, {"R", m.R()}, {"R_star", m.R_star()}};

  const double ab = detail::family_distance(gd.a_plus, gd.b_minus);
  const double aa = detail::family_distance(gd.a_plus, gd.a_minus);
  const double bb = detail::family_distance(gd.b_plus, gd.b_minus);
  rep.disjointness = {{"a_plus_b_minus", ab}, {"a_plus_a_minus", aa}, {"b_plus_b_minus", bb}};
  rep.disjoint = ab > 0 && aa > 0 && bb > 0;

  rep.properties = detail::property_checks(gd);
  const bool props = std::all_of(rep.properties.begin(), rep.properties.end(), [](const auto& p) { return p.pass; });
  rep.pass = props && rep.disjoint && rep.transversality.pass && rep.identification.pass && rep.containment.pass;
  return rep;
}

/// Components of the glued suture, read off the cyclic arc pattern of dD.
/// a_plus = (dP_plus)_boundary and b_minus = (dP_minus)_boundary are absorbed
/// by the gluing, each c arc between them leaves one longitudinal component.
inline int suture_count(const GluingData& gd) {
  const int n = gd.model.n();
  const double tol = gd.model.tol().flow * std::max(1.0, gd.model.R());
  auto same = [&](const Vec2& p, const Vec2& q) { return (p - q).norm() <= tol; };
  if (static_cast<int>(gd.a_plus.size()) != n || static_cast<int>(gd.a_minus.size()) != n ||
      static_cast<int>(gd.b_plus.size()) != n || static_cast<int>(gd.b_minus.size()) != n ||
      static_cast<int>(gd.c_plus.size()) != n || static_cast<int>(gd.c_minus.size()) != n)
    throw Error(ErrorCode::InconsistentIdentification, "arc families do not all have n members");

  std::vector<const Arc*> cycle;
  for (int k = 0; k < n; ++k) {
    // the images of P_plus's corners are P_minus's corners
    if (!same(gd.b_minus[k].points.front(), gd.a_minus[k].points.back()) ||
        !same(gd.b_minus[k].points.back(), gd.a_minus[(k + 1) % n].points.front()))
      throw Error(ErrorCode::InconsistentIdentification, "b_minus[" + std::to_string(k) + "] does not meet a_minus");
    for (const Arc* a : {&gd.a_plus[k], &gd.c_minus[k], &gd.b_minus[k], &gd.c_plus[k]}) cycle.push_back(a);
  }
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Arc* a = cycle[i];
    const Arc* b = cycle[(i + 1) % cycle.size()];
    if (!same(a->points.back(), b->points.front()))
      throw Error(ErrorCode::InconsistentIdentification,
                  "dD does not close up between " + to_string(a->family) + "[" + std::to_string(a->k) + "] and " +
                      to_string(b->family) + "[" + std::to_string(b->k) + "]");
  }

  auto absorbed = [](const Arc* a) { return a->family == ArcFamily::APlus || a->family == ArcFamily::BMinus; };
  const std::size_t L = cycle.size();
  std::size_t first = L;
  for (std::size_t i = 0; i < L; ++i)
    if (absorbed(cycle[i])) {
      first = i;
      break;
    }
  if (first == L) throw Error(ErrorCode::InconsistentIdentification, "no arc of dD is glued");
  int runs = 0;
  bool in_run = false;
  for (std::size_t j = 1; j <= L; ++j) {
    const Arc* a = cycle[(first + j) % L];
    if (!absorbed(a) && !in_run) ++runs;
    in_run = !absorbed(a);
  }
  return runs;
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const PropertyCheck& p) {
  j = {{"name", p.name}, {"margin", p.margin}, {"pass", p.pass}, {"note", p.note}};
}

inline nlohmann::json polyline_json(const std::vector<Vec2>& pts) {
  nlohmann::json a = nlohmann::json::array();
  for (const Vec2& p : pts) a.push_back({p.x(), p.y()});
  return a;
}

inline void to_json(nlohmann::json& j, const GluingData& gd) {
  j = {{"n", gd.model.n()}, {"R", gd.model.R()}, {"R_star", gd.model.R_star()}, {"r_V", gd.r_V},
       {"doublings", gd.doublings}, {"delta", gd.delta}, {"fillet_radius", gd.fillet_radius},
       {"R_tilde", gd.R_tilde}, {"theta_minus", gd.theta_minus}, {"theta_plus", gd.theta_plus},
       {"properties", gd.properties}};
  nlohmann::json arcs = nlohmann::json::object();
  for (ArcFamily f : detail::kAllFamilies) {
    nlohmann::json fam = nlohmann::json::array();
    for (const Arc& a : gd.family(f)) fam.push_back(polyline_json(a.points));
    arcs[to_string(f)] = fam;
  }
  j["arcs"] = arcs;
  j["boundary_D"] = polyline_json(gd.boundary_D);
}

inline void to_json(nlohmann::json& j, const GluingReport& r) {
  j = {{"transversality", r.transversality}, {"identification", r.identification},
       {"containment", r.containment}, {"disjointness", r.disjointness},
       {"properties", r.properties}, {"pass", r.pass}};
}

}  // namespace sutured
