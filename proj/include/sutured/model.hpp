#pragma once

// Construction parameters of the sutured solid torus and the chart
// decomposition of the disk on which H and beta are known in closed form.
//
// Three charts carry formulas:
//   OuterExact     r >= r_sing         H = mu r^2 cos(n theta),  beta = 1/2 r^2 dtheta
//   SaddleChart(k) square around p_k   H = a x y,                beta = eps/2 (x dy - y dx)
//   PolySmoothing  r <  r_sing         H = mu' Re(z^n - c z)     (no closed-form beta)
// Chart priority on overlaps is SaddleChart > OuterExact > PolySmoothing.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "sutured/errors.hpp"

namespace sutured {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline Vec2 polar_point(double r, double theta) { return {r * std::cos(theta), r * std::sin(theta)}; }
inline double radius(const Vec2& p) { return std::hypot(p.x(), p.y()); }
inline double angle(const Vec2& p) { return std::atan2(p.y(), p.x()); }

inline Mat2 rotation(double phi) {
  Mat2 m;
  m << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return m;
}

struct Tolerances {
  double ode_rel = 1e-10;
  double ode_abs = 1e-12;
  double newton = 1e-11;
  int newton_max_iter = 50;
  double dedup = 1e-6;
  double quad = 1e-10;
  double pullback = 1e-6;
  double flow = 1e-6;
  double identity = 1e-12;
  double action = 1e-12;
  double degenerate = 1e-9;
  double area = 1e-14;
};

struct ModelParams {
  int n = 3;
  double mu = 0.25;
  double eps = 0.1;
  double a = 1.0;
  double N = 1.0;
  double r_sing = 1.0;
  double R = 4.0;
  double R_star = 16.0;
  std::optional<double> c;          // default: saddles at radius r_sing / 2
  std::optional<double> mu_smooth;  // default: mu * r_sing^(2 - n)
  Tolerances tol;
};

enum class RegionKind { OuterExact, SaddleChart, PolySmoothing, AnnulusVR, NoChart };

struct Region {
  RegionKind kind = RegionKind::NoChart;
  int saddle = 0;  // 1-based label, meaningful for SaddleChart only

  friend bool operator==(const Region&, const Region&) = default;
};

inline std::string to_string(const Region& r) {
  switch (r.kind) {
    case RegionKind::OuterExact: return "OuterExact";
    case RegionKind::SaddleChart: return "SaddleChart(" + std::to_string(r.saddle) + ")";
    case RegionKind::PolySmoothing: return "PolySmoothing";
    case RegionKind::AnnulusVR: return "Annulus_VR";
    case RegionKind::NoChart: return "NoChart";
  }
  return "?";
}

/// Value, gradient and Hessian of a scalar field at a point.
struct Jet {
  double value = 0.0;
  Vec2 grad = Vec2::Zero();
  Mat2 hess = Mat2::Zero();
};

/// Covector p dx + q dy.
struct Covector {
  double p = 0.0;
  double q = 0.0;

  double operator()(const Vec2& v) const { return p * v.x() + q * v.y(); }
  Vec2 as_vector() const { return {p, q}; }
};

class TorusModel {
 public:
  explicit TorusModel(ModelParams params) : params_(std::move(params)) {
    const auto& m = params_;
    if (m.n < 2) throw Error(ErrorCode::InvalidModel, "n must be >= 2");
    if (!(m.mu > 0 && m.eps > 0 && m.a > 0 && m.N > 0))
      throw Error(ErrorCode::InvalidModel, "mu, eps, a, N must be positive");
    if (!(0 < m.r_sing && m.r_sing < m.R && m.R < m.R_star))
      throw Error(ErrorCode::InvalidModel, "radii must satisfy 0 < r_sing < R < R_star");

    c_ = m.c.value_or(m.n * std::pow(0.5 * m.r_sing, m.n - 1));
    if (!(c_ > 0)) throw Error(ErrorCode::InvalidModel, "c must be positive");
    mu_smooth_ = m.mu_smooth.value_or(m.mu * std::pow(m.r_sing, 2 - m.n));

    saddle_radius_ = std::pow(c_ / m.n, 1.0 / (m.n - 1));
    if (!(saddle_radius_ < m.r_sing))
      throw Error(ErrorCode::InvalidModel, "saddle seeds must lie inside D(r_sing)");
    for (int j = 0; j < m.n - 1; ++j)
      centers_.push_back(polar_point(saddle_radius_, 2.0 * std::numbers::pi * j / (m.n - 1)));

    double min_pair = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers_.size(); ++i)
      for (std::size_t j = i + 1; j < centers_.size(); ++j)
        min_pair = std::min(min_pair, (centers_[i] - centers_[j]).norm());
    // Axis-aligned squares: two centers at Euclidean distance d are at least
    // d / sqrt2 apart in the sup norm, so 0.4 d / sqrt2 keeps squares
    // disjoint. The second bound keeps each square inside D(r_sing).
    half_width_ = std::min(0.4 * min_pair, 0.9 * (m.r_sing - saddle_radius_)) / std::numbers::sqrt2;
    if (!(half_width_ > 0)) throw Error(ErrorCode::InvalidModel, "empty saddle charts");
  }

  const ModelParams& params() const { return params_; }
  const Tolerances& tol() const { return params_.tol; }
  int n() const { return params_.n; }
  double mu() const { return params_.mu; }
  double mu_smooth() const { return mu_smooth_; }
  double eps() const { return params_.eps; }
  double a() const { return params_.a; }
  double N() const { return params_.N; }
  double c() const { return c_; }
  double r_sing() const { return params_.r_sing; }
  double R() const { return params_.R; }
  double R_star() const { return params_.R_star; }
  double saddle_radius() const { return saddle_radius_; }
  double chart_half_width() const { return half_width_; }

  /// Center of SaddleChart(k), k in 1..n-1.
  const Vec2& chart_center(int k) const { return centers_.at(k - 1); }
  Vec2 to_chart(int k, const Vec2& p) const { return p - chart_center(k); }
  Vec2 from_chart(int k, const Vec2& q) const { return q + chart_center(k); }

  TorusModel with_radii(double R, double R_star) const {
    ModelParams p = params_;
    p.R = R;
    p.R_star = R_star;
    return TorusModel(p);
  }

  TorusModel with_eps(double eps) const {
    ModelParams p = params_;
    p.eps = eps;
    return TorusModel(p);
  }

 private:
  ModelParams params_;
  double c_ = 0;
  double mu_smooth_ = 0;
  double saddle_radius_ = 0;
  double half_width_ = 0;
  std::vector<Vec2> centers_;
};

// ---------------------------------------------------------------------------
// Region membership

inline bool contains(const TorusModel& m, const Region& region, const Vec2& p) {
  if (!p.allFinite()) return false;
  switch (region.kind) {
    case RegionKind::OuterExact: return radius(p) >= m.r_sing();
    case RegionKind::AnnulusVR: return radius(p) >= m.R() && radius(p) <= m.R_star();
    case RegionKind::PolySmoothing: return radius(p) < m.r_sing();
    case RegionKind::SaddleChart: {
      if (region.saddle < 1 || region.saddle > m.n() - 1) return false;
      const Vec2 q = m.to_chart(region.saddle, p);
      return std::abs(q.x()) <= m.chart_half_width() && std::abs(q.y()) <= m.chart_half_width();
    }
    case RegionKind::NoChart: return false;
  }
  return false;
}

inline Region classify_region(const TorusModel& m, const Vec2& p) {
  if (!p.allFinite()) return {RegionKind::NoChart};
  for (int k = 1; k <= m.n() - 1; ++k)
    if (contains(m, {RegionKind::SaddleChart, k}, p)) return {RegionKind::SaddleChart, k};
  if (radius(p) >= m.r_sing()) return {RegionKind::OuterExact};
  return {RegionKind::PolySmoothing};
}

// ---------------------------------------------------------------------------
// Hamiltonian, chart by chart

namespace detail {

inline Jet outer_H_jet(double n_int, double mu, const Vec2& p) {
  const int n = static_cast<int>(n_int);
  const double x = p.x(), y = p.y();
  const double r2 = x * x + y * y;
  if (r2 == 0.0) throw Error(ErrorCode::PointOutsideCharts, "outer Hamiltonian is singular at the origin");
  const std::complex<double> z(x, y);
  const std::complex<double> zn1 = std::pow(z, n - 1);
  const std::complex<double> zn2 = std::pow(z, n - 2);
  const std::complex<double> zn = zn1 * z;

  // H = mu * P * Q with P = Re z^n and Q = (r^2)^m, m = 1 - n/2.
  const double m = 1.0 - 0.5 * n;
  const double P = zn.real();
  const double Px = n * zn1.real(), Py = -n * zn1.imag();
  const double Pxx = n * (n - 1) * zn2.real(), Pxy = -n * (n - 1) * zn2.imag(), Pyy = -Pxx;
  const double Q = std::pow(r2, m);
  const double Qm1 = std::pow(r2, m - 1), Qm2 = std::pow(r2, m - 2);
  const double Qx = 2 * m * x * Qm1, Qy = 2 * m * y * Qm1;
  const double Qxx = 2 * m * Qm1 + 4 * m * (m - 1) * x * x * Qm2;
  const double Qyy = 2 * m * Qm1 + 4 * m * (m - 1) * y * y * Qm2;
  const double Qxy = 4 * m * (m - 1) * x * y * Qm2;

  Jet j;
  j.value = mu * r2 * std::cos(n * std::atan2(y, x));
  j.grad = mu * Vec2(Px * Q + P * Qx, Py * Q + P * Qy);
  j.hess << Pxx * Q + 2 * Px * Qx + P * Qxx, Pxy * Q + Px * Qy + Py * Qx + P * Qxy,
      Pxy * Q + Px * Qy + Py * Qx + P * Qxy, Pyy * Q + 2 * Py * Qy + P * Qyy;
  j.hess *= mu;
  return j;
}

inline Jet saddle_H_jet(double a, const Vec2& q) {
  Jet j;
  j.value = a * q.x() * q.y();
  j.grad = Vec2(a * q.y(), a * q.x());
  j.hess << 0, a, a, 0;
  return j;
}

inline Jet poly_H_jet(int n, double mu, double c, const Vec2& p) {
  const std::complex<double> z(p.x(), p.y());
  const std::complex<double> zn1 = std::pow(z, n - 1);
  const std::complex<double> zn2 = n >= 2 ? std::pow(z, n - 2) : std::complex<double>(0);
  // d/dx f(z) = f'(z), d/dy f(z) = i f'(z) for holomorphic f.
  const std::complex<double> f = zn1 * z - c * z;
  const std::complex<double> df = double(n) * zn1 - c;
  const std::complex<double> d2f = double(n) * (n - 1) * zn2;
  Jet j;
  j.value = mu * f.real();
  j.grad = mu * Vec2(df.real(), -df.imag());
  j.hess << d2f.real(), -d2f.imag(), -d2f.imag(), -d2f.real();
  j.hess *= mu;
  return j;
}

}  // namespace detail

/// Jet of the chart Hamiltonian of `region`, with the point given in plane
/// coordinates. Derivatives are taken with respect to plane coordinates.
inline Jet eval_H_jet(const TorusModel& m, const Region& region, const Vec2& p) {
  switch (region.kind) {
    case RegionKind::OuterExact:
    case RegionKind::AnnulusVR: return detail::outer_H_jet(m.n(), m.mu(), p);
    case RegionKind::SaddleChart: return detail::saddle_H_jet(m.a(), m.to_chart(region.saddle, p));
    case RegionKind::PolySmoothing: return detail::poly_H_jet(m.n(), m.mu_smooth(), m.c(), p);
    case RegionKind::NoChart: break;
  }
  throw Error(ErrorCode::PointOutsideCharts, "no chart Hamiltonian");
}

inline double eval_H(const TorusModel& m, const Vec2& p) {
  const Region r = classify_region(m, p);
  if (r.kind == RegionKind::NoChart) throw Error(ErrorCode::PointOutsideCharts, "point in no chart");
  return eval_H_jet(m, r, p).value;
}

// ---------------------------------------------------------------------------
// The 1-form beta

/// beta without its chart scale: 1/2 (x dy - y dx) in the chart's own
/// coordinates (for the outer chart this is 1/2 r^2 dtheta).
inline Covector unit_liouville(const Vec2& q) { return {-0.5 * q.y(), 0.5 * q.x()}; }

inline Covector eval_beta(const TorusModel& m, const Vec2& p) {
  const Region r = classify_region(m, p);
  switch (r.kind) {
    case RegionKind::OuterExact: return unit_liouville(p);
    case RegionKind::SaddleChart: return unit_liouville(m.to_chart(r.saddle, p));
    case RegionKind::PolySmoothing:
      throw Error(ErrorCode::NoFormulaInSmoothingChart, "beta has no closed form inside D(r_sing)");
    default: break;
  }
  throw Error(ErrorCode::PointOutsideCharts, "point in no chart");
}

/// Whether the smoothing chart may use the stand-in form 1/2 (x dy - y dx).
enum class BetaPolicy { Strict, AllowProxy };

/// Chart scale g of the Liouville form beta = g * 1/2 (x dy - y dx):
/// 1 outside D(r_sing), eps on the saddle charts, 1 for the smoothing proxy.
inline double liouville_scale(const TorusModel& m, const Region& region) {
  switch (region.kind) {
    case RegionKind::OuterExact:
    case RegionKind::AnnulusVR:
    case RegionKind::PolySmoothing: return 1.0;
    case RegionKind::SaddleChart: return m.eps();
    case RegionKind::NoChart: break;
  }
  throw Error(ErrorCode::PointOutsideCharts, "no chart");
}

/// The Liouville form (scale included) of `region` at plane point p.
inline Covector liouville_form(const TorusModel& m, const Region& region, const Vec2& p) {
  const double g = liouville_scale(m, region);
  const Vec2 q = region.kind == RegionKind::SaddleChart ? m.to_chart(region.saddle, p) : p;
  const Covector b = unit_liouville(q);
  return {g * b.p, g * b.q};
}

// ---------------------------------------------------------------------------
// Saddle points of the smoothing Hamiltonian

inline std::vector<Vec2> saddle_points(const TorusModel& m) {
  std::vector<Vec2> out;
  for (int k = 1; k <= m.n() - 1; ++k) {
    const Vec2 p = m.chart_center(k);
    const Jet j = detail::poly_H_jet(m.n(), m.mu_smooth(), m.c(), p);
    const double scale = m.mu_smooth() * m.n() * (m.n() - 1);
    if (j.hess.determinant() > -m.tol().degenerate * scale * scale)
      throw Error(ErrorCode::DegenerateSaddle, "saddle " + std::to_string(k) + " is degenerate");
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const Tolerances& t) {
  j = {{"ode_rel", t.ode_rel}, {"ode_abs", t.ode_abs}, {"newton", t.newton},
       {"newton_max_iter", t.newton_max_iter}, {"dedup", t.dedup}, {"quad", t.quad},
       {"pullback", t.pullback}, {"flow", t.flow}, {"identity", t.identity},
       {"action", t.action}, {"degenerate", t.degenerate}, {"area", t.area}};
}

inline void from_json(const nlohmann::json& j, Tolerances& t) {
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("ode_rel", t.ode_rel);
  get("ode_abs", t.ode_abs);
  get("newton", t.newton);
  get("newton_max_iter", t.newton_max_iter);
  get("dedup", t.dedup);
  get("quad", t.quad);
  get("pullback", t.pullback);
  get("flow", t.flow);
  get("identity", t.identity);
  get("action", t.action);
  get("degenerate", t.degenerate);
  get("area", t.area);
}

inline void to_json(nlohmann::json& j, const ModelParams& p) {
  j = {{"n", p.n}, {"mu", p.mu}, {"eps", p.eps}, {"a", p.a}, {"N", p.N},
       {"r_sing", p.r_sing}, {"R", p.R}, {"R_star", p.R_star}, {"tolerances", p.tol}};
  if (p.c) j["c"] = *p.c;
  if (p.mu_smooth) j["mu_smooth"] = *p.mu_smooth;
}

inline void from_json(const nlohmann::json& j, ModelParams& p) {
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("n", p.n);
  get("mu", p.mu);
  get("eps", p.eps);
  get("a", p.a);
  get("N", p.N);
  get("r_sing", p.r_sing);
  get("R", p.R);
  get("R_star", p.R_star);
  if (j.contains("c")) p.c = j.at("c").get<double>();
  if (j.contains("mu_smooth")) p.mu_smooth = j.at("mu_smooth").get<double>();
  if (j.contains("tolerances")) j.at("tolerances").get_to(p.tol);
}

inline TorusModel model_from_json(const nlohmann::json& j) { return TorusModel(j.get<ModelParams>()); }

}  // namespace sutured
