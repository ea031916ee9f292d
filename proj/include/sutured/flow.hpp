#pragma once

// Hamiltonian vector fields (convention i_X d(beta) = -dH), adaptive flow
// integration with the variational equation, and time-1 fixed points.

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "sutured/model.hpp"

namespace sutured {

struct VectorFieldSample {
  Vec2 pt = Vec2::Zero();
  Vec2 v = Vec2::Zero();
  Mat2 dv = Mat2::Zero();  // derivative of v with respect to plane coordinates
};

/// A chart Hamiltonian: evaluation outside the declared chart is an error.
struct PlaneField {
  const TorusModel* model = nullptr;
  Region domain;

  Jet jet(const Vec2& p) const {
    if (!contains(*model, domain, p))
      throw Error(ErrorCode::PointOutsideCharts, "H evaluated outside " + to_string(domain));
    return eval_H_jet(*model, domain, p);
  }
};

/// A chart Liouville form g/2 (x dy - y dx); its area density is the constant g.
struct OneForm {
  const TorusModel* model = nullptr;
  Region domain;
  BetaPolicy policy = BetaPolicy::Strict;

  Covector at(const Vec2& p) const {
    check(p);
    return liouville_form(*model, domain, p);
  }
  double density(const Vec2& p) const {
    check(p);
    return liouville_scale(*model, domain);
  }

 private:
  void check(const Vec2& p) const {
    if (!contains(*model, domain, p))
      throw Error(ErrorCode::PointOutsideCharts, "beta evaluated outside " + to_string(domain));
    if (domain.kind == RegionKind::PolySmoothing && policy == BetaPolicy::Strict)
      throw Error(ErrorCode::NoFormulaInSmoothingChart, "beta has no closed form inside D(r_sing)");
  }
};

/// X with i_X (w dx^dy) = -dH, i.e. X = (-H_y, H_x) / w, and its derivative.
inline VectorFieldSample hamiltonian_vector_field(const Jet& h, double density, const Vec2& pt,
                                                  double area_tol = 1e-14) {
  if (!(density > area_tol)) throw Error(ErrorCode::DegenerateAreaForm, "d(beta) density not positive");
  VectorFieldSample s;
  s.pt = pt;
  s.v = Vec2(-h.grad.y(), h.grad.x()) / density;
  s.dv << -h.hess(1, 0), -h.hess(1, 1), h.hess(0, 0), h.hess(0, 1);
  s.dv /= density;
  return s;
}

inline VectorFieldSample hamiltonian_vector_field(const PlaneField& H, const OneForm& beta, const Vec2& pt) {
  return hamiltonian_vector_field(H.jet(pt), beta.density(pt), pt, H.model->tol().area);
}

/// Integrand -H + beta(X_H) of the exactness primitive.
inline double exactness_integrand(const TorusModel& m, const Region& chart, const Jet& h,
                                  const VectorFieldSample& x, const Vec2& p) {
  return -h.value + liouville_form(m, chart, p)(x.v);
}

/// The Hamiltonian field of a single chart, extended analytically beyond the
/// chart; `contains` reports chart membership for trajectory tracking.
class ChartVectorField {
 public:
  ChartVectorField(const TorusModel& m, Region chart) : m_(&m), chart_(chart) {
    if (chart.kind == RegionKind::AnnulusVR) chart_ = {RegionKind::OuterExact};
  }

  const TorusModel& model() const { return *m_; }
  const Region& chart() const { return chart_; }
  bool contains(const Vec2& p) const { return sutured::contains(*m_, chart_, p); }
  Region region_at(const Vec2&) const { return chart_; }

  VectorFieldSample sample(const Vec2& p) const {
    return hamiltonian_vector_field(eval_H_jet(*m_, chart_, p), liouville_scale(*m_, chart_), p, m_->tol().area);
  }
  double integrand(const Vec2& p) const {
    const Jet h = eval_H_jet(*m_, chart_, p);
    return exactness_integrand(*m_, chart_, h, hamiltonian_vector_field(h, liouville_scale(*m_, chart_), p), p);
  }

 private:
  const TorusModel* m_;
  Region chart_;
};

/// The piecewise field of the whole model: each point uses the formula of
/// the chart it is classified into. The smoothing chart uses the proxy
/// density 1.
class ModelVectorField {
 public:
  explicit ModelVectorField(const TorusModel& m) : m_(&m) {}

  const TorusModel& model() const { return *m_; }
  bool contains(const Vec2& p) const { return p.allFinite(); }
  Region region_at(const Vec2& p) const { return classify_region(*m_, p); }

  VectorFieldSample sample(const Vec2& p) const {
    const Region r = classify_region(*m_, p);
    return hamiltonian_vector_field(eval_H_jet(*m_, r, p), liouville_scale(*m_, r), p, m_->tol().area);
  }
  double integrand(const Vec2& p) const {
    const Region r = classify_region(*m_, p);
    const Jet h = eval_H_jet(*m_, r, p);
    return exactness_integrand(*m_, r, h, hamiltonian_vector_field(h, liouville_scale(*m_, r), p), p);
  }

 private:
  const TorusModel* m_;
};

struct FlowOptions {
  bool integrate_exactness = false;  // also integrate -H + beta(X_H) along the path
  bool record_path = false;
  std::optional<double> rel_tol;  // overrides model tolerances when set
  std::optional<double> abs_tol;
  long max_steps = 50000;
};

struct FlowResult {
  Vec2 endpoint = Vec2::Zero();
  Mat2 jacobian = Mat2::Identity();
  double time = 0.0;
  bool stayed_in_chart = true;
  std::optional<double> exit_time;
  long accepted_steps = 0;
  long rejected_steps = 0;
  double exactness = 0.0;  // integral of the exactness integrand (if requested)
  bool visited_smoothing = false;  // an accepted point fell inside D(r_sing) off the saddle charts
  double min_radius = 0.0;
  double max_radius = 0.0;
  std::vector<Vec2> path;
};

/// Integrates p' = X(p) together with J' = DX(p) J for time t >= 0 with an
/// adaptive Dormand-Prince 5(4) pair.
template <class Field>
FlowResult flow(const Field& field, const Vec2& p0, double t, const FlowOptions& opt = {}) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 7>;
  const TorusModel& m = field.model();
  if (t < 0) throw Error(ErrorCode::InvalidModel, "flow time must be nonnegative");

  FlowResult res;
  res.endpoint = p0;
  res.min_radius = res.max_radius = radius(p0);
  res.stayed_in_chart = field.contains(p0);
  if (!res.stayed_in_chart) res.exit_time = 0.0;
  if (opt.record_path) res.path.push_back(p0);
  if (t == 0.0) return res;

  auto system = [&](const State& s, State& ds, double) {
    const Vec2 p(s[0], s[1]);
    const VectorFieldSample x = field.sample(p);
    Mat2 J;
    J << s[2], s[3], s[4], s[5];
    const Mat2 dJ = x.dv * J;
    ds[0] = x.v.x();
    ds[1] = x.v.y();
    ds[2] = dJ(0, 0);
    ds[3] = dJ(0, 1);
    ds[4] = dJ(1, 0);
    ds[5] = dJ(1, 1);
    ds[6] = opt.integrate_exactness ? field.integrand(p) : 0.0;
  };

  const double rel = opt.rel_tol.value_or(m.tol().ode_rel);
  const double abs = opt.abs_tol.value_or(m.tol().ode_abs);
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(abs, rel);

  State s{p0.x(), p0.y(), 1.0, 0.0, 0.0, 1.0, 0.0};
  double time = 0.0;
  double dt = std::min(t, 1e-3);
  while (time < t) {
    if (res.accepted_steps + res.rejected_steps > opt.max_steps)
      throw Error(ErrorCode::StepFailure, "step budget exhausted at t=" + std::to_string(time));
    if (time + dt > t) dt = t - time;
    const auto outcome = stepper.try_step(system, s, time, dt);
    if (outcome == odeint::success) {
      ++res.accepted_steps;
      const Vec2 p(s[0], s[1]);
      if (!p.allFinite()) throw Error(ErrorCode::StepFailure, "non-finite state");
      const double r = radius(p);
      res.min_radius = std::min(res.min_radius, r);
      res.max_radius = std::max(res.max_radius, r);
      if (classify_region(m, p).kind == RegionKind::PolySmoothing) res.visited_smoothing = true;
      if (res.stayed_in_chart && !field.contains(p)) {
        res.stayed_in_chart = false;
        res.exit_time = time;
      }
      if (opt.record_path) res.path.push_back(p);
    } else {
      ++res.rejected_steps;
      if (dt < 1e-15 * std::max(1.0, t))
        throw Error(ErrorCode::StepFailure, "step size underflow at t=" + std::to_string(time));
    }
  }
  res.time = time;
  res.endpoint = Vec2(s[0], s[1]);
  res.jacobian << s[2], s[3], s[4], s[5];
  res.exactness = s[6];
  return res;
}

/// Like flow(), but raises LeftChartDomain when the trajectory leaves the field's chart.
template <class Field>
FlowResult flow_in_chart(const Field& field, const Vec2& p0, double t, const FlowOptions& opt = {}) {
  FlowResult r = flow(field, p0, t, opt);
  if (!r.stayed_in_chart) throw LeftChartDomainError(*r.exit_time, "trajectory left its chart");
  return r;
}

// ---------------------------------------------------------------------------
// Fixed points of the time-1 map

enum class FixedPointType { Elliptic, PositiveHyperbolic, NegativeHyperbolic, Degenerate };

inline std::string to_string(FixedPointType t) {
  switch (t) {
    case FixedPointType::Elliptic: return "Elliptic";
    case FixedPointType::PositiveHyperbolic: return "PositiveHyperbolic";
    case FixedPointType::NegativeHyperbolic: return "NegativeHyperbolic";
    case FixedPointType::Degenerate: return "Degenerate";
  }
  return "?";
}

inline std::array<std::complex<double>, 2> eigenvalues(const Mat2& a) {
  const double tr = a.trace(), det = a.determinant();
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4 * det));
  // Pick the larger-magnitude root directly and recover the other from det
  // to avoid cancellation for strongly hyperbolic maps.
  const std::complex<double> big = tr >= 0 ? 0.5 * (tr + disc) : 0.5 * (tr - disc);
  const std::complex<double> small = big == 0.0 ? std::complex<double>(0) : det / big;
  return {small, big};
}

/// Eigenvalue rule for a linearized return map: an eigenvalue within `tol`
/// of 1 is degenerate; complex pairs are elliptic; real pairs hyperbolic by sign.
inline FixedPointType classify_linear_map(const Mat2& a, double tol) {
  const auto ev = eigenvalues(a);
  for (const auto& l : ev)
    if (std::abs(l - 1.0) <= tol) return FixedPointType::Degenerate;
  if (std::abs(ev[0].imag()) > tol * std::max(1.0, std::abs(ev[0]))) return FixedPointType::Elliptic;
  if (ev[0].real() > 0 && ev[1].real() > 0) return FixedPointType::PositiveHyperbolic;
  if (ev[0].real() < 0 && ev[1].real() < 0) return FixedPointType::NegativeHyperbolic;
  return FixedPointType::Degenerate;
}

struct FixedPointReport {
  Vec2 location = Vec2::Zero();
  double residual = 0.0;
  std::array<std::complex<double>, 2> eigenvalues{};
  FixedPointType classification = FixedPointType::Degenerate;
  Mat2 jacobian = Mat2::Identity();
  int iterations = 0;
};

struct SeedFailure {
  std::size_t seed_index = 0;
  ErrorCode code = ErrorCode::NewtonDivergence;
  std::string message;
};

struct FixedPointSearch {
  std::vector<FixedPointReport> points;
  std::vector<SeedFailure> failures;
};

/// Newton iteration on phi(p) - p, one run per seed; converged points are
/// deduplicated within tol.dedup. Per-seed failures are reported, not thrown.
template <class Field>
FixedPointSearch find_fixed_points(const Field& field, const std::vector<Vec2>& seeds, double period = 1.0) {
  const Tolerances& tol = field.model().tol();
  FixedPointSearch out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    Vec2 p = seeds[i];
    try {
      bool converged = false;
      FlowResult fr;
      int it = 0;
      for (; it <= tol.newton_max_iter; ++it) {
        fr = flow(field, p, period);
        const Vec2 F = fr.endpoint - p;
        if (F.norm() < tol.newton) {
          converged = true;
          break;
        }
        const Mat2 A = fr.jacobian - Mat2::Identity();
        if (std::abs(A.determinant()) < 1e-14 * std::max(1.0, A.squaredNorm()))
          throw Error(ErrorCode::SingularNewtonMatrix, "DPhi - I is singular near seed");
        p -= A.inverse() * F;
        if (!p.allFinite()) break;
      }
      if (!converged) throw Error(ErrorCode::NewtonDivergence, "no convergence from seed");

      bool duplicate = false;
      for (const auto& q : out.points)
        if ((q.location - p).norm() < tol.dedup) duplicate = true;
      if (duplicate) continue;

      FixedPointReport rep;
      rep.location = p;
      rep.residual = (fr.endpoint - p).norm();
      rep.jacobian = fr.jacobian;
      rep.eigenvalues = eigenvalues(fr.jacobian);
      rep.classification = classify_linear_map(fr.jacobian, tol.degenerate);
      rep.iterations = it;
      out.points.push_back(rep);
    } catch (const Error& e) {
      out.failures.push_back({i, e.code(), e.what()});
    }
  }
  return out;
}

}  // namespace sutured
