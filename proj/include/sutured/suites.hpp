#pragma once

// Verification suites behind `sutured verify`: each one runs a batch of
// numeric certifications on a model and reports per-check defects.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sutured/config.hpp"
#include "sutured/contact.hpp"
#include "sutured/exactness.hpp"
#include "sutured/gluing.hpp"
#include "sutured/orbits.hpp"

namespace sutured {

struct SuiteCheck {
  std::string name;
  bool pass = false;
  double max_defect = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  nlohmann::json details = nlohmann::json::object();
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;

  bool pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
  }
};

/// Summary of a VerificationReport: the per-sample list is dropped, the
/// worst included sample kept.
inline SuiteCheck summarize(const std::string& name, const VerificationReport& r) {
  SuiteCheck c{name, r.pass, r.max_defect, r.tolerance, r.included_count(), r.details};
  const SampleDefect* worst = nullptr;
  for (const auto& s : r.samples)
    if (s.included && (!worst || s.defect > worst->defect)) worst = &s;
  if (worst) c.details["worst"] = {{"x", worst->point.x()}, {"y", worst->point.y()}, {"defect", worst->defect}};
  if (r.included_count() < r.samples.size()) c.details["excluded"] = r.samples.size() - r.included_count();
  return c;
}

inline SuiteCheck failed_check(const std::string& name, const Error& e) {
  SuiteCheck c;
  c.name = name;
  c.max_defect = std::numeric_limits<double>::infinity();
  c.details = {{"error", e.what()}, {"code", std::string(to_string(e.code()))}};
  return c;
}

namespace detail {

inline FlowOptions tight_flow() {
  FlowOptions o;
  o.rel_tol = 1e-12;
  o.abs_tol = 1e-14;
  return o;
}

/// Draws from `draw` until `count` points whose time-1 chart trajectory
/// stays in S (outer chart) or in the saddle chart they start in.
template <class Draw>
std::vector<Vec2> certified_points(const TorusModel& m, std::size_t count, Draw draw, RegionKind want) {
  std::vector<Vec2> out;
  for (std::uint64_t batch = 0; out.size() < count && batch < 64; ++batch)
    for (const Vec2& p : draw(batch)) {
      if (out.size() == count) break;
      const ChartTrajectory ct = chart_trajectory(m, p);
      if (ct.in_invariant_set && ct.chart.kind == want) out.push_back(p);
    }
  return out;
}

/// Runs `body`; a library error inside becomes a failed check called `name`.
template <class Body>
void guarded(SuiteReport& rep, const std::string& name, Body body) {
  try {
    body();
  } catch (const Error& e) {
    rep.checks.push_back(failed_check(name, e));
  }
}

}  // namespace detail

/// beta(X_H) = H per chart, f at the saddles and on S, energy and area
/// drift, return maps, phi^* beta = beta on S u V_k, phi^* beta - beta = df
/// and the 2 pi / n symmetry.
inline SuiteReport run_dynamics_suite(const TorusModel& m, const SampleSizes& sz = {}, std::uint64_t seed = 1) {
  SuiteReport rep{"dynamics", {}};
  const int n = m.n();
  const auto per_chart = static_cast<std::size_t>(sz.per_chart);

  // beta(X_H) = H, one check per closed-form chart
  rep.checks.push_back(summarize("beta_XH_outer", verify_beta_XH_identity(m, sample_annulus(m.r_sing(), m.R_star(), per_chart, seed))));
  for (int k = 1; k < n; ++k)
    rep.checks.push_back(summarize("beta_XH_saddle_" + std::to_string(k),
                                   verify_beta_XH_identity(m, sample_saddle_chart(m, k, m.chart_half_width(), per_chart, seed + k))));

  // f vanishes at the fixed points and along trajectories inside S
  detail::guarded(rep, "f_at_saddles", [&] {
    VerificationReport r;
    r.check = "|f(p_k)|";
    r.tolerance = 1e-10;
    const auto saddles = saddle_points(m);
    for (std::size_t i = 0; i < saddles.size(); ++i)
      r.samples.push_back({i, saddles[i], std::abs(exactness_function(m, saddles[i], 1.0))});
    r.finalize();
    rep.checks.push_back(summarize("f_at_saddles", r));
  });
  detail::guarded(rep, "f_on_S", [&] {
    VerificationReport r;
    r.check = "|f| on S";
    r.tolerance = 1e-8;
    const auto pts = detail::certified_points(
        m, static_cast<std::size_t>(sz.outer),
        [&](std::uint64_t b) { return sample_annulus(m.r_sing(), m.R_star(), sz.outer, seed + 1000 + b); },
        RegionKind::OuterExact);
    for (std::size_t i = 0; i < pts.size(); ++i) r.samples.push_back({i, pts[i], std::abs(exactness_function(m, pts[i], 1.0))});
    r.finalize();
    if (pts.size() < static_cast<std::size_t>(sz.outer)) r.pass = false;
    rep.checks.push_back(summarize("f_on_S", r));
  });

  // energy and area along chart-local trajectories, half in S, half in the V_k
  detail::guarded(rep, "energy_drift", [&] {
    VerificationReport energy, area;
    energy.check = "|H(phi^t p) - H(p)|, t in [0, 1]";
    area.check = "|det DPhi - 1|";
    energy.tolerance = area.tolerance = 1e-8;
    const std::size_t total = static_cast<std::size_t>(sz.trajectories);
    std::vector<std::pair<Region, Vec2>> starts;
    const auto outer = detail::certified_points(
        m, total - total / 2, [&](std::uint64_t b) { return sample_annulus(m.r_sing(), m.R(), total, seed + 2000 + b); },
        RegionKind::OuterExact);
    for (const Vec2& p : outer) starts.push_back({{RegionKind::OuterExact}, p});
    for (std::size_t i = 0; i < total / 2; ++i) {
      const int k = 1 + static_cast<int>(i % (n - 1));
      starts.push_back({{RegionKind::SaddleChart, k}, sample_vk(m, k, 1, seed + 3000 + i)[0]});
    }
    FlowOptions opt = detail::tight_flow();
    opt.record_path = true;
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const auto& [chart, p] = starts[i];
      const FlowResult r = flow(ChartVectorField(m, chart), p, 1.0, opt);
      const double h0 = eval_H_jet(m, chart, p).value;
      double drift = 0.0;
      for (const Vec2& q : r.path) drift = std::max(drift, std::abs(eval_H_jet(m, chart, q).value - h0));
      SampleDefect e{i, p, drift}, a{i, p, std::abs(r.jacobian.determinant() - 1.0)};
      if (!r.stayed_in_chart) {
        e.included = a.included = false;
        e.note = a.note = "left its chart";
      }
      energy.samples.push_back(e);
      area.samples.push_back(a);
    }
    energy.finalize();
    area.finalize();
    if (starts.size() < total) energy.pass = area.pass = false;
    rep.checks.push_back(summarize("energy_drift", energy));
    rep.checks.push_back(summarize("area_drift", area));
  });

  // return maps at the saddles against diag(e^{-a/eps}, e^{a/eps})
  try {
    const OrbitCatalog cat = build_orbits(m);
    VerificationReport r;
    r.check = "DPhi(p_k) = diag(e^{-a/eps}, e^{a/eps}) (relative)";
    r.tolerance = 1e-6;
    const double lam = std::exp(m.a() / m.eps());
    bool all_ph = true;
    for (std::size_t i = 0; i < cat.size(); ++i) {
      const Mat2& J = cat[i].return_map;
      const double d = std::max({std::abs(J(0, 0) * lam - 1), std::abs(J(1, 1) / lam - 1),
                                 std::abs(J(0, 1)) / lam, std::abs(J(1, 0)) / lam});
      r.samples.push_back({i, cat[i].location, d});
      all_ph = all_ph && cat[i].type.kind == FixedPointType::PositiveHyperbolic;
    }
    r.finalize();
    r.details = {{"fixed_points", cat.size()}, {"expected", n - 1}, {"all_positive_hyperbolic", all_ph}};
    r.pass = r.pass && all_ph && static_cast<int>(cat.size()) == n - 1;
    rep.checks.push_back(summarize("return_maps", r));
  } catch (const Error& e) {
    rep.checks.push_back(failed_check("return_maps", e));
  }

  // phi^* beta = beta on S u V_k
  detail::guarded(rep, "pullback_invariance", [&] {
    const std::size_t total = static_cast<std::size_t>(sz.pullback);
    const std::size_t in_vk = total / 4;
    std::vector<Vec2> pts = detail::certified_points(
        m, total - in_vk, [&](std::uint64_t b) { return sample_annulus(m.r_sing(), m.R_star(), total, seed + 4000 + b); },
        RegionKind::OuterExact);
    for (std::size_t i = 0; i < in_vk; ++i) {
      const int k = 1 + static_cast<int>(i % (n - 1));
      pts.push_back(sample_vk(m, k, 1, seed + 5000 + i)[0]);
    }
    const auto both = verify_exact_symplectomorphism(m, pts);
    SuiteCheck c = summarize("pullback_invariance", both.pullback);
    if (c.samples < total) c.pass = false;
    rep.checks.push_back(c);
  });

  // phi^* beta - beta = df on a spread of charts, smoothing chart included
  detail::guarded(rep, "df_identity", [&] {
    // the smoothing chart's polynomial H extends off the chart with fast
    // growth; starts whose chart-local flow cannot be integrated are skipped
    const std::size_t want = static_cast<std::size_t>(sz.df);
    std::vector<Vec2> pts;
    std::size_t skipped = 0;
    for (std::uint64_t b = 0; pts.size() < want && b < 64; ++b)
      for (const Vec2& p : sample_annulus(0.3 * m.r_sing(), m.R(), want, seed + 6000 + b)) {
        if (pts.size() == want) break;
        try {
          chart_trajectory(m, p, 1.0, detail::tight_flow());
          pts.push_back(p);
        } catch (const Error&) {
          ++skipped;
        }
      }
    SuiteCheck c = summarize("df_identity", verify_exact_symplectomorphism(m, pts).exactness);
    c.details["skipped_starts"] = skipped;
    if (pts.size() < want) c.pass = false;
    rep.checks.push_back(c);
  });

  detail::guarded(rep, "symmetry", [&] {
    rep.checks.push_back(summarize("symmetry", verify_symmetry(m, sample_annulus(m.r_sing(), m.R(), 50, seed + 7000))));
  });
  return rep;
}

/// alpha ^ d alpha > 0 on the grid, the Reeb field (vertical, alpha(R) = 1)
/// and h = 0 on S u V_k.
inline SuiteReport run_contact_suite(const TorusModel& m, const SampleSizes& sz = {}, double eps_chi = 0.1,
                                     std::uint64_t seed = 1) {
  SuiteReport rep{"contact", {}};
  const ContactFormModel cfm(m, CutoffPair(eps_chi));
  detail::guarded(rep, "contact_condition", [&] {
    rep.checks.push_back(summarize("contact_condition", verify_contact_condition(cfm, {sz.grid_nx, sz.grid_ny, sz.grid_nt})));
  });

  // Reeb samples across the disk; points whose time-1 model flow cannot be
  // integrated (where the chart fields meet head-on) are excluded, as on the grid.
  std::vector<Vec2> pts = sample_annulus(0.0, m.R(), 32, seed + 100);
  for (int k = 1; k < m.n(); ++k)
    for (const Vec2& p : sample_vk(m, k, 4, seed + 200 + k)) pts.push_back(p);
  const double ts[] = {-1.0, -0.5, -0.1 + 1e-3, 0.0, 0.37, 0.9, 1.0};

  VerificationReport spatial, normal;
  spatial.check = "spatial part of R_alpha";
  normal.check = "|alpha(R_alpha) - 1|";
  spatial.tolerance = std::numeric_limits<double>::min();  // identically zero
  normal.tolerance = 1e-10;
  detail::guarded(rep, "reeb_field", [&] {
    for (const Vec2& p : pts)
      for (double t : ts) {
        const std::size_t i = spatial.samples.size();
        SampleDefect sp{i, p}, no{i, p};
        try {
          const ReebSample s = reeb_field(cfm, t, p, false);
          sp.defect = s.spatial.norm();
          no.defect = s.alpha_of_reeb_defect;
        } catch (const Error& e) {
          if (e.code() == ErrorCode::NonpositiveDenominator) throw;
          sp.included = no.included = false;
          sp.note = no.note = e.what();
        }
        spatial.samples.push_back(sp);
        normal.samples.push_back(no);
      }
    spatial.finalize();
    normal.finalize();
    rep.checks.push_back(summarize("reeb_vertical", spatial));
    rep.checks.push_back(summarize("reeb_normalization", normal));
  });

  detail::guarded(rep, "h_vanishes_on_S_and_Vk", [&] {
    VerificationReport hz;
    hz.check = "h = 0 on S u V_k";
    hz.tolerance = m.tol().quad;
    const auto in_s = detail::certified_points(
        m, 20, [&](std::uint64_t b) { return sample_annulus(m.r_sing(), m.R_star(), 20, seed + 300 + b); },
        RegionKind::OuterExact);
    std::vector<Vec2> hz_pts = in_s;
    for (int k = 1; k < m.n(); ++k)
      for (const Vec2& p : sample_vk(m, k, 5, seed + 400 + k)) hz_pts.push_back(p);
    for (std::size_t i = 0; i < hz_pts.size(); ++i) hz.samples.push_back({i, hz_pts[i], std::abs(cfm.h(hz_pts[i]))});
    hz.finalize();
    rep.checks.push_back(summarize("h_vanishes_on_S_and_Vk", hz));
  });
  return rep;
}

/// Builds the gluing data and re-verifies it; also reports the suture count.
inline SuiteReport run_gluing_suite(const TorusModel& m) {
  SuiteReport rep{"gluing", {}};
  std::optional<GluingData> built;
  try {
    built = construct_gluing_data(m);
  } catch (const Error& e) {
    rep.checks.push_back(failed_check("construction", e));
    return rep;
  }
  const GluingData& gd = *built;
  const GluingReport g = verify_gluing(gd);
  for (const PropertyCheck& p : g.properties)
    rep.checks.push_back({p.name, p.pass, -p.margin, 0.0, 1, {{"margin", p.margin}, {"note", p.note}}});
  rep.checks.push_back(summarize("transversality", g.transversality));
  rep.checks.push_back(summarize("identification", g.identification));
  rep.checks.push_back(summarize("containment", g.containment));
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& [k, v] : g.disjointness.items()) min_gap = std::min(min_gap, v.get<double>());
  rep.checks.push_back({"disjointness", g.disjoint, -min_gap, 0.0, g.disjointness.size(), {{"distances", g.disjointness}}});
  try {
    const int count = suture_count(gd);
    rep.checks.push_back({"suture_count", count == 2 * m.n(), static_cast<double>(std::abs(count - 2 * m.n())), 0.5, 1,
                          {{"suture_count", count}, {"expected", 2 * m.n()}}});
  } catch (const Error& e) {
    rep.checks.push_back(failed_check("suture_count", e));
  }
  rep.checks.back().details["R"] = gd.model.R();
  rep.checks.back().details["R_star"] = gd.model.R_star();
  rep.checks.back().details["R_tilde"] = gd.R_tilde;
  return rep;
}

// ---------------------------------------------------------------------------
// JSON / CSV

inline void to_json(nlohmann::json& j, const SuiteCheck& c) {
  j = {{"name", c.name}, {"pass", c.pass}, {"samples", c.samples}};
  // infinities are not representable in JSON
  j["max_defect"] = std::isfinite(c.max_defect) ? nlohmann::json(c.max_defect) : nlohmann::json(nullptr);
  j["tolerance"] = c.tolerance;
  if (!c.details.empty()) j["details"] = c.details;
}

inline void to_json(nlohmann::json& j, const SuiteReport& r) {
  j = {{"suite", r.suite}, {"pass", r.pass()}, {"checks", r.checks}};
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string format_double(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv(const std::vector<SuiteReport>& reports) {
  std::string out = "suite,check,pass,max_defect,tolerance,samples\n";
  for (const auto& r : reports)
    for (const auto& c : r.checks)
      out += csv_field(r.suite) + "," + csv_field(c.name) + "," + (c.pass ? "true" : "false") + "," +
             format_double(c.max_defect) + "," + format_double(c.tolerance) + "," + std::to_string(c.samples) + "\n";
  return out;
}

}  // namespace sutured
