#pragma once

// Static SVG figures: level sets of H_sing and of the chart Hamiltonians, and
// the arc diagram of the gluing data with P_plus, P_minus and D shaded.
// Output depends only on the model (fixed grids, fixed number formatting).

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "sutured/gluing.hpp"

namespace sutured {

namespace svg {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

/// Maps the square [-L, L]^2 onto a size x size panel at (ox, oy), y up.
struct Frame {
  double L = 1.0;
  double size = 400.0;
  double ox = 0.0;
  double oy = 0.0;

  double sx(double x) const { return ox + (x + L) / (2 * L) * size; }
  double sy(double y) const { return oy + (L - y) / (2 * L) * size; }
  std::string xy(const Vec2& p) const { return num(sx(p.x())) + "," + num(sy(p.y())); }
};

using Segment = std::array<Vec2, 2>;

/// Marching squares for one level on the cells accepted by `keep`
/// (cell indices i, j); the ambiguous saddle cells are resolved with the
/// cell-center value.
inline std::vector<Segment> contour(const std::vector<std::vector<double>>& f, const std::vector<double>& xs,
                                    const std::vector<double>& ys, double level,
                                    const std::function<bool(int, int)>& keep) {
  std::vector<Segment> out;
  auto lerp = [&](const Vec2& a, const Vec2& b, double fa, double fb) {
    const double t = (level - fa) / (fb - fa);
    return Vec2(a + t * (b - a));
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      if (!keep(static_cast<int>(i), static_cast<int>(j))) continue;
      const Vec2 p[4] = {{xs[i], ys[j]}, {xs[i + 1], ys[j]}, {xs[i + 1], ys[j + 1]}, {xs[i], ys[j + 1]}};
      const double v[4] = {f[i][j], f[i + 1][j], f[i + 1][j + 1], f[i][j + 1]};
      int idx = 0;
      for (int c = 0; c < 4; ++c)
        if (v[c] > level) idx |= 1 << c;
      if (idx == 0 || idx == 15) continue;
      Vec2 e[4];  // crossing on edge c = (c, c + 1)
      for (int c = 0; c < 4; ++c) {
        const int d = (c + 1) % 4;
        if (((idx >> c) & 1) != ((idx >> d) & 1)) e[c] = lerp(p[c], p[d], v[c], v[d]);
      }
      std::vector<int> edges;
      for (int c = 0; c < 4; ++c)
        if (((idx >> c) & 1) != ((idx >> ((c + 1) % 4)) & 1)) edges.push_back(c);
      if (edges.size() == 2) {
        out.push_back({e[edges[0]], e[edges[1]]});
      } else {
        // corners 0 and 2 on one side, 1 and 3 on the other
        const bool center_high = 0.25 * (v[0] + v[1] + v[2] + v[3]) > level;
        const bool zero_high = idx & 1;
        if (center_high == zero_high) {
          out.push_back({e[0], e[1]});
          out.push_back({e[2], e[3]});
        } else {
          out.push_back({e[3], e[0]});
          out.push_back({e[1], e[2]});
        }
      }
    }
  return out;
}

inline std::string path_of(const std::vector<Segment>& segs, const Frame& fr) {
  std::string d;
  for (const auto& s : segs) d += "M" + fr.xy(s[0]) + "L" + fr.xy(s[1]);
  return d;
}

inline std::string polyline(const std::vector<Vec2>& pts, const Frame& fr, bool closed) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i) d += (i ? "L" : "M") + fr.xy(pts[i]);
  if (closed) d += "Z";
  return d;
}

inline std::string circle(const Frame& fr, double r, const std::string& cls) {
  return "<circle class=\"" + cls + "\" cx=\"" + num(fr.sx(0)) + "\" cy=\"" + num(fr.sy(0)) + "\" r=\"" +
         num(r / (2 * fr.L) * fr.size) + "\"/>\n";
}

inline std::vector<double> levels(double lo, double hi, int count) {
  // symmetric around 0 so the zero set (the prong separatrices) is drawn
  const double m = std::max(std::abs(lo), std::abs(hi));
  std::vector<double> out;
  for (int i = -count; i <= count; ++i) out.push_back(m * i / (count + 1));
  return out;
}

}  // namespace svg

/// Left panel: H_sing = mu r^2 cos(n theta) on the whole disk. Right panel:
/// the model H chart by chart (outer, saddle squares, smoothing disk), each
/// chart contoured only on cells lying entirely inside it. An even `grid`
/// keeps the origin (where the outer chart is singular) off the nodes.
inline std::string levelsets_svg(const TorusModel& m, int grid = 160) {
  if (grid % 2 != 0) throw Error(ErrorCode::InvalidModel, "levelsets grid size must be even");
  const double L = 1.6 * m.r_sing();
  const double panel = 400.0, pad = 20.0;
  std::vector<double> xs(grid), ys(grid);
  for (int i = 0; i < grid; ++i) xs[i] = ys[i] = -L + 2 * L * i / (grid - 1);
  auto table = [&](const std::function<double(const Vec2&)>& f) {
    std::vector<std::vector<double>> t(grid, std::vector<double>(grid));
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) t[i][j] = f({xs[i], ys[j]});
    return t;
  };

  std::string body;
  const svg::Frame left{L, panel, pad, pad + 20}, right{L, panel, 2 * pad + panel, pad + 20};

  const Region outer{RegionKind::OuterExact};
  const auto hsing = table([&](const Vec2& p) { return eval_H_jet(m, outer, p).value; });
  const double hmax = m.mu() * L * L;
  const auto all = [](int, int) { return true; };
  body += "<g class=\"panel H_sing\">\n";
  for (double c : svg::levels(-hmax, hmax, 7))
    body += "<path class=\"level" + std::string(c == 0 ? " zero" : "") + "\" d=\"" +
            svg::path_of(svg::contour(hsing, xs, ys, c, all), left) + "\"/>\n";
  body += "</g>\n";

  // chart of each grid node, and a cell belongs to a chart iff all 4 corners do
  std::vector<std::vector<Region>> chart(grid, std::vector<Region>(grid));
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) chart[i][j] = classify_region(m, {xs[i], ys[j]});
  auto same = [](const Region& a, const Region& b) { return a.kind == b.kind && a.saddle == b.saddle; };
  std::vector<Region> charts{outer, {RegionKind::PolySmoothing}};
  for (int k = 1; k < m.n(); ++k) charts.push_back({RegionKind::SaddleChart, k});

  body += "<g class=\"panel H\">\n";
  for (const Region& ch : charts) {
    auto inside = [&](int i, int j) {
      return same(chart[i][j], ch) && same(chart[i + 1][j], ch) && same(chart[i + 1][j + 1], ch) &&
             same(chart[i][j + 1], ch);
    };
    const auto h = table([&](const Vec2& p) { return eval_H_jet(m, ch, p).value; });
    double lo = 0, hi = 0;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j)
        if (same(chart[i][j], ch)) {
          lo = std::min(lo, h[i][j]);
          hi = std::max(hi, h[i][j]);
        }
    std::string cls = ch.kind == RegionKind::OuterExact      ? "outer"
                      : ch.kind == RegionKind::PolySmoothing ? "smoothing"
                                                             : "saddle saddle_" + std::to_string(ch.saddle);
    body += "<g class=\"chart " + cls + "\">\n";
    for (double c : svg::levels(lo, hi, 7)) {
      const auto segs = svg::contour(h, xs, ys, c, inside);
      if (!segs.empty())
        body += "<path class=\"level" + std::string(c == 0 ? " zero" : "") + "\" d=\"" + svg::path_of(segs, right) + "\"/>\n";
    }
    body += "</g>\n";
  }
  for (int k = 1; k < m.n(); ++k) {
    const double w = m.chart_half_width();
    const Vec2 c = m.chart_center(k);
    body += "<path class=\"chart-border\" d=\"" +
            svg::polyline({c + Vec2(-w, -w), c + Vec2(w, -w), c + Vec2(w, w), c + Vec2(-w, w)}, right, true) + "\"/>\n";
    body += "<circle class=\"saddle-point\" cx=\"" + svg::num(right.sx(c.x())) + "\" cy=\"" + svg::num(right.sy(c.y())) +
            "\" r=\"2.50\"/>\n";
  }
  body += svg::circle(right, m.r_sing(), "chart-border");
  body += "</g>\n";

  const double width = 3 * pad + 2 * panel, height = 2 * pad + panel + 20;
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg::num(width) + "\" height=\"" + svg::num(height) +
         "\" viewBox=\"0 0 " + svg::num(width) + " " + svg::num(height) + "\">\n";
  out += "<style>path{fill:none;stroke-width:0.8}.level{stroke:#3465a4}.zero{stroke:#cc0000;stroke-width:1.4}"
         ".chart-border{fill:none;stroke:#888;stroke-dasharray:4 3}.saddle-point{fill:#000}"
         "text{font:14px sans-serif}</style>\n";
  out += "<text x=\"" + svg::num(pad) + "\" y=\"" + svg::num(pad + 10) + "\">H_sing, n = " + std::to_string(m.n()) + "</text>\n";
  out += "<text x=\"" + svg::num(2 * pad + panel) + "\" y=\"" + svg::num(pad + 10) + "\">H (per chart)</text>\n";
  out += body + "</svg>\n";
  return out;
}

/// P_plus, P_minus and D shaded, the six arc families drawn as polylines
/// (class "arc <family>"), the circle r = R dashed.
inline std::string gluing_svg(const GluingData& gd) {
  double extent = gd.model.R();
  for (ArcFamily f : detail::kAllFamilies)
    for (const Arc& a : gd.family(f))
      for (const Vec2& p : a.points) extent = std::max(extent, radius(p));
  const double L = 1.1 * extent, size = 600.0, pad = 20.0;
  const svg::Frame fr{L, size, pad, pad};
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  const std::string dim = svg::num(size + 2 * pad);
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + dim + "\" height=\"" + dim + "\" viewBox=\"0 0 " + dim +
         " " + dim + "\">\n";
  out += "<style>.region{stroke:none;fill-opacity:0.35}.D{fill:#c4a000}.P_plus{fill:#cc0000}.P_minus{fill:#3465a4}"
         ".arc{fill:none;stroke-width:1.6}.a_plus,.a_minus{stroke:#a40000}.b_plus,.b_minus{stroke:#204a87}"
         ".c_plus,.c_minus{stroke:#4e9a06}.a_minus,.b_minus,.c_minus{stroke-dasharray:5 3}"
         ".guide{fill:none;stroke:#888;stroke-dasharray:2 4}</style>\n";
  out += "<path class=\"region D\" d=\"" + svg::polyline(gd.boundary_D, fr, true) + "\"/>\n";
  out += "<path class=\"region P_plus\" d=\"" + svg::polyline(gd.boundary_P_plus, fr, true) + "\"/>\n";
  out += "<path class=\"region P_minus\" d=\"" + svg::polyline(gd.boundary_P_minus, fr, true) + "\"/>\n";
  out += svg::circle(fr, gd.model.R(), "guide");
  for (ArcFamily f : detail::kAllFamilies)
    for (const Arc& a : gd.family(f))
      out += "<path class=\"arc " + to_string(f) + "\" data-k=\"" + std::to_string(a.k) + "\" d=\"" +
             svg::polyline(a.points, fr, false) + "\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace sutured
