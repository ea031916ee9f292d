#pragma once

// Embedded Reeb orbits gamma_1..gamma_{n-1} through the saddle fixed points,
// their iterates, Conley-Zehnder indices and good/bad status.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sutured/flow.hpp"

namespace sutured {

/// Linearized type of an orbit in the product trivialization: an elliptic
/// orbit carries its rotation phi, a hyperbolic one the rotation integer r
/// (even for positive, odd for negative hyperbolic).
struct OrbitType {
  FixedPointType kind = FixedPointType::PositiveHyperbolic;
  double phi = 0.0;
  int r = 0;

  static OrbitType elliptic(double phi) { return {FixedPointType::Elliptic, phi, 0}; }
  static OrbitType positive_hyperbolic(int r = 0) {
    if (r % 2 != 0) throw Error(ErrorCode::InvalidModel, "positive hyperbolic rotation integer must be even");
    return {FixedPointType::PositiveHyperbolic, 0.0, r};
  }
  static OrbitType negative_hyperbolic(int r = 1) {
    if (r % 2 == 0) throw Error(ErrorCode::InvalidModel, "negative hyperbolic rotation integer must be odd");
    return {FixedPointType::NegativeHyperbolic, 0.0, r};
  }
  bool hyperbolic() const { return kind != FixedPointType::Elliptic; }
};

struct ReebOrbit {
  int label = 1;  // 1..n-1, following the saddle charts
  OrbitType type;
  double action = 0.0;
  int homology_class = 1;
  Mat2 return_map = Mat2::Identity();
  Vec2 location = Vec2::Zero();
};

using OrbitCatalog = std::vector<ReebOrbit>;

struct OrbitIterate {
  ReebOrbit base;
  int s = 1;
  double action = 0.0;
  int homology_class = 1;
  int cz_index = 0;
  bool is_good = true;
  Mat2 return_map = Mat2::Identity();
};

/// The first j <= q_max with |j phi - round(j phi)| < j tol, if any.
inline std::optional<long> resonance_denominator(double phi, long q_max, double tol = 1e-12) {
  for (long q = 1; q <= q_max; ++q) {
    const double x = q * phi;
    if (std::abs(x - std::round(x)) < q * tol) return q;
  }
  return std::nullopt;
}

/// 2 floor(k phi) + 1 for elliptic orbits, k r for hyperbolic ones. The
/// elliptic formula needs gamma^1..gamma^k nondegenerate, i.e. j phi not an
/// integer for j <= k (checked up to denominators 10^6).
inline int cz_index(const OrbitType& type, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidModel, "multiplicity must be >= 1");
  if (type.kind == FixedPointType::Elliptic) {
    if (const auto q = resonance_denominator(type.phi, std::min<long>(k, 1'000'000)))
      throw Error(ErrorCode::ResonantRotation,
                  "rotation " + std::to_string(type.phi) + " is resonant with denominator " + std::to_string(*q));
    return 2 * static_cast<int>(std::floor(k * type.phi)) + 1;
  }
  if (type.kind == FixedPointType::Degenerate) throw Error(ErrorCode::DegenerateIterate, "degenerate orbit");
  return k * type.r;
}

/// Even iterates of negative hyperbolic orbits are bad; everything else is good.
inline bool classify_good_bad(const OrbitType& type, int s) {
  if (s < 1) throw Error(ErrorCode::InvalidModel, "multiplicity must be >= 1");
  return !(type.kind == FixedPointType::NegativeHyperbolic && s % 2 == 0);
}

inline Mat2 matrix_power(const Mat2& a, int s) {
  Mat2 out = Mat2::Identity(), base = a;
  for (unsigned e = static_cast<unsigned>(s); e; e >>= 1, base = base * base)
    if (e & 1u) out = out * base;
  return out;
}

inline OrbitIterate iterate(const ReebOrbit& orbit, int s, double degenerate_tol = 1e-9) {
  if (s < 1) throw Error(ErrorCode::InvalidModel, "multiplicity must be >= 1");
  // Eigenvalues of P^s are the s-th powers of those of P; powering the
  // eigenvalues avoids reading them off an ill-conditioned matrix power.
  for (const auto& l : eigenvalues(orbit.return_map))
    if (std::abs(std::pow(l, s) - 1.0) <= degenerate_tol)
      throw Error(ErrorCode::DegenerateIterate,
                  "iterate " + std::to_string(s) + " of gamma_" + std::to_string(orbit.label) + " is degenerate");
  OrbitIterate it;
  it.base = orbit;
  it.s = s;
  it.action = s * orbit.action;
  it.homology_class = s * orbit.homology_class;
  it.cz_index = cz_index(orbit.type, s);
  it.is_good = classify_good_bad(orbit.type, s);
  it.return_map = matrix_power(orbit.return_map, s);
  return it;
}

/// One embedded orbit per time-1 fixed point p_k of the model flow. The
/// return map is the numeric jacobian at p_k; the action is 2N and the class
/// 1. `rotation_integer` fixes r for hyperbolic orbits (0 in the product
/// framing, where the eigen-directions do not rotate).
inline OrbitCatalog build_orbits(const TorusModel& m, std::optional<int> rotation_integer = std::nullopt) {
  const FixedPointSearch fp = find_fixed_points(ModelVectorField(m), saddle_points(m));
  if (static_cast<int>(fp.points.size()) != m.n() - 1)
    throw Error(ErrorCode::OrbitCountMismatch, "found " + std::to_string(fp.points.size()) +
                                                   " fixed points, expected " + std::to_string(m.n() - 1));
  OrbitCatalog out;
  for (std::size_t i = 0; i < fp.points.size(); ++i) {
    const FixedPointReport& p = fp.points[i];
    ReebOrbit o;
    const Region chart = classify_region(m, p.location);
    o.label = chart.kind == RegionKind::SaddleChart ? chart.saddle : static_cast<int>(i) + 1;
    switch (p.classification) {
      case FixedPointType::PositiveHyperbolic: o.type = OrbitType::positive_hyperbolic(rotation_integer.value_or(0)); break;
      case FixedPointType::NegativeHyperbolic: o.type = OrbitType::negative_hyperbolic(rotation_integer.value_or(1)); break;
      case FixedPointType::Elliptic:
        o.type = OrbitType::elliptic(std::arg(p.eigenvalues[1]) / (2 * std::numbers::pi));
        break;
      case FixedPointType::Degenerate:
        throw Error(ErrorCode::DegenerateIterate, "fixed point " + std::to_string(i) + " is degenerate");
    }
    o.action = 2 * m.N();
    o.homology_class = 1;
    o.return_map = p.jacobian;
    o.location = p.location;
    out.push_back(o);
  }
  std::sort(out.begin(), out.end(), [](const ReebOrbit& a, const ReebOrbit& b) { return a.label < b.label; });
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const OrbitType& t) {
  j = {{"kind", to_string(t.kind)}};
  if (t.kind == FixedPointType::Elliptic)
    j["phi"] = t.phi;
  else
    j["r"] = t.r;
}

inline nlohmann::json matrix_json(const Mat2& a) { return {{a(0, 0), a(0, 1)}, {a(1, 0), a(1, 1)}}; }

inline void to_json(nlohmann::json& j, const ReebOrbit& o) {
  j = {{"label", o.label}, {"type", o.type}, {"action", o.action}, {"class", o.homology_class},
       {"return_map", matrix_json(o.return_map)}, {"location", {o.location.x(), o.location.y()}}};
}

inline void to_json(nlohmann::json& j, const OrbitIterate& it) {
  j = {{"label", it.base.label}, {"s", it.s}, {"action", it.action}, {"class", it.homology_class},
       {"cz_index", it.cz_index}, {"good", it.is_good}, {"return_map", matrix_json(it.return_map)}};
}

}  // namespace sutured
