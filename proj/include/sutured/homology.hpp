#pragma once

// Generators and ranks of sutured ECH, cylindrical contact homology and
// contact homology for the orbit catalog, by enumeration. Differentials are
// certified zero through the action filtration: every generator of class h
// has action 2 N h, and each differential strictly lowers action.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "sutured/orbits.hpp"

namespace sutured {

using BigInt = boost::multiprecision::cpp_int;

enum class Theory { ECH, CYL, CH };

inline std::string to_string(Theory t) {
  switch (t) {
    case Theory::ECH: return "ech";
    case Theory::CYL: return "cyl";
    case Theory::CH: return "ch";
  }
  return "?";
}

inline Theory theory_from_string(const std::string& s) {
  if (s == "ech") return Theory::ECH;
  if (s == "cyl") return Theory::CYL;
  if (s == "ch") return Theory::CH;
  throw Error(ErrorCode::ConfigError, "unknown theory '" + s + "' (expected ech, cyl or ch)");
}

// ---------------------------------------------------------------------------
// Orbit sets (ECH generators)

struct OrbitSet {
  std::vector<std::pair<ReebOrbit, int>> pairs;  // distinct orbits, multiplicity >= 1

  bool admissible() const {
    return std::all_of(pairs.begin(), pairs.end(),
                       [](const auto& p) { return p.second >= 1 && (!p.first.type.hyperbolic() || p.second == 1); });
  }
  int total_class() const {
    int c = 0;
    for (const auto& [o, m] : pairs) c += m * o.homology_class;
    return c;
  }
  double total_action() const {
    double a = 0;
    for (const auto& [o, m] : pairs) a += m * o.action;
    return a;
  }
  std::vector<std::pair<int, int>> labels() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [o, m] : pairs) out.emplace_back(o.label, m);
    return out;
  }
};

/// Admissible orbit sets of total class h, in lexicographic order of the
/// (label, multiplicity) lists. Hyperbolic orbits carry multiplicity 1.
inline std::vector<OrbitSet> ech_generators(const OrbitCatalog& cat, int h) {
  std::vector<OrbitSet> out;
  if (h < 0) return out;
  OrbitSet cur;
  auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t j = i; j < cat.size(); ++j) {
      const ReebOrbit& o = cat[j];
      if (o.homology_class <= 0) continue;
      const int max_mult = o.type.hyperbolic() ? 1 : remaining / o.homology_class;
      for (int m = 1; m <= max_mult && m * o.homology_class <= remaining; ++m) {
        cur.pairs.emplace_back(o, m);
        self(self, j + 1, remaining - m * o.homology_class);
        cur.pairs.pop_back();
      }
    }
  };
  rec(rec, 0, h);
  return out;
}

// ---------------------------------------------------------------------------
// Contact homology monomials

struct ChMonomial {
  std::vector<std::pair<int, int>> factors;  // distinct (label, s), lexicographic
  int total_class = 0;
};

/// Good iterates gamma_l^s with class s * class(gamma_l) <= h_max, sorted by (l, s).
inline std::vector<OrbitIterate> good_iterates(const OrbitCatalog& cat, int h_max) {
  std::vector<OrbitIterate> out;
  for (const ReebOrbit& o : cat) {
    if (o.homology_class <= 0) continue;
    for (int s = 1; s * o.homology_class <= h_max; ++s) {
      if (!classify_good_bad(o.type, s)) continue;
      OrbitIterate it;
      it.base = o;
      it.s = s;
      it.action = s * o.action;
      it.homology_class = s * o.homology_class;
      it.cz_index = cz_index(o.type, s);
      it.is_good = true;
      out.push_back(it);
    }
  }
  return out;
}

/// All sets of distinct good iterates with total class h (the brute-force
/// side of the contact homology rank).
inline std::vector<ChMonomial> ch_monomials(const OrbitCatalog& cat, int h) {
  std::vector<ChMonomial> out;
  if (h < 0) return out;
  const std::vector<OrbitIterate> gens = good_iterates(cat, h);
  ChMonomial cur;
  auto rec = [&](auto&& self, std::size_t i, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t j = i; j < gens.size(); ++j) {
      if (gens[j].homology_class > remaining) continue;
      cur.factors.emplace_back(gens[j].base.label, gens[j].s);
      cur.total_class += gens[j].homology_class;
      self(self, j + 1, remaining - gens[j].homology_class);
      cur.factors.pop_back();
      cur.total_class -= gens[j].homology_class;
    }
  };
  rec(rec, 0, h);
  return out;
}

/// Number of monomials in every class 0..h_max, by one depth-first walk over
/// all sets of distinct good iterates (nothing is materialized).
inline std::vector<std::uint64_t> count_ch_monomials(const OrbitCatalog& cat, int h_max) {
  std::vector<std::uint64_t> tally(std::max(h_max, 0) + 1, 0);
  if (h_max < 0) return {};
  std::vector<int> classes;
  for (const auto& it : good_iterates(cat, h_max)) classes.push_back(it.homology_class);
  std::sort(classes.begin(), classes.end());
  tally[0] = 1;
  auto rec = [&](auto&& self, std::size_t i, int sum) -> void {
    for (std::size_t j = i; j < classes.size(); ++j) {
      const int next = sum + classes[j];
      if (next > h_max) break;
      ++tally[next];
      self(self, j + 1, next);
    }
  };
  rec(rec, 0, 0);
  return tally;
}

// ---------------------------------------------------------------------------
// Truncated power series with exact coefficients

struct TruncatedSeries {
  std::vector<BigInt> c;  // c[0..degree]

  TruncatedSeries() = default;
  explicit TruncatedSeries(int degree) : c(degree + 1, 0) {}

  static TruncatedSeries one(int degree) {
    TruncatedSeries s(degree);
    s.c[0] = 1;
    return s;
  }
  /// 1 + x^s truncated at `degree`.
  static TruncatedSeries binomial(int s, int degree) {
    TruncatedSeries r = one(degree);
    if (s <= degree) r.c[s] += 1;
    return r;
  }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool operator==(const TruncatedSeries&) const = default;
};

inline TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.degree() != b.degree()) throw Error(ErrorCode::InvalidModel, "series truncation degrees differ");
  TruncatedSeries out(a.degree());
  for (int i = 0; i <= a.degree(); ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; i + j <= a.degree(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  }
  return out;
}

/// prod_{s=1}^{h_max} (1 + x^s)^{n-1} truncated at h_max; factors with
/// s > h_max do not reach degree h_max.
inline TruncatedSeries ch_generating_series(int n, int h_max) {
  TruncatedSeries out = TruncatedSeries::one(h_max);
  for (int s = 1; s <= h_max; ++s)
    for (int l = 1; l <= n - 1; ++l) out = series_mul(out, TruncatedSeries::binomial(s, h_max));
  return out;
}

// ---------------------------------------------------------------------------
// Vanishing certificates

struct VanishingCertificate {
  Theory theory = Theory::ECH;
  int h = 0;
  std::vector<double> actions;
  double max_pairwise_action_gap = 0.0;
  double expected_action = 0.0;  // 2 N h
  bool conclusion = false;
};

/// Every generator of class h must carry the same action; otherwise the
/// filtration argument does not apply and FiltrationHypothesisViolated is raised.
inline VanishingCertificate certify_vanishing(Theory theory, int h, std::vector<double> actions, double N,
                                              double tol) {
  VanishingCertificate cert;
  cert.theory = theory;
  cert.h = h;
  cert.expected_action = 2 * N * h;
  if (!actions.empty()) {
    const auto [lo, hi] = std::minmax_element(actions.begin(), actions.end());
    cert.max_pairwise_action_gap = *hi - *lo;
  }
  cert.actions = std::move(actions);
  cert.conclusion = cert.max_pairwise_action_gap <= tol;
  if (!cert.conclusion)
    throw Error(ErrorCode::FiltrationHypothesisViolated,
                to_string(theory) + " class " + std::to_string(h) + ": generator actions differ by " +
                    std::to_string(cert.max_pairwise_action_gap));
  return cert;
}

inline double catalog_N(const OrbitCatalog& cat) { return cat.empty() ? 0.0 : 0.5 * cat.front().action; }

struct DifferentialResult {
  std::vector<std::pair<OrbitSet, long>> image;  // empty: the zero chain
  VanishingCertificate certificate;
};

/// d(a) = 0 for an admissible orbit set a: every generator sharing its class
/// has the same action, so only unions of trivial cylinders connect them.
inline DifferentialResult ech_differential(const OrbitSet& a, const OrbitCatalog& cat, double tol = 1e-12) {
  if (!a.admissible()) throw Error(ErrorCode::InvalidModel, "orbit set is not admissible");
  std::vector<double> actions;
  for (const OrbitSet& g : ech_generators(cat, a.total_class())) actions.push_back(g.total_action());
  actions.push_back(a.total_action());
  DifferentialResult out;
  out.certificate = certify_vanishing(Theory::ECH, a.total_class(), std::move(actions), catalog_N(cat), tol);
  return out;
}

// ---------------------------------------------------------------------------
// Rank tables

struct RankTable {
  Theory theory = Theory::ECH;
  int n = 0;
  int h_max = 0;
  std::vector<BigInt> entries;  // h = 0..h_max
  std::vector<VanishingCertificate> certificates;
  bool cross_checked = true;  // contact homology: series matched the monomial count

  BigInt rank(int h) const {
    if (h < 0) return 0;  // generators all have h >= 0
    if (h > h_max) throw Error(ErrorCode::InvalidModel, "class beyond the table's truncation");
    return entries[h];
  }
  BigInt total() const {
    BigInt t = 0;
    for (const auto& e : entries) t += e;
    return t;
  }
};

inline int catalog_n(const OrbitCatalog& cat) { return static_cast<int>(cat.size()) + 1; }

inline RankTable ech_rank_table(const OrbitCatalog& cat, int h_max, double tol = 1e-12) {
  RankTable t{Theory::ECH, catalog_n(cat), h_max};
  for (int h = 0; h <= h_max; ++h) {
    const auto gens = ech_generators(cat, h);
    for (const auto& g : gens)
      if (!g.admissible()) throw Error(ErrorCode::OracleMismatch, "inadmissible ECH generator");
    std::vector<double> actions;
    for (const auto& g : gens) actions.push_back(g.total_action());
    t.certificates.push_back(certify_vanishing(Theory::ECH, h, std::move(actions), catalog_N(cat), tol));
    t.entries.push_back(gens.size());
  }
  return t;
}

inline RankTable cyl_rank_table(const OrbitCatalog& cat, int h_max, double tol = 1e-12) {
  RankTable t{Theory::CYL, catalog_n(cat), h_max};
  const auto gens = good_iterates(cat, h_max);
  for (int h = 0; h <= h_max; ++h) {
    std::vector<double> actions;
    for (const auto& g : gens)
      if (h >= 1 && g.homology_class == h) actions.push_back(g.action);
    t.entries.push_back(actions.size());
    t.certificates.push_back(certify_vanishing(Theory::CYL, h, std::move(actions), catalog_N(cat), tol));
  }
  return t;
}

/// Series coefficients, cross-checked class by class against a brute-force
/// count of monomials; disagreement raises OracleMismatch. The count walks
/// every monomial, so it is skipped (cross_checked = false) once the table
/// holds more than `enumeration_limit` of them.
inline RankTable ch_rank_table(const OrbitCatalog& cat, int h_max, double tol = 1e-12,
                               std::uint64_t enumeration_limit = 100'000'000) {
  const int n = catalog_n(cat);
  RankTable t{Theory::CH, n, h_max};
  const TruncatedSeries series = ch_generating_series(n, h_max);
  BigInt total = 0;
  for (const auto& c : series.c) total += c;
  t.cross_checked = total <= enumeration_limit;
  const std::vector<std::uint64_t> counts = t.cross_checked ? count_ch_monomials(cat, h_max) : std::vector<std::uint64_t>{};
  for (int h = 0; h <= h_max; ++h) {
    if (t.cross_checked && series.c[h] != counts[h])
      throw Error(ErrorCode::OracleMismatch, "contact homology class " + std::to_string(h) + ": series " +
                                                 series.c[h].str() + " vs enumeration " + std::to_string(counts[h]));
    t.entries.push_back(series.c[h]);
    // A monomial's action is the sum of its factors' actions, so over class h
    // it lies between the extremes h * action / class taken orbit by orbit;
    // those extremes are recorded and their spread bounds the gap.
    std::vector<double> actions;
    for (const ReebOrbit& o : cat)
      if (o.homology_class > 0) actions.push_back(h * o.action / o.homology_class);
    t.certificates.push_back(certify_vanishing(Theory::CH, h, std::move(actions), catalog_N(cat), tol));
  }
  return t;
}

inline RankTable rank_table(Theory theory, const OrbitCatalog& cat, int h_max, double tol = 1e-12) {
  switch (theory) {
    case Theory::ECH: return ech_rank_table(cat, h_max, tol);
    case Theory::CYL: return cyl_rank_table(cat, h_max, tol);
    case Theory::CH: return ch_rank_table(cat, h_max, tol);
  }
  throw Error(ErrorCode::ConfigError, "unknown theory");
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const VanishingCertificate& c) {
  j = {{"theory", to_string(c.theory)},
       {"h", c.h},
       {"generators", c.actions.size()},
       {"expected_action", c.expected_action},
       {"max_pairwise_action_gap", c.max_pairwise_action_gap},
       {"differential_vanishes", c.conclusion}};
}

/// Ranks beyond 2^53 would lose precision as JSON numbers, so large entries
/// are written as decimal strings.
inline nlohmann::json bigint_json(const BigInt& v) {
  if (v <= BigInt(9007199254740992LL)) return static_cast<std::uint64_t>(v);
  return v.str();
}

inline void to_json(nlohmann::json& j, const RankTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (int h = 0; h <= t.h_max; ++h) rows.push_back({{"h", h}, {"rank", bigint_json(t.entries[h])}});
  j = {{"theory", to_string(t.theory)}, {"n", t.n}, {"h_max", t.h_max}, {"ranks", rows},
       {"cross_checked", t.cross_checked}, {"certificates", t.certificates}};
}

inline std::string to_csv(const RankTable& t, bool header = true) {
  std::string out = header ? "theory,n,h,rank\n" : "";
  for (int h = 0; h <= t.h_max; ++h)
    out += to_string(t.theory) + "," + std::to_string(t.n) + "," + std::to_string(h) + "," + t.entries[h].str() + "\n";
  return out;
}

}  // namespace sutured
