#include <gtest/gtest.h>

#include <map>

#include "sutured/homology.hpp"

using namespace sutured;

namespace {

const OrbitCatalog& catalog(int n) {
  static std::map<int, OrbitCatalog> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    ModelParams p;
    p.n = n;
    it = cache.emplace(n, build_orbits(TorusModel(p))).first;
  }
  return it->second;
}

// Pascal's triangle, independent of the enumeration.
long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<long> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<long> next(i + 1, 1);
    for (int j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
    row = next;
  }
  return row[k];
}

}  // namespace

TEST(EchGenerators, SmallCases) {
  const auto g = ech_generators(catalog(3), 1);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].labels(), (std::vector<std::pair<int, int>>{{1, 1}}));
  EXPECT_EQ(g[1].labels(), (std::vector<std::pair<int, int>>{{2, 1}}));

  const auto empty = ech_generators(catalog(4), 0);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_TRUE(empty[0].pairs.empty());
  EXPECT_TRUE(empty[0].admissible());

  EXPECT_TRUE(ech_generators(catalog(2), 3).empty());
  EXPECT_TRUE(ech_generators(catalog(2), -1).empty());
}

TEST(EchGenerators, AdmissibleWithActionTwoNh) {
  for (int n = 2; n <= 6; ++n)
    for (int h = 0; h <= n - 1; ++h)
      for (const auto& g : ech_generators(catalog(n), h)) {
        EXPECT_TRUE(g.admissible());
        EXPECT_EQ(g.total_class(), h);
        EXPECT_DOUBLE_EQ(g.total_action(), 2.0 * h);
        for (const auto& [o, m] : g.pairs) EXPECT_EQ(m, 1);
      }
}

TEST(EchRankTable, MatchesBinomials) {
  for (int n = 2; n <= 8; ++n) {
    const RankTable t = ech_rank_table(catalog(n), n + 2);
    for (int h = 0; h <= n + 2; ++h) EXPECT_EQ(t.rank(h), binom(n - 1, h)) << "n=" << n << " h=" << h;
    EXPECT_EQ(t.total(), BigInt(1) << (n - 1));
    for (const auto& c : t.certificates) {
      EXPECT_TRUE(c.conclusion);
      EXPECT_EQ(c.max_pairwise_action_gap, 0.0);
    }
  }
  const RankTable t3 = ech_rank_table(catalog(3), 2);
  EXPECT_EQ(t3.entries, (std::vector<BigInt>{1, 2, 1}));
  EXPECT_EQ(ech_rank_table(catalog(2), 1).entries, (std::vector<BigInt>{1, 1}));
}

TEST(EchRankTable, EllipticOrbitsMayRepeat) {
  // a catalog with one elliptic orbit: multiplicities are unrestricted there
  OrbitCatalog cat = catalog(3);
  cat[1].type = OrbitType::elliptic(std::sqrt(2.0) - 1);
  const auto g = ech_generators(cat, 3);
  // {g1 g2^2}, {g2^3}
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].labels(), (std::vector<std::pair<int, int>>{{1, 1}, {2, 2}}));
  EXPECT_EQ(g[1].labels(), (std::vector<std::pair<int, int>>{{2, 3}}));
  OrbitSet bad;
  bad.pairs.emplace_back(cat[0], 2);
  EXPECT_FALSE(bad.admissible());
}

TEST(EchDifferential, VanishesWithZeroGap) {
  const OrbitCatalog& cat = catalog(5);
  OrbitSet a;
  a.pairs.emplace_back(cat[0], 1);
  a.pairs.emplace_back(cat[2], 1);
  const DifferentialResult d = ech_differential(a, cat);
  EXPECT_TRUE(d.image.empty());
  EXPECT_TRUE(d.certificate.conclusion);
  EXPECT_EQ(d.certificate.max_pairwise_action_gap, 0.0);
  EXPECT_DOUBLE_EQ(d.certificate.expected_action, 4.0);

  const DifferentialResult e = ech_differential(OrbitSet{}, cat);
  EXPECT_TRUE(e.image.empty());
  EXPECT_TRUE(e.certificate.conclusion);
}

TEST(EchDifferential, UnequalActionsBreakTheCertificate) {
  OrbitCatalog cat = catalog(4);
  cat[1].action += 1e-6;
  OrbitSet a;
  a.pairs.emplace_back(cat[0], 1);
  try {
    ech_differential(a, cat);
    FAIL() << "expected FiltrationHypothesisViolated";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FiltrationHypothesisViolated);
  }
  EXPECT_THROW(ech_rank_table(cat, 3), Error);
}

TEST(CylRankTable, RankIsNMinusOne) {
  EXPECT_EQ(cyl_rank_table(catalog(4), 7).rank(7), 3);
  EXPECT_EQ(cyl_rank_table(catalog(4), 7).rank(0), 0);
  EXPECT_EQ(cyl_rank_table(catalog(2), 1).rank(1), 1);
  for (int n = 2; n <= 8; ++n) {
    const RankTable t = cyl_rank_table(catalog(n), 20);
    for (int h = 1; h <= 20; ++h) EXPECT_EQ(t.rank(h), n - 1);
    for (const auto& c : t.certificates) EXPECT_TRUE(c.conclusion);
  }
}

TEST(CylRankTable, BadIteratesAreDropped) {
  OrbitCatalog cat = catalog(3);
  cat[0].type = OrbitType::negative_hyperbolic(1);
  const RankTable t = cyl_rank_table(cat, 6);
  for (int h = 1; h <= 6; ++h) EXPECT_EQ(t.rank(h), h % 2 == 0 ? 1 : 2);
}

TEST(ChMonomials, SmallCases) {
  const auto m23 = ch_monomials(catalog(2), 3);
  ASSERT_EQ(m23.size(), 2u);
  EXPECT_EQ(m23[0].factors, (std::vector<std::pair<int, int>>{{1, 1}, {1, 2}}));
  EXPECT_EQ(m23[1].factors, (std::vector<std::pair<int, int>>{{1, 3}}));

  const auto m32 = ch_monomials(catalog(3), 2);
  ASSERT_EQ(m32.size(), 3u);
  EXPECT_EQ(m32[0].factors, (std::vector<std::pair<int, int>>{{1, 1}, {2, 1}}));
  EXPECT_EQ(m32[1].factors, (std::vector<std::pair<int, int>>{{1, 2}}));
  EXPECT_EQ(m32[2].factors, (std::vector<std::pair<int, int>>{{2, 2}}));

  for (int n = 2; n <= 5; ++n) {
    const auto m0 = ch_monomials(catalog(n), 0);
    ASSERT_EQ(m0.size(), 1u);
    EXPECT_TRUE(m0[0].factors.empty());
  }
}

TEST(ChRankTable, KnownCoefficients) {
  for (int n = 2; n <= 6; ++n) EXPECT_EQ(ch_rank_table(catalog(n), 4).rank(1), n - 1);
  EXPECT_EQ(ch_rank_table(catalog(2), 6).rank(6), 4);
  EXPECT_EQ(ch_rank_table(catalog(3), 3).rank(3), 6);
  EXPECT_EQ(ch_rank_table(catalog(3), 3).rank(-2), 0);
}

TEST(ChRankTable, LargeTableIsCrossChecked) {
  const RankTable t = ch_rank_table(catalog(8), 20);
  EXPECT_TRUE(t.cross_checked);
  EXPECT_EQ(t.rank(20), BigInt(9701097));
  for (const auto& c : t.certificates) EXPECT_TRUE(c.conclusion);
  const RankTable skipped = ch_rank_table(catalog(8), 20, 1e-12, 1000);
  EXPECT_FALSE(skipped.cross_checked);
  EXPECT_EQ(skipped.entries, t.entries);
}

TEST(RankTableOutput, CsvAndJson) {
  const RankTable t = ch_rank_table(catalog(2), 3);
  EXPECT_EQ(to_csv(t), "theory,n,h,rank\nch,2,0,1\nch,2,1,1\nch,2,2,1\nch,2,3,2\n");
  const nlohmann::json j = t;
  EXPECT_EQ(j["theory"], "ch");
  EXPECT_EQ(j["ranks"][3]["rank"], 2);
  EXPECT_EQ(j["certificates"].size(), 4u);
  EXPECT_EQ(theory_from_string("cyl"), Theory::CYL);
  EXPECT_THROW(theory_from_string("sft"), Error);
}

TEST(RankTableOutput, HugeRanksSerializeAsStrings) {
  EXPECT_TRUE(bigint_json(BigInt(12)).is_number());
  EXPECT_TRUE(bigint_json(BigInt(1) << 80).is_string());
}
