#include <gtest/gtest.h>

#include "eqtri/io.hpp"
#include "eqtri/screening.hpp"
#include "oracles.hpp"

using namespace eqtri;

namespace {

WeierstrassCurve example_a_integral() { return integral_model(build_family_A(1, 4, 2, 4, 1, 1).curve).curve; }

}  // namespace

TEST(S1, EmptySums) {
  auto e = example_a_integral();
  EXPECT_EQ(mestre_nagao_s1(e, 2), 0.0);  // 2 divides the discriminant
  EXPECT_EQ(mestre_nagao_s1(e, 1), 0.0);
  EXPECT_EQ(mestre_nagao_s1(e, std::span<const std::uint64_t>{}), 0.0);
  EXPECT_THROW(mestre_nagao_s1(build_family_A(1, 4, 2, 4, 1, 1).curve, 100), DomainError);
}

TEST(S1, MatchesEnumerationOracle) {
  auto e = example_a_integral();
  EXPECT_NEAR(mestre_nagao_s1(e, 100), oracle::s1(e, 100), 1e-10);
  auto m = minimal_model(build_family_C(3, 2).curve).curve;
  EXPECT_NEAR(mestre_nagao_s1(m, 150), oracle::s1(m, 150), 1e-10);
}

TEST(S1, Additive) {
  auto e = example_a_integral();
  double low = mestre_nagao_s1(e, 1000);
  double high = mestre_nagao_s1(e, 10'000);
  double part = mestre_nagao_s1_range(e, 1000, 10'000);
  EXPECT_NEAR(high, low + part, 1e-9);
  EXPECT_EQ(mestre_nagao_s1_range(e, 10'000, 10'000), 0.0);
}

TEST(Grid, SingleTupleA) {
  ParamBox box;
  for (long v : {1, 4, 2, 4, 1, 1}) box.push_back({BigRat(v)});
  GridOptions opt;
  opt.X = 1000;
  auto res = grid_search(FamilyTag::A, box, opt);
  ASSERT_EQ(res.records.size(), 1u);
  EXPECT_EQ(res.records[0].rank_lower_bound, 5);
  EXPECT_EQ(res.records[0].status_string(), "minimal|verdict");
  EXPECT_EQ(res.records[0].fingerprint.substr(0, 3), "mm:");
}

TEST(Grid, TableThreeRowScreens) {
  // Builder order is (p, q, r, h, k); the table prints k before h.
  ParamBox box = {{-12}, {7}, {-3}, {-1, 15}, {-1, 15}};
  GridOptions opt;
  opt.X = 500;
  auto res = grid_search(FamilyTag::B, box, opt);
  EXPECT_EQ(res.grid_size, 4u);
  EXPECT_EQ(res.records.size(), 2u);
  EXPECT_EQ(res.skipped["DomainError"], 2u);  // h = k
  for (const auto& r : res.records) EXPECT_GE(r.rank_lower_bound, 6);
}

TEST(Grid, EmptyBox) {
  ParamBox box = {{1}, {}, {1}, {1}, {1}, {1}};
  auto res = grid_search(FamilyTag::A, box);
  EXPECT_TRUE(res.records.empty());
  EXPECT_EQ(res.grid_size, 0u);
  EXPECT_THROW(grid_search(FamilyTag::A, ParamBox{{1}}), DomainError);
}

TEST(Grid, SkipAccountingRankingAndThreshold) {
  ParamBox box = {integer_range(-2, 2), integer_range(1, 3)};
  GridOptions opt;
  opt.X = 300;
  opt.s1_threshold = 1e9;
  auto res = grid_search(FamilyTag::C, box, opt);
  std::size_t skipped = 0;
  for (const auto& [reason, n] : res.skipped) skipped += n;
  EXPECT_EQ(res.grid_size, res.records.size() + skipped);
  EXPECT_EQ(res.evaluated, res.records.size());
  for (std::size_t i = 1; i < res.records.size(); ++i) {
    const auto& a = res.records[i - 1];
    const auto& b = res.records[i];
    EXPECT_TRUE(a.s1 > b.s1 || (a.s1 == b.s1 && a.params < b.params));
  }
  for (const auto& r : res.records) {
    EXPECT_EQ(r.rank_lower_bound, -1);
    EXPECT_NE(r.status_string().find("below_threshold"), std::string::npos);
  }
  opt.top_k = 3;
  auto top = grid_search(FamilyTag::C, box, opt);
  ASSERT_EQ(top.records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(top.records[i].params, res.records[i].params);
}

TEST(Grid, WorkerCountInvariant) {
  ParamBox box = {integer_range(1, 3), integer_range(1, 2), integer_range(2, 3), integer_range(-1, 1),
                  integer_range(1, 2)};
  GridOptions opt;
  opt.X = 300;
  std::string base;
  for (unsigned w : {1u, 4u, 16u}) {
    opt.workers = w;
    auto csv = io::to_csv(grid_search(FamilyTag::B, box, opt).records);
    if (w == 1)
      base = csv;
    else
      EXPECT_EQ(csv, base) << "workers=" << w;
  }
  EXPECT_GT(base.size(), 100u);
}

TEST(Grid, RationalRange) {
  auto v = rational_range(-1, 1, 2);
  EXPECT_EQ(v, (std::vector<BigRat>{-1, make_rat(-1, 2), 0, make_rat(1, 2), 1}));
  EXPECT_EQ(integer_range(3, 1).size(), 0u);
}

TEST(Tables, FixturesLoad) {
  EXPECT_EQ(load_table_fixture(2).rows.size(), 18u);
  EXPECT_EQ(load_table_fixture(3).rows.size(), 24u);
  EXPECT_EQ(load_table_fixture(4).rows.size(), 17u);
  EXPECT_THROW(load_table_fixture(9), std::runtime_error);
}

TEST(Tables, SpecRows) {
  auto t2 = reproduce_table(load_table_fixture(2), {1}, 200);
  ASSERT_EQ(t2.rows.size(), 1u);
  EXPECT_EQ(t2.rows[0].params, (std::vector<BigRat>{-71, -54, -36, 14, 36, 1}));
  EXPECT_GE(t2.rows[0].rank_lower_bound, 5u);
  EXPECT_TRUE(t2.pass);

  auto t4 = reproduce_table(load_table_fixture(4), {1}, 200);
  EXPECT_EQ(t4.rows[0].params, (std::vector<BigRat>{make_rat(7, 11), -1}));
  EXPECT_GE(t4.rows[0].rank_lower_bound, 8u);

  auto t3 = reproduce_table(load_table_fixture(3), {1, 2}, 200);
  EXPECT_TRUE(t3.pairwise_distinct);
  EXPECT_FALSE(curves_equivalent(build_family(FamilyTag::B, t3.rows[0].params).curve,
                                 build_family(FamilyTag::B, t3.rows[1].params).curve));
  EXPECT_TRUE(t3.pass);
}

TEST(Tables, DuplicateRowsAreReported) {
  auto fx = load_table_fixture(4);
  fx.rows.push_back(fx.rows[0]);
  auto rep = reproduce_table(fx, {1, fx.rows.size()}, 100);
  EXPECT_FALSE(rep.pairwise_distinct);
  EXPECT_FALSE(rep.pass);
  ASSERT_EQ(rep.duplicates.size(), 1u);
}
