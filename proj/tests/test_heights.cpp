#include <gtest/gtest.h>

#include "eqtri/families.hpp"
#include "eqtri/heights.hpp"
#include "oracles.hpp"

using namespace eqtri;

namespace {

constexpr double kEps = kDefaultHeightEps;

double d(const Real& r) { return r.convert_to<double>(); }

const FamilyInstance& example_a() {
  static const FamilyInstance f = build_family_A(1, 4, 2, 4, 1, 1);
  return f;
}

}  // namespace

TEST(NaiveHeight, Examples) {
  EXPECT_EQ(d(naive_height(CurvePoint(0, 1920))), 0.0);
  EXPECT_NEAR(d(naive_height(CurvePoint(-120, 1380))), std::log(120.0), 1e-15);
  EXPECT_NEAR(d(naive_height(CurvePoint(make_rat(3, 2), 1))), std::log(3.0), 1e-15);
  EXPECT_NEAR(d(naive_height(CurvePoint(make_rat(1, 7), 1))), std::log(7.0), 1e-15);
  EXPECT_EQ(d(naive_height(CurvePoint::infinity())), 0.0);
}

TEST(CanonicalHeight, TorsionAndInfinityVanish) {
  auto e = WeierstrassCurve::from_cubic(0, 0, 1);
  HeightContext ctx(e);
  for (const auto& P : {CurvePoint(2, 3), CurvePoint(2, -3), CurvePoint(0, 1), CurvePoint(-1, 0)})
    EXPECT_LT(abs(d(ctx.canonical_height(P))), 1e-10);
  EXPECT_EQ(d(ctx.canonical_height(CurvePoint::infinity())), 0.0);
  EXPECT_THROW(ctx.canonical_height(CurvePoint(1, 1)), DomainError);
}

TEST(CanonicalHeight, Quadratic) {
  const auto& f = example_a();
  HeightContext ctx(f.curve);
  for (const auto& lp : f.points) {
    Real h = ctx.canonical_height(lp.point);
    EXPECT_GT(h, 0);
    for (long n : {2L, 3L, -2L}) {
      Real hn = ctx.canonical_height(scalar_mul(f.curve, n, lp.point));
      EXPECT_LT(abs(d(hn - n * n * h)), 3 * kEps * n * n) << lp.label << " n=" << n;
    }
  }
}

TEST(CanonicalHeight, DoublingLimitOracle) {
  const auto& f = example_a();
  HeightContext ctx(f.curve);
  for (const auto& lp : f.points) {
    double h = d(ctx.canonical_height(lp.point));
    EXPECT_NEAR(oracle::doubling_limit(f.curve, lp.point, 4), h, 0.05) << lp.label;
  }
}

TEST(CanonicalHeight, ModelIndependent) {
  const auto& f = example_a();
  HeightContext on_input(f.curve);
  HeightContext on_minimal(on_input.minimal().curve);
  for (const auto& lp : f.points) {
    Real a = on_input.canonical_height(lp.point);
    Real b = on_minimal.canonical_height(map_point(lp.point, on_input.minimal().change));
    EXPECT_LT(abs(d(a - b)), kEps) << lp.label;
  }
}

TEST(Pairing, BasicIdentities) {
  const auto& f = example_a();
  HeightContext ctx(f.curve);
  const auto& P1 = f.points[0].point;
  const auto& P12 = f.points[1].point;
  Real h = ctx.canonical_height(P1);
  EXPECT_LT(abs(d(ctx.pairing(P1, P1) - h)), 3 * kEps);
  EXPECT_LT(abs(d(ctx.pairing(P1, negate(f.curve, P1)) + h)), 3 * kEps);
  EXPECT_LT(abs(d(ctx.pairing(P1, P12) - ctx.pairing(P12, P1))), 2 * kEps);
}

TEST(Pairing, BilinearAndParallelogram) {
  const auto& f = example_a();
  HeightContext ctx(f.curve);
  auto pts = f.point_list();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const auto& P = pts[i];
      const auto& Q = pts[j];
      const auto& R = pts[(i + j) % pts.size()];
      auto PQ = add(f.curve, P, Q);
      Real lhs = ctx.pairing(PQ, R);
      Real rhs = ctx.pairing(P, R) + ctx.pairing(Q, R);
      EXPECT_LT(abs(d(lhs - rhs)), 5 * kEps);
      Real par = ctx.canonical_height(PQ) + ctx.canonical_height(subtract(f.curve, P, Q)) -
                 2 * ctx.canonical_height(P) - 2 * ctx.canonical_height(Q);
      EXPECT_LT(abs(d(par)), 6 * kEps);
    }
}

TEST(Regulator, ReferenceValues) {
  struct Case {
    FamilyInstance f;
    std::vector<std::size_t> idx;
    double expected;
  };
  std::vector<Case> cases = {
      {build_family_A(1, 4, 2, 4, 1, 1), {0, 1, 2, 4, 5}, 23.4808049005680},
      {build_family_B(2, 2, 4, 1, -1), {0, 3, 6, 1, 4, 7}, 534.520794417629},
      {build_family_C(3, 2), {0, 1, 3, 4, 6, 7, 9, 10}, 15150.2483213544},
  };
  for (const auto& c : cases) {
    auto rep = regulator(c.f.curve, c.f.subset(c.idx));
    EXPECT_LT(std::abs(d(rep.regulator) - c.expected) / c.expected, 1e-6);
    EXPECT_EQ(rep.rank_lower_bound, c.idx.size());
    EXPECT_TRUE(rep.complete_factorization);
    for (std::size_t i = 0; i < rep.pairing.size(); ++i) {
      EXPECT_GE(rep.pairing[i][i], 0);
      for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(rep.pairing[i][j], rep.pairing[j][i]);
    }
  }
}

TEST(Regulator, SignInvariance) {
  const auto& f = example_a();
  auto pts = f.subset({0, 1, 2, 4, 5});
  Real base = regulator(f.curve, pts).regulator;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto flipped = pts;
    flipped[i] = negate(f.curve, flipped[i]);
    Real r = regulator(f.curve, flipped).regulator;
    EXPECT_LT(d(abs(abs(r) - abs(base)) / abs(base)), 1e-9);
  }
}

TEST(Independence, FamilyASevenPoints) {
  const auto& f = example_a();
  auto v = independence_verdict(f.curve, f.point_list());
  EXPECT_EQ(v.rank_lower_bound, 5u);
  auto dep = independence_verdict(f.curve, f.subset({1, 2, 3}));
  EXPECT_EQ(dep.rank_lower_bound, 2u);
  auto dep2 = independence_verdict(f.curve, f.subset({4, 5, 6}));
  EXPECT_EQ(dep2.rank_lower_bound, 2u);
}

TEST(Independence, FamilyCTwelvePoints) {
  auto f = build_family_C(3, 2);
  HeightContext ctx(f.curve);
  auto g = gram_matrix(ctx, f.point_list());
  EXPECT_EQ(independence_from_gram(g).rank_lower_bound, 8u);
  for (std::size_t j = 0; j < 4; ++j)
    EXPECT_LT(d(normalized_determinant(g, {3 * j, 3 * j + 1, 3 * j + 2})), 1e-6);
}

TEST(Independence, MultiplesAreDependent) {
  const auto& f = example_a();
  const auto& P = f.points[0].point;
  auto v = independence_verdict(f.curve, {P, scalar_mul(f.curve, 2, P)});
  EXPECT_EQ(v.rank_lower_bound, 1u);
  EXPECT_EQ(v.certificate, (std::vector<std::size_t>{0}));
  EXPECT_EQ(independence_verdict(f.curve, {}).rank_lower_bound, 0u);
}
