#include <gtest/gtest.h>

#include "eqtri/io.hpp"

using namespace eqtri;
using io::Json;

TEST(Json, TripleSetRoundTrip) {
  auto set = gen_C(3, 2);
  Json j = io::to_json(set);
  EXPECT_EQ(j["l"], 4);
  EXPECT_EQ(j["M"], "-1688");
  EXPECT_EQ(j["triples"][0][1], "-1392");
  auto back = io::triple_set_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.triples, set.triples);
  EXPECT_EQ(back.T, set.T);
  j["N"] = "1";
  EXPECT_THROW(io::triple_set_from_json(j), std::invalid_argument);
}

TEST(Json, FamilyInstanceRoundTrip) {
  for (const auto& f : {build_family_A(1, 4, 2, 4, 1, 1), build_family_B(2, 2, 4, 1, -1),
                        build_family_C(make_rat(7, 11), -1)}) {
    Json j = io::to_json(f);
    auto back = io::family_from_json(Json::parse(j.dump()));
    EXPECT_EQ(back.family, f.family);
    EXPECT_EQ(back.params, f.params);
    EXPECT_EQ(back.curve, f.curve);
    ASSERT_EQ(back.points.size(), f.points.size());
    for (std::size_t i = 0; i < f.points.size(); ++i) {
      EXPECT_EQ(back.points[i].label, f.points[i].label);
      EXPECT_EQ(back.points[i].point, f.points[i].point);
    }
    EXPECT_EQ(back.constants, f.constants);
    EXPECT_EQ(back.independent_subset, f.independent_subset);
    EXPECT_EQ(io::to_json(back).dump(), j.dump());
  }
  auto f = build_family_A(1, 4, 2, 4, 1, 1);
  Json j = io::to_json(f);
  EXPECT_EQ(j["constants"]["e1"], "-23/2");
  EXPECT_EQ(j["curve"]["a"][1], "2673/4");
  j["points"][0]["y"] = "1";
  EXPECT_THROW(io::family_from_json(j), std::invalid_argument);
}

TEST(Json, CurveAndPoints) {
  WeierstrassCurve e(1, -1, 1, -68213, 7845517);
  EXPECT_EQ(io::curve_from_json(io::to_json(e)), e);
  Json wrapped = {{"curve", io::to_json(e)}};
  EXPECT_EQ(io::curve_from_json(wrapped), e);
  EXPECT_THROW(io::curve_from_json(Json::parse(R"({"a":["0","0","0"]})")), std::invalid_argument);

  auto pts = io::points_from_json(Json::parse(R"([{"x":"0","y":"1"},{"label":"O","infinity":true}])"));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].label, "P1");
  EXPECT_TRUE(pts[1].point.is_infinity());
  EXPECT_EQ(io::to_json(pts[1])["infinity"], true);

  ModelChange c{make_rat(1, 2), 3, make_rat(-1, 2), 7};
  auto back = io::model_change_from_json(io::to_json(c));
  EXPECT_EQ(back.u, c.u);
  EXPECT_EQ(back.s, c.s);
}

TEST(Json, HeightReportRoundTrip) {
  auto f = build_family_A(1, 4, 2, 4, 1, 1);
  auto rep = regulator(f.curve, f.subset(f.independent_subset), {"P1", "P12", "P13", "Q12", "Q13"});
  Json j = io::to_json(rep);
  auto back = io::height_report_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.labels, rep.labels);
  EXPECT_EQ(back.rank_lower_bound, 5u);
  EXPECT_EQ(back.certificate, rep.certificate);
  EXPECT_EQ(back.regulator.convert_to<double>(), rep.regulator.convert_to<double>());
  for (std::size_t i = 0; i < rep.pairing.size(); ++i)
    for (std::size_t k = 0; k < rep.pairing.size(); ++k)
      EXPECT_EQ(back.pairing[i][k].convert_to<double>(), rep.pairing[i][k].convert_to<double>());
  // The text field carries extra digits that a double cannot; everything else is stable.
  Json again = io::to_json(back);
  again.erase("regulator_text");
  Json orig = j;
  orig.erase("regulator_text");
  EXPECT_EQ(again.dump(), orig.dump());
  EXPECT_EQ(j["regulator_text"].get<std::string>().substr(0, 12), "23.480804900");
}

TEST(Json, ScreenRecordRoundTrip) {
  ScreenRecord r;
  r.family = FamilyTag::B;
  r.params = {2, 2, 4, 1, -1};
  r.s1 = 12.345678901234567;
  r.X = 1000;
  r.rank_lower_bound = 6;
  r.regulator = 534.52079441774;
  r.fingerprint = "mm:0123456789abcdef";
  r.status = {"minimal", "verdict"};
  auto back = io::screen_record_from_json(Json::parse(io::to_json(r).dump()));
  EXPECT_EQ(back.params, r.params);
  EXPECT_EQ(back.s1, r.s1);
  EXPECT_EQ(back.regulator, r.regulator);
  EXPECT_EQ(back.status, r.status);
  EXPECT_EQ(io::to_csv({back}), io::to_csv({r}));

  r.regulator = std::numeric_limits<double>::quiet_NaN();
  r.rank_lower_bound = -1;
  r.status = {"minimal", "below_threshold"};
  Json j = io::to_json(r);
  EXPECT_TRUE(j["regulator"].is_null());
  EXPECT_TRUE(std::isnan(io::screen_record_from_json(j).regulator));
  auto csv = io::to_csv({r});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), io::kCsvHeader);
  EXPECT_NE(csv.find("B,2;2;4;1;-1,12.345678901234567,1000,-1,,mm:0123456789abcdef,minimal|below_threshold"),
            std::string::npos);
}
