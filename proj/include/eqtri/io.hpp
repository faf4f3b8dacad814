#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV encodings.
 *
 * Big integers and rationals are decimal strings ("-23/2"); floats are
 * JSON numbers printed with round-trip precision.
 */

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eqtri/curve.hpp"
#include "eqtri/families.hpp"
#include "eqtri/heights.hpp"
#include "eqtri/screening.hpp"
#include "eqtri/triples.hpp"

namespace eqtri::io {

using Json = nlohmann::ordered_json;

inline Json rat_list(const std::vector<BigRat>& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(to_string(x));
  return j;
}

inline std::vector<BigRat> parse_rat_list(const Json& j) {
  std::vector<BigRat> v;
  for (const auto& x : j) v.push_back(parse_rational(x.get<std::string>()));
  return v;
}

inline std::string real_text(const Real& r, int digits = 25) {
  std::ostringstream os;
  os << std::setprecision(digits) << r;
  return os.str();
}

/// NaN and infinities become null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// --- triples ---------------------------------------------------------------

inline Json triple_json(const Triple& t) { return Json::array({to_string(t[0]), to_string(t[1]), to_string(t[2])}); }

inline Triple parse_triple(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("triple must be an array of three integers");
  return {parse_int(j[0].get<std::string>()), parse_int(j[1].get<std::string>()), parse_int(j[2].get<std::string>())};
}

inline Json to_json(const TripleSet& s) {
  Json j;
  j["l"] = s.size();
  j["M"] = to_string(s.M);
  j["N"] = to_string(s.N);
  j["T"] = Json::array();
  for (const auto& t : s.T) j["T"].push_back(to_string(t));
  j["triples"] = Json::array();
  for (const auto& t : s.triples) j["triples"].push_back(triple_json(t));
  return j;
}

/// Rebuilds from the triples and checks the cached M, N, T fields agree.
inline TripleSet triple_set_from_json(const Json& j) {
  std::vector<Triple> triples;
  for (const auto& t : j.at("triples")) triples.push_back(parse_triple(t));
  TripleSet s = TripleSet::from_triples(std::move(triples));
  if (j.contains("M") && parse_int(j["M"].get<std::string>()) != s.M) throw std::invalid_argument("M disagrees with triples");
  if (j.contains("N") && parse_int(j["N"].get<std::string>()) != s.N) throw std::invalid_argument("N disagrees with triples");
  if (j.contains("l") && j["l"].get<std::size_t>() != s.size()) throw std::invalid_argument("l disagrees with triples");
  if (j.contains("T")) {
    std::vector<BigInt> T;
    for (const auto& t : j["T"]) T.push_back(parse_int(t.get<std::string>()));
    if (T != s.T) throw std::invalid_argument("T disagrees with triples");
  }
  return s;
}

inline Json to_json(const std::vector<ProductGroup>& groups, std::int64_t M, std::size_t min_mult) {
  Json j;
  j["M"] = std::to_string(M);
  j["min_multiplicity"] = min_mult;
  j["groups"] = Json::array();
  for (const auto& g : groups) {
    Json gj;
    gj["N"] = to_string(g.N);
    gj["triples"] = Json::array();
    for (const auto& t : g.triples) gj["triples"].push_back(triple_json(t));
    j["groups"].push_back(gj);
  }
  return j;
}

// --- curves and points -----------------------------------------------------

inline Json to_json(const WeierstrassCurve& e) {
  Json j;
  j["a"] = Json::array();
  for (const auto& a : e.a_invariants()) j["a"].push_back(to_string(a));
  return j;
}

/// Accepts {"a": [...]} or any object with a "curve" member holding one.
inline WeierstrassCurve curve_from_json(const Json& j) {
  const Json& c = j.contains("curve") ? j.at("curve") : j;
  auto a = parse_rat_list(c.at("a"));
  if (a.size() != 5) throw std::invalid_argument("curve needs five a-invariants");
  return WeierstrassCurve(a[0], a[1], a[2], a[3], a[4]);
}

inline Json to_json(const ModelChange& c) {
  Json j;
  j["u"] = to_string(c.u);
  j["r"] = to_string(c.r);
  j["s"] = to_string(c.s);
  j["t"] = to_string(c.t);
  return j;
}

inline ModelChange model_change_from_json(const Json& j) {
  return {parse_rational(j.at("u").get<std::string>()), parse_rational(j.at("r").get<std::string>()),
          parse_rational(j.at("s").get<std::string>()), parse_rational(j.at("t").get<std::string>())};
}

inline Json to_json(const LabeledPoint& p) {
  Json j;
  j["label"] = p.label;
  if (p.point.is_infinity()) {
    j["infinity"] = true;
  } else {
    j["x"] = to_string(p.point.x());
    j["y"] = to_string(p.point.y());
  }
  return j;
}

inline LabeledPoint labeled_point_from_json(const Json& j, std::size_t index) {
  LabeledPoint lp;
  lp.label = j.contains("label") ? j["label"].get<std::string>() : "P" + std::to_string(index + 1);
  if (j.value("infinity", false)) return lp;
  lp.point = CurvePoint(parse_rational(j.at("x").get<std::string>()), parse_rational(j.at("y").get<std::string>()));
  return lp;
}

/// Accepts an array of points or an object with a "points" array.
inline std::vector<LabeledPoint> points_from_json(const Json& j) {
  const Json& arr = j.is_array() ? j : j.at("points");
  std::vector<LabeledPoint> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(labeled_point_from_json(arr[i], i));
  return out;
}

// --- family instances ------------------------------------------------------

inline Json to_json(const FamilyInstance& f) {
  Json j;
  j["family"] = to_string(f.family);
  j["params"] = rat_list(f.params);
  j["set"] = to_json(f.set);
  Json c = Json::object();
  for (const auto& [k, v] : f.constants) c[k] = to_string(v);
  j["constants"] = c;
  j["curve"] = to_json(f.curve);
  j["points"] = Json::array();
  for (const auto& p : f.points) j["points"].push_back(to_json(p));
  j["independent_subset"] = f.independent_subset;
  return j;
}

/// Parses every field and re-checks that the points lie on the curve.
inline FamilyInstance family_from_json(const Json& j) {
  FamilyInstance f{parse_family(j.at("family").get<std::string>()),
                   parse_rat_list(j.at("params")),
                   triple_set_from_json(j.at("set")),
                   {},
                   curve_from_json(j.at("curve")),
                   points_from_json(j.at("points")),
                   j.value("independent_subset", std::vector<std::size_t>{})};
  for (const auto& [k, v] : j.at("constants").items()) f.constants.emplace_back(k, parse_rational(v.get<std::string>()));
  for (const auto& p : f.points)
    if (!is_on_curve(f.curve, p.point)) throw std::invalid_argument("point " + p.label + " is not on the curve");
  return f;
}

// --- heights ----------------------------------------------------------------

inline Json to_json(const HeightReport& r) {
  Json j;
  j["points"] = r.labels;
  j["pairing"] = Json::array();
  for (const auto& row : r.pairing) {
    Json jr = Json::array();
    for (const auto& v : row) jr.push_back(v.convert_to<double>());
    j["pairing"].push_back(jr);
  }
  j["regulator"] = r.regulator.convert_to<double>();
  j["regulator_text"] = real_text(r.regulator);
  j["rank_lower_bound"] = r.rank_lower_bound;
  j["certificate"] = r.certificate;
  j["tolerance"] = r.tolerance;
  j["complete_factorization"] = r.complete_factorization;
  return j;
}

/// Inverse of to_json; matrix entries come back at double precision.
inline HeightReport height_report_from_json(const Json& j) {
  HeightReport r;
  r.labels = j.at("points").get<std::vector<std::string>>();
  for (const auto& row : j.at("pairing")) {
    std::vector<Real> v;
    for (const auto& x : row) v.emplace_back(x.get<double>());
    r.pairing.push_back(std::move(v));
  }
  r.regulator = Real(j.at("regulator").get<double>());
  r.rank_lower_bound = j.at("rank_lower_bound").get<std::size_t>();
  r.certificate = j.at("certificate").get<std::vector<std::size_t>>();
  r.tolerance = j.at("tolerance").get<double>();
  r.complete_factorization = j.at("complete_factorization").get<bool>();
  return r;
}

// --- screening ----------------------------------------------------------------

inline std::string join_params(const std::vector<BigRat>& params) {
  std::string s;
  for (std::size_t i = 0; i < params.size(); ++i) s += (i ? ";" : "") + to_string(params[i]);
  return s;
}

inline Json to_json(const ScreenRecord& r) {
  Json j;
  j["family"] = to_string(r.family);
  j["params"] = rat_list(r.params);
  j["S1"] = r.s1;
  j["X"] = r.X;
  j["rank_lb"] = r.rank_lower_bound;
  j["regulator"] = number_or_null(r.regulator);
  j["fingerprint"] = r.fingerprint;
  j["status"] = r.status_string();
  return j;
}

inline ScreenRecord screen_record_from_json(const Json& j) {
  ScreenRecord r;
  r.family = parse_family(j.at("family").get<std::string>());
  r.params = parse_rat_list(j.at("params"));
  r.s1 = j.at("S1").get<double>();
  r.X = j.at("X").get<std::uint64_t>();
  r.rank_lower_bound = j.at("rank_lb").get<long>();
  r.regulator = j.at("regulator").is_null() ? std::numeric_limits<double>::quiet_NaN() : j["regulator"].get<double>();
  r.fingerprint = j.at("fingerprint").get<std::string>();
  std::string status = j.at("status").get<std::string>();
  for (std::size_t pos = 0; !status.empty();) {
    auto bar = status.find('|', pos);
    r.status.push_back(status.substr(pos, bar - pos));
    if (bar == std::string::npos) break;
    pos = bar + 1;
  }
  return r;
}

inline Json to_json(const GridResult& g, FamilyTag family) {
  Json j;
  j["family"] = to_string(family);
  j["grid_size"] = g.grid_size;
  j["evaluated"] = g.evaluated;
  j["skipped"] = Json::object();
  for (const auto& [k, v] : g.skipped) j["skipped"][k] = v;
  j["records"] = Json::array();
  for (const auto& r : g.records) j["records"].push_back(to_json(r));
  return j;
}

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline const char* kCsvHeader = "family,params,S1,X,rank_lb,regulator,fingerprint,status";

inline std::string to_csv(const std::vector<ScreenRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : records) {
    out += std::string(to_string(r.family)) + "," + join_params(r.params) + "," + format_double(r.s1) + "," +
           std::to_string(r.X) + "," + std::to_string(r.rank_lower_bound) + "," + format_double(r.regulator) + "," +
           r.fingerprint + "," + r.status_string() + "\n";
  }
  return out;
}

// --- tables -----------------------------------------------------------------

inline Json to_json(const TableReport& t) {
  Json j;
  j["table"] = t.table;
  j["family"] = to_string(t.family);
  j["X"] = t.X;
  j["rows"] = Json::array();
  for (const auto& r : t.rows) {
    Json jr;
    jr["row"] = r.row;
    jr["params"] = rat_list(r.params);
    jr["published_rank"] = r.published_rank;
    jr["constructed"] = r.constructed;
    jr["points_on_curve"] = r.points_on_curve;
    jr["rank_lower_bound"] = r.rank_lower_bound;
    jr["required"] = r.required;
    jr["S1"] = r.s1;
    jr["minimal_model"] = r.minimal_model;
    if (!r.error.empty()) jr["error"] = r.error;
    jr["pass"] = r.pass;
    j["rows"].push_back(jr);
  }
  j["pairwise_distinct"] = t.pairwise_distinct;
  j["duplicates"] = Json::array();
  for (const auto& [a, b] : t.duplicates) j["duplicates"].push_back(Json::array({a, b}));
  j["pass"] = t.pass;
  return j;
}

}  // namespace eqtri::io
