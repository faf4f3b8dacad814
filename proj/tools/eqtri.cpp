// Command-line front end. Exit codes: 0 ok, 1 domain error, 2 usage error,
// 3 verification mismatch.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eqtri/io.hpp"
#include "eqtri/verify.hpp"

namespace {

using eqtri::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::vector<eqtri::BigRat> parse_params(const std::string& s) {
  std::vector<eqtri::BigRat> out;
  try {
    for (const auto& p : split(s, ',')) out.push_back(eqtri::parse_rational(p));
  } catch (const std::exception& e) {
    throw UsageError("bad parameter list '" + s + "': " + e.what());
  }
  return out;
}

long parse_long(const std::string& s) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw UsageError("not an integer: '" + s + "'");
  return v;
}

/// "lo..hi,lo..hi,..." with a bare "v" meaning v..v.
std::vector<std::pair<long, long>> parse_box(const std::string& s) {
  std::vector<std::pair<long, long>> out;
  for (const auto& dim : split(s, ',')) {
    auto dots = dim.find("..");
    long lo = parse_long(dots == std::string::npos ? dim : dim.substr(0, dots));
    long hi = dots == std::string::npos ? lo : parse_long(dim.substr(dots + 2));
    if (lo > hi) throw UsageError("empty range '" + dim + "'");
    out.emplace_back(lo, hi);
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void json(const Json& j) { stream() << j.dump(2) << "\n"; }

 private:
  std::ofstream file_;
};

std::vector<eqtri::BigRat> family_params(eqtri::FamilyTag family, const std::string& s) {
  auto params = parse_params(s);
  if (params.size() != eqtri::family_arity(family))
    throw UsageError("family " + std::string(eqtri::to_string(family)) + " takes " +
                     std::to_string(eqtri::family_arity(family)) + " parameters, got " +
                     std::to_string(params.size()));
  return params;
}

/// gen takes the generator's own parameters: A(p,q,r,s,t), B(p,q,r), C(q,s).
eqtri::TripleSet generate(eqtri::FamilyTag family, const std::vector<eqtri::BigRat>& v) {
  static const std::size_t arity[] = {5, 3, 2};
  std::size_t n = arity[static_cast<int>(family)];
  if (v.size() != n)
    throw UsageError("gen for family " + std::string(eqtri::to_string(family)) + " takes " + std::to_string(n) +
                     " parameters, got " + std::to_string(v.size()));
  if (family == eqtri::FamilyTag::C) return eqtri::gen_C(v[0], v[1]);
  std::vector<eqtri::BigInt> z;
  for (const auto& x : v) {
    if (!eqtri::is_integer(x)) throw eqtri::DomainError("gen: families A and B need integer parameters");
    z.push_back(x.get_num());
  }
  if (family == eqtri::FamilyTag::A) return eqtri::gen_A(z[0], z[1], z[2], z[3], z[4]);
  return eqtri::gen_B(z[0], z[1], z[2]);
}

Json verify_json(const eqtri::verify::SectionReport& r) {
  Json j;
  j["section"] = r.section;
  j["pass"] = r.pass();
  j["seconds"] = r.seconds;
  j["checks"] = Json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elliptic curves from equal-sum equal-product triples"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output;
  app.add_option("-o,--output", output, "Write output to this file instead of stdout");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a triple set: A takes p,q,r,s,t; B takes p,q,r; C takes q,s");
  std::string gen_family, gen_params;
  gen->add_option("--family", gen_family, "A, B or C")->required();
  gen->add_option("--params", gen_params, "Comma-separated parameters (integers or p/q)")->required();

  // curve
  auto* curve = app.add_subcommand("curve", "Build a family instance: triples, constants, curve and points");
  std::string curve_family, curve_params;
  curve->add_option("--family", curve_family, "A, B or C")->required();
  curve->add_option("--params", curve_params, "Comma-separated parameters")->required();

  // verify
  auto* ver = app.add_subcommand("verify", "Reproduce the worked specializations");
  bool ver_paper = false;
  int ver_section = 0;
  ver->add_flag("--paper", ver_paper, "Check against the published constants")->required();
  ver->add_option("--section", ver_section, "1, 2 or 3 (default: all)")->check(CLI::Range(1, 3));

  // heights
  auto* hts = app.add_subcommand("heights", "Height pairing matrix, regulator and rank lower bound");
  std::string curve_file, points_file;
  double eps = eqtri::kDefaultHeightEps, tol = eqtri::kDefaultIndependenceTol;
  std::uint64_t hts_budget = eqtri::kDefaultFactorBudget;
  hts->add_option("--curve-file", curve_file, "JSON with {\"a\":[a1,a2,a3,a4,a6]}")->required();
  hts->add_option("--points-file", points_file, "JSON list of {label,x,y}")->required();
  hts->add_option("--eps", eps, "Archimedean series tolerance")->check(CLI::PositiveNumber);
  hts->add_option("--tol", tol, "Normalized Gram determinant threshold")->check(CLI::PositiveNumber);
  hts->add_option("--budget", hts_budget, "Factoring iteration budget");

  // search
  auto* srch = app.add_subcommand("search", "Screen a parameter box by the Mestre-Nagao sum");
  std::string srch_family, srch_box, srch_format = "json";
  eqtri::GridOptions gopt;
  long den_max = 0;
  srch->add_option("--family", srch_family, "A, B or C")->required();
  srch->add_option("--box", srch_box, "lo..hi per parameter, comma-separated")->required();
  srch->add_option("--X", gopt.X, "Prime bound for S1")->capture_default_str();
  srch->add_option("--threshold", gopt.s1_threshold, "Compute heights only when S1 reaches this")
      ->capture_default_str();
  srch->add_option("--top", gopt.top_k, "Keep the best K records (0 = all)")->capture_default_str();
  srch->add_option("--workers", gopt.workers, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  srch->add_option("--den-max", den_max, "Also use fractions n/d with d up to this");
  srch->add_option("--format", srch_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // triples
  auto* trip = app.add_subcommand("triples", "Direct search for triples with common sum and product");
  std::int64_t sum = 0;
  eqtri::DirectSearchOptions dopt;
  bool no_positive = false;
  trip->add_option("--sum", sum, "Common sum M")->required();
  trip->add_option("--min-mult", dopt.min_multiplicity, "Minimum group size")->check(CLI::PositiveNumber);
  trip->add_flag("--no-positive", no_positive, "Allow nonzero parts of either sign");
  trip->add_option("--bound", dopt.part_bound, "Part bound with --no-positive (default |M|)");
  trip->add_option("--workers", dopt.workers, "Worker threads")->check(CLI::PositiveNumber);

  // minmodel
  auto* mm = app.add_subcommand("minmodel", "Global minimal model of a Weierstrass curve");
  std::string mm_a;
  std::uint64_t mm_budget = eqtri::kDefaultFactorBudget;
  mm->add_option("--a", mm_a, "a1,a2,a3,a4,a6")->required();
  mm->add_option("--budget", mm_budget, "Factoring iteration budget");

  // tables
  auto* tab = app.add_subcommand("tables", "Re-check rows of the published tables");
  int tab_id = 0;
  std::string tab_rows, data_dir = eqtri::default_data_dir();
  std::uint64_t tab_X = 1000;
  tab->add_option("--id", tab_id, "Table 2, 3 or 4")->required()->check(CLI::Range(2, 4));
  tab->add_option("--rows", tab_rows, "Comma-separated 1-based row numbers (default: all)");
  tab->add_option("--X", tab_X, "Prime bound for S1")->capture_default_str();
  tab->add_option("--data-dir", data_dir, "Directory holding tables/*.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    Output out(output);

    if (*gen) {
      out.json(eqtri::io::to_json(generate(eqtri::parse_family(gen_family), parse_params(gen_params))));
    } else if (*curve) {
      auto family = eqtri::parse_family(curve_family);
      out.json(eqtri::io::to_json(eqtri::build_family(family, family_params(family, curve_params))));
    } else if (*ver) {
      std::vector<int> sections = ver_section ? std::vector<int>{ver_section} : std::vector<int>{1, 2, 3};
      Json j;
      j["sections"] = Json::array();
      bool ok = true;
      for (int s : sections) {
        auto rep = eqtri::verify::verify_section(s);
        ok = ok && rep.pass();
        j["sections"].push_back(verify_json(rep));
      }
      j["pass"] = ok;
      out.json(j);
      if (!ok) return kExitMismatch;
    } else if (*hts) {
      auto e = eqtri::io::curve_from_json(read_json_file(curve_file));
      auto pts = eqtri::io::points_from_json(read_json_file(points_file));
      std::vector<eqtri::CurvePoint> points;
      std::vector<std::string> labels;
      for (const auto& lp : pts) {
        if (!eqtri::is_on_curve(e, lp.point)) throw eqtri::DomainError("point " + lp.label + " is not on the curve");
        points.push_back(lp.point);
        labels.push_back(lp.label);
      }
      eqtri::HeightOptions hopt{eps, hts_budget};
      out.json(eqtri::io::to_json(eqtri::regulator(e, points, labels, hopt, tol)));
    } else if (*srch) {
      auto family = eqtri::parse_family(srch_family);
      auto ranges = parse_box(srch_box);
      if (ranges.size() != eqtri::family_arity(family))
        throw UsageError("family " + srch_family + " needs " + std::to_string(eqtri::family_arity(family)) +
                         " ranges, got " + std::to_string(ranges.size()));
      eqtri::ParamBox box;
      for (auto [lo, hi] : ranges)
        box.push_back(den_max > 1 ? eqtri::rational_range(lo, hi, den_max) : eqtri::integer_range(lo, hi));
      auto result = eqtri::grid_search(family, box, gopt);
      if (srch_format == "csv")
        out.stream() << eqtri::io::to_csv(result.records);
      else
        out.json(eqtri::io::to_json(result, family));
    } else if (*trip) {
      dopt.require_positive = !no_positive;
      if (dopt.part_bound != 0 && dopt.require_positive) throw UsageError("--bound needs --no-positive");
      out.json(eqtri::io::to_json(eqtri::direct_search(sum, dopt), sum, dopt.min_multiplicity));
    } else if (*mm) {
      auto a = parse_params(mm_a);
      if (a.size() != 5) throw UsageError("--a needs five coefficients");
      eqtri::WeierstrassCurve e(a[0], a[1], a[2], a[3], a[4]);
      auto m = eqtri::minimal_model(e, mm_budget);
      Json j;
      j["input"] = eqtri::io::to_json(e);
      j["minimal"] = eqtri::io::to_json(m.curve);
      j["transformation"] = eqtri::io::to_json(m.change);
      j["discriminant"] = eqtri::to_string(m.curve.discriminant());
      out.json(j);
    } else if (*tab) {
      std::vector<std::size_t> rows;
      if (!tab_rows.empty())
        for (const auto& r : split(tab_rows, ',')) {
          long v = parse_long(r);
          if (v < 1) throw UsageError("row numbers start at 1");
          rows.push_back(static_cast<std::size_t>(v));
        }
      auto fx = eqtri::load_table_fixture(tab_id, data_dir);
      auto rep = eqtri::reproduce_table(fx, rows, tab_X);
      out.json(eqtri::io::to_json(rep));
      if (!rep.pass) return kExitMismatch;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // parse_family, parse_rational and friends
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}
