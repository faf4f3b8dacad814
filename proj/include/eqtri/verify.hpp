#pragma once

/**
 * @file verify.hpp
 * @brief Reproduction of the three worked specializations.
 *
 * Every published constant is embedded here; each section rebuilds the
 * instance from its parameters and compares field by field.
 */

#include <chrono>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqtri/families.hpp"
#include "eqtri/heights.hpp"
#include "eqtri/triples.hpp"

namespace eqtri::verify {

struct Check {
  std::string name;
  std::string expected;
  std::string actual;
  bool pass = false;
};

struct SectionReport {
  int section = 0;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

inline constexpr double kRegulatorRelTol = 1e-6;

namespace detail {

inline std::string join(const std::vector<std::string>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s + "]";
}

inline std::string triples_text(const std::vector<Triple>& ts) {
  std::vector<std::string> parts;
  for (const auto& t : ts) parts.push_back("(" + to_string(t[0]) + "," + to_string(t[1]) + "," + to_string(t[2]) + ")");
  return join(parts);
}

class Recorder {
 public:
  explicit Recorder(SectionReport& rep) : rep_(rep) {}

  void exact(const std::string& name, const std::string& expected, const std::string& actual) {
    rep_.checks.push_back({name, expected, actual, expected == actual});
  }

  void rat(const std::string& name, const char* expected, const BigRat& actual) {
    exact(name, to_string(parse_rational(expected)), to_string(actual));
  }

  void rats(const std::string& name, const std::vector<const char*>& expected, const std::vector<BigRat>& actual) {
    std::vector<std::string> e, a;
    for (auto s : expected) e.push_back(to_string(parse_rational(s)));
    for (const auto& x : actual) a.push_back(to_string(x));
    exact(name, join(e), join(a));
  }

  void relative(const std::string& name, const char* expected, const Real& actual, double tol) {
    Real e(expected);
    Real rel = abs(actual - e) / abs(e);
    rep_.checks.push_back({name, expected, io_text(actual), rel < tol});
  }

  void at_least(const std::string& name, std::size_t expected, std::size_t actual) {
    rep_.checks.push_back({name, ">= " + std::to_string(expected), std::to_string(actual), actual >= expected});
  }

 private:
  static std::string io_text(const Real& r) {
    std::ostringstream os;
    os << std::setprecision(20) << r;
    return os.str();
  }
  SectionReport& rep_;
};

inline std::vector<BigRat> x_coords(const FamilyInstance& f, const std::vector<std::size_t>& idx) {
  std::vector<BigRat> out;
  for (auto i : idx) out.push_back(f.points.at(i).point.x());
  return out;
}

inline void check_heights(Recorder& rec, const FamilyInstance& f, const std::vector<std::size_t>& named,
                          const char* regulator, std::size_t generic_rank) {
  auto rep = eqtri::regulator(f.curve, f.subset(named));
  rec.relative("regulator", regulator, rep.regulator, kRegulatorRelTol);
  rec.at_least("rank lower bound of the named points", generic_rank, rep.rank_lower_bound);
}

template <typename Body>
SectionReport timed(int section, Body body) {
  SectionReport rep;
  rep.section = section;
  auto start = std::chrono::steady_clock::now();
  Recorder rec(rep);
  body(rec);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace detail

/// Family A at (p,q,r,s,t,k) = (1,4,2,4,1,1).
inline SectionReport verify_example_a() {
  return detail::timed(1, [](detail::Recorder& rec) {
    auto f = build_family_A(1, 4, 2, 4, 1, 1);
    rec.exact("M", "42", to_string(f.set.M));
    rec.exact("N", "1920", to_string(f.set.N));
    rec.exact("triples", "[(6,20,16), (24,10,8)]", detail::triples_text(f.set.triples));
    rec.exact("T1", "536", to_string(f.set.T[0]));
    rec.exact("T2", "512", to_string(f.set.T[1]));
    rec.rat("e1", "-23/2", f.constant("e1"));
    rec.rat("e2", "25/2", f.constant("e2"));
    rec.rats("a-invariants", {"0", "2673/4", "0", "80640", "3686400"},
             {f.curve.a_invariants().begin(), f.curve.a_invariants().end()});
    // P1, P12, P13, Q12, Q13
    const std::vector<std::size_t> named = {0, 1, 2, 4, 5};
    rec.rats("x(P1,P12,P13,Q12,Q13)", {"0", "-120", "-96", "-240", "-192"}, detail::x_coords(f, named));
    detail::check_heights(rec, f, named, "23.4808049005680", 5);
  });
}

/// Family B at (p,q,r,h,k) = (2,2,4,1,-1).
inline SectionReport verify_example_b() {
  return detail::timed(2, [](detail::Recorder& rec) {
    auto f = build_family_B(2, 2, 4, 1, -1);
    rec.rat("s", "31", f.constant("s"));
    rec.rat("w", "20", f.constant("w"));
    rec.rat("z", "83", f.constant("z"));
    rec.exact("M", "434", to_string(f.set.M));
    rec.exact("N", "823360", to_string(f.set.N));
    rec.exact("triples", "[(320,31,83), (20,248,166), (40,62,332)]", detail::triples_text(f.set.triples));
    rec.exact("T1", "39053", to_string(f.set.T[0]));
    rec.exact("T2", "49448", to_string(f.set.T[1]));
    rec.exact("T3", "36344", to_string(f.set.T[2]));
    rec.rat("A", "-61488", f.constant("A"));
    rec.rat("B", "-13104", f.constant("B"));
    rec.rat("m1", "-28476", f.constant("m1"));
    rec.rat("m2", "-2268", f.constant("m2"));
    rec.rats("cubic coefficients", {"-2229576048", "1351015178454466560", "-157597974109784775013171200"},
             {f.curve.a2(), f.curve.a4(), f.curve.a6()});
    // P1, Q1, R1, P2, Q2, R2
    const std::vector<std::size_t> named = {0, 3, 6, 1, 4, 7};
    rec.rats("X(P1,Q1,R1,P2,Q2,R2)",
             {"158208624", "2531337984", "1265668992", "1633121280", "204140160", "816560640"},
             detail::x_coords(f, named));
    detail::check_heights(rec, f, named, "534.520794417629", 6);
  });
}

/// Family C at (q,s) = (3,2).
inline SectionReport verify_example_c() {
  return detail::timed(3, [](detail::Recorder& rec) {
    auto t = family_C_t(3, 2);
    rec.rats("t1..t5", {"8", "11", "1", "-6", "29"}, {t.begin(), t.end()});
    auto f = build_family_C(3, 2);
    rec.exact("M", "-1688", to_string(f.set.M));
    rec.exact("N", "47038464", to_string(f.set.N));
    rec.exact("triples", "[(88,-1392,-384), (264,-1856,-96), (-232,-1584,128), (-696,-1056,64)]",
              detail::triples_text(f.set.triples));
    rec.exact("T1..T4", "[378240, -337152, 135040, 622848]",
              detail::join({to_string(f.set.T[0]), to_string(f.set.T[1]), to_string(f.set.T[2]),
                            to_string(f.set.T[3])}));
    rec.rat("T", "-716800", f.constant("T"));
    rec.rat("K", "191008", f.constant("K"));
    rec.rat("H", "140991510784", f.constant("H"));
    rec.rats("cubic coefficients",
             {"140991510784", "-2896867880665872334848", "15419167818458889008922652311552"},
             {f.curve.a2(), f.curve.a4(), f.curve.a6()});
    // P_a1, P_a2, P_b1, P_b2, P_c1, P_c2, P_d1, P_d2
    const std::vector<std::size_t> named = {0, 1, 3, 4, 6, 7, 9, 10};
    rec.rats("X(P_a1..P_d2)",
             {"-102099124224", "6454542336", "-34033041408", "4840906752", "38727254016", "5672173568",
              "12909084672", "8508260352"},
             detail::x_coords(f, named));
    detail::check_heights(rec, f, named, "15150.2483213544", 8);
  });
}

inline SectionReport verify_section(int section) {
  switch (section) {
    case 1: return verify_example_a();
    case 2: return verify_example_b();
    case 3: return verify_example_c();
  }
  throw std::invalid_argument("section must be 1, 2 or 3");
}

}  // namespace eqtri::verify
