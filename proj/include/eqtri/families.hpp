#pragma once

/**
 * @file families.hpp
 * @brief The three elliptic-curve families attached to equal-sum
 *        equal-product triple sets, with their marked rational points.
 *
 * A: y^2 = x^3 + (T1 + e1^2) x^2 + MN x + N^2, two triples, 7 points.
 * B: Y^2 = X^3 + (A T1 + B^2) X^2 + A^2 MN X + A^3 N^2, three triples, 9 points.
 * C: Y^2 = X^3 + H X^2 + MN K^2 X + N^2 K^3, four triples, 12 points.
 */

#include <string>
#include <utility>
#include <vector>

#include "eqtri/arith.hpp"
#include "eqtri/curve.hpp"
#include "eqtri/errors.hpp"
#include "eqtri/triples.hpp"

namespace eqtri {

enum class FamilyTag { A, B, C };

inline const char* to_string(FamilyTag f) {
  switch (f) {
    case FamilyTag::A: return "A";
    case FamilyTag::B: return "B";
    case FamilyTag::C: return "C";
  }
  return "?";
}

inline FamilyTag parse_family(const std::string& s) {
  if (s == "A" || s == "a") return FamilyTag::A;
  if (s == "B" || s == "b") return FamilyTag::B;
  if (s == "C" || s == "c") return FamilyTag::C;
  throw std::invalid_argument("unknown family '" + s + "' (expected A, B or C)");
}

/// Number of parameters each builder takes: A(p,q,r,s,t,k), B(p,q,r,h,k), C(q,s).
inline std::size_t family_arity(FamilyTag f) {
  switch (f) {
    case FamilyTag::A: return 6;
    case FamilyTag::B: return 5;
    case FamilyTag::C: return 2;
  }
  return 0;
}

/// Lower bound on the rank each family is built to exhibit.
inline std::size_t family_generic_rank(FamilyTag f) {
  switch (f) {
    case FamilyTag::A: return 5;
    case FamilyTag::B: return 6;
    case FamilyTag::C: return 8;
  }
  return 0;
}

struct LabeledPoint {
  std::string label;
  CurvePoint point;
};

struct FamilyInstance {
  FamilyTag family;
  std::vector<BigRat> params;
  TripleSet set;
  std::vector<std::pair<std::string, BigRat>> constants;  // insertion order kept
  WeierstrassCurve curve;
  std::vector<LabeledPoint> points;
  /// Indices into `points` of the subset shown independent for the family.
  std::vector<std::size_t> independent_subset;

  const BigRat& constant(const std::string& name) const {
    for (const auto& [k, v] : constants)
      if (k == name) return v;
    throw std::out_of_range("no constant named " + name);
  }

  std::vector<CurvePoint> point_list() const {
    std::vector<CurvePoint> out;
    for (const auto& lp : points) out.push_back(lp.point);
    return out;
  }

  std::vector<CurvePoint> subset(const std::vector<std::size_t>& idx) const {
    std::vector<CurvePoint> out;
    for (auto i : idx) out.push_back(points.at(i).point);
    return out;
  }
};

namespace detail {

inline BigInt require_integer_param(const BigRat& v, const char* name) {
  if (!is_integer(v)) throw DomainError(std::string("parameter ") + name + " must be an integer");
  return v.get_num();
}

inline void check_points(const FamilyInstance& inst) {
  for (const auto& lp : inst.points)
    if (!is_on_curve(inst.curve, lp.point))
      throw std::logic_error("family " + std::string(to_string(inst.family)) + ": point " + lp.label +
                             " is off the curve");
}

}  // namespace detail

/**
 * Family A over (p, q, r, s, t, k). The triple generator needs integers
 * p..t; k is any nonzero rational. e1 = (k^2 + T2 - T1) / 2k and
 * e2 = (k^2 + T1 - T2) / 2k make T1 + e1^2 = T2 + e2^2.
 *
 * Points, in order: P1 = (0, N), P12, P13, P23 with P_ij = (-a_i a_j, a_i a_j e1),
 * then Q12, Q13, Q23 built the same way from the second triple and e2.
 */
inline FamilyInstance build_family_A(const BigRat& p, const BigRat& q, const BigRat& r, const BigRat& s,
                                     const BigRat& t, const BigRat& k) {
  if (k == 0) throw DomainError("family A: k = 0");
  TripleSet set = gen_A(detail::require_integer_param(p, "p"), detail::require_integer_param(q, "q"),
                        detail::require_integer_param(r, "r"), detail::require_integer_param(s, "s"),
                        detail::require_integer_param(t, "t"));
  const BigInt& T1 = set.T[0];
  const BigInt& T2 = set.T[1];
  BigRat e1 = (k * k + T2 - T1) / (2 * k);
  BigRat e2 = (k * k + T1 - T2) / (2 * k);
  if (T1 + e1 * e1 != T2 + e2 * e2) throw std::logic_error("family A: conic condition fails");

  BigRat MN = BigRat(set.M * set.N);
  WeierstrassCurve curve = WeierstrassCurve::from_cubic(T1 + e1 * e1, MN, BigRat(set.N * set.N));

  std::vector<LabeledPoint> pts;
  pts.push_back({"P1", CurvePoint(0, BigRat(set.N))});
  const std::pair<int, int> pairs[] = {{0, 1}, {0, 2}, {1, 2}};
  for (int which = 0; which < 2; ++which) {
    const Triple& tr = set.triples[static_cast<std::size_t>(which)];
    const BigRat& e = which == 0 ? e1 : e2;
    for (auto [i, j] : pairs) {
      BigRat prod = BigRat(tr[static_cast<std::size_t>(i)] * tr[static_cast<std::size_t>(j)]);
      std::string label = std::string(which == 0 ? "P" : "Q") + std::to_string(i + 1) + std::to_string(j + 1);
      pts.push_back({label, CurvePoint(-prod, prod * e)});
    }
  }
  FamilyInstance inst{FamilyTag::A, {p, q, r, s, t, k}, std::move(set), {{"e1", e1}, {"e2", e2}},
                      std::move(curve), std::move(pts), {0, 1, 2, 4, 5}};
  detail::check_points(inst);
  return inst;
}

/**
 * Family B over (p, q, r, h, k), h != k. With D2 = T1 - T2, D3 = T1 - T3:
 *   A  = -4hk(h - k)(D2 h - D3 k)
 *   B  = D2 h^2 - D3 k^2
 *   m_i = D2 h^2 - 2(T1 - T_{i+1}) hk + D3 k^2
 * so that A(T1 - T_{i+1}) = m_i^2 - B^2.
 *
 * Points, in order: P1..P3, Q1..Q3, R1..R3 where e.g.
 * P1 = (-a2 a3 A, a2 a3 A B) and Q_i, R_i use m1, m2 in place of B.
 */
inline FamilyInstance build_family_B(const BigRat& p, const BigRat& q, const BigRat& r, const BigRat& h,
                                     const BigRat& k) {
  if (h == k) throw DomainError("family B: h = k");
  BigInt pi = detail::require_integer_param(p, "p"), qi = detail::require_integer_param(q, "q"),
         ri = detail::require_integer_param(r, "r");
  auto aux = family_B_aux(pi, qi, ri);
  TripleSet set = gen_B(pi, qi, ri);
  const BigInt &T1 = set.T[0], &T2 = set.T[1], &T3 = set.T[2];
  BigRat D2 = BigRat(T1 - T2), D3 = BigRat(T1 - T3);
  BigRat A = -4 * h * k * (h - k) * (D2 * h - D3 * k);
  if (A == 0) throw DomainError("family B: A vanishes");
  BigRat B = D2 * h * h - D3 * k * k;
  BigRat m1 = D2 * h * h - 2 * D2 * h * k + D3 * k * k;
  BigRat m2 = D2 * h * h - 2 * D3 * h * k + D3 * k * k;
  if (A * D2 != m1 * m1 - B * B || A * D3 != m2 * m2 - B * B)
    throw std::logic_error("family B: solvability system fails");

  BigRat M = BigRat(set.M), N = BigRat(set.N);
  WeierstrassCurve curve = WeierstrassCurve::from_cubic(A * BigRat(T1) + B * B, A * A * M * N, A * A * A * N * N);

  std::vector<LabeledPoint> pts;
  const char* names[] = {"P", "Q", "R"};
  const BigRat* slopes[] = {&B, &m1, &m2};
  for (std::size_t j = 0; j < 3; ++j) {
    const Triple& tr = set.triples[j];
    for (std::size_t i = 0; i < 3; ++i) {
      // Product of the two parts other than part i.
      BigRat prod = BigRat(tr[(i + 1) % 3] * tr[(i + 2) % 3]) * A;
      pts.push_back({names[j] + std::to_string(i + 1), CurvePoint(-prod, prod * *slopes[j])});
    }
  }
  FamilyInstance inst{FamilyTag::B,
                      {p, q, r, h, k},
                      std::move(set),
                      {{"s", BigRat(aux.s)}, {"w", BigRat(aux.w)}, {"z", BigRat(aux.z)}, {"A", A}, {"B", B},
                       {"m1", m1}, {"m2", m2}},
                      std::move(curve),
                      std::move(pts),
                      {0, 1, 3, 4, 6, 7}};
  detail::check_points(inst);
  return inst;
}

/// Value of the family-B quartic A x f1(x) + B^2 x^2 at x.
inline BigRat family_B_quartic(const FamilyInstance& inst, const BigRat& x) {
  BigRat f1 = 1;
  for (const auto& a : inst.set.triples[0]) f1 *= x + BigRat(a);
  const BigRat& A = inst.constant("A");
  const BigRat& B = inst.constant("B");
  return A * x * f1 + B * B * x * x;
}

/// Value of the family-C quartic K x^4 + MK x^3 + H x^2 + NK x at x.
inline BigRat family_C_quartic(const FamilyInstance& inst, const BigRat& x) {
  const BigRat& K = inst.constant("K");
  const BigRat& H = inst.constant("H");
  BigRat M = BigRat(inst.set.M), N = BigRat(inst.set.N);
  return ((K * x + M * K) * x + H) * x * x + N * K * x;
}

/**
 * Curve from any four-triple set. Pairs the first two triples against the
 * last two: T = T1 + T2 - T3 - T4 and
 *   K = -(T^2 + 2(T3 + T4)T - 4(T1 T2 - T3 T4)) / 2T
 *   H = (T^2 + 4(T1 T2 - T3 T4))^2 / 16T^2 - T1 T2
 * Each part v gives the point with X = -NK/v; Y is the nonnegative root.
 */
inline FamilyInstance build_EC_from_set(const TripleSet& set, std::vector<BigRat> params = {}) {
  if (set.size() != 4) throw DomainError("family C needs exactly four triples");
  if (auto v = validate_set(set); !v) throw DomainError("invalid triple set: " + v.failure);
  for (const auto& tr : set.triples)
    for (const auto& x : tr)
      if (x == 0) throw DegenerateSet("family C: zero part");
  BigRat T1(set.T[0]), T2(set.T[1]), T3(set.T[2]), T4(set.T[3]);
  BigRat T = T1 + T2 - T3 - T4;
  if (T == 0) throw DomainError("T vanishes");
  BigRat S = T1 * T2 - T3 * T4;
  BigRat K = -(T * T + 2 * (T3 + T4) * T - 4 * S) / (2 * T);
  if (K == 0) throw DomainError("K vanishes");
  BigRat H = (T * T + 4 * S) * (T * T + 4 * S) / (16 * T * T) - T1 * T2;
  BigRat M(set.M), N(set.N);
  WeierstrassCurve curve = WeierstrassCurve::from_cubic(H, M * N * K * K, N * N * K * K * K);

  FamilyInstance inst{FamilyTag::C, std::move(params), set, {{"T", T}, {"K", K}, {"H", H}},
                      std::move(curve), {}, {0, 1, 3, 4, 6, 7, 9, 10}};
  const char letters[] = {'a', 'b', 'c', 'd'};
  for (std::size_t j = 0; j < 4; ++j) {
    for (std::size_t i = 0; i < 3; ++i) {
      BigRat v(set.triples[j][i]);
      std::string label = std::string("P_") + letters[j] + std::to_string(i + 1);
      if (!rational_sqrt(family_C_quartic(inst, -v)))
        throw std::logic_error("family C: quartic value at -" + to_string(v) + " is not a square");
      BigRat X = -N * K / v;
      BigRat rhs = ((X + H) * X + inst.curve.a4()) * X + inst.curve.a6();
      auto Y = rational_sqrt(rhs);
      if (!Y) throw std::logic_error("family C: no rational ordinate for " + label);
      inst.points.push_back({label, CurvePoint(X, *Y)});
    }
  }
  detail::check_points(inst);
  return inst;
}

inline FamilyInstance build_family_C(const BigRat& q, const BigRat& s) {
  return build_EC_from_set(gen_C(q, s), {q, s});
}

/// Dispatch on the family tag; `params` must have family_arity() entries.
inline FamilyInstance build_family(FamilyTag family, const std::vector<BigRat>& params) {
  if (params.size() != family_arity(family))
    throw DomainError(std::string("family ") + to_string(family) + " takes " +
                      std::to_string(family_arity(family)) + " parameters, got " +
                      std::to_string(params.size()));
  switch (family) {
    case FamilyTag::A: return build_family_A(params[0], params[1], params[2], params[3], params[4], params[5]);
    case FamilyTag::B: return build_family_B(params[0], params[1], params[2], params[3], params[4]);
    case FamilyTag::C: return build_family_C(params[0], params[1]);
  }
  throw DomainError("unknown family");
}

}  // namespace eqtri
