#pragma once

/**
 * @file curve.hpp
 * @brief Elliptic curves over Q in long Weierstrass form with exact
 *        rational arithmetic.
 *
 *   y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
 *
 * Covers the chord-tangent group law, changes of coordinates, integral and
 * global minimal models (Laska-Kraus-Connell), reduction mod p, point
 * counting through quadratic character sums and a torsion bound.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqtri/arith.hpp"
#include "eqtri/errors.hpp"

namespace eqtri {

class WeierstrassCurve {
 public:
  using AInvariants = std::array<BigRat, 5>;

  WeierstrassCurve(BigRat a1, BigRat a2, BigRat a3, BigRat a4, BigRat a6)
      : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
    init();
  }
  explicit WeierstrassCurve(const AInvariants& a) : a_(a) { init(); }

  /// y^2 = x^3 + a2 x^2 + a4 x + a6
  static WeierstrassCurve from_cubic(BigRat a2, BigRat a4, BigRat a6) {
    return WeierstrassCurve(0, std::move(a2), 0, std::move(a4), std::move(a6));
  }

  const AInvariants& a_invariants() const { return a_; }
  const BigRat& a1() const { return a_[0]; }
  const BigRat& a2() const { return a_[1]; }
  const BigRat& a3() const { return a_[2]; }
  const BigRat& a4() const { return a_[3]; }
  const BigRat& a6() const { return a_[4]; }
  const BigRat& b2() const { return b2_; }
  const BigRat& b4() const { return b4_; }
  const BigRat& b6() const { return b6_; }
  const BigRat& b8() const { return b8_; }
  const BigRat& c4() const { return c4_; }
  const BigRat& c6() const { return c6_; }
  const BigRat& discriminant() const { return disc_; }
  BigRat j_invariant() const { return c4_ * c4_ * c4_ / disc_; }

  bool is_integral() const {
    for (const auto& ai : a_)
      if (!eqtri::is_integer(ai)) return false;
    return true;
  }

  friend bool operator==(const WeierstrassCurve& l, const WeierstrassCurve& r) { return l.a_ == r.a_; }

 private:
  void init() {
    const auto& [a1, a2, a3, a4, a6] = a_;
    b2_ = a1 * a1 + 4 * a2;
    b4_ = 2 * a4 + a1 * a3;
    b6_ = a3 * a3 + 4 * a6;
    b8_ = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (disc_ == 0) throw SingularCurve("discriminant vanishes");
  }

  AInvariants a_;
  BigRat b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

/// Affine rational point or the point at infinity.
class CurvePoint {
 public:
  CurvePoint() = default;  // infinity
  CurvePoint(BigRat x, BigRat y) : xy_(std::make_pair(std::move(x), std::move(y))) {}

  static CurvePoint infinity() { return {}; }

  bool is_infinity() const { return !xy_.has_value(); }
  const BigRat& x() const { return xy_->first; }
  const BigRat& y() const { return xy_->second; }

  friend bool operator==(const CurvePoint& l, const CurvePoint& r) { return l.xy_ == r.xy_; }

 private:
  std::optional<std::pair<BigRat, BigRat>> xy_;
};

inline bool is_on_curve(const WeierstrassCurve& e, const CurvePoint& p) {
  if (p.is_infinity()) return true;
  const BigRat& x = p.x();
  const BigRat& y = p.y();
  return y * y + e.a1() * x * y + e.a3() * y == ((x + e.a2()) * x + e.a4()) * x + e.a6();
}

namespace detail {
inline void require_on_curve(const WeierstrassCurve& e, const CurvePoint& p) {
  if (!is_on_curve(e, p)) throw DomainError("point is not on the curve");
}
}  // namespace detail

inline CurvePoint negate(const WeierstrassCurve& e, const CurvePoint& p) {
  detail::require_on_curve(e, p);
  if (p.is_infinity()) return p;
  return {p.x(), -p.y() - e.a1() * p.x() - e.a3()};
}

inline CurvePoint add(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q) {
  detail::require_on_curve(e, p);
  detail::require_on_curve(e, q);
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  BigRat slope;
  if (p.x() == q.x()) {
    BigRat denom = 2 * p.y() + e.a1() * p.x() + e.a3();
    if (p.y() != q.y() || denom == 0) return CurvePoint::infinity();
    slope = (3 * p.x() * p.x() + 2 * e.a2() * p.x() + e.a4() - e.a1() * p.y()) / denom;
  } else {
    slope = (q.y() - p.y()) / (q.x() - p.x());
  }
  BigRat nu = p.y() - slope * p.x();
  BigRat x3 = slope * slope + e.a1() * slope - e.a2() - p.x() - q.x();
  BigRat y3 = -(slope + e.a1()) * x3 - nu - e.a3();
  return {x3, y3};
}

inline CurvePoint subtract(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q) {
  return add(e, p, negate(e, q));
}

/// n*P by double-and-add; negative n multiplies -P.
inline CurvePoint scalar_mul(const WeierstrassCurve& e, long n, const CurvePoint& p) {
  detail::require_on_curve(e, p);
  CurvePoint base = n < 0 ? negate(e, p) : p;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1 : static_cast<unsigned long>(n);
  CurvePoint acc;
  while (k > 0) {
    if (k & 1) acc = add(e, acc, base);
    k >>= 1;
    if (k > 0) base = add(e, base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Changes of coordinates
// ---------------------------------------------------------------------------

/**
 * Standard substitution x = u^2 x' + r, y = u^3 y' + s u^2 x' + t taking a
 * model E to E'. The identity is u = 1, r = s = t = 0.
 */
struct ModelChange {
  BigRat u = 1, r = 0, s = 0, t = 0;

  /// this followed by `next`.
  ModelChange then(const ModelChange& next) const {
    return {u * next.u, r + u * u * next.r, s + u * next.s,
            t + u * u * s * next.r + u * u * u * next.t};
  }
};

inline WeierstrassCurve apply(const WeierstrassCurve& e, const ModelChange& c) {
  const auto& [a1, a2, a3, a4, a6] = e.a_invariants();
  const auto& [u, r, s, t] = c;
  if (u == 0) throw DomainError("model change with u = 0");
  BigRat u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  return WeierstrassCurve((a1 + 2 * s) / u, (a2 - s * a1 + 3 * r - s * s) / u2,
                          (a3 + r * a1 + 2 * t) / u3,
                          (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u4,
                          (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / u6);
}

inline CurvePoint map_point(const CurvePoint& p, const ModelChange& c) {
  if (p.is_infinity()) return p;
  BigRat u2 = c.u * c.u;
  BigRat x = (p.x() - c.r) / u2;
  BigRat y = (p.y() - c.s * u2 * x - c.t) / (u2 * c.u);
  return {x, y};
}

/// The change (u,r,s,t) with apply(from, change) == to, given u. Requires
/// that `to` really is isomorphic to `from` with that u.
inline ModelChange solve_change(const WeierstrassCurve& from, const WeierstrassCurve& to, const BigRat& u) {
  ModelChange c;
  c.u = u;
  c.s = (u * to.a1() - from.a1()) / 2;
  c.r = (u * u * to.a2() - from.a2() + c.s * from.a1() + c.s * c.s) / 3;
  c.t = (u * u * u * to.a3() - from.a3() - c.r * from.a1()) / 2;
  if (!(apply(from, c) == to)) throw std::logic_error("solve_change: models are not related by this u");
  return c;
}

struct IntegralModel {
  WeierstrassCurve curve;
  BigInt scale;  // points map by (x, y) -> (scale^2 x, scale^3 y)
  ModelChange change() const { return {make_rat(1, scale), 0, 0, 0}; }
};

/// Least positive scale clearing every a_i denominator with weight i.
inline IntegralModel integral_model(const WeierstrassCurve& e) {
  static constexpr unsigned kWeights[5] = {1, 2, 3, 4, 6};
  BigInt scale = 1;
  for (std::size_t i = 0; i < 5; ++i) {
    const BigInt& den = e.a_invariants()[i].get_den();
    if (den == 1) continue;
    Factorization f = factor(den);
    if (!f.complete) throw IncompleteFactorization("denominator of a-invariant");
    for (const auto& [p, k] : f.factors) {
      unsigned need = (k + kWeights[i] - 1) / kWeights[i];
      unsigned have = scale % p == 0 ? valuation(scale, p) : 0;
      if (need > have) scale *= pow(p, need - have);
    }
  }
  if (scale == 1) return {e, 1};
  return {apply(e, {make_rat(1, scale), 0, 0, 0}), scale};
}

struct MinimalModel {
  WeierstrassCurve curve;
  ModelChange change;  // from the input model to `curve`
};

namespace detail {

// Floor-style residue in (-6, 6].
inline BigInt centered_mod12(const BigInt& v) {
  BigInt m;
  mpz_fdiv_r_ui(m.get_mpz_t(), v.get_mpz_t(), 12);
  if (m > 6) m -= 12;
  return m;
}

inline BigInt mod_nonneg(const BigInt& v, unsigned long m) {
  BigInt r;
  mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), m);
  return r;
}

// Reduced model with a1, a3 in {0,1}, a2 in {-1,0,1} from integral c4, c6.
inline WeierstrassCurve model_from_c4c6(const BigInt& c4, const BigInt& c6) {
  BigInt b2 = centered_mod12(-c6);
  BigInt b4 = (b2 * b2 - c4) / 24;
  BigInt b6 = (-b2 * b2 * b2 + 36 * b2 * b4 - c6) / 216;
  BigInt a1 = mod_nonneg(b2, 2);
  BigInt a3 = mod_nonneg(b6, 2);
  return WeierstrassCurve(BigRat(a1), BigRat((b2 - a1) / 4), BigRat(a3), BigRat((b4 - a1 * a3) / 2),
                          BigRat((b6 - a3) / 4));
}

}  // namespace detail

/**
 * Global minimal model over Q with the reduced normalization
 * a1, a3 in {0,1}, a2 in {-1,0,1}.
 *
 * Only primes dividing gcd(c4, c6) of an integral model can be
 * non-minimal, so that gcd is the only thing factored.
 */
inline MinimalModel minimal_model(const WeierstrassCurve& e, std::uint64_t budget = kDefaultFactorBudget) {
  IntegralModel im = integral_model(e);
  const WeierstrassCurve& ei = im.curve;
  BigInt c4 = ei.c4().get_num();
  BigInt c6 = ei.c6().get_num();
  BigInt disc = ei.discriminant().get_num();
  BigInt g = gcd(c4, c6);
  BigInt u = 1;
  if (g != 1) {
    Factorization f = factor(g, budget);
    if (!f.complete)
      throw IncompleteFactorization("gcd(c4, c6) = " + to_string(g) + " not fully factored");
    for (const auto& [p, unused] : f.factors) {
      unsigned vd = valuation(disc, p);
      unsigned v6 = c6 == 0 ? vd : std::min(2 * valuation(c6, p), vd);
      long d = v6 / 12;
      if (p == 2) {
        BigInt a = detail::mod_nonneg(c4 / pow(BigInt(2), 4 * d), 16);
        BigInt b = detail::mod_nonneg(c6 / pow(BigInt(2), 6 * d), 32);
        if (detail::mod_nonneg(b, 4) != 3 && !(a == 0 && (b == 0 || b == 8))) --d;
      } else if (p == 3) {
        if (c6 != 0 && valuation(c6, p) == 6 * d + 2) --d;
      }
      if (d > 0) u *= pow(p, static_cast<unsigned long>(d));
    }
  }
  BigInt u4 = pow(u, 4), u6 = pow(u, 6);
  WeierstrassCurve reduced = detail::model_from_c4c6(c4 / u4, c6 / u6);
  if (reduced.c4() != BigRat(c4 / u4) || reduced.c6() != BigRat(c6 / u6))
    throw std::logic_error("minimal_model: reduced model has the wrong c4/c6");
  ModelChange to_min = solve_change(e, reduced, make_rat(u, im.scale));
  return {reduced, to_min};
}

/// Isomorphic over Q iff the reduced global minimal models coincide.
inline bool curves_equivalent(const WeierstrassCurve& lhs, const WeierstrassCurve& rhs,
                              std::uint64_t budget = kDefaultFactorBudget) {
  if (lhs.j_invariant() != rhs.j_invariant()) return false;
  return minimal_model(lhs, budget).curve == minimal_model(rhs, budget).curve;
}

// ---------------------------------------------------------------------------
// Reduction and point counting
// ---------------------------------------------------------------------------

struct Reduction {
  bool good = false;
  std::array<std::uint64_t, 5> a{};  // a-invariants mod p
};

namespace detail {
inline std::uint64_t mod_p(const BigInt& v, std::uint64_t p) {
  return mpz_fdiv_ui(v.get_mpz_t(), p);
}
inline void require_integral(const WeierstrassCurve& e) {
  if (!e.is_integral()) throw DomainError("curve must have integral a-invariants");
}
}  // namespace detail

/// Good iff p does not divide the discriminant of this (integral) model.
inline Reduction reduce_mod_p(const WeierstrassCurve& e, std::uint64_t p) {
  detail::require_integral(e);
  Reduction red;
  for (std::size_t i = 0; i < 5; ++i) red.a[i] = detail::mod_p(e.a_invariants()[i].get_num(), p);
  red.good = detail::mod_p(e.discriminant().get_num(), p) != 0;
  return red;
}

/// a_p = p + 1 - #E(F_p) at a prime of good reduction.
inline std::int64_t count_points_ap(const WeierstrassCurve& e, std::uint64_t p) {
  Reduction red = reduce_mod_p(e, p);
  if (!red.good) throw DomainError("bad reduction at p = " + std::to_string(p));
  std::int64_t ap = 0;
  if (p == 2) {
    const auto& [a1, a2, a3, a4, a6] = red.a;
    std::int64_t affine = 0;
    for (std::uint64_t x = 0; x < 2; ++x)
      for (std::uint64_t y = 0; y < 2; ++y)
        if ((y * y + a1 * x * y + a3 * y) % 2 == (x * x * x + a2 * x * x + a4 * x + a6) % 2) ++affine;
    ap = 3 - (affine + 1);
  } else {
    // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, so
    // #E = p + 1 + sum_x chi(f(x)).
    std::vector<signed char> chi(p, -1);
    chi[0] = 0;
    for (std::uint64_t y = 1; y <= p / 2; ++y) chi[y * y % p] = 1;
    std::uint64_t c3 = 4 % p;
    std::uint64_t c2 = detail::mod_p(e.b2().get_num(), p);
    std::uint64_t c1 = detail::mod_p(2 * e.b4().get_num(), p);
    std::uint64_t c0 = detail::mod_p(e.b6().get_num(), p);
    std::int64_t sum = 0;
    for (std::uint64_t x = 0; x < p; ++x) {
      std::uint64_t v = (((c3 * x + c2) % p * x + c1) % p * x + c0) % p;
      sum += chi[v];
    }
    ap = -sum;
  }
  if (static_cast<double>(ap) * static_cast<double>(ap) > 4.0 * static_cast<double>(p))
    throw std::logic_error("Hasse bound violated at p = " + std::to_string(p));
  return ap;
}

/// gcd of #E(F_p) over the first `num_primes` odd primes of good reduction.
/// A result of 1 proves the torsion subgroup is trivial.
inline std::uint64_t torsion_bound(const WeierstrassCurve& e, std::size_t num_primes) {
  if (num_primes == 0) throw DomainError("torsion_bound needs at least one prime");
  WeierstrassCurve ei = e.is_integral() ? e : integral_model(e).curve;
  std::uint64_t g = 0;
  std::size_t used = 0;
  for (std::uint64_t p = 3; used < num_primes; p += 2) {
    if (!is_probable_prime(BigInt(p))) continue;
    if (!reduce_mod_p(ei, p).good) continue;
    auto order = static_cast<std::uint64_t>(static_cast<std::int64_t>(p) + 1 - count_points_ap(ei, p));
    g = std::gcd(g, order);
    ++used;
  }
  return g;
}

}  // namespace eqtri
