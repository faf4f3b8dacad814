#pragma once

/**
 * @file heights.hpp
 * @brief Néron-Tate canonical heights, the height pairing, regulators and
 *        greedy linear-independence certificates.
 *
 * Normalization: hhat(P) = lim h(x(2^n P)) / 4^n with
 * h(x) = log max(|num x|, den x). This is twice the normalization of
 * Silverman's textbook and is the one behind published regulators.
 *
 * hhat is a sum of local heights on the global minimal model:
 *
 *  - real place: a Tate-style series in t = 1/x' after translating x so
 *    the whole real locus sits at x' >= 1; log z(t) is then bounded and the
 *    series converges like 4^-n;
 *  - primes where P reduces to a smooth point: log of the denominator of x;
 *  - primes where P hits the singular point: case analysis on
 *    ord_p(disc), ord_p(c4), ord_p(psi2), ord_p(psi3) and ord_p of the
 *    tangent coefficient.
 *
 * The primes of the last kind divide gcd(tangent numerator, psi2 numerator,
 * disc), so only that gcd is factored, never the discriminant itself.
 */

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqtri/arith.hpp"
#include "eqtri/curve.hpp"
#include "eqtri/errors.hpp"

namespace eqtri {

inline constexpr unsigned kHeightDigits = 100;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<kHeightDigits>,
                                           boost::multiprecision::et_off>;

inline Real to_real(const BigInt& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

inline Real to_real(const BigRat& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

inline constexpr double kDefaultHeightEps = 1e-12;
inline constexpr double kDefaultIndependenceTol = 1e-8;

struct HeightOptions {
  double eps = kDefaultHeightEps;
  std::uint64_t factor_budget = kDefaultFactorBudget;
};

/// log max(|numerator of x|, denominator of x); 0 at infinity.
inline Real naive_height(const CurvePoint& p) {
  if (p.is_infinity()) return Real(0);
  BigInt num = abs(BigInt(p.x().get_num()));
  const BigInt& den = p.x().get_den();
  const BigInt& top = num > den ? num : den;
  return log(to_real(top));
}

/**
 * Per-curve precomputation for canonical heights: the global minimal
 * model, the map to it, and translated b-invariants for the real place.
 * Points are given on the input model.
 */
class HeightContext {
 public:
  explicit HeightContext(const WeierstrassCurve& curve, HeightOptions opt = {})
      : input_(curve), min_(minimal_model(curve, opt.factor_budget)), opt_(opt) {
    const WeierstrassCurve& e = min_.curve;
    disc_ = e.discriminant().get_num();
    c4_ = e.c4().get_num();
    Real b2 = to_real(e.b2()), b4 = to_real(e.b4()), b6 = to_real(e.b6()), b8 = to_real(e.b8());
    // Every real point has x >= smallest root of 4x^3 + b2 x^2 + 2 b4 x + b6;
    // Fujiwara's bound puts all roots inside [-R, R].
    using std::abs;
    Real R = 2 * std::max({abs(b2) / 4, sqrt(abs(b4) / 2), cbrt(abs(b6) / 8)});
    Real r = -R - 1;
    shift_ = r;
    B2_ = b2 + 12 * r;
    B4_ = b4 + r * b2 + 6 * r * r;
    B6_ = b6 + 2 * r * b4 + r * r * b2 + 4 * r * r * r;
    B8_ = b8 + 3 * r * b6 + 3 * r * r * b4 + r * r * r * b2 + 3 * r * r * r * r;
  }

  const WeierstrassCurve& curve() const { return input_; }
  const MinimalModel& minimal() const { return min_; }

  /// Canonical height of a point on the input model. When `complete` is
  /// null an unfactored gcd throws; otherwise the flag is cleared and the
  /// missing (nonpositive) corrections are left out.
  Real canonical_height(const CurvePoint& p, bool* complete = nullptr) const {
    if (!is_on_curve(input_, p)) throw DomainError("point is not on the curve");
    if (p.is_infinity()) return Real(0);
    CurvePoint q = map_point(p, min_.change);
    const WeierstrassCurve& e = min_.curve;
    // psi2 = 0 or psi3 = 0 means order 2 or 3.
    BigRat psi2 = 2 * q.y() + e.a1() * q.x() + e.a3();
    BigRat psi3 = psi3_value(q.x());
    if (psi2 == 0 || psi3 == 0) return Real(0);
    Real local = archimedean(q.x()) + log(to_real(BigInt(q.x().get_den()))) / 2;
    local += non_archimedean(q, psi2, psi3, complete);
    return 2 * local;
  }

  Real pairing(const CurvePoint& p, const CurvePoint& q, bool* complete = nullptr) const {
    Real hpq = canonical_height(add(input_, p, q), complete);
    return (hpq - canonical_height(p, complete) - canonical_height(q, complete)) / 2;
  }

  /// Real local height minus log|disc|/12 (book normalization).
  Real archimedean(const BigRat& x_min) const {
    Real xs = to_real(x_min) - shift_;
    if (xs < Real(0.5)) throw std::logic_error("height: translated abscissa below 1");
    Real mu = log(xs) / 2;
    Real t = 1 / xs;
    Real weight = Real(1) / 8;
    Real largest = 0;
    for (int n = 0; n < 400; ++n) {
      Real t2 = t * t;
      Real z = 1 - B4_ * t2 - 2 * B6_ * t2 * t - B8_ * t2 * t2;
      Real w = 4 * t + B2_ * t2 + 2 * B4_ * t2 * t + B6_ * t2 * t2;
      Real lz = log(abs(z));
      mu += weight * lz;
      largest = std::max(largest, Real(abs(lz)));
      weight /= 4;
      t = w / z;
      // Tail sum is at most weight * 4/3 * sup|log z|; use twice the largest seen.
      if (n >= 20 && weight * (2 * largest + 1) < Real(opt_.eps) / 8) break;
    }
    return mu;
  }

 private:
  BigRat psi3_value(const BigRat& x) const {
    const WeierstrassCurve& e = min_.curve;
    return (((3 * x + e.b2()) * x + 3 * e.b4()) * x + 3 * e.b6()) * x + e.b8();
  }

  Real non_archimedean(const CurvePoint& q, const BigRat& psi2, const BigRat& psi3, bool* complete) const {
    const WeierstrassCurve& e = min_.curve;
    // Primes of the x denominator never divide these numerators.
    BigRat tangent = 3 * q.x() * q.x() + 2 * e.a2() * q.x() + e.a4() - e.a1() * q.y();
    BigInt g = gcd(gcd(BigInt(tangent.get_num()), BigInt(psi2.get_num())), disc_);
    if (g == 1) return Real(0);
    Factorization f = factor(g, opt_.factor_budget);
    if (!f.complete) {
      if (complete == nullptr)
        throw IncompleteFactorization("height: gcd " + to_string(g) + " not fully factored");
      *complete = false;
    }
    Real sum = 0;
    for (const auto& [p, unused] : f.factors) {
      BigRat corr = local_correction(p, tangent, psi2, psi3);
      sum += to_real(corr) * log(to_real(p));
    }
    return sum;
  }

  // Correction (in units of log p) at a prime where the point reduces to
  // the singular point of the minimal model.
  BigRat local_correction(const BigInt& p, const BigRat& tangent, const BigRat& psi2, const BigRat& psi3) const {
    unsigned n = valuation(disc_, p);
    unsigned b = valuation(psi2.get_num(), p);
    if (b == 0 || (tangent != 0 && valuation(tangent.get_num(), p) == 0)) return 0;
    if (c4_ != 0 && valuation(c4_, p) == 0) {
      // Multiplicative: component index min(b, n/2) of an I_n fibre.
      BigRat m = std::min(BigRat(b), make_rat(n, 2));
      return -m * (n - m) / (2 * BigRat(n));
    }
    unsigned c = valuation(psi3.get_num(), p);
    if (c >= 3 * b) return make_rat(-static_cast<long>(b), 3);
    return make_rat(-static_cast<long>(c), 8);
  }

  WeierstrassCurve input_;
  MinimalModel min_;
  HeightOptions opt_;
  BigInt disc_, c4_;
  Real shift_, B2_, B4_, B6_, B8_;
};

inline Real canonical_height(const WeierstrassCurve& curve, const CurvePoint& p, HeightOptions opt = {}) {
  return HeightContext(curve, opt).canonical_height(p);
}

inline Real height_pairing(const WeierstrassCurve& curve, const CurvePoint& p, const CurvePoint& q,
                           HeightOptions opt = {}) {
  return HeightContext(curve, opt).pairing(p, q);
}

// ---------------------------------------------------------------------------
// Gram matrices
// ---------------------------------------------------------------------------

using RealMatrix = std::vector<std::vector<Real>>;

/// Determinant by Gaussian elimination with partial pivoting.
inline Real determinant(RealMatrix m) {
  const std::size_t n = m.size();
  Real det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(m[r][col]) > abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0) return Real(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      Real factor = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= factor * m[col][k];
    }
  }
  return det;
}

inline RealMatrix principal_submatrix(const RealMatrix& g, const std::vector<std::size_t>& idx) {
  RealMatrix s(idx.size(), std::vector<Real>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) s[i][j] = g[idx[i]][idx[j]];
  return s;
}

/// det divided by the product of the diagonal: 1 for orthogonal points,
/// 0 for dependent ones, independent of the height scale.
inline Real normalized_determinant(const RealMatrix& g, const std::vector<std::size_t>& idx) {
  Real det = determinant(principal_submatrix(g, idx));
  for (auto i : idx) {
    if (g[i][i] <= 0) return Real(0);
    det /= g[i][i];
  }
  return det;
}

inline RealMatrix gram_matrix(const HeightContext& ctx, const std::vector<CurvePoint>& points,
                              bool* complete = nullptr) {
  const std::size_t n = points.size();
  RealMatrix g(n, std::vector<Real>(n));
  std::vector<Real> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = g[i][i] = ctx.canonical_height(points[i], complete);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Real hs = ctx.canonical_height(add(ctx.curve(), points[i], points[j]), complete);
      g[i][j] = g[j][i] = (hs - h[i] - h[j]) / 2;
    }
  return g;
}

struct IndependenceVerdict {
  std::size_t rank_lower_bound = 0;
  std::vector<std::size_t> certificate;  // indices of an independent subset
  Real normalized_det = 0;               // of the certificate subset
  Real det = 0;
};

/**
 * Greedy scan in input order: keep a point when the normalized Gram
 * determinant of the kept set stays above `tol`. Points with zero height
 * (torsion) are never kept.
 */
inline IndependenceVerdict independence_from_gram(const RealMatrix& g, double tol = kDefaultIndependenceTol) {
  IndependenceVerdict v;
  Real best = 1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i][i] <= Real(tol)) continue;
    auto trial = v.certificate;
    trial.push_back(i);
    Real nd = normalized_determinant(g, trial);
    if (nd > Real(tol)) {
      v.certificate = std::move(trial);
      best = nd;
    }
  }
  v.rank_lower_bound = v.certificate.size();
  v.normalized_det = v.certificate.empty() ? Real(0) : best;
  v.det = v.certificate.empty() ? Real(0) : determinant(principal_submatrix(g, v.certificate));
  return v;
}

inline IndependenceVerdict independence_verdict(const WeierstrassCurve& curve, const std::vector<CurvePoint>& points,
                                                double tol = kDefaultIndependenceTol, HeightOptions opt = {}) {
  HeightContext ctx(curve, opt);
  return independence_from_gram(gram_matrix(ctx, points), tol);
}

struct HeightReport {
  std::vector<std::string> labels;
  RealMatrix pairing;
  Real regulator = 0;  // det of the full pairing matrix
  std::size_t rank_lower_bound = 0;
  std::vector<std::size_t> certificate;
  double tolerance = kDefaultIndependenceTol;
  bool complete_factorization = true;
};

inline HeightReport regulator(const WeierstrassCurve& curve, const std::vector<CurvePoint>& points,
                              std::vector<std::string> labels = {}, HeightOptions opt = {},
                              double tol = kDefaultIndependenceTol) {
  HeightContext ctx(curve, opt);
  HeightReport rep;
  if (labels.empty())
    for (std::size_t i = 0; i < points.size(); ++i) labels.push_back("P" + std::to_string(i + 1));
  rep.labels = std::move(labels);
  rep.tolerance = tol;
  rep.pairing = gram_matrix(ctx, points, &rep.complete_factorization);
  rep.regulator = points.empty() ? Real(1) : determinant(rep.pairing);
  auto v = independence_from_gram(rep.pairing, tol);
  rep.rank_lower_bound = v.rank_lower_bound;
  rep.certificate = std::move(v.certificate);
  return rep;
}

}  // namespace eqtri
