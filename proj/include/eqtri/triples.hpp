#pragma once

/**
 * @file triples.hpp
 * @brief Sets of integer triples sharing one sum M and one product N.
 *
 * Three parametrized constructions (two, three and four triples) plus an
 * exhaustive search over all positive triples with a prescribed sum.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "eqtri/arith.hpp"
#include "eqtri/errors.hpp"

namespace eqtri {

using Triple = std::array<BigInt, 3>;

inline BigInt triple_sum(const Triple& t) { return t[0] + t[1] + t[2]; }
inline BigInt triple_product(const Triple& t) { return t[0] * t[1] * t[2]; }
/// Second elementary symmetric value x1 x2 + x1 x3 + x2 x3.
inline BigInt triple_e2(const Triple& t) { return t[0] * t[1] + t[0] * t[2] + t[1] * t[2]; }

struct TripleSet {
  std::vector<Triple> triples;
  BigInt M;               // sum of the first triple
  BigInt N;               // product of the first triple
  std::vector<BigInt> T;  // T[j] = e2 of triple j

  std::size_t size() const { return triples.size(); }

  static TripleSet from_triples(std::vector<Triple> triples) {
    if (triples.empty()) throw DomainError("empty triple set");
    TripleSet set;
    set.M = triple_sum(triples.front());
    set.N = triple_product(triples.front());
    for (const auto& t : triples) set.T.push_back(triple_e2(t));
    set.triples = std::move(triples);
    return set;
  }

  /// Every part multiplied by lambda: sum -> lambda M, product -> lambda^3 N.
  TripleSet scaled(const BigInt& lambda) const {
    std::vector<Triple> out = triples;
    for (auto& t : out)
      for (auto& x : t) x *= lambda;
    return from_triples(std::move(out));
  }
};

struct SetVerdict {
  bool valid = true;
  std::string failure;  // empty when valid

  explicit operator bool() const { return valid; }
};

/// Checks equal sums, equal products and the cached M, N, T values.
inline SetVerdict validate_set(const TripleSet& set, bool require_positive = false) {
  auto fail = [](std::string why) { return SetVerdict{false, std::move(why)}; };
  if (set.triples.size() < 2) return fail("need at least two triples");
  if (set.T.size() != set.triples.size()) return fail("T has wrong length");
  for (std::size_t j = 0; j < set.triples.size(); ++j) {
    const Triple& t = set.triples[j];
    std::string at = " at triple " + std::to_string(j + 1);
    if (triple_sum(t) != set.M)
      return fail("sum mismatch" + at + ": " + to_string(triple_sum(t)) + " != " + to_string(set.M));
    if (triple_product(t) != set.N)
      return fail("product mismatch" + at + ": " + to_string(triple_product(t)) + " != " + to_string(set.N));
    if (triple_e2(t) != set.T[j]) return fail("T mismatch" + at);
    if (require_positive)
      for (const auto& x : t)
        if (x <= 0) return fail("nonpositive part " + to_string(x) + at);
  }
  return {};
}

namespace detail {

inline void require_nonzero_parts(const std::vector<Triple>& triples, const char* family) {
  for (std::size_t j = 0; j < triples.size(); ++j)
    for (const auto& x : triples[j])
      if (x == 0)
        throw DegenerateSet(std::string("family ") + family + ": zero part in triple " + std::to_string(j + 1));
}

inline TripleSet checked_set(std::vector<Triple> triples, const char* family) {
  require_nonzero_parts(triples, family);
  TripleSet set = TripleSet::from_triples(std::move(triples));
  if (auto v = validate_set(set); !v)
    throw std::logic_error(std::string("family ") + family + " generator broke an identity: " + v.failure);
  return set;
}

}  // namespace detail

/// Two triples: (p(s+rt), q(s+pt), r(s+qt)) and (q(s+rt), r(s+pt), p(s+qt)).
inline TripleSet gen_A(const BigInt& p, const BigInt& q, const BigInt& r, const BigInt& s, const BigInt& t) {
  BigInt u = s + r * t, v = s + p * t, w = s + q * t;
  return detail::checked_set({Triple{p * u, q * v, r * w}, Triple{q * u, r * v, p * w}}, "A");
}

struct FamilyBAux {
  BigInt s, w, z;
};

inline FamilyBAux family_B_aux(const BigInt& p, const BigInt& q, const BigInt& r) {
  return {p * q * r * (r - p) + p * p - p - r + 1,      //
          q * (r * r - p - r + 1) + p - r,              //
          p * q * r * (q * r - q - 1) + p + q - 1};
}

/// Three triples (pqrw, s, z), (w, qrs, pz), (pw, qs, rz).
inline TripleSet gen_B(const BigInt& p, const BigInt& q, const BigInt& r) {
  auto [s, w, z] = family_B_aux(p, q, r);
  return detail::checked_set(
      {Triple{p * q * r * w, s, z}, Triple{w, q * r * s, p * z}, Triple{p * w, q * s, r * z}}, "B");
}

/// The five polynomials t1..t5 in (q, s) behind the four-triple family.
inline std::array<BigRat, 5> family_C_t(const BigRat& q, const BigRat& s) {
  auto pw = [](const BigRat& v, unsigned long e) { return eqtri::pow(v, e); };
  BigRat q2 = pw(q, 2), q3 = pw(q, 3), q4 = pw(q, 4);
  BigRat s2 = pw(s, 2), s3 = pw(s, 3), s4 = pw(s, 4), s5 = pw(s, 5), s6 = pw(s, 6), s7 = pw(s, 7);
  BigRat t1 = q2 * s2 - 2 * q2 * s + q * s + q - 1;
  BigRat t2 = q2 * s2 - 2 * q2 * s + q * s2 - q * s + s2 + q - s;
  BigRat t3 = q3 * s3 - q2 * s4 - 4 * q3 * s2 + 5 * q2 * s3 - q * s4 + 4 * q3 * s - 6 * q2 * s2 + 2 * q * s3 -
              s4 + q2 * s + 2 * s3 - 2 * q2 + q * s - 2 * s2 + q;
  BigRat t4 = -q2 * s5 + q3 * s3 + 4 * q2 * s4 - 4 * q3 * s2 - 4 * q2 * s3 - 2 * q * s4 + 4 * q3 * s + q2 * s2 +
              4 * q * s3 - q2 * s - s3 - 2 * q2 - q * s + s2 + 2 * q - s;
  BigRat t5 = q2 * s7 + q4 * s4 - 3 * q3 * s5 - 4 * q2 * s6 + q * s7 - 4 * q4 * s3 + 15 * q3 * s4 - q * s6 +
              4 * q4 * s2 - 22 * q3 * s3 + 12 * q2 * s4 - 5 * q * s5 + 2 * s6 + 10 * q3 * s2 - 12 * q2 * s3 +
              7 * q * s4 - 4 * s5 - 4 * q3 * s + 12 * q2 * s2 - 7 * q * s3 + 4 * s4 - 4 * q2 * s + q * s2 - s3 +
              q2;
  return {t1, t2, t3, t4, t5};
}

/**
 * Four triples in two parameters. Integer (q, s) give the closed forms
 * as they stand; for non-integer rationals the twelve parts are cleared
 * of denominators and divided by their gcd (signs kept).
 */
inline TripleSet gen_C(const BigRat& q, const BigRat& s) {
  auto [t1, t2, t3, t4, t5] = family_C_t(q, s);
  BigRat sm1 = s - 1, sq = s * s - q, t1sq = t1 * t1;
  std::array<std::array<BigRat, 3>, 4> parts{{
      {sm1 * t1 * t2 * t3, -s * q * sm1 * t1 * t5, sq * t1sq * t4},
      {sm1 * q * t1 * t2 * t3, -t1sq * t5, sm1 * s * sq * t1 * t4},
      {-sm1 * t1 * t5, sm1 * q * t1 * t2 * t4, s * sq * t1sq * t3},
      {-sm1 * q * t1 * t5, sm1 * s * t1 * t2 * t4, sq * t1sq * t3},
  }};
  for (const auto& tr : parts)
    for (const auto& x : tr)
      if (x == 0) throw DegenerateSet("family C: zero part (s = 1, s^2 = q or a vanishing t_i)");

  BigInt den = 1, g = 0;
  bool integral_params = is_integer(q) && is_integer(s);
  if (!integral_params) {
    for (const auto& tr : parts)
      for (const auto& x : tr) den = lcm(den, x.get_den());
  }
  std::vector<Triple> triples;
  for (const auto& tr : parts) {
    Triple t;
    for (std::size_t i = 0; i < 3; ++i) {
      BigRat v = tr[i] * den;
      if (!is_integer(v)) throw std::logic_error("family C: part not integral after scaling");
      t[i] = v.get_num();
      g = gcd(g, t[i]);
    }
    triples.push_back(t);
  }
  if (!integral_params && g > 1)
    for (auto& t : triples)
      for (auto& x : t) x /= g;
  return detail::checked_set(std::move(triples), "C");
}

// ---------------------------------------------------------------------------
// Direct search at a fixed sum
// ---------------------------------------------------------------------------

struct ProductGroup {
  BigInt N;
  std::vector<Triple> triples;  // lexicographic order
};

struct DirectSearchOptions {
  std::size_t min_multiplicity = 2;
  bool require_positive = true;
  /// Only with require_positive == false: parts range over [-bound, bound] \ {0}.
  /// Zero means |M| (at least 1).
  std::int64_t part_bound = 0;
  unsigned workers = 1;
};

namespace detail {

struct Candidate {
  __int128 product;
  std::int64_t a, b, c;
  bool operator<(const Candidate& o) const {
    return std::tie(product, a, b, c) < std::tie(o.product, o.a, o.b, o.c);
  }
};

inline BigInt to_bigint(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 m = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt hi = BigInt(static_cast<unsigned long>(m >> 64));
  BigInt out = (hi << 64) + BigInt(static_cast<unsigned long>(m & 0xFFFFFFFFFFFFFFFFULL));
  return neg ? BigInt(-out) : out;
}

}  // namespace detail

/**
 * Enumerates unordered triples a <= b <= c with a + b + c = M, groups them
 * by product and keeps groups with at least `min_multiplicity` members,
 * sorted by N. Work is split over the smallest part; the merge sorts, so
 * output does not depend on the worker count.
 */
inline std::vector<ProductGroup> direct_search(std::int64_t M, const DirectSearchOptions& opt = {}) {
  std::int64_t lo, hi;
  if (opt.require_positive) {
    if (M < 3) return {};
    lo = 1;
    hi = M;
  } else {
    std::int64_t bound = opt.part_bound > 0 ? opt.part_bound : std::max<std::int64_t>(1, M < 0 ? -M : M);
    lo = -bound;
    hi = bound;
  }
  if (hi > (std::int64_t{1} << 40) || lo < -(std::int64_t{1} << 40))
    throw DomainError("direct_search: part range too large");

  // a ranges over [lo, a_max]; b over [a, ...]; c = M - a - b >= b.
  auto scan = [&](std::int64_t a_begin, std::int64_t a_end, std::vector<detail::Candidate>& out) {
    for (std::int64_t a = a_begin; a < a_end; ++a) {
      if (a == 0) continue;
      for (std::int64_t b = a;; ++b) {
        std::int64_t c = M - a - b;
        if (c < b) break;
        if (b > hi) break;
        if (b == 0 || c == 0 || c > hi) continue;
        out.push_back({static_cast<__int128>(a) * b * c, a, b, c});
      }
    }
  };

  // Largest a with 3a <= M (a <= b <= c).
  std::int64_t a_max = (M >= 0 ? M / 3 : -((-M + 2) / 3));
  a_max = std::min(a_max, hi);
  if (a_max < lo) return {};
  std::int64_t span = a_max - lo + 1;
  unsigned workers = std::max(1u, opt.workers);
  workers = static_cast<unsigned>(std::min<std::int64_t>(workers, span));
  std::vector<std::vector<detail::Candidate>> chunks(workers);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    std::int64_t begin = lo + span * w / workers;
    std::int64_t end = lo + span * (w + 1) / workers;
    if (workers == 1)
      scan(begin, end, chunks[w]);
    else
      threads.emplace_back(scan, begin, end, std::ref(chunks[w]));
  }
  for (auto& th : threads) th.join();

  std::vector<detail::Candidate> all;
  for (auto& ch : chunks) all.insert(all.end(), ch.begin(), ch.end());
  std::sort(all.begin(), all.end());

  std::vector<ProductGroup> groups;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].product == all[i].product) ++j;
    if (j - i >= std::max<std::size_t>(1, opt.min_multiplicity)) {
      ProductGroup g{detail::to_bigint(all[i].product), {}};
      for (std::size_t k = i; k < j; ++k) g.triples.push_back({BigInt(all[k].a), BigInt(all[k].b), BigInt(all[k].c)});
      groups.push_back(std::move(g));
    }
    i = j;
  }
  return groups;
}

/// Number of triples a <= b <= c the search above enumerates (positive mode).
inline std::uint64_t count_positive_triples(std::int64_t M) {
  std::uint64_t n = 0;
  for (std::int64_t a = 1; 3 * a <= M; ++a)
    for (std::int64_t b = a; b <= (M - a) / 2; ++b) ++n;
  return n;
}

}  // namespace eqtri
