#pragma once

/**
 * @file arith.hpp
 * @brief Exact integer/rational foundations: prime sieve, Miller-Rabin,
 *        and budgeted factorization (trial division + Pollard-Brent rho).
 *
 * BigInt and BigRat are GMP's C++ classes. mpq_class keeps every result of
 * arithmetic in lowest terms with a positive denominator; values built from
 * a raw numerator/denominator pair must go through make_rat().
 */

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqtri/errors.hpp"

namespace eqtri {

using BigInt = mpz_class;
using BigRat = mpq_class;

// ---------------------------------------------------------------------------
// Rational helpers
// ---------------------------------------------------------------------------

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("zero denominator");
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const BigRat& q) { return q.get_den() == 1; }

inline std::string to_string(const BigInt& n) { return n.get_str(); }

/// "num/den", or just "num" for integers.
inline std::string to_string(const BigRat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline BigInt parse_int(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty integer");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size() ||
      !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(),
                   [](char c) { return c >= '0' && c <= '9'; }))
    throw std::invalid_argument("not an integer: '" + s + "'");
  if (s[0] == '+') s.erase(0, 1);
  return BigInt(s, 10);
}

/// Parses "p/q" or "p" (optional sign on p only).
inline BigRat parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return BigRat(parse_int(text));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den < 0 || text[slash + 1] == '-' || text[slash + 1] == '+')
    throw std::invalid_argument("denominator must be unsigned: '" + std::string(text) + "'");
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  return make_rat(parse_int(text.substr(0, slash)), den);
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline BigInt pow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigRat pow(const BigRat& base, unsigned long e) {
  return make_rat(pow(BigInt(base.get_num()), e), pow(BigInt(base.get_den()), e));
}

/// p-adic valuation of a nonzero integer; p > 1.
inline unsigned valuation(const BigInt& n, const BigInt& p) {
  if (n == 0) throw DomainError("valuation of zero");
  BigInt rest;
  return static_cast<unsigned>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

/// Exact square root of a rational when it is a square, else nullopt.
inline std::optional<BigRat> rational_sqrt(const BigRat& q) {
  if (q < 0) return std::nullopt;
  const BigInt& num = q.get_num();
  const BigInt& den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  BigInt rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return make_rat(rn, rd);
}

// ---------------------------------------------------------------------------
// Primes
// ---------------------------------------------------------------------------

/// All primes p <= limit in ascending order (empty when limit < 2).
inline std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

namespace detail {

inline constexpr std::uint64_t kTrialLimit = 1'000'000;

inline const std::vector<std::uint64_t>& trial_primes() {
  static const std::vector<std::uint64_t> primes = sieve_primes(kTrialLimit);
  return primes;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Strong probable-prime test to base a for odd n > 3 (64-bit).
inline bool strong_probable_prime(std::uint64_t n, std::uint64_t a) {
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  std::uint64_t x = powmod(a % n, d, n);
  if (x == 1 || x == n - 1 || a % n == 0) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline bool strong_probable_prime(const BigInt& n, const BigInt& a) {
  BigInt d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  d >>= s;
  BigInt x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  BigInt nm1 = n - 1;
  if (x == 1 || x == nm1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == nm1) return true;
  }
  return false;
}

}  // namespace detail

/**
 * Miller-Rabin. Deterministic below 2^64 (bases = first twelve primes);
 * above that, base 2 plus 40 bases drawn from a fixed-seed generator so the
 * answer is reproducible run to run.
 */
inline bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (auto p : kSmall) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    std::uint64_t m = 0;
    mpz_export(&m, nullptr, -1, sizeof(m), 0, 0, n.get_mpz_t());
    for (auto a : kSmall)
      if (!detail::strong_probable_prime(m, a)) return false;
    return true;
  }
  if (!detail::strong_probable_prime(n, BigInt(2))) return false;
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(0x5eed5eedUL);
  BigInt span = n - 3;
  for (int round = 0; round < 40; ++round) {
    BigInt a = rng.get_z_range(span) + 2;
    if (!detail::strong_probable_prime(n, a)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Factorization
// ---------------------------------------------------------------------------

struct Factorization {
  std::map<BigInt, unsigned> factors;  // prime -> exponent
  BigInt cofactor = 1;                 // unsplit composite part (1 when complete)
  bool complete = true;

  BigInt reassemble() const {
    BigInt r = cofactor;
    for (const auto& [p, e] : factors) r *= pow(p, e);
    return r;
  }
};

inline constexpr std::uint64_t kDefaultFactorBudget = 2'000'000;

namespace detail {

// One Pollard-Brent attempt with polynomial x^2 + c. Returns a proper
// divisor, n itself on cycle collapse, or 0 when the budget runs out.
inline BigInt brent_attempt(const BigInt& n, unsigned long c, std::uint64_t& budget) {
  constexpr std::uint64_t kBlock = 128;
  BigInt y = 2, x, ys, q = 1, g = 1;
  auto f = [&](const BigInt& v) {
    BigInt w = v * v + c;
    mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
    return w;
  };
  std::uint64_t r = 1;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    if (budget < r) return 0;
    budget -= r;
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      std::uint64_t steps = std::min(kBlock, r - k);
      if (budget < steps) return 0;
      budget -= steps;
      for (std::uint64_t i = 0; i < steps; ++i) {
        y = f(y);
        BigInt diff = abs(x - y);
        q = q * diff % n;
      }
      g = gcd(q, n);
      k += kBlock;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd(abs(x - ys), n);
    } while (g == 1);
  }
  return g;
}

// Returns k and root when n = root^k with k >= 2 maximal-ish (smallest root found).
inline std::optional<std::pair<BigInt, unsigned>> perfect_power(const BigInt& n) {
  if (!mpz_perfect_power_p(n.get_mpz_t())) return std::nullopt;
  auto bits = static_cast<unsigned>(mpz_sizeinbase(n.get_mpz_t(), 2));
  for (unsigned k = bits; k >= 2; --k) {
    BigInt root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0 && root > 1)
      return std::make_pair(root, k);
  }
  return std::nullopt;
}

}  // namespace detail

/**
 * Factors |n| by trial division with primes up to 10^6, then Pollard rho
 * with Brent cycle detection. `budget` caps the total number of rho
 * iterations; when it runs out the unsplit composite part is returned as
 * the cofactor and `complete` is false.
 */
inline Factorization factor(const BigInt& n, std::uint64_t budget = kDefaultFactorBudget) {
  if (n == 0) throw DomainError("cannot factor zero");
  Factorization out;
  BigInt m = abs(n);
  for (auto p : detail::trial_primes()) {
    if (BigInt(p) * p > m) break;
    if (!mpz_divisible_ui_p(m.get_mpz_t(), p)) continue;
    unsigned e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
      ++e;
    }
    out.factors[BigInt(p)] += e;
  }
  if (m == 1) return out;

  std::vector<std::pair<BigInt, unsigned>> work{{m, 1}};
  std::vector<std::pair<BigInt, unsigned>> stuck;
  while (!work.empty()) {
    auto [c, mult] = work.back();
    work.pop_back();
    if (c == 1) continue;
    if (is_probable_prime(c)) {
      out.factors[c] += mult;
      continue;
    }
    if (auto pp = detail::perfect_power(c)) {
      work.emplace_back(pp->first, mult * pp->second);
      continue;
    }
    BigInt d = 0;
    for (unsigned long poly = 1; poly < 64 && d == 0; ++poly) {
      d = detail::brent_attempt(c, poly, budget);
      if (d == c) d = 0;
      if (budget == 0) break;
    }
    if (d == 0) {
      stuck.emplace_back(c, mult);
      continue;
    }
    BigInt other = c / d;
    BigInt g = gcd(d, other);
    if (g == 1) {
      work.emplace_back(d, mult);
      work.emplace_back(other, mult);
    } else {
      // d and c/d share factors: split off the common part to avoid
      // double-counting multiplicities.
      work.emplace_back(g, mult * 2);
      work.emplace_back(d / g, mult);
      work.emplace_back(other / g, mult);
    }
  }
  for (const auto& [c, mult] : stuck) {
    out.cofactor *= pow(c, mult);
    out.complete = false;
  }
  return out;
}

}  // namespace eqtri
