#pragma once

// Slow, obviously-correct reimplementations used as references in tests.
// None of these call into the code they check beyond the curve and point types.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "eqtri/curve.hpp"
#include "eqtri/triples.hpp"

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::map<std::uint64_t, unsigned> factor(std::uint64_t n) {
  std::map<std::uint64_t, unsigned> f;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      ++f[d];
      n /= d;
    }
  if (n > 1) ++f[n];
  return f;
}

inline std::uint64_t mod(const eqtri::BigRat& v, std::uint64_t p) {
  eqtri::BigInt r = v.get_num() % static_cast<unsigned long>(p);
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

/// a_p by counting every (x, y) in F_p^2.
inline std::int64_t ap(const eqtri::WeierstrassCurve& e, std::uint64_t p) {
  std::uint64_t a1 = mod(e.a1(), p), a2 = mod(e.a2(), p), a3 = mod(e.a3(), p), a4 = mod(e.a4(), p),
                a6 = mod(e.a6(), p);
  std::int64_t affine = 0;
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t rhs = (((x + a2) % p * x + a4) % p * x + a6) % p;
    for (std::uint64_t y = 0; y < p; ++y) {
      std::uint64_t lhs = (y * y + a1 * x % p * y + a3 * y) % p;
      if (lhs == rhs) ++affine;
    }
  }
  return static_cast<std::int64_t>(p) - affine;
}

/// S1 with primes found by trial division and a_p by enumeration.
inline double s1(const eqtri::WeierstrassCurve& e, std::uint64_t X) {
  double sum = 0;
  for (std::uint64_t p = 2; p <= X; ++p) {
    if (!is_prime(p)) continue;
    if (mod(e.discriminant(), p) == 0) continue;
    double a = static_cast<double>(ap(e, p));
    sum += (2.0 - a) / (static_cast<double>(p) + 1.0 - a) * std::log(static_cast<double>(p));
  }
  return sum;
}

/// Every a <= b <= c with a + b + c = M, grouped by product.
inline std::map<std::int64_t, std::vector<eqtri::Triple>> positive_triples(std::int64_t M) {
  std::map<std::int64_t, std::vector<eqtri::Triple>> out;
  for (std::int64_t a = 1; a <= M; ++a)
    for (std::int64_t b = a; b <= M; ++b) {
      std::int64_t c = M - a - b;
      if (c < b) continue;
      out[a * b * c].push_back({eqtri::BigInt(a), eqtri::BigInt(b), eqtri::BigInt(c)});
    }
  return out;
}

/// log max(|num x|, den x) of 2^n P, divided by 4^n.
inline double doubling_limit(const eqtri::WeierstrassCurve& e, const eqtri::CurvePoint& P, int n) {
  eqtri::CurvePoint Q = P;
  for (int i = 0; i < n; ++i) Q = eqtri::add(e, Q, Q);
  if (Q.is_infinity()) return 0.0;
  eqtri::BigInt num = abs(Q.x().get_num());
  const eqtri::BigInt& den = Q.x().get_den();
  const eqtri::BigInt& big = num > den ? num : den;
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, big.get_mpz_t());
  double h = std::log(mant) + static_cast<double>(exp) * std::log(2.0);
  return h / std::pow(4.0, n);
}

}  // namespace oracle
