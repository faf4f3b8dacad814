#include <gtest/gtest.h>

#include <random>

#include "eqtri/arith.hpp"
#include "oracles.hpp"

using namespace eqtri;

TEST(Rational, CanonicalForm) {
  BigRat q = make_rat(6, -4);
  EXPECT_EQ(q.get_num(), -3);
  EXPECT_EQ(q.get_den(), 2);
  EXPECT_EQ(to_string(q), "-3/2");
  EXPECT_EQ(to_string(BigRat(5)), "5");
  EXPECT_THROW(make_rat(1, 0), std::exception);
}

TEST(Rational, ParseRoundTrip) {
  for (const char* s : {"0", "-7", "7/11", "-23/2", "140991510784"}) EXPECT_EQ(to_string(parse_rational(s)), s);
  EXPECT_EQ(parse_rational("4/6"), make_rat(2, 3));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(Rational, Sqrt) {
  EXPECT_EQ(*rational_sqrt(make_rat(9, 4)), make_rat(3, 2));
  EXPECT_FALSE(rational_sqrt(make_rat(2, 1)));
  EXPECT_FALSE(rational_sqrt(make_rat(-4, 1)));
  EXPECT_EQ(*rational_sqrt(BigRat(0)), 0);
}

TEST(Valuation, Basics) {
  EXPECT_EQ(valuation(BigInt(1920), BigInt(2)), 7u);
  EXPECT_EQ(valuation(BigInt(-1920), BigInt(3)), 1u);
  EXPECT_EQ(valuation(BigInt(7), BigInt(2)), 0u);
  EXPECT_THROW(valuation(BigInt(0), BigInt(2)), std::exception);
}

TEST(Sieve, SpecExamples) {
  EXPECT_EQ(sieve_primes(10), (std::vector<std::uint64_t>{2, 3, 5, 7}));
  EXPECT_EQ(sieve_primes(2), (std::vector<std::uint64_t>{2}));
  EXPECT_TRUE(sieve_primes(1).empty());
  EXPECT_TRUE(sieve_primes(0).empty());
}

TEST(Sieve, MatchesTrialDivisionTo10k) {
  auto primes = sieve_primes(10'000);
  EXPECT_EQ(primes.size(), 1229u);
  std::vector<std::uint64_t> expected;
  for (std::uint64_t n = 2; n <= 10'000; ++n)
    if (oracle::is_prime(n)) expected.push_back(n);
  EXPECT_EQ(primes, expected);
}

TEST(Primality, SpecExamples) {
  EXPECT_FALSE(is_probable_prime(BigInt(1)));
  EXPECT_FALSE(is_probable_prime(BigInt(0)));
  EXPECT_FALSE(is_probable_prime(BigInt(-7)));
  EXPECT_FALSE(is_probable_prime(BigInt(4907)));  // 7 * 701
  EXPECT_EQ(is_probable_prime(BigInt(4907)), oracle::is_prime(4907));
  EXPECT_TRUE(is_probable_prime(BigInt(701)));
  EXPECT_FALSE(is_probable_prime(BigInt(1628394768)));
}

TEST(Primality, AgreesWithSieve) {
  auto primes = sieve_primes(20'000);
  std::size_t idx = 0;
  for (std::uint64_t n = 0; n <= 20'000; ++n) {
    bool expected = idx < primes.size() && primes[idx] == n;
    if (expected) ++idx;
    ASSERT_EQ(is_probable_prime(BigInt(n)), expected) << n;
  }
}

TEST(Primality, LargeKnownValues) {
  // Mersenne primes 2^61 - 1 and 2^127 - 1; 2^64 + 1 = 274177 * 67280421310721.
  EXPECT_TRUE(is_probable_prime(pow(BigInt(2), 61) - 1));
  EXPECT_TRUE(is_probable_prime(pow(BigInt(2), 127) - 1));
  EXPECT_FALSE(is_probable_prime(pow(BigInt(2), 64) + 1));
  // Strong pseudoprimes to the first few prime bases.
  EXPECT_FALSE(is_probable_prime(BigInt("3215031751")));
  EXPECT_FALSE(is_probable_prime(BigInt("3825123056546413051")));
}

TEST(Factor, SpecExamples) {
  auto f = factor(BigInt(1920));
  EXPECT_TRUE(f.complete);
  EXPECT_EQ(f.factors, (std::map<BigInt, unsigned>{{2, 7}, {3, 1}, {5, 1}}));

  auto g = factor(BigInt(47038464));
  EXPECT_TRUE(g.complete);
  std::map<BigInt, unsigned> expected;
  for (auto [p, k] : oracle::factor(47038464)) expected[BigInt(p)] = k;
  EXPECT_EQ(g.factors, expected);
  EXPECT_EQ(g.factors, (std::map<BigInt, unsigned>{{2, 14}, {3, 2}, {11, 1}, {29, 1}}));

  EXPECT_THROW(factor(BigInt(0)), std::exception);
}

TEST(Factor, BudgetExhaustion) {
  BigInt p, q;
  BigInt lo = pow(BigInt(10), 39);
  mpz_nextprime(p.get_mpz_t(), lo.get_mpz_t());
  lo *= 3;
  mpz_nextprime(q.get_mpz_t(), lo.get_mpz_t());
  auto f = factor(p * q, 10);
  EXPECT_FALSE(f.complete);
  EXPECT_EQ(f.cofactor, p * q);
  EXPECT_FALSE(is_probable_prime(f.cofactor));
  EXPECT_EQ(f.reassemble(), p * q);
}

TEST(Factor, RhoSplitsMediumSemiprime) {
  BigInt p("1000003"), q("998244353"), r("1000000007");
  auto f = factor(p * q * r * r * 12);
  EXPECT_TRUE(f.complete);
  EXPECT_EQ(f.factors[r], 2u);
  EXPECT_EQ(f.factors[q], 1u);
  EXPECT_EQ(f.factors[p], 1u);
  EXPECT_EQ(f.reassemble(), p * q * r * r * 12);
}

TEST(Factor, MatchesTrialDivisionOracle) {
  for (std::uint64_t n = 1; n <= 20'000; ++n) {
    auto f = factor(BigInt(n));
    ASSERT_TRUE(f.complete);
    std::map<BigInt, unsigned> expected;
    for (auto [p, k] : oracle::factor(n)) expected[BigInt(p)] = k;
    ASSERT_EQ(f.factors, expected) << n;
  }
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> dist(20'001, 1'000'000);
  for (int i = 0; i < 2000; ++i) {
    std::uint64_t n = dist(rng);
    std::map<BigInt, unsigned> expected;
    for (auto [p, k] : oracle::factor(n)) expected[BigInt(p)] = k;
    ASSERT_EQ(factor(BigInt(n)).factors, expected) << n;
  }
}

TEST(Factor, ReassemblesNegativeAndLarge) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    BigInt n = BigInt(static_cast<unsigned long>(rng() >> 1)) * BigInt(static_cast<unsigned long>(rng() >> 20));
    if (n == 0) continue;
    if (i % 2) n = -n;
    auto f = factor(n, 50'000);
    EXPECT_EQ(f.reassemble(), abs(n));
    for (const auto& [p, k] : f.factors) EXPECT_TRUE(is_probable_prime(p));
  }
}
