#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hecke/gaussian.hpp"

using namespace hecke;

namespace {

GaussInt random_gauss(std::mt19937_64& rng, i64 radius) {
  std::uniform_int_distribution<i64> dist(-radius, radius);
  return {dist(rng), dist(rng)};
}

GaussInt random_odd(std::mt19937_64& rng, i64 radius) {
  for (;;) {
    GaussInt z = random_gauss(rng, radius);
    if (is_odd(z)) return z;
  }
}

// Oracle for primary: (z - 1) divisible by (1+i)^3.
bool primary_by_divisibility(const GaussInt& z) {
  return divides(pow(kOnePlusI, 3), z - GaussInt{1});
}

bool associates(const GaussInt& a, const GaussInt& b) {
  return std::any_of(std::begin(kUnits), std::end(kUnits), [&](const GaussInt& u) { return u * a == b; });
}

}  // namespace

TEST(GaussInt, Norm) {
  EXPECT_EQ(norm(GaussInt{0}), 0);
  EXPECT_EQ(norm(GaussInt{3, 2}), 13);
  EXPECT_EQ(norm(pow(kOnePlusI, 5)), 32);
}

TEST(GaussInt, NormIsMultiplicative) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const GaussInt z = random_gauss(rng, 3000);
    const GaussInt w = random_gauss(rng, 3000);
    EXPECT_EQ(norm(z * w), norm(z) * norm(w));
    for (const GaussInt& u : kUnits) EXPECT_EQ(norm(u * z), norm(z));
  }
}

TEST(GaussInt, CheckedOverflowThrows) {
  const GaussInt big{i64{1} << 62, 0};
  EXPECT_THROW((void)(big * big), std::overflow_error);
  EXPECT_THROW((void)norm(big), std::overflow_error);
}

TEST(EuclidDivmod, Examples) {
  const auto [q1, r1] = euclid_divmod(GaussInt{5}, kOnePlusI);
  EXPECT_EQ(q1 * kOnePlusI + r1, GaussInt{5});
  EXPECT_LE(norm(r1), 1);

  GaussInt z{17, -4};
  const auto [q2, r2] = euclid_divmod(z, GaussInt{1});
  EXPECT_EQ(q2, z);
  EXPECT_EQ(r2, GaussInt{0});

  const auto [q3, r3] = euclid_divmod(GaussInt{7, 2}, GaussInt{3});
  EXPECT_EQ(q3, (GaussInt{2, 1}));
  EXPECT_EQ(r3, (GaussInt{1, -1}));
  EXPECT_EQ(norm(r3), 2);
}

TEST(EuclidDivmod, RemainderBoundProperty) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const GaussInt a = random_gauss(rng, 100000);
    GaussInt b = random_gauss(rng, 500);
    if (b.is_zero()) b = GaussInt{1};
    const auto [q, r] = euclid_divmod(a, b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LE(2 * norm(r), norm(b));
  }
  EXPECT_THROW(euclid_divmod(GaussInt{1}, GaussInt{0}), std::domain_error);
}

TEST(Primary, Examples) {
  EXPECT_EQ(primary_associate(GaussInt{1}), GaussInt{1});
  EXPECT_EQ(primary_associate(GaussInt{1, 2}), (GaussInt{-1, -2}));
  EXPECT_EQ(primary_associate(GaussInt{3}), GaussInt{-3});
  EXPECT_THROW(primary_associate(GaussInt{2}), std::domain_error);
  EXPECT_THROW(primary_associate(GaussInt{0}), std::domain_error);
}

TEST(Primary, RuleMatchesDivisibilityOracle) {
  for (i64 a = -30; a <= 30; ++a) {
    for (i64 b = -30; b <= 30; ++b) {
      const GaussInt z{a, b};
      EXPECT_EQ(is_primary(z), primary_by_divisibility(z)) << z;
    }
  }
}

TEST(Primary, ProductOfPrimariesIsPrimary) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const GaussInt z = primary_associate(random_odd(rng, 1000));
    const GaussInt w = primary_associate(random_odd(rng, 1000));
    EXPECT_TRUE(is_primary(z * w));
    EXPECT_EQ(primary_associate(z * w), z * w);
  }
}

TEST(Canonical, Examples) {
  EXPECT_EQ(canonical_generator(GaussInt{2}).value, (GaussInt{0, 2}));
  EXPECT_EQ(canonical_generator(GaussInt{2}).dyadic_exponent(), 2);
  EXPECT_EQ(canonical_generator(GaussInt{-3}).value, GaussInt{-3});
  EXPECT_EQ(canonical_generator(kI * GaussInt{1, 2}).value, (GaussInt{-1, -2}));
  EXPECT_THROW(canonical_generator(GaussInt{0}), std::domain_error);
}

TEST(Canonical, IdempotentAndAssociated) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 1000; ++i) {
    GaussInt z = random_gauss(rng, 5000);
    if (z.is_zero()) continue;
    const GaussInt c = canonical_generator(z).value;
    EXPECT_TRUE(associates(z, c)) << z;
    EXPECT_EQ(canonical_generator(c).value, c);
    int canonical_count = 0;
    for (const GaussInt& u : kUnits) canonical_count += is_canonical(u * z) ? 1 : 0;
    EXPECT_EQ(canonical_count, 1) << z;
  }
}

TEST(Gcd, Examples) {
  const GaussInt z{6, -9};
  EXPECT_EQ(gcd(z, GaussInt{0}).value, canonical_generator(z).value);
  EXPECT_EQ(gcd(GaussInt{5}, GaussInt{-1, 2}).value, (GaussInt{-1, 2}));
  EXPECT_EQ(gcd(GaussInt{3}, GaussInt{7}).value, GaussInt{1});
  EXPECT_THROW(gcd(GaussInt{0}, GaussInt{0}), std::domain_error);
}

TEST(Gcd, DividesBothAndIsMaximal) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const GaussInt common = random_gauss(rng, 20);
    if (common.is_zero()) continue;
    const GaussInt a = common * random_gauss(rng, 50);
    const GaussInt b = common * random_gauss(rng, 50);
    if (a.is_zero() && b.is_zero()) continue;
    const GaussInt g = gcd(a, b).value;
    EXPECT_TRUE(divides(g, a));
    EXPECT_TRUE(divides(g, b));
    EXPECT_TRUE(divides(common, g));
    EXPECT_TRUE(is_canonical(g));
  }
}

TEST(Factor, Examples) {
  const Factorization f5 = factor(GaussInt{5});
  EXPECT_EQ(f5.unit, GaussInt{1});
  EXPECT_EQ(f5.dyadic_exponent, 0);
  ASSERT_EQ(f5.odd_factors.size(), 2U);
  std::set<GaussInt> primes5{f5.odd_factors[0].prime, f5.odd_factors[1].prime};
  EXPECT_EQ(primes5, (std::set<GaussInt>{{-1, 2}, {-1, -2}}));
  EXPECT_EQ(f5.reassemble(), GaussInt{5});

  const Factorization f2 = factor(GaussInt{2});
  EXPECT_EQ(f2.unit, (GaussInt{0, -1}));
  EXPECT_EQ(f2.dyadic_exponent, 2);
  EXPECT_TRUE(f2.odd_factors.empty());

  const Factorization f3 = factor(GaussInt{-3});
  EXPECT_EQ(f3.unit, GaussInt{1});
  ASSERT_EQ(f3.odd_factors.size(), 1U);
  EXPECT_EQ(f3.odd_factors[0], (PrimePower{GaussInt{-3}, 1}));
}

TEST(Factor, ReassemblesWithPrimaryNonAssociatePrimes) {
  std::mt19937_64 rng(6);
  const PrimeSieve sieve(2'000'000);
  for (int i = 0; i < 2000; ++i) {
    const GaussInt z = random_gauss(rng, 1000);
    if (z.is_zero()) continue;
    const Factorization f = factor(z, &sieve);
    EXPECT_EQ(f.reassemble(), z);
    EXPECT_TRUE(is_unit(f.unit));
    for (std::size_t a = 0; a < f.odd_factors.size(); ++a) {
      const GaussInt p = f.odd_factors[a].prime;
      EXPECT_TRUE(is_primary(p));
      const i64 np = norm(p);
      const bool rational_inert = p.im == 0 && (-p.re) % 4 == 3 && is_prime(static_cast<u64>(-p.re));
      EXPECT_TRUE(is_prime(static_cast<u64>(np)) || rational_inert) << p;
      for (std::size_t b = a + 1; b < f.odd_factors.size(); ++b)
        EXPECT_FALSE(associates(p, f.odd_factors[b].prime));
    }
    // Agreement with trial-division factoring of the norm.
    EXPECT_EQ(factor(z).odd_factors, f.odd_factors);
  }
}

TEST(Factor, LargeNormUsesMillerRabinFallback) {
  // 1000003 = 3 mod 4 is inert; 1000033 = 1 mod 4 splits.
  const GaussInt split = GaussInt{-3} * detail::split_prime_over(1000033);
  const Factorization f = factor(split);
  EXPECT_EQ(f.reassemble(), split);
  EXPECT_EQ(f.odd_factors.size(), 2U);

  const Factorization g = factor(GaussInt{0, 1000003});
  EXPECT_EQ(g.unit, (GaussInt{0, -1}));
  ASSERT_EQ(g.odd_factors.size(), 1U);
  EXPECT_EQ(g.odd_factors[0], (PrimePower{GaussInt{-1000003}, 1}));

  const GaussInt too_big = GaussInt{-1000003} * detail::split_prime_over(1000033);
  EXPECT_THROW(factor(too_big), std::domain_error);
}

TEST(Invariants, Examples) {
  const auto one = multiplicative_invariants(GaussInt{1});
  EXPECT_EQ(one.mu, 1);
  EXPECT_EQ(one.phi, 1);
  EXPECT_TRUE(one.is_squarefree);

  const auto m3 = multiplicative_invariants(GaussInt{-3});
  EXPECT_EQ(m3.mu, -1);
  EXPECT_EQ(m3.phi, 8);
  EXPECT_TRUE(m3.is_squarefree);

  const auto five = multiplicative_invariants(GaussInt{5});
  EXPECT_EQ(five.mu, 1);
  EXPECT_EQ(five.phi, 16);
  EXPECT_TRUE(five.is_squarefree);

  const auto sq = multiplicative_invariants(GaussInt{3, 4});  // (2+i)^2
  EXPECT_EQ(sq.mu, 0);
  EXPECT_EQ(sq.phi, 20);
  EXPECT_FALSE(sq.is_squarefree);
}

TEST(Invariants, MultiplicativeOnCoprimePairs) {
  std::mt19937_64 rng(7);
  int tested = 0;
  while (tested < 500) {
    const GaussInt z = random_odd(rng, 300);
    const GaussInt w = random_odd(rng, 300);
    if (!is_unit(gcd(z, w).value)) continue;
    const auto a = multiplicative_invariants(z);
    const auto b = multiplicative_invariants(w);
    const auto ab = multiplicative_invariants(z * w);
    EXPECT_EQ(ab.mu, a.mu * b.mu);
    EXPECT_EQ(ab.phi, a.phi * b.phi);
    EXPECT_EQ(ab.is_squarefree, a.is_squarefree && b.is_squarefree);
    ++tested;
  }
}

TEST(Invariants, PhiCountsReducedResidues) {
  for (const GaussInt n : {GaussInt{-3}, GaussInt{-1, 2}, GaussInt{5}, GaussInt{3, 4}, GaussInt{-7}, GaussInt{9}}) {
    i64 units = 0;
    for (const GaussInt& x : residue_system(n)) units += is_unit(gcd(x, n).value) ? 1 : 0;
    EXPECT_EQ(units, multiplicative_invariants(n).phi) << n;
  }
}

TEST(Enumerate, SmallCases) {
  EXPECT_EQ(enumerate_odd_squarefree(4, EnumerationMode::primary), std::vector<GaussInt>{GaussInt{1}});

  const auto primary = enumerate_odd_squarefree(25, EnumerationMode::primary);
  std::vector<i64> norms;
  for (const auto& z : primary) norms.push_back(norm(z));
  EXPECT_EQ(norms, (std::vector<i64>{1, 5, 5, 9, 13, 13, 17, 17, 25}));

  EXPECT_EQ(enumerate_odd_squarefree(25, EnumerationMode::all_associates).size(), 36U);
  EXPECT_THROW(enumerate_odd_squarefree(0, EnumerationMode::primary), std::invalid_argument);
}

TEST(Enumerate, MatchesBruteForceFactorOracle) {
  const i64 x = 3000;
  std::vector<GaussInt> oracle;
  for (i64 a = -60; a <= 60; ++a) {
    for (i64 b = -60; b <= 60; ++b) {
      const GaussInt z{a, b};
      if (z.is_zero() || !is_odd(z) || norm(z) > x) continue;
      if (factor(z).odd_squarefree()) oracle.push_back(z);
    }
  }
  std::sort(oracle.begin(), oracle.end(), detail::norm_order);
  EXPECT_EQ(enumerate_odd_squarefree(x, EnumerationMode::all_associates), oracle);

  const auto primary = enumerate_odd_squarefree(x, EnumerationMode::primary);
  EXPECT_EQ(primary.size() * 4, oracle.size());
  EXPECT_TRUE(std::all_of(primary.begin(), primary.end(), [](const GaussInt& z) { return is_primary(z); }));
  EXPECT_TRUE(std::is_sorted(primary.begin(), primary.end(), detail::norm_order));
}

TEST(ResidueSystem, Examples) {
  EXPECT_EQ(residue_system(GaussInt{1}), std::vector<GaussInt>{GaussInt{0}});
  EXPECT_EQ(residue_system(GaussInt{-1, 2}).size(), 5U);
  const auto three = residue_system(GaussInt{3});
  ASSERT_EQ(three.size(), 9U);
  for (std::size_t a = 0; a < three.size(); ++a)
    for (std::size_t b = a + 1; b < three.size(); ++b) EXPECT_FALSE(divides(GaussInt{3}, three[a] - three[b]));
}

TEST(ResidueSystem, CardinalityAndIncongruence) {
  for (i64 a = -23; a <= 23; ++a) {
    for (i64 b = -23; b <= 23; ++b) {
      const GaussInt n{a, b};
      if (n.is_zero() || !is_odd(n) || norm(n) > 500) continue;
      const auto reps = residue_system(n);
      ASSERT_EQ(static_cast<i64>(reps.size()), norm(n)) << n;
      if (!is_primary(n)) continue;
      for (std::size_t x = 0; x < reps.size(); ++x) {
        EXPECT_LE(2 * norm(reps[x]), norm(n));
        for (std::size_t y = x + 1; y < reps.size(); ++y) ASSERT_FALSE(divides(n, reps[x] - reps[y])) << n;
      }
    }
  }
}
