#include <gtest/gtest.h>

#include <random>

#include "majorant/polyarith.hpp"

using namespace majorant;

namespace {

IntPoly random_poly(std::mt19937_64& rng, int max_deg, long long bound) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<long long> coef(-bound, bound);
  std::vector<Int> c(static_cast<std::size_t>(deg(rng)) + 1);
  for (auto& v : c) v = coef(rng);
  if (c.back() == 0) c.back() = 1;
  return IntPoly(std::move(c));
}

IntPoly linear(long long a, long long b) { return IntPoly{b, a}; }

}  // namespace

TEST(IntPoly, Evaluate) {
  EXPECT_EQ(evaluate(IntPoly{1, 0, 1}, Int(2)), 5);
  EXPECT_EQ(evaluate(IntPoly{}, Int(7)), 0);
  EXPECT_EQ(evaluate(IntPoly{1, -3, 0, 1}, Int(10)), 971);
  EXPECT_EQ(IntPoly{}.degree(), -1);
  EXPECT_TRUE(IntPoly({0, 0, 0}).is_zero());
}

TEST(IntPoly, Norm) {
  EXPECT_EQ(norm(IntPoly::x()), 1);
  EXPECT_EQ(norm(IntPoly{1, -3, 1}), 5);
  EXPECT_EQ(norm(IntPoly{7, -5, 0, 2}), 14);
}

TEST(IntPoly, ParseAndPrint) {
  EXPECT_EQ(parse_poly("1,0,1"), (IntPoly{1, 0, 1}));
  EXPECT_EQ(parse_poly("x^2+1"), (IntPoly{1, 0, 1}));
  EXPECT_EQ(parse_poly("2*x^3 - 5x + 7"), (IntPoly{7, -5, 0, 2}));
  EXPECT_EQ(parse_poly("x"), IntPoly::x());
  EXPECT_EQ(parse_poly("-x+3"), (IntPoly{3, -1}));
  EXPECT_EQ(parse_poly("5"), (IntPoly{5}));
  EXPECT_THROW(parse_poly("x^^2"), std::invalid_argument);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    IntPoly p = random_poly(rng, 5, 20);
    ASSERT_EQ(parse_poly(to_string(p)), p) << to_string(p);
    ASSERT_EQ(parse_poly(to_coeff_list(p)), p) << to_coeff_list(p);
  }
}

TEST(Resultant, Examples) {
  IntPoly p{1, 0, 1};
  EXPECT_EQ(resultant(p, p), 0);
  for (long long l = -5; l <= 20; ++l) EXPECT_EQ(resultant(IntPoly::x(), linear(1, l)), l);
  EXPECT_EQ(resultant(IntPoly{1, 0, 1}, IntPoly{-1, 0, 1}), 4);
  EXPECT_EQ(resultant_sylvester(IntPoly{1, 0, 1}, IntPoly{-1, 0, 1}), 4);
  EXPECT_THROW(resultant(IntPoly{}, p), std::domain_error);
}

TEST(Resultant, SubresultantMatchesSylvester) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    IntPoly a = random_poly(rng, 6, 9), b = random_poly(rng, 6, 9);
    ASSERT_EQ(resultant(a, b), resultant_sylvester(a, b)) << a << " | " << b;
  }
}

TEST(Resultant, VanishesIffCommonFactor) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long long> small(-4, 4);
  auto factor_of = [&]() {
    IntPoly f = rng() % 2 ? linear(1 + static_cast<long long>(rng() % 3), small(rng))
                          : IntPoly{small(rng), small(rng), 1};
    return f;
  };
  for (int i = 0; i < 300; ++i) {
    IntPoly a = factor_of() * factor_of(), b = factor_of() * factor_of();
    if (rng() % 3 == 0) b = b * factor_of() * a;  // force a common factor
    const bool common = gcd(a, b).degree() > 0;
    ASSERT_EQ(resultant(a, b) == 0, common) << a << " | " << b;
  }
}

TEST(Discriminant, Examples) {
  EXPECT_EQ(discriminant(IntPoly{0, 6, 1}), 36);
  EXPECT_EQ(discriminant(linear(1, 7)), 1);
  EXPECT_EQ(discriminant(IntPoly{1, 0, 1}), -4);
  EXPECT_EQ(discriminant(IntPoly{1, -3, 0, 1}), 81);  // -4(-3)^3 - 27
  EXPECT_THROW(discriminant(IntPoly{5}), std::domain_error);
  for (long long l = 1; l <= 100; ++l) ASSERT_EQ(discriminant(IntPoly::x() * linear(1, l)), Int(l * l));
}

TEST(Discriminant, QuadraticFormula) {
  for (long long a = 1; a <= 6; ++a)
    for (long long b = -6; b <= 6; ++b)
      for (long long c = -6; c <= 6; ++c) ASSERT_EQ(discriminant(IntPoly{c, b, a}), Int(b * b - 4 * a * c));
}

TEST(Squarefree, Examples) {
  IntPoly x = IntPoly::x();
  EXPECT_EQ(squarefree_part(x * x * linear(1, 1)), x * linear(1, 1));
  EXPECT_EQ(squarefree_part(IntPoly{1, 0, 1}), (IntPoly{1, 0, 1}));
  EXPECT_EQ(squarefree_part(linear(1, 1).pow(3)), linear(1, 1));
  EXPECT_THROW(squarefree_part(IntPoly{2, 4}), std::domain_error);
}

TEST(Squarefree, IdempotentWithNonzeroDiscriminant) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    IntPoly q = random_poly(rng, 2, 5) * random_poly(rng, 2, 5);
    if (rng() % 2) {
      q = q * q;
    }
    if (q.degree() < 1) continue;
    q = primitive_part(q);
    IntPoly s = squarefree_part(q);
    ASSERT_EQ(squarefree_part(s), s);
    if (s.degree() >= 1) {
      ASSERT_NE(discriminant(s), 0) << q;
    }
  }
}

TEST(FixedPrimeDivisors, Examples) {
  IntPoly x = IntPoly::x();
  EXPECT_TRUE(fixed_prime_divisors(x).empty());
  EXPECT_EQ(fixed_prime_divisors(x * linear(1, 1)), std::vector<u64>{2});
  EXPECT_EQ(fixed_prime_divisors(IntPoly{2, 1, 1}), std::vector<u64>{2});
  EXPECT_EQ(fixed_prime_divisors(x * linear(1, 1) * linear(1, 2)), (std::vector<u64>{2, 3}));
}

TEST(FactoredSystemTest, Examples) {
  IntPoly x = IntPoly::x();
  auto s = FactoredSystem::identity({x, linear(1, 5)});
  EXPECT_EQ(s.disc_star(), 25);
  EXPECT_EQ(s.g(), 2);
  EXPECT_EQ(s.disc_star_primes(), std::vector<u64>{5});

  FactoredSystem sq({x}, {{2}});
  EXPECT_EQ(sq.q(), x * x);
  EXPECT_EQ(sq.q_star(), x);
  EXPECT_EQ(sq.disc_star(), 1);
  EXPECT_EQ(sq.disc(), 0);
  EXPECT_THROW(sq.disc_primes(), std::domain_error);

  try {
    FactoredSystem::identity({x, x});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("pairwise resultant zero"), std::string::npos);
  }
  try {
    FactoredSystem::identity({IntPoly{2, 2}});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Q not primitive"), std::string::npos);
  }
  try {
    FactoredSystem::identity({x * x});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("Q* not squarefree"), std::string::npos);
  }
  EXPECT_THROW(FactoredSystem({x, linear(1, 1)}, {{1, 0}}), std::invalid_argument);
}

TEST(FactoredSystemTest, NegativeLeadingNormalized) {
  auto s = FactoredSystem::identity({linear(-1, 3)});
  EXPECT_EQ(s.factor(0), linear(1, -3));
}

TEST(FactoredSystemTest, DiscriminantMultiplicativity) {
  std::vector<std::vector<IntPoly>> systems = {
      {IntPoly::x(), linear(1, 2)},
      {IntPoly::x(), linear(1, 1), linear(1, 3)},
      {IntPoly{1, 0, 1}, linear(1, 1), IntPoly{-2, 0, 1}},
      {IntPoly{1, 1, 1}, IntPoly{3, 0, 0, 1}, linear(2, 1)},
  };
  for (const auto& fs : systems) {
    auto s = FactoredSystem::identity(fs);
    for (std::size_t h = 0; h < s.r(); ++h)
      for (std::size_t i = h + 1; i < s.r(); ++i) {
        const Int res = resultant(s.factor(h), s.factor(i));
        ASSERT_EQ(discriminant(s.factor(h) * s.factor(i)),
                  res * res * discriminant(s.factor(h)) * discriminant(s.factor(i)));
      }
  }
}
