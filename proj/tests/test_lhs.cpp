#include <gtest/gtest.h>

#include "majorant/lhs.hpp"

using namespace majorant;

namespace {

IntPoly linear(long long a, long long b) { return IntPoly{b, a}; }

Rational naive_short_sum(const FactoredSystem& sys, const MultiplicativeFunction& F, long long lo, long long hi,
                         bool primes_only = false) {
  Rational s(0);
  std::vector<u64> vals(sys.k());
  for (long long n = lo + 1; n <= hi; ++n) {
    if (primes_only && (n < 2 || !is_prime(static_cast<u64>(n)))) continue;
    for (std::size_t j = 0; j < sys.k(); ++j)
      vals[j] = abs(evaluate(sys.components()[j], Int(n))).convert_to<u64>();
    s += eval(F, vals);
  }
  return s;
}

}  // namespace

TEST(Interval, FloorConvention) {
  auto iv = IntegerInterval::of(Rational(21, 2), Rational(3));  // (10.5, 13.5] -> 11..13
  EXPECT_EQ(iv.first, 11);
  EXPECT_EQ(iv.count, 3u);
  iv = IntegerInterval::of(Rational(10), Rational(1, 2));
  EXPECT_EQ(iv.count, 0u);
}

TEST(FactorTable, IdentitySystem) {
  auto sys = FactoredSystem::identity({linear(1, 0)});
  auto t = factor_values_in_interval(sys, Rational(10), Rational(5));
  ASSERT_EQ(t.size(), 5u);
  for (u64 i = 0; i < t.size(); ++i) {
    Factorization f = factor(static_cast<u64>(t.n_at(i)));
    auto row = t.factors(i, 0);
    ASSERT_EQ(row.size(), f.size());
    for (std::size_t m = 0; m < row.size(); ++m) {
      EXPECT_EQ(row[m].p, f.terms()[m].p);
      EXPECT_EQ(row[m].e, f.terms()[m].e);
    }
  }
}

TEST(FactorTable, QuadraticRowSeven) {
  auto sys = FactoredSystem::identity({IntPoly{1, 0, 1}});
  auto t = factor_values_in_interval(sys, Rational(6), Rational(1));
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t.value(0, 0), 50u);
  auto row = t.factors(0, 0);
  ASSERT_EQ(row.size(), 2u);
  EXPECT_EQ(row[0].p, 2u);
  EXPECT_EQ(row[0].e, 1u);
  EXPECT_EQ(row[1].p, 5u);
  EXPECT_EQ(row[1].e, 2u);
}

TEST(FactorTable, MatchesNaiveFactorization) {
  // small z forces the cofactor path
  for (u64 z : {u64(2), u64(30), u64(10000)}) {
    auto sys = build_factored_system({IntPoly{1, 0, 1}, linear(1, 7), IntPoly{2, 3, 0, 1}}, {{1, 0, 0}, {0, 2, 1}});
    auto t = factor_values_in_interval(sys, Rational(1000), Rational(100), z);
    for (u64 i = 0; i < t.size(); ++i)
      for (std::size_t j = 0; j < sys.k(); ++j) {
        const Int v = abs(evaluate(sys.components()[j], Int(t.n_at(i))));
        Int prod(1);
        for (const auto& pp : t.factors(i, j)) prod *= ipow(pp.p, pp.e);
        ASSERT_EQ(prod, v) << "n=" << t.n_at(i) << " j=" << j << " z=" << z;
        Factorization f = factor(v.convert_to<u64>());
        auto row = t.factors(i, j);
        std::vector<PrimePower> sorted(row.begin(), row.end());
        std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.p < b.p; });
        ASSERT_EQ(sorted.size(), f.size());
        for (std::size_t m = 0; m < sorted.size(); ++m) ASSERT_EQ(sorted[m].p, f.terms()[m].p);
      }
  }
}

TEST(FactorTable, NonPrimitiveComponent) {
  // 2X + 2 vanishes identically mod 2
  auto t = factor_values_in_interval(std::vector<IntPoly>{IntPoly{2, 2}}, Rational(0), Rational(40), u64(50));
  for (u64 i = 0; i < t.size(); ++i) {
    Int prod(1);
    for (const auto& pp : t.factors(i, 0)) prod *= ipow(pp.p, pp.e);
    ASSERT_EQ(prod, Int(2 * (t.n_at(i) + 1)));
  }
}

TEST(FactorTable, ZeroFlagged) {
  auto t = factor_values_in_interval(std::vector<IntPoly>{linear(1, -3)}, Rational(0), Rational(5));
  EXPECT_TRUE(t.is_zero(2, 0));
  EXPECT_FALSE(t.is_zero(1, 0));
}

TEST(ShortSum, Examples) {
  auto x = FactoredSystem::identity({linear(1, 0)});
  EXPECT_EQ(short_sum(x, tau_function(1), Rational(0), Rational(10)), Rational(27));
  auto pair = FactoredSystem::identity({linear(1, 0), linear(1, 2)});
  // 2 + 6 + 4 + 12 + 4
  EXPECT_EQ(short_sum(pair, tau_function(2), Rational(0), Rational(5)), Rational(28));
  auto q = FactoredSystem::identity({IntPoly{1, 0, 1}});
  EXPECT_EQ(short_sum(q, one_function(1), Rational(7, 3), Rational(101, 4)), Rational(27 - 2));
}

TEST(ShortSum, ZeroValueNamesN) {
  auto sys = FactoredSystem::identity({linear(1, -3)});
  try {
    short_sum(sys, tau_function(1), Rational(0), Rational(5));
    FAIL();
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("n = 3"), std::string::npos);
  }
}

TEST(ShortSum, AgreesWithNaive) {
  auto sys = build_factored_system({linear(1, 0), linear(1, 6), IntPoly{1, 0, 1}}, {{1, 0, 0}, {0, 1, 1}});
  for (const char* fn : {"tau", "tau_m:3", "random:11"}) {
    auto F = make_builtin(fn, sys.k());
    EXPECT_EQ(short_sum(sys, F, Rational(500), Rational(300)), naive_short_sum(sys, F, 500, 800)) << fn;
  }
  auto shifted = FactoredSystem::identity({linear(1, 0), linear(1, 2)});
  EXPECT_EQ(short_sum(shifted, tau_function(2), Rational(0), Rational(10000)),
            naive_short_sum(shifted, tau_function(2), 0, 10000));
}

TEST(ShortSum, PushforwardIdentity) {
  auto sys = build_factored_system({linear(1, 1), linear(1, 4), IntPoly{1, 0, 1}}, {{2, 0, 1}, {0, 1, 1}});
  for (const char* fn : {"tau", "random:5"}) {
    auto F = make_builtin(fn, sys.k());
    auto pf = pushforward(F, sys);
    auto over_r = FactoredSystem::identity(sys.factors());
    EXPECT_EQ(short_sum(sys, F, Rational(100), Rational(400)), short_sum(over_r, pf.function(), Rational(100), Rational(400)))
        << fn;
  }
}

TEST(PrimeSum, Examples) {
  auto sys = FactoredSystem::identity({linear(1, 1)});
  EXPECT_EQ(prime_sum(sys, tau_function(1), Rational(0), Rational(10)), Rational(13));
  EXPECT_EQ(prime_sum(sys, one_function(1), Rational(100), Rational(900)), Rational(168 - 25));
  EXPECT_EQ(prime_sum(sys, one_function(1), Rational(24), Rational(4)), Rational(0));
  auto bad = FactoredSystem::identity({linear(1, 0)});
  EXPECT_THROW(prime_sum(bad, one_function(1), Rational(0), Rational(10)), std::domain_error);
  auto pair = FactoredSystem::identity({linear(1, 1), linear(1, 3)});
  EXPECT_EQ(prime_sum(pair, tau_function(2), Rational(1000), Rational(2000)),
            naive_short_sum(pair, tau_function(2), 1000, 3000, true));
}

TEST(SieveCount, Examples) {
  auto x = FactoredSystem::identity({linear(1, 0)});
  std::vector<u64> a{2};
  EXPECT_EQ(sieve_count(x, a, 3, Rational(0), Rational(20)), 3u);
  std::vector<u64> one{1};
  EXPECT_EQ(sieve_count(x, one, 1, Rational(0), Rational(20)), 20u);
  // X^2+1 is never divisible by 3
  auto q = FactoredSystem::identity({IntPoly{1, 0, 1}});
  std::vector<u64> three{3};
  EXPECT_EQ(sieve_count(q, three, 10, Rational(0), Rational(1000)), 0u);
}

TEST(SieveCount, XiWidensAdmissiblePrimes) {
  auto x = FactoredSystem::identity({linear(1, 0)});
  std::vector<u64> a{2}, xi{3};
  // 2, 6, 10, 14, 18 -> all qualify once 3 is admitted
  EXPECT_EQ(sieve_count(x, a, 3, Rational(0), Rational(20), xi), 5u);
}

TEST(SieveRhs, Formula) {
  auto sys = FactoredSystem::identity({linear(1, 0)});
  SystemData d(sys, 100);
  std::vector<u64> a{2};
  // rho-hat(2) = 1 of lcm(2*2) = 4; product over 1 < p <= 3, p != 2: (1 - 1/3)
  auto v = sieve_rhs(d, a, 3, Rational(20), Mode::exact);
  ASSERT_TRUE(v.exact);
  EXPECT_EQ(*v.exact, Rational(20) * Rational(1, 4) * Rational(2, 3));
  auto q = FactoredSystem::identity({IntPoly{1, 0, 1}});
  SystemData dq(q, 100);
  std::vector<u64> one{1};
  EXPECT_EQ(*sieve_rhs(dq, one, 2, Rational(77), Mode::exact).exact, Rational(77));
}
