#include <gtest/gtest.h>

#include <random>

#include "majorant/rootcount.hpp"

using namespace majorant;

namespace {

IntPoly linear(long long a, long long b) { return IntPoly{b, a}; }

IntPoly random_primitive(std::mt19937_64& rng, int max_deg, long long bound) {
  std::uniform_int_distribution<int> deg(1, max_deg);
  std::uniform_int_distribution<long long> coef(-bound, bound);
  while (true) {
    std::vector<Int> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& v : c) v = coef(rng);
    if (c.back() == 0) continue;
    IntPoly p(std::move(c));
    if (is_primitive(p)) return p;
  }
}

}  // namespace

TEST(RootsModP, MatchesScanForLargePrimes) {
  std::mt19937_64 rng(1);
  for (u64 p : {67ull, 101ull, 1009ull, 10007ull, 1000003ull}) {
    for (int i = 0; i < 20; ++i) {
      IntPoly q = random_primitive(rng, 5, 1000);
      if (q.coeffs().back() % p == 0 && !primitive_at(q, p)) continue;
      auto red = reduce_coeffs(q, p);
      std::vector<u64> scan;
      if (p <= 10007)
        for (u64 n = 0; n < p; ++n)
          if (evaluate_mod(red, n, p) == 0) scan.push_back(n);
      auto fast = roots_mod_p(q, p);
      for (u64 r : fast) ASSERT_EQ(evaluate_mod(red, r, p), 0u);
      if (p <= 10007) {
        ASSERT_EQ(fast, scan) << q << " mod " << p;
      }
      ASSERT_EQ(count_roots_mod_p(q, p), fast.size());
    }
  }
  // X^2 + 1 splits exactly when p = 1 mod 4
  for (u64 p : primes_up_to(5000)) {
    if (p == 2) continue;
    ASSERT_EQ(count_roots_mod_p(IntPoly{1, 0, 1}, p), p % 4 == 1 ? 2u : 0u);
  }
}

TEST(Rho, Examples) {
  IntPoly q{1, 0, 1};
  EXPECT_EQ(rho_prime_power(q, 7, 0), 1);
  EXPECT_EQ(rho_prime_power(q, 5, 1), 2);
  EXPECT_EQ(rho_prime_power(q, 2, 1), 1);
  EXPECT_EQ(rho_prime_power(q, 2, 2), 0);
  EXPECT_EQ(rho(q, 1), 1);
  EXPECT_EQ(rho(q, 65), 4);
  EXPECT_EQ(rho_oracle(q, 65), 4u);
  EXPECT_EQ(rho_oracle(q, 1), 1u);
  EXPECT_EQ(rho(IntPoly::x(), 1000000), 1);
  EXPECT_THROW(rho_prime_power(IntPoly{3, 6}, 3, 1), std::domain_error);
  EXPECT_THROW(rho_oracle(q, 20000000), std::range_error);
}

TEST(Rho, LiftingTreeMatchesOracle) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    IntPoly q = random_primitive(rng, 4, 12);
    if (i % 3 == 0) q = q * linear(1, static_cast<long long>(rng() % 5));  // repeated roots now and then
    if (!is_primitive(q)) continue;
    for (u64 p : {2ull, 3ull, 5ull, 7ull}) {
      if (!primitive_at(q, p)) continue;
      u64 pv = 1;
      for (unsigned nu = 0; nu <= 5 && pv <= 100000; ++nu, pv *= p) {
        ASSERT_EQ(rho_prime_power(q, p, nu), rho_oracle(q, pv)) << q << " p=" << p << " nu=" << nu;
        ASSERT_EQ(rho_prime_power_lifting(q, p, nu), rho_oracle(q, pv));
      }
    }
  }
}

TEST(Rho, CrtMultiplicativity) {
  IntPoly q{-2, 1, 0, 1};
  for (u64 m = 1; m <= 60; ++m)
    for (u64 n = 1; n <= 60; ++n) {
      if (std::gcd(m, n) != 1) continue;
      ASSERT_EQ(rho(q, m * n), rho(q, m) * rho(q, n));
      ASSERT_EQ(rho(q, m * n), rho_oracle(q, m * n));
    }
}

TEST(RhoHat, Examples) {
  auto pair = FactoredSystem::identity({IntPoly::x(), linear(1, 2)});
  std::vector<u64> ones{1, 1};
  EXPECT_EQ(rho_hat(pair, ones), 1);
  std::vector<u64> t21{2, 1};
  EXPECT_EQ(rho_hat(pair, t21), 1);
  EXPECT_EQ(rho_hat_oracle(pair, t21), 1u);
  for (u64 p : {3ull, 5ull, 7ull, 11ull}) {
    auto sys = FactoredSystem::identity({IntPoly::x(), linear(1, 2)});
    std::vector<u64> pp{p, p};
    EXPECT_EQ(rho_hat(sys, pp), 0);
    EXPECT_EQ(rho_hat_oracle(sys, pp), 0u);
  }
  auto quad = FactoredSystem::identity({IntPoly{1, 0, 1}});
  std::vector<unsigned> nu1{1};
  // n = 2, 3 mod 5 lift to 5 residues mod 25 each; 7 and 18 have 25 | n^2+1
  EXPECT_EQ(rho_hat_prime_power(quad, nu1, 5), 8);
  EXPECT_EQ(count_exact_valuations_scan(quad.factors(), nu1, 5), 8u);
  auto lin = FactoredSystem::identity({IntPoly::x()});
  std::vector<unsigned> nu2{2};
  EXPECT_EQ(rho_hat_prime_power(lin, nu2, 3), 2);
  std::vector<unsigned> zero{0};
  EXPECT_EQ(rho_hat_prime_power(lin, zero, 3), 1);
}

TEST(RhoHat, TreeMatchesScanAtPrimePowers) {
  std::vector<FactoredSystem> systems = {
      FactoredSystem::identity({IntPoly::x(), linear(1, 2)}),
      FactoredSystem::identity({IntPoly::x(), linear(1, 1), linear(1, 3)}),
      FactoredSystem::identity({IntPoly{1, 0, 1}}),
      FactoredSystem::identity({IntPoly::x(), linear(1, 12)}),
      FactoredSystem::identity({IntPoly{7, 0, 1}, linear(1, 1)}),
      FactoredSystem::identity({IntPoly{1, 1, 0, 1}, linear(3, 2)}),
  };
  for (const auto& s : systems) {
    const std::size_t r = s.r();
    for (u64 p : {2ull, 3ull, 5ull, 7ull}) {
      std::vector<unsigned> nu(r, 0);
      // all tuples with entries <= 3 and p^(max+1) <= 10^5
      std::function<void(std::size_t)> rec = [&](std::size_t h) {
        if (h == r) {
          unsigned mx = 0;
          for (unsigned v : nu) mx = std::max(mx, v);
          if (ipow(p, mx + 1) > Int(100000)) return;
          ASSERT_EQ(rho_hat_prime_power(s, nu, p), count_exact_valuations_scan(s.factors(), nu, p));
          ASSERT_EQ(count_exact_valuations(s.factors(), nu, p), count_exact_valuations_scan(s.factors(), nu, p));
          return;
        }
        for (unsigned v = 0; v <= 3; ++v) {
          nu[h] = v;
          rec(h + 1);
        }
      };
      rec(0);
    }
  }
}

TEST(RhoHat, MultiplicativeAndMatchesOracle) {
  auto s = FactoredSystem::identity({IntPoly::x(), linear(1, 6)});
  for (u64 a = 1; a <= 40; ++a)
    for (u64 b = 1; b <= 40; ++b) {
      std::vector<u64> t{a, b};
      if (rho_hat_modulus(t) > Int(2000000)) continue;
      ASSERT_EQ(rho_hat(s, t), rho_hat_oracle(s, t)) << a << "," << b;
    }
}

TEST(RhoHat, NonSquarefreeComponentsInTree) {
  std::vector<IntPoly> polys{IntPoly::x() * IntPoly::x(), linear(1, 4)};
  for (u64 p : {2ull, 3ull})
    for (unsigned a = 0; a <= 4; ++a)
      for (unsigned b = 0; b <= 3; ++b) {
        std::vector<unsigned> nu{a, b};
        ASSERT_EQ(count_exact_valuations(polys, nu, p), count_exact_valuations_scan(polys, nu, p));
      }
}

TEST(RootBounds, ClassicalInequalities) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 40; ++i) {
    IntPoly q = squarefree_part(random_primitive(rng, 4, 10));
    if (q.degree() < 1) continue;
    const int g = q.degree();
    const Int d = discriminant(q);
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
      if (!primitive_at(q, p)) continue;
      ASSERT_LE(rho_prime_power(q, p, 1), g);
      for (unsigned nu = 1; nu <= 6; ++nu) {
        const Int r = rho_prime_power(q, p, nu);
        ASSERT_LE(r, Int(g) * ipow(p, nu - 1));
        ASSERT_LE(r, Int(g) * ipow(p, nu - (nu + g - 1) / g));  // [nu - nu/g]
        if (d % p != 0) {
          ASSERT_EQ(r, rho_prime_power(q, p, 1));
        }
      }
    }
  }
}
