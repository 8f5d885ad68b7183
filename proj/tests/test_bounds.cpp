#include <gtest/gtest.h>

#include <functional>
#include <numeric>

#include "majorant/bounds.hpp"

using namespace majorant;

namespace {

IntPoly linear(long long a, long long b) { return IntPoly{b, a}; }

// Direct tuple enumeration: sum over n_1..n_r with product <= x of
// F~(n) rho_hat_oracle(n) / lcm(n_h kappa(n_h)).
Rational majorant_oracle(const FactoredSystem& sys, const MultiplicativeFunction& Ft, u64 x) {
  const std::size_t r = sys.r();
  std::vector<u64> n(r, 1);
  Rational total(0);
  std::function<void(std::size_t, u64)> rec = [&](std::size_t h, u64 prod) {
    if (h == r) {
      const u64 cnt = rho_hat_oracle(sys, n, 50'000'000);
      if (cnt) total += eval(Ft, n) * Rational(Int(cnt), rho_hat_modulus(n));
      return;
    }
    for (u64 v = 1; prod * v <= x; ++v) {
      n[h] = v;
      rec(h + 1, prod * v);
    }
  };
  rec(0, 1);
  return total;
}

Rational coprime_oracle(const FactoredSystem& sys, const MultiplicativeFunction& Ft, u64 x) {
  const std::size_t r = sys.r();
  const Int D = abs(sys.disc_star());
  std::vector<u64> n(r, 1);
  Rational total(0);
  std::function<void(std::size_t, u64)> rec = [&](std::size_t h, u64 prod) {
    if (h == r) {
      if (gcd(Int(prod), D) != 1) return;
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = a + 1; b < r; ++b)
          if (std::gcd(n[a], n[b]) != 1) return;
      Rational w = eval(Ft, n);
      for (std::size_t a = 0; a < r; ++a) w *= Rational(rho_oracle(sys.factor(a), n[a]), n[a]);
      total += w;
      return;
    }
    for (u64 v = 1; prod * v <= x; ++v) {
      n[h] = v;
      rec(h + 1, prod * v);
    }
  };
  rec(0, 1);
  return total;
}

Rational sifted_oracle(const IntPoly& q, u64 x) {
  Rational prod(1);
  for (u64 p = 2; p <= x; ++p) {
    bool prime = p > 1;
    for (u64 d = 2; d * d <= p; ++d) prime = prime && p % d;
    if (!prime || p <= static_cast<u64>(q.degree())) continue;
    prod *= 1 - Rational(rho_oracle(q, p), p);
  }
  return prod;
}

bool agree10(const Real& a, const Real& b) {
  if (a == b) return true;
  return abs(a - b) <= Real(1e-10) * (abs(a) > abs(b) ? abs(a) : abs(b));
}

}  // namespace

TEST(SiftedProduct, Examples) {
  SystemData d(FactoredSystem::identity({IntPoly::x()}), 100);
  EXPECT_EQ(sifted_product<Rational>(d, 10), Rational(8, 35));
  EXPECT_EQ(sifted_product<Rational>(d, 1), 1);
  SystemData d2(FactoredSystem::identity({IntPoly::x(), linear(1, 1), linear(1, 3)}), 100);
  EXPECT_EQ(sifted_product<Rational>(d2, 3), 1);  // x <= g
  for (u64 x : {5ull, 17ull, 60ull, 100ull}) {
    ASSERT_EQ(sifted_product<Rational>(d2, x), sifted_oracle(d2.system().q(), x));
    ASSERT_GT(sifted_product<Rational>(d2, x), 0);
  }
  SystemData d3(FactoredSystem({IntPoly{1, 0, 1}, linear(1, 2)}, {{2, 0}, {0, 1}}), 100);
  EXPECT_EQ(sifted_product<Rational>(d3, 97), sifted_oracle(d3.system().q(), 97));
}

TEST(MajorantSum, Examples) {
  auto sys = FactoredSystem::identity({IntPoly::x()});
  SystemData d(sys, 1000);
  auto tau = tau_function(1);
  EXPECT_EQ(majorant_sum<Rational>(d, tau, 1), 1);
  EXPECT_EQ(majorant_sum<Rational>(d, tau, 3), Rational(35, 18));
  EXPECT_GE(majorant_sum<Rational>(d, tau, 100), majorant_sum<Rational>(d, tau, 10));
}

TEST(MajorantSum, MatchesTupleEnumeration) {
  std::vector<FactoredSystem> systems = {
      FactoredSystem::identity({IntPoly::x(), linear(1, 2)}),
      FactoredSystem::identity({IntPoly{1, 0, 1}}),
      FactoredSystem::identity({IntPoly::x(), linear(1, 12)}),
      FactoredSystem({IntPoly::x(), linear(1, 1)}, {{2, 0}, {0, 1}}),
      FactoredSystem::identity({IntPoly{-7, 0, 1}, linear(2, 1)}),
  };
  for (const auto& sys : systems) {
    SystemData d(sys, 1000);
    auto pf = pushforward(tau_function(sys.k()), sys);
    for (u64 x : {1ull, 12ull, 60ull, 150ull})
      ASSERT_EQ(majorant_sum<Rational>(d, pf.function(), x), majorant_oracle(sys, pf.function(), x))
          << sys.q() << " x=" << x;
  }
}

TEST(MajorantSum, CoprimeVariantMatchesEnumeration) {
  std::vector<FactoredSystem> systems = {
      FactoredSystem::identity({IntPoly::x(), linear(1, 2)}),
      FactoredSystem::identity({IntPoly{1, 0, 1}}),
      FactoredSystem::identity({IntPoly::x(), linear(1, 1), linear(1, 3)}),
  };
  for (const auto& sys : systems) {
    SystemData d(sys, 1000);
    auto F = tau_function(sys.k());
    for (u64 x : {1ull, 30ull, 120ull}) ASSERT_EQ(majorant_sum_coprime<Rational>(d, F, x), coprime_oracle(sys, F, x));
  }
}

TEST(MajorantSum, SmoothRestrictionAndMonotone) {
  SystemData d(FactoredSystem::identity({IntPoly::x(), linear(1, 2)}), 1000);
  auto F = tau_function(2);
  Rational prev(0);
  for (u64 x = 1; x <= 400; x += 37) {
    const Rational v = majorant_sum<Rational>(d, F, x);
    ASSERT_GE(v, prev);
    prev = v;
    ASSERT_EQ(majorant_sum<Rational>(d, F, x, x), v);
    ASSERT_LE(majorant_sum<Rational>(d, F, x, 7), v);
  }
}

TEST(DeltaDstar, Examples) {
  auto tau1 = tau_function(1);
  EXPECT_EQ(delta_Dstar(FactoredSystem::identity({IntPoly::x()}), tau1), 1);
  auto pair = FactoredSystem::identity({IntPoly::x(), linear(1, 2)});
  auto tau2 = tau_function(2);
  // D* = 4: p = 2 only; hand sum over nu_h <= 1 via the scan oracle
  Rational local(1);
  for (unsigned a = 0; a <= 1; ++a)
    for (unsigned b = 0; b <= 1; ++b) {
      if (!a && !b) continue;
      std::vector<unsigned> nu{a, b};
      const unsigned mx = std::max(a, b);
      local += tau2.at(2, nu) * Rational(Int(count_exact_valuations_scan(pair.factors(), nu, 2)), ipow(u64{2}, mx + 1));
    }
  EXPECT_EQ(delta_Dstar(pair, tau2), local);
  EXPECT_GE(delta_Dstar(pair, tau2), 1);
}

TEST(DeltaD, K1Examples) {
  auto tau = tau_function(1);
  auto lin = delta_D_k1(linear(1, 1), tau);
  EXPECT_EQ(lin.first, 1);
  EXPECT_EQ(lin.second, 1);
  // X^2 + 1: D = -4, rho(2^nu) = 1, 0, 0: Delta = 1 + 2(1/2 - 0) = 2 = Delta~
  auto q = delta_D_k1(IntPoly{1, 0, 1}, tau);
  EXPECT_EQ(q.first, 2);
  EXPECT_EQ(q.second, 2);
  EXPECT_THROW(delta_D_k1(IntPoly::x() * IntPoly::x(), tau), std::domain_error);
}

TEST(DeltaD, OrderingAndGeneralReduction) {
  auto tau = tau_function(1);
  for (long long c = -30; c <= 30; ++c) {
    for (long long b = 0; b <= 3; ++b) {
      IntPoly q{c, b, 1};
      if (discriminant(q) == 0) continue;
      auto [dd, dt] = delta_D_k1(q, tau);
      ASSERT_LE(dd, dt) << q;
      ASSERT_EQ(delta_D_general(FactoredSystem::identity({q}), tau), dd) << q;
    }
  }
  IntPoly cubic{2, -3, 0, 1};  // (X-1)^2 (X+2) has D = 0
  EXPECT_THROW(delta_D_k1(cubic, tau), std::domain_error);
  IntPoly c2{4, -3, 0, 1};
  ASSERT_NE(discriminant(c2), 0);
  EXPECT_EQ(delta_D_general(FactoredSystem::identity({c2}), tau), delta_D_k1(c2, tau).first);
}

TEST(DeltaD, ShiftedPairs) {
  auto tau = tau_function(1);
  EXPECT_EQ(delta_shifted(1, tau, tau), 1);
  // Delta(2) from direct counts: p = 2 with nu in {0,1,2}^2
  EXPECT_EQ(delta_shifted(2, tau, tau), 2);
  EXPECT_EQ(delta_shifted(4, tau, tau), 3);
  auto sys = shifted_pair(12);
  EXPECT_EQ(sys.disc(), 144);
}

TEST(Rhs, MainWorkedValue) {
  auto sys = FactoredSystem::identity({IntPoly::x()});
  SystemData d(sys, 1000);
  BoundParams bp;
  bp.alpha = 0.5;
  bp.delta = 0.5;
  bp.eps = 0.001;
  bp.x = 100;
  bp.y = 10;
  auto tau = tau_function(1);
  auto r = rhs_main(d, tau, bp, Mode::exact);
  const Rational expect = Rational(10) * sifted_oracle(sys.q(), 100) * majorant_oracle(sys, tau, 100);
  ASSERT_TRUE(r.value.exact);
  EXPECT_EQ(*r.value.exact, expect);
  EXPECT_GT(*r.value.exact, 0);
  auto rf = rhs_main(d, tau, bp, Mode::real);
  EXPECT_FALSE(rf.value.exact);
  EXPECT_TRUE(agree10(rf.value.approx, Real(expect)));
}

TEST(Rhs, ExactAndFloatAgree) {
  std::vector<FactoredSystem> systems = {
      FactoredSystem::identity({IntPoly{1, 0, 1}}),
      FactoredSystem::identity({linear(1, 1), linear(1, 3)}),
      FactoredSystem::identity({IntPoly{3, 1, 1}, linear(1, 5)}),
  };
  for (const auto& sys : systems) {
    SystemData d(sys, 20000);
    BoundParams bp;
    bp.alpha = 0.6;
    bp.delta = 0.5;
    bp.eps = 0.0005;
    bp.x = 20000;
    bp.y = 4000;
    auto F = tau_function(sys.k());
    for (auto fn : {rhs_main, rhs_cor_disc, rhs_cor_mult, rhs_primes}) {
      auto e = fn(d, F, bp, Mode::exact);
      auto f = fn(d, F, bp, Mode::real);
      ASSERT_TRUE(agree10(e.value.approx, f.value.approx)) << e.value.approx << " vs " << f.value.approx;
    }
  }
}

TEST(Rhs, Validation) {
  SystemData d(FactoredSystem::identity({IntPoly::x()}), 1000);
  BoundParams bp;
  bp.x = 100;
  bp.y = 200;
  EXPECT_THROW(rhs_main(d, tau_function(1), bp, Mode::exact), ValidationError);
  bp.y = 10;
  bp.eps = 0.5;
  auto c = validate(bp, d.system());
  EXPECT_FALSE(c.ok());
  EXPECT_NE(c.summary().find("eps"), std::string::npos);
  bp.eps = 0.001;
  bp.c0 = 1000;
  c = validate(bp, d.system());
  EXPECT_TRUE(c.ok());
  EXPECT_EQ(c.warnings.size(), 1u);
  // Q(0) = 0 for the primes form
  bp.c0 = 1;
  EXPECT_THROW(rhs_primes(d, tau_function(1), bp, Mode::exact), ValidationError);
}

TEST(Rhs, HolowinskyAndShiu) {
  auto tau = tau_function(1);
  auto h = rhs_holowinsky(1, tau, tau, 1000, Mode::exact);
  EXPECT_EQ(*h.delta.exact, 1);
  const Real lx = log(Real(1000));
  Real prod(1);
  for (u64 p : primes_up_to(1000)) prod *= (1 + Real(2) / p) * (1 + Real(2) / p);
  EXPECT_TRUE(agree10(h.value.approx, Real(1000) * prod / (lx * lx)));
  EXPECT_THROW(rhs_holowinsky(0, tau, tau, 1000, Mode::exact), ValidationError);

  // Shiu form with f = 1: the exponent is a Mertens partial sum over p not dividing D
  auto sys = FactoredSystem::identity({IntPoly{1, 0, 1}});
  SystemData d(sys, 5000);
  BoundParams bp;
  bp.alpha = 0.5;
  bp.eps = 0.0001;
  bp.x = 5000;
  bp.y = 1000;
  auto one = one_function(1);
  auto s = rhs_shiu(d, one, bp, Mode::exact);
  Real mertens(0);
  for (u64 p : primes_up_to(5000))
    if (p != 2) mertens += Real(1) / p;
  const Rational base = *s.delta.exact * Rational(1000) * sifted_oracle(sys.q(), 5000);
  EXPECT_TRUE(agree10(s.value.approx, Real(base) * exp(mertens)));
}

TEST(DeltaDstar, UpperBoundForQuadratics) {
  auto tau = tau_function(1);
  for (long long c = 1; c <= 100; ++c) {
    auto sys = FactoredSystem::identity({IntPoly{c, 0, 1}});
    const Rational dd = delta_Dstar(sys, tau);
    auto ub = delta_Dstar_upper(sys, tau);
    ASSERT_GE(dd, 1);
    ASSERT_EQ(ub.C, 12);
    ASSERT_TRUE(ub.bound.exact);
    ASSERT_LE(dd, *ub.bound.exact) << c;
  }
}
