#ifndef MAJORANT_ARITH_HPP
#define MAJORANT_ARITH_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "majorant/numeric.hpp"

namespace majorant {

struct PrimePower {
  u64 p = 0;
  unsigned e = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
class Factorization {
 public:
  Factorization() = default;
  explicit Factorization(std::vector<PrimePower> terms) : terms_(std::move(terms)) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].e == 0) throw std::invalid_argument("Factorization: zero exponent");
      if (i > 0 && terms_[i - 1].p >= terms_[i].p)
        throw std::invalid_argument("Factorization: primes not strictly increasing");
    }
  }

  const std::vector<PrimePower>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  /// Exponent of p (0 when p does not divide the value).
  unsigned exponent(u64 p) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), p,
                               [](const PrimePower& t, u64 q) { return t.p < q; });
    return (it != terms_.end() && it->p == p) ? it->e : 0;
  }

  Int value() const {
    Int v(1);
    for (const auto& t : terms_) v *= ipow(t.p, t.e);
    return v;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Factorization& f) {
  os << '[';
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) os << ',';
    os << '(' << f.terms()[i].p << ',' << f.terms()[i].e << ')';
  }
  return os << ']';
}

/// Least prime factor with P^-(1) = infinity represented explicitly.
struct LeastPrime {
  bool infinite = false;
  u64 value = 0;
  static LeastPrime infinity() { return {true, 0}; }
  friend bool operator==(const LeastPrime&, const LeastPrime&) = default;
};

// ---------------------------------------------------------------------------
// Primes

/// Sieve of Eratosthenes: all primes <= x.
inline std::vector<u64> primes_up_to(u64 x) {
  std::vector<u64> out;
  if (x < 2) return out;
  std::vector<bool> composite(x + 1, false);
  for (u64 i = 2; i * i <= x; ++i)
    if (!composite[i])
      for (u64 j = i * i; j <= x; j += i) composite[j] = true;
  for (u64 i = 2; i <= x; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}

namespace detail {

inline const std::vector<u64>& small_primes() {
  static const std::vector<u64> table = primes_up_to(1u << 16);
  return table;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Strong probable-prime test to base a; n odd > 2.
inline bool sprp(u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Brent's variant of Pollard rho with fixed starting values; returns a
// nontrivial factor of the odd composite n.
inline u64 rho_factor(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, q = 1, g = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

}  // namespace detail

/// Deterministic primality for 64-bit inputs (Miller-Rabin with a base set
/// proven complete below 2^64).
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull})
    if (!detail::sprp(n, a)) return false;
  return true;
}

namespace detail {

inline void factor_rec(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = rho_factor(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

inline Factorization collect(std::vector<u64>& primes) {
  std::sort(primes.begin(), primes.end());
  std::vector<PrimePower> terms;
  for (u64 p : primes) {
    if (!terms.empty() && terms.back().p == p)
      ++terms.back().e;
    else
      terms.push_back({p, 1});
  }
  return Factorization(std::move(terms));
}

}  // namespace detail

/// Complete prime factorization of n >= 1: trial division by primes below
/// 2^16, then Pollard-Brent with every split certified by is_prime.
inline Factorization factor(u64 n) {
  if (n == 0) throw std::domain_error("factor: n must be positive");
  std::vector<u64> primes;
  for (u64 p : detail::small_primes()) {
    if (p * p > n) break;
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) {
    // Remaining cofactor has no prime factor below 2^16.
    if (n < (u64{1} << 32))
      primes.push_back(n);
    else
      detail::factor_rec(n, primes);
  }
  return detail::collect(primes);
}

namespace detail {

// Miller-Rabin with the first 13 prime bases is deterministic below this bound.
inline const Int& big_certified_limit() {
  static const Int limit("3317044064679887385961981");
  return limit;
}

inline bool sprp_big(const Int& n, unsigned a) {
  Int d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  Int x = bmp::powm(Int(a), d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

inline bool is_prime_big(const Int& n) {
  if (fits_u64(n)) return is_prime(n.convert_to<u64>());
  if (n >= big_certified_limit())
    throw std::range_error("primality of " + n.str() + " is outside the certified range");
  for (unsigned a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
    if (n % a == 0) return false;
    if (!sprp_big(n, a)) return false;
  }
  return true;
}

inline Int rho_big(const Int& n) {
  for (unsigned c = 1;; ++c) {
    Int x(2), y(2), g(1);
    auto f = [&](const Int& v) { return (v * v + c) % n; };
    while (g == 1) {
      x = f(x);
      y = f(f(y));
      g = gcd(x > y ? Int(x - y) : Int(y - x), n);
    }
    if (g != n) return g;
  }
}

inline void factor_big_rec(const Int& n, std::vector<u64>& out) {
  if (n == 1) return;
  if (fits_u64(n)) {
    for (const auto& t : factor(n.convert_to<u64>()))
      for (unsigned i = 0; i < t.e; ++i) out.push_back(t.p);
    return;
  }
  if (is_prime_big(n)) throw std::domain_error("factor: prime factor " + n.str() + " exceeds 64 bits");
  Int d = rho_big(n);
  factor_big_rec(d, out);
  factor_big_rec(n / d, out);
}

}  // namespace detail

/// Factors a positive arbitrary-precision integer. Prime factors must fit in
/// 64 bits; composite cofactors above 2^64 are certified by deterministic
/// Miller-Rabin below about 3.3e24.
inline Factorization factor(const Int& n) {
  if (n <= 0) throw std::domain_error("factor: n must be positive");
  if (fits_u64(n)) return factor(n.convert_to<u64>());
  Int m = n;
  std::vector<u64> primes;
  for (u64 p : detail::small_primes()) {
    while (m % p == 0) {
      primes.push_back(p);
      m /= p;
    }
    if (fits_u64(m)) break;
  }
  detail::factor_big_rec(m, primes);
  return detail::collect(primes);
}

// ---------------------------------------------------------------------------
// Classical arithmetic functions

inline u64 kappa(const Factorization& f) {
  u64 k = 1;
  for (const auto& t : f) k *= t.p;
  return k;
}
inline u64 kappa(u64 n) { return kappa(factor(n)); }

/// Omega(n): prime factors with multiplicity.
inline unsigned omega_big(const Factorization& f) {
  unsigned s = 0;
  for (const auto& t : f) s += t.e;
  return s;
}
inline unsigned omega_big(u64 n) { return omega_big(factor(n)); }

/// omega(n): distinct prime factors.
inline unsigned omega_small(const Factorization& f) { return static_cast<unsigned>(f.size()); }
inline unsigned omega_small(u64 n) { return omega_small(factor(n)); }

inline u64 phi(const Factorization& f) {
  u64 r = 1;
  for (const auto& t : f) {
    r *= t.p - 1;
    for (unsigned i = 1; i < t.e; ++i) r *= t.p;
  }
  return r;
}
inline u64 phi(u64 n) { return phi(factor(n)); }

/// Greatest prime factor, P^+(1) = 1.
inline u64 p_plus(const Factorization& f) { return f.empty() ? 1 : f.terms().back().p; }
inline u64 p_plus(u64 n) { return p_plus(factor(n)); }

/// Least prime factor, P^-(1) = infinity.
inline LeastPrime p_minus(const Factorization& f) {
  if (f.empty()) return LeastPrime::infinity();
  return {false, f.terms().front().p};
}
inline LeastPrime p_minus(u64 n) { return p_minus(factor(n)); }

/// a || b: a | b and gcd(a, b/a) = 1. Requires a, b >= 1.
inline bool exactly_divides(u64 a, u64 b) {
  if (a == 0 || b == 0) throw std::domain_error("exactly_divides: arguments must be positive");
  if (b % a != 0) return false;
  return std::gcd(a, b / a) == 1;
}

inline bool exactly_divides(const Int& a, const Int& b) {
  if (a <= 0 || b <= 0) throw std::domain_error("exactly_divides: arguments must be positive");
  if (b % a != 0) return false;
  return gcd(a, b / a) == 1;
}

/// p-adic valuation of a nonzero integer.
inline unsigned valuation(u64 n, u64 p) {
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

inline unsigned valuation(Int n, u64 p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  unsigned v = 0;
  const Int pp(p);
  while (n % pp == 0) {
    n /= pp;
    ++v;
  }
  return v;
}

/// Integer floor of log_p(x) for x >= 1.
inline unsigned floor_log(u64 x, u64 p) {
  unsigned e = 0;
  u128 q = p;
  while (q <= x) {
    ++e;
    q *= p;
  }
  return e;
}

}  // namespace majorant

#endif  // MAJORANT_ARITH_HPP
