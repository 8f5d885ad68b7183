#ifndef MAJORANT_LHS_HPP
#define MAJORANT_LHS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "majorant/arith.hpp"
#include "majorant/bounds.hpp"
#include "majorant/mfunc.hpp"
#include "majorant/numeric.hpp"
#include "majorant/polyarith.hpp"
#include "majorant/rootcount.hpp"

namespace majorant {

/// The integers n with x < n <= x + y, i.e. floor(x) < n <= floor(x + y).
struct IntegerInterval {
  long long first = 1;  // floor(x) + 1
  u64 count = 0;

  static IntegerInterval of(const Rational& x, const Rational& y) {
    if (y < 0) throw std::domain_error("interval length must be non-negative");
    auto fl = [](const Rational& q) {
      Int n = numerator(q), d = denominator(q);
      Int f = n / d;
      if (n < 0 && f * d != n) f -= 1;
      return f;
    };
    const Int lo = fl(x), hi = fl(x + y);
    return {(lo + 1).convert_to<long long>(), (hi - lo).convert_to<u64>()};
  }
  long long last() const { return first + static_cast<long long>(count) - 1; }
};

/// Factorizations of |P_j(n)| for n in an interval. Rows with P_j(n) = 0
/// are flagged and carry no factors.
class IntervalFactorizationTable {
 public:
  IntervalFactorizationTable(IntegerInterval iv, std::size_t width)
      : iv_(iv), width_(width), values_(iv.count * width, 0), zero_(iv.count * width, false),
        terms_(iv.count * width) {}

  const IntegerInterval& interval() const { return iv_; }
  u64 size() const { return iv_.count; }
  std::size_t width() const { return width_; }
  long long n_at(u64 i) const { return iv_.first + static_cast<long long>(i); }

  u64 value(u64 i, std::size_t j) const { return values_[i * width_ + j]; }
  bool is_zero(u64 i, std::size_t j) const { return zero_[i * width_ + j]; }
  bool any_zero(u64 i) const {
    for (std::size_t j = 0; j < width_; ++j)
      if (is_zero(i, j)) return true;
    return false;
  }
  std::span<const PrimePower> factors(u64 i, std::size_t j) const { return terms_[i * width_ + j]; }

  // builder access
  u64& value_ref(u64 i, std::size_t j) { return values_[i * width_ + j]; }
  void set_zero(u64 i, std::size_t j) { zero_[i * width_ + j] = true; }
  std::vector<PrimePower>& terms_ref(u64 i, std::size_t j) { return terms_[i * width_ + j]; }

 private:
  IntegerInterval iv_;
  std::size_t width_;
  std::vector<u64> values_;
  std::vector<bool> zero_;
  std::vector<std::vector<PrimePower>> terms_;
};

/// Default sieve bound max(10^4, ceil((x+y)^(1/3))).
inline u64 default_sieve_bound(const IntegerInterval& iv) {
  const double top = static_cast<double>(std::max<long long>(std::llabs(iv.last()), std::llabs(iv.first)));
  return std::max<u64>(10000, static_cast<u64>(std::ceil(std::cbrt(top))) + 1);
}

/// Sieves |P_j(n)| by the primes p <= z through the roots of P_j mod p,
/// then factors leftover cofactors individually. Values must fit in 64 bits.
inline IntervalFactorizationTable factor_values_in_interval(std::span<const IntPoly> polys, const Rational& x,
                                                            const Rational& y, std::optional<u64> z = std::nullopt) {
  const IntegerInterval iv = IntegerInterval::of(x, y);
  if (iv.count < 1) throw std::domain_error("factor_values_in_interval: need y >= 1");
  const u64 bound = z.value_or(default_sieve_bound(iv));
  if (bound < 2) throw std::domain_error("factor_values_in_interval: need z >= 2");
  const std::size_t k = polys.size();
  IntervalFactorizationTable table(iv, k);
  std::vector<u64> rem(iv.count);
  const auto primes = primes_up_to(bound);

  for (std::size_t j = 0; j < k; ++j) {
    const IntPoly& poly = polys[j];
    for (u64 i = 0; i < iv.count; ++i) {
      const Int v = abs(evaluate(poly, Int(table.n_at(i))));
      if (!fits_u64(v)) throw std::overflow_error("|P(n)| exceeds 64 bits at n = " + std::to_string(table.n_at(i)));
      table.value_ref(i, j) = v.convert_to<u64>();
      rem[i] = table.value(i, j);
      if (rem[i] == 0) table.set_zero(i, j);
    }
    auto strip = [&](u64 i, u64 p) {
      if (rem[i] == 0 || rem[i] % p != 0) return;
      unsigned e = 0;
      do {
        rem[i] /= p;
        ++e;
      } while (rem[i] % p == 0);
      table.terms_ref(i, j).push_back({p, e});
    };
    for (u64 p : primes) {
      if (!primitive_at(poly, p)) {
        for (u64 i = 0; i < iv.count; ++i) strip(i, p);
        continue;
      }
      for (u64 r : roots_mod_p(poly, p)) {
        const long long off = static_cast<long long>(r) - (iv.first % static_cast<long long>(p));
        u64 start = static_cast<u64>(((off % static_cast<long long>(p)) + static_cast<long long>(p)) %
                                     static_cast<long long>(p));
        for (u64 i = start; i < iv.count; i += p) strip(i, p);
      }
    }
    for (u64 i = 0; i < iv.count; ++i) {
      if (rem[i] <= 1) continue;
      for (const auto& t : factor(rem[i])) table.terms_ref(i, j).push_back(t);
    }
  }
  return table;
}

inline IntervalFactorizationTable factor_values_in_interval(const FactoredSystem& sys, const Rational& x,
                                                            const Rational& y, std::optional<u64> z = std::nullopt) {
  return factor_values_in_interval(sys.components(), x, y, z);
}

namespace detail {

inline Rational eval_row(const MultiplicativeFunction& F, const IntervalFactorizationTable& t, u64 i,
                         std::vector<std::span<const PrimePower>>& rows) {
  rows.clear();
  for (std::size_t j = 0; j < t.width(); ++j) rows.push_back(t.factors(i, j));
  return eval_terms(F, rows);
}

inline void reject_zero(const IntervalFactorizationTable& t, u64 i) {
  if (t.any_zero(i))
    throw std::domain_error("F(0) undefined: some Q_j(n) = 0 at n = " + std::to_string(t.n_at(i)));
}

}  // namespace detail

/// sum_{x < n <= x+y} F(|Q_1(n)|, .., |Q_k(n)|), exact.
inline Rational short_sum(const FactoredSystem& sys, const MultiplicativeFunction& F, const Rational& x,
                          const Rational& y, std::optional<u64> z = std::nullopt) {
  if (F.arity() != sys.k()) throw std::invalid_argument("short_sum: function arity != k");
  const auto t = factor_values_in_interval(sys, x, y, z);
  Rational sum(0);
  std::vector<std::span<const PrimePower>> rows;
  for (u64 i = 0; i < t.size(); ++i) {
    detail::reject_zero(t, i);
    sum += detail::eval_row(F, t, i, rows);
  }
  return sum;
}

/// The same sum over prime n only; requires Q(0) != 0.
inline Rational prime_sum(const FactoredSystem& sys, const MultiplicativeFunction& F, const Rational& x,
                          const Rational& y, std::optional<u64> z = std::nullopt) {
  if (F.arity() != sys.k()) throw std::invalid_argument("prime_sum: function arity != k");
  if (evaluate(sys.q(), Int(0)) == 0) throw std::domain_error("prime_sum: requires Q(0) != 0");
  const IntegerInterval iv = IntegerInterval::of(x, y);
  if (iv.count == 0 || iv.last() < 2) return Rational(0);
  const auto t = factor_values_in_interval(sys, x, y, z);
  Rational sum(0);
  std::vector<std::span<const PrimePower>> rows;
  for (u64 i = 0; i < t.size(); ++i) {
    const long long n = t.n_at(i);
    if (n < 2 || !is_prime(static_cast<u64>(n))) continue;
    detail::reject_zero(t, i);
    sum += detail::eval_row(F, t, i, rows);
  }
  return sum;
}

/// #{n in the table : a_h || R_h(n) for all h, and every prime p | Q(n) has
/// p | a_1..a_r or p in xi or p > z}. The table holds the R_h values.
inline u64 sieve_count(const IntervalFactorizationTable& t, std::span<const u64> a, u64 z,
                       std::span<const u64> xi = {}) {
  if (a.size() != t.width()) throw std::invalid_argument("sieve_count: need one a_h per factor");
  Int A(1);
  for (u64 v : a) {
    if (v == 0) throw std::domain_error("sieve_count: a_h must be positive");
    A *= v;
  }
  const bool all_one = std::all_of(a.begin(), a.end(), [](u64 v) { return v == 1; });
  u64 count = 0;
  for (u64 i = 0; i < t.size(); ++i) {
    if (t.any_zero(i)) {
      // every prime divides 0
      if (all_one && z < 2) ++count;
      continue;
    }
    bool ok = true;
    for (std::size_t h = 0; h < a.size() && ok; ++h) ok = exactly_divides(a[h], t.value(i, h));
    for (std::size_t h = 0; h < a.size() && ok; ++h)
      for (const auto& pp : t.factors(i, h)) {
        if (pp.p > z || A % pp.p == 0 || std::find(xi.begin(), xi.end(), pp.p) != xi.end()) continue;
        ok = false;
        break;
      }
    if (ok) ++count;
  }
  return count;
}

/// The same count by enumeration over (x, x+y].
inline u64 sieve_count(const FactoredSystem& sys, std::span<const u64> a, u64 z, const Rational& x,
                       const Rational& y, std::span<const u64> xi = {}) {
  if (a.size() != sys.r()) throw std::invalid_argument("sieve_count: need one a_h per factor");
  return sieve_count(factor_values_in_interval(sys.factors(), x, y), a, z, xi);
}

/// y rho-hat(a) / lcm(a_h kappa(a_h)) prod_{g < p <= z, p not | a_1..a_r} (1 - rho(p)/p).
inline Value sieve_rhs(const SystemData& d, std::span<const u64> a, u64 z, const Rational& y, Mode mode) {
  const auto& sys = d.system();
  if (a.size() != sys.r()) throw std::invalid_argument("sieve_rhs: need one a_h per factor");
  Int A(1);
  for (u64 v : a) A *= v;
  const Rational dens(rho_hat(sys, a), rho_hat_modulus(a));
  return in_mode(mode, [&]<class S>() {
    return to_scalar<S>(y * dens) * sifted_product<S>(d, z, [&](u64 p) { return A % p == 0; });
  });
}

}  // namespace majorant

#endif  // MAJORANT_LHS_HPP
