#ifndef MAJORANT_BOUNDS_HPP
#define MAJORANT_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "majorant/arith.hpp"
#include "majorant/mfunc.hpp"
#include "majorant/numeric.hpp"
#include "majorant/polyarith.hpp"
#include "majorant/rootcount.hpp"

namespace majorant {

/// A computed quantity: exact when the value is rational, always with a
/// binary-float approximation.
struct Value {
  std::optional<Rational> exact;
  Real approx;

  static Value of(const Rational& q) { return {q, Real(q)}; }
  static Value of(const Real& r) { return {std::nullopt, r}; }

  template <class Scalar>
  static Value from(const Scalar& s) {
    return of(s);
  }

  /// Exact "n/d" when rational and requested, otherwise a decimal with
  /// `digits` significant digits.
  std::string str(Mode mode, int digits = 12) const {
    if (mode == Mode::exact && exact) return format_rational(*exact);
    return format_real(approx, digits);
  }
};

inline Value operator*(const Value& a, const Value& b) {
  if (a.exact && b.exact) return Value::of(*a.exact * *b.exact);
  return Value::of(a.approx * b.approx);
}

inline Value operator*(const Value& a, const Real& t) { return Value::of(a.approx * t); }

/// Runs fn.template operator()<Scalar>() in the scalar type selected by mode.
template <class Fn>
Value in_mode(Mode mode, Fn&& fn) {
  if (mode == Mode::exact) return Value::of(fn.template operator()<Rational>());
  return Value::of(fn.template operator()<Real>());
}

/// floor(x) for x >= 0 as a 64-bit integer.
inline u64 floor_u64(const Rational& x) {
  if (x < 0) throw std::domain_error("expected a non-negative bound");
  return to_u64(Int(numerator(x) / denominator(x)));
}

inline Real log_real(const Rational& x) { return log(Real(x)); }

// ---------------------------------------------------------------------------
// Parameters

struct BoundParams {
  double alpha = 0.5;
  double delta = 0.5;
  Rational A{1};
  double B = 1;
  double eps = 0.001;
  Rational x{1};
  Rational y{1};
  double c0 = 1;
};

struct ParamCheck {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  /// eps <= alpha delta / (12 g^2), the weaker regime of the introduction.
  bool weak_eps_regime = false;

  bool ok() const { return errors.empty(); }
  std::string summary() const {
    std::string s;
    for (const auto& e : errors) s += (s.empty() ? "" : "; ") + e;
    return s;
  }
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Hypotheses of the main bound. c0-dependent conditions are warnings.
inline ParamCheck validate(const BoundParams& p, const FactoredSystem& sys) {
  ParamCheck c;
  const double g = sys.g();
  if (!(p.alpha > 0 && p.alpha < 1)) c.errors.push_back("alpha must lie in (0,1)");
  if (!(p.delta > 0 && p.delta < 1)) c.errors.push_back("delta must lie in (0,1)");
  if (p.A < 1) c.errors.push_back("A must be >= 1");
  if (!(p.B >= 1)) c.errors.push_back("B must be >= 1");
  if (!(p.eps > 0)) c.errors.push_back("eps must be positive");
  if (p.x <= 0) c.errors.push_back("x must be positive");
  if (p.y <= 0) c.errors.push_back("y must be positive");
  if (!(p.c0 >= 1)) c.errors.push_back("c0 must be >= 1");
  if (!c.ok()) return c;
  const double eps_max = p.alpha / (50 * g * (g + 1 / p.delta));
  if (!(p.eps < eps_max)) c.errors.push_back("eps must be < alpha/(50 g (g + 1/delta)) = " + std::to_string(eps_max));
  c.weak_eps_regime = p.eps <= p.alpha * p.delta / (12 * g * g);
  if (p.y > p.x) c.errors.push_back("y must be <= x");
  const Real lx = log_real(p.x);
  const Real xa = exp(Real(p.alpha) * lx);
  if (Real(p.y) < xa * (1 - Real(1e-12))) c.errors.push_back("y must be >= x^alpha");
  const Real need = Real(p.c0) * exp(Real(p.delta) * log(Real(norm(sys.q()))));
  if (Real(p.x) < need) c.warnings.push_back("x < c0 ||Q||^delta (depends on the unspecified c0)");
  return c;
}

inline void require_valid(const BoundParams& p, const FactoredSystem& sys) {
  auto c = validate(p, sys);
  if (!c.ok()) throw ValidationError("invalid parameters: " + c.summary());
}

// ---------------------------------------------------------------------------
// Per-system tables

/// Root counts of a system at all primes up to a limit, plus memoized
/// rho-hat densities at primes dividing D*. Not thread-safe: confine each
/// instance to one worker.
class SystemData {
 public:
  SystemData(FactoredSystem sys, u64 prime_limit)
      : sys_(std::move(sys)), limit_(prime_limit), primes_(primes_up_to(prime_limit)) {
    const auto dstar = sys_.disc_star_primes();
    const std::size_t n = primes_.size(), r = sys_.r();
    rho_h_.assign(r, std::vector<unsigned>(n, 0));
    rho_q_.assign(n, 0);
    in_dstar_.assign(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      const u64 p = primes_[i];
      in_dstar_[i] = std::binary_search(dstar.begin(), dstar.end(), p);
      if (in_dstar_[i]) {
        std::vector<u64> all;
        for (std::size_t h = 0; h < r; ++h) {
          auto roots = roots_mod_p(sys_.factor(h), p);
          rho_h_[h][i] = static_cast<unsigned>(roots.size());
          all.insert(all.end(), roots.begin(), roots.end());
        }
        std::sort(all.begin(), all.end());
        rho_q_[i] = static_cast<unsigned>(std::unique(all.begin(), all.end()) - all.begin());
      } else {
        unsigned sum = 0;
        for (std::size_t h = 0; h < r; ++h) {
          rho_h_[h][i] = static_cast<unsigned>(count_roots_mod_p(sys_.factor(h), p));
          sum += rho_h_[h][i];
        }
        rho_q_[i] = sum;
      }
    }
  }

  const FactoredSystem& system() const { return sys_; }
  u64 prime_limit() const { return limit_; }
  const std::vector<u64>& primes() const { return primes_; }

  /// Number of primes <= x; x must not exceed the limit.
  std::size_t count_upto(u64 x) const {
    if (x > limit_) throw std::out_of_range("SystemData: x=" + std::to_string(x) + " above prime limit");
    return static_cast<std::size_t>(std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
  }
  std::size_t index_of(u64 p) const {
    auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
    if (it == primes_.end() || *it != p) throw std::out_of_range("SystemData: not a tabulated prime");
    return static_cast<std::size_t>(it - primes_.begin());
  }

  unsigned rho_factor(std::size_t h, std::size_t i) const { return rho_h_[h][i]; }
  /// rho_Q(p) = rho_{Q*}(p).
  unsigned rho_q(std::size_t i) const { return rho_q_[i]; }
  bool divides_dstar(std::size_t i) const { return in_dstar_[i]; }

  /// rho-hat(p^nu) / p^(max nu + 1).
  Rational rho_hat_density(std::size_t i, std::span<const unsigned> nu) const {
    const u64 p = primes_[i];
    unsigned mx = 0, nonzero = 0;
    std::size_t which = 0;
    for (std::size_t h = 0; h < nu.size(); ++h) {
      mx = std::max(mx, nu[h]);
      if (nu[h]) {
        ++nonzero;
        which = h;
      }
    }
    if (nonzero == 0) return Rational(1);
    if (!in_dstar_[i]) {
      if (nonzero > 1) return Rational(0);
      return Rational(Int(rho_h_[which][i]) * Int(p - 1), ipow(p, mx + 1));
    }
    auto key = std::make_pair(p, std::vector<unsigned>(nu.begin(), nu.end()));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Rational v(count_exact_valuations(sys_.factors(), nu, p), ipow(p, mx + 1));
    memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  FactoredSystem sys_;
  u64 limit_;
  std::vector<u64> primes_;
  std::vector<std::vector<unsigned>> rho_h_;
  std::vector<unsigned> rho_q_;
  std::vector<bool> in_dstar_;
  mutable std::map<std::pair<u64, std::vector<unsigned>>, Rational> memo_;
};

// ---------------------------------------------------------------------------
// Multiplicative sums

namespace detail {

/// sum_{n <= x, p | n => p in primes} h(n) for multiplicative h given by
/// local(i, s) = h(primes[i]^s). Depth-first over factorizations; the
/// summation order is fixed.
template <class Scalar, class Local>
class MultiplicativeSum {
 public:
  MultiplicativeSum(u64 x, std::span<const u64> primes, Local& local) : x_(x), primes_(primes), local_(local) {}

  Scalar run() {
    total_ = 0;
    if (x_ >= 1) visit(1, Scalar(1), 0);
    return total_;
  }

 private:
  void visit(u64 n, const Scalar& val, std::size_t idx) {
    total_ += val;
    const u64 room = x_ / n;
    for (std::size_t i = idx; i < primes_.size(); ++i) {
      const u64 p = primes_[i];
      if (p > room) break;
      u64 pe = p;
      for (unsigned s = 1;; ++s) {
        const Scalar hv = local_(i, s);
        if (hv != 0) visit(n * pe, val * hv, i + 1);
        if (pe > room / p) break;
        pe *= p;
      }
    }
  }

  u64 x_;
  std::span<const u64> primes_;
  Local& local_;
  Scalar total_;
};

/// Memoizes local(i, s) computed as exact rationals.
template <class Scalar, class Fn>
class LocalTable {
 public:
  LocalTable(std::size_t nprimes, Fn fn) : memo_(nprimes), fn_(std::move(fn)) {}
  Scalar operator()(std::size_t i, unsigned s) {
    auto& row = memo_[i];
    while (row.size() < s) row.push_back(to_scalar<Scalar>(fn_(i, static_cast<unsigned>(row.size() + 1))));
    return row[s - 1];
  }

 private:
  std::vector<std::vector<Scalar>> memo_;
  Fn fn_;
};

template <class Scalar, class Fn>
Scalar multiplicative_sum(u64 x, std::span<const u64> primes, Fn fn) {
  LocalTable<Scalar, Fn> table(primes.size(), std::move(fn));
  MultiplicativeSum<Scalar, LocalTable<Scalar, Fn>> sum(x, primes, table);
  return sum.run();
}

inline std::vector<unsigned> unit_vector(std::size_t r, std::size_t h, unsigned s) {
  std::vector<unsigned> v(r, 0);
  v[h] = s;
  return v;
}

}  // namespace detail

/// sum_{|nu| = s} F~(p^nu) rho-hat(p^nu) / p^(max nu + 1): the value at p^s of
/// the multiplicative function N -> sum_{n_1..n_r = N} F~(n) rho-hat(n) / [n kappa(n)].
inline Rational majorant_local(const SystemData& d, const MultiplicativeFunction& Ft, std::size_t i, unsigned s) {
  const std::size_t r = d.system().r();
  const u64 p = d.primes()[i];
  Rational acc(0);
  if (!d.divides_dstar(i)) {
    for (std::size_t h = 0; h < r; ++h) {
      const unsigned rh = d.rho_factor(h, i);
      if (rh == 0) continue;
      acc += Ft.at(p, detail::unit_vector(r, h, s)) * Rational(Int(rh) * Int(p - 1), ipow(p, s + 1));
    }
    return acc;
  }
  for_each_composition(r, s, [&](std::span<const unsigned> nu) {
    const Rational dens = d.rho_hat_density(i, nu);
    if (dens != 0) acc += Ft.at(p, nu) * dens;
  });
  return acc;
}

/// prod_{g < p <= x} (1 - rho(p)/p), skipping primes for which skip(p) holds.
template <class Scalar, class Skip>
Scalar sifted_product(const SystemData& d, u64 x, Skip&& skip) {
  Scalar prod(1);
  const u64 g = static_cast<u64>(d.system().g());
  const std::size_t n = d.count_upto(x);
  for (std::size_t i = 0; i < n; ++i) {
    const u64 p = d.primes()[i];
    if (p <= g || skip(p)) continue;
    prod *= Scalar(1) - to_scalar<Scalar>(Rational(d.rho_q(i), p));
  }
  return prod;
}

template <class Scalar>
Scalar sifted_product(const SystemData& d, u64 x) {
  return sifted_product<Scalar>(d, x, [](u64) { return false; });
}

inline Value sifted_product(const SystemData& d, const Rational& x, Mode mode) {
  const u64 xf = floor_u64(x);
  return in_mode(mode, [&]<class S>() { return sifted_product<S>(d, xf); });
}

/// sum_{n_1..n_r <= x} F~(n) rho-hat(n) / lcm(n_h kappa(n_h)), optionally
/// restricted to P+(n_1..n_r) <= z.
template <class Scalar>
Scalar majorant_sum(const SystemData& d, const MultiplicativeFunction& Ft, u64 x, std::optional<u64> z = std::nullopt) {
  if (Ft.arity() != d.system().r()) throw std::invalid_argument("majorant_sum: function arity != r");
  const std::size_t n = d.count_upto(z ? std::min(x, *z) : x);
  auto fn = [&](std::size_t i, unsigned s) { return majorant_local(d, Ft, i, s); };
  return detail::multiplicative_sum<Scalar>(x, std::span<const u64>(d.primes().data(), n), fn);
}

inline Value majorant_sum(const SystemData& d, const MultiplicativeFunction& Ft, const Rational& x, Mode mode) {
  const u64 xf = floor_u64(x);
  return in_mode(mode, [&]<class S>() { return majorant_sum<S>(d, Ft, xf); });
}

/// Coprime-restricted sum: tuples with (n_1..n_r, D*) = 1 and pairwise
/// coprime, weighted by F~(n) prod_h rho_{R_h}(n_h) / n_h.
template <class Scalar>
Scalar majorant_sum_coprime(const SystemData& d, const MultiplicativeFunction& Ft, u64 x) {
  const std::size_t r = d.system().r();
  const std::size_t n = d.count_upto(x);
  auto fn = [&](std::size_t i, unsigned s) {
    Rational acc(0);
    if (d.divides_dstar(i)) return acc;
    const u64 p = d.primes()[i];
    // p outside D*: rho_{R_h}(p^s) = rho_{R_h}(p)
    for (std::size_t h = 0; h < r; ++h) {
      const unsigned rh = d.rho_factor(h, i);
      if (rh) acc += Ft.at(p, detail::unit_vector(r, h, s)) * Rational(Int(rh), ipow(p, s));
    }
    return acc;
  };
  return detail::multiplicative_sum<Scalar>(x, std::span<const u64>(d.primes().data(), n), fn);
}

// ---------------------------------------------------------------------------
// Discriminant factors

/// Delta_{D*} = prod_{p | D*} (1 + sum' over nu_h <= deg R_h of
/// G~(p^nu) rho-hat(p^nu) / p^(max nu + 1)); the all-zero tuple is the "1".
inline Rational delta_Dstar(const FactoredSystem& sys, const MultiplicativeFunction& Gt) {
  if (Gt.arity() != sys.r()) throw std::invalid_argument("delta_Dstar: function arity != r");
  Rational prod(1);
  const std::size_t r = sys.r();
  for (u64 p : sys.disc_star_primes()) {
    Rational local(1);
    std::vector<unsigned> nu(r, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t h) {
      if (h == r) {
        unsigned mx = 0;
        for (unsigned v : nu) mx = std::max(mx, v);
        if (mx == 0) return;
        const Int cnt = count_exact_valuations(sys.factors(), nu, p);
        if (cnt != 0) local += Gt.at(p, nu) * Rational(cnt, ipow(p, mx + 1));
        return;
      }
      for (unsigned v = 0; v <= static_cast<unsigned>(sys.factor(h).degree()); ++v) {
        nu[h] = v;
        rec(h + 1);
      }
    };
    rec(0);
    prod *= local;
  }
  return prod;
}

/// C = g max_{p | D*} sum over nu_h <= deg R_h of G~(p^nu) (all-zero tuple
/// included), and the upper bound prod_{p | D*} (1 + 1/p)^C.
struct DeltaDstarBound {
  Rational C;
  Value bound;
};

inline DeltaDstarBound delta_Dstar_upper(const FactoredSystem& sys, const MultiplicativeFunction& Gt) {
  const std::size_t r = sys.r();
  const auto primes = sys.disc_star_primes();
  Rational best(0);
  for (u64 p : primes) {
    Rational s(0);
    std::vector<unsigned> nu(r, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t h) {
      if (h == r) {
        s += Gt.at(p, nu);
        return;
      }
      for (unsigned v = 0; v <= static_cast<unsigned>(sys.factor(h).degree()); ++v) {
        nu[h] = v;
        rec(h + 1);
      }
    };
    rec(0);
    best = std::max(best, s);
  }
  const Rational C = Rational(sys.g()) * best;
  if (denominator(C) == 1) {
    const unsigned e = numerator(C).convert_to<unsigned>();
    Rational b(1);
    for (u64 p : primes) b *= pow(Rational(p + 1, p), e);
    return {C, Value::of(b)};
  }
  Real b(1);
  for (u64 p : primes) b *= exp(Real(C) * log(Real(p + 1) / Real(p)));
  return {C, Value::of(b)};
}

/// (Delta_D, Delta~_D) for k = 1.
inline std::pair<Rational, Rational> delta_D_k1(const IntPoly& q, const MultiplicativeFunction& f) {
  if (f.arity() != 1) throw std::invalid_argument("delta_D_k1: f must be univariate");
  if (!is_primitive(q)) throw std::domain_error("delta_D_k1: Q must be primitive");
  const Int D = discriminant(q);
  if (D == 0) throw std::domain_error("delta_D_k1: Disc(Q) = 0 (use delta_Dstar)");
  const unsigned g = static_cast<unsigned>(q.degree());
  Rational delta(1), tilde(1);
  for (const auto& t : factor(Int(abs(D)))) {
    const u64 p = t.p;
    Rational a(1), b(1);
    for (unsigned nu = 1; nu <= g; ++nu) {
      const std::vector<unsigned> v{nu};
      const Rational fv = f.at(p, v);
      const Rational r0(rho_prime_power(q, p, nu), ipow(p, nu));
      const Rational r1(rho_prime_power(q, p, nu + 1), ipow(p, nu + 1));
      a += fv * (r0 - r1);
      b += fv * r0;
    }
    delta *= a;
    tilde *= b;
  }
  return {delta, tilde};
}

/// prod_{p | D} (1 + sum' over nu_j <= deg Q_j of F(p^nu) #{n mod p^(max+1) :
/// p^nu_j || Q_j(n)} / p^(max+1)).
inline Rational delta_D_general(const FactoredSystem& sys, const MultiplicativeFunction& F) {
  if (F.arity() != sys.k()) throw std::invalid_argument("delta_D_general: function arity != k");
  const auto primes = sys.disc_primes();
  const std::size_t k = sys.k();
  Rational prod(1);
  for (u64 p : primes) {
    Rational local(1);
    std::vector<unsigned> nu(k, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t j) {
      if (j == k) {
        unsigned mx = 0;
        for (unsigned v : nu) mx = std::max(mx, v);
        if (mx == 0) return;
        const Int cnt = count_exact_valuations(sys.components(), nu, p);
        if (cnt != 0) local += F.at(p, nu) * Rational(cnt, ipow(p, mx + 1));
        return;
      }
      for (unsigned v = 0; v <= static_cast<unsigned>(sys.components()[j].degree()); ++v) {
        nu[j] = v;
        rec(j + 1);
      }
    };
    rec(0);
    prod *= local;
  }
  return prod;
}

// ---------------------------------------------------------------------------
// Assembled right-hand sides

struct Rhs {
  Value value;
  /// Discriminant factor entering the bound (1 when none does).
  Value delta{Value::of(Rational(1))};
};

/// y * sifted_product(x) * majorant_sum(F~, x).
inline Rhs rhs_main(const SystemData& d, const MultiplicativeFunction& F, const BoundParams& params, Mode mode) {
  require_valid(params, d.system());
  const auto pf = pushforward(F, d.system());
  const u64 x = floor_u64(params.x);
  return {in_mode(mode, [&]<class S>() {
    return to_scalar<S>(params.y) * sifted_product<S>(d, x) * majorant_sum<S>(d, pf.function(), x);
  })};
}

inline Rhs rhs_cor_disc(const SystemData& d, const MultiplicativeFunction& F, const BoundParams& params, Mode mode) {
  require_valid(params, d.system());
  const auto pf = pushforward(F, d.system());
  const u64 x = floor_u64(params.x);
  const Rational dd = delta_Dstar(d.system(), minimal_G(pf.function()));
  return {in_mode(mode,
                  [&]<class S>() {
                    return to_scalar<S>(dd) * to_scalar<S>(params.y) * sifted_product<S>(d, x) *
                           majorant_sum_coprime<S>(d, pf.function(), x);
                  }),
          Value::of(dd)};
}

/// prod_{p <= x, p not | D*} prod_h (1 + G~^(h)(p) rho_{R_h}(p) / p).
template <class Scalar>
Scalar cor_mult_product(const SystemData& d, const MultiplicativeFunction& Gt, u64 x) {
  const std::size_t r = d.system().r();
  Scalar prod(1);
  const std::size_t n = d.count_upto(x);
  for (std::size_t i = 0; i < n; ++i) {
    if (d.divides_dstar(i)) continue;
    const u64 p = d.primes()[i];
    for (std::size_t h = 0; h < r; ++h) {
      const unsigned rh = d.rho_factor(h, i);
      if (rh == 0) continue;
      prod *= Scalar(1) + to_scalar<Scalar>(Gt.at(p, detail::unit_vector(r, h, 1)) * Rational(rh, p));
    }
  }
  return prod;
}

inline Rhs rhs_cor_mult(const SystemData& d, const MultiplicativeFunction& F, const BoundParams& params, Mode mode) {
  require_valid(params, d.system());
  const auto G = minimal_G(pushforward(F, d.system()).function());
  const u64 x = floor_u64(params.x);
  const Rational dd = delta_Dstar(d.system(), G);
  return {in_mode(mode,
                  [&]<class S>() {
                    return to_scalar<S>(dd) * to_scalar<S>(params.y) * sifted_product<S>(d, x) *
                           cor_mult_product<S>(d, G, x);
                  }),
          Value::of(dd)};
}

/// Delta_D y prod_{g < p <= x} (1 - rho(p)/p) exp(sum_{p <= x, p not | D} f(p)/p), k = 1.
inline Rhs rhs_shiu(const SystemData& d, const MultiplicativeFunction& f, const BoundParams& params, Mode mode) {
  const auto& sys = d.system();
  if (sys.k() != 1 || sys.r() != 1 || sys.exponents()[0][0] != 1)
    throw ValidationError("rhs_shiu: needs a single squarefree polynomial Q");
  require_valid(params, sys);
  const u64 x = floor_u64(params.x);
  const Rational dD = delta_D_k1(sys.q(), f).first;
  const Int D = abs(sys.disc());
  Real esum(0);
  const std::size_t n = d.count_upto(x);
  for (std::size_t i = 0; i < n; ++i) {
    const u64 p = d.primes()[i];
    if (D % p == 0) continue;
    esum += Real(f.at(p, {1u})) / Real(p);
  }
  Value base = in_mode(mode, [&]<class S>() { return to_scalar<S>(dD) * to_scalar<S>(params.y) * sifted_product<S>(d, x); });
  return {base * exp(esum), Value::of(dD)};
}

/// prod_{p <= x} (1 + |l1(p)|/p)(1 + |l2(p)|/p).
inline Value holowinsky_product(const MultiplicativeFunction& l1, const MultiplicativeFunction& l2, u64 x, Mode mode) {
  const auto primes = primes_up_to(x);
  return in_mode(mode, [&]<class S>() {
    S prod(1);
    for (u64 p : primes) {
      const Rational a = abs(l1.at(p, {1u})), b = abs(l2.at(p, {1u}));
      prod *= to_scalar<S>((1 + a / p) * (1 + b / p));
    }
    return prod;
  });
}

/// The shifted pair (X, X + l).
inline FactoredSystem shifted_pair(long long l) {
  if (l == 0) throw std::invalid_argument("shifted pair needs l != 0 (repeated factor)");
  return FactoredSystem::identity({IntPoly::x(), IntPoly{l, 1}});
}

/// Delta(l) = delta_D_general for (X, X + l) with F = |l1| (x) |l2|.
inline Rational delta_shifted(long long l, const MultiplicativeFunction& l1, const MultiplicativeFunction& l2) {
  auto sys = shifted_pair(l);
  MultiplicativeFunction F(
      2, [l1, l2](u64 p, std::span<const unsigned> nu) { return abs(l1.at(p, {nu[0]})) * abs(l2.at(p, {nu[1]})); },
      ClassBudget{l1.budget().A * l2.budget().A, l1.budget().B * l2.budget().B,
                  std::max(l1.budget().eps, l2.budget().eps)},
      std::nullopt, l1.name() + "x" + l2.name());
  return delta_D_general(sys, F);
}

/// Delta(l) x (log x)^-2 prod_{p <= x} (1 + |l1(p)|/p)(1 + |l2(p)|/p).
/// `product` may carry a precomputed holowinsky_product for the same x.
inline Rhs rhs_holowinsky(long long l, const MultiplicativeFunction& l1, const MultiplicativeFunction& l2,
                          const Rational& x, Mode mode, const std::optional<Value>& product = std::nullopt) {
  if (l == 0) throw ValidationError("rhs_holowinsky: l = 0 gives a repeated factor");
  if (x < 2) throw ValidationError("rhs_holowinsky: x must be >= 2");
  if (Rational(l < 0 ? -l : l) > x) throw ValidationError("rhs_holowinsky: need 1 <= |l| <= x");
  const u64 xf = floor_u64(x);
  const Rational dl = delta_shifted(l, l1, l2);
  const Value prod = product ? *product : holowinsky_product(l1, l2, xf, mode);
  const Real lx = log_real(x);
  const Value core = Value::of(dl) * Value::of(x) * prod;
  return {core * (1 / (lx * lx)), Value::of(dl)};
}

/// (Q(0)/phi(Q(0))) Delta_{D*} (y / log x) sifted_product majorant_sum.
inline Rhs rhs_primes(const SystemData& d, const MultiplicativeFunction& F, const BoundParams& params, Mode mode) {
  const Int q0 = abs(evaluate(d.system().q(), Int(0)));
  if (q0 == 0) throw ValidationError("rhs_primes: requires Q(0) != 0");
  require_valid(params, d.system());
  const auto pf = pushforward(F, d.system());
  const u64 x = floor_u64(params.x);
  Rational ratio(1);
  for (const auto& t : factor(q0)) ratio *= Rational(t.p, t.p - 1);
  const Rational dd = delta_Dstar(d.system(), minimal_G(pf.function()));
  Value base = in_mode(mode, [&]<class S>() {
    return to_scalar<S>(ratio) * to_scalar<S>(dd) * to_scalar<S>(params.y) * sifted_product<S>(d, x) *
           majorant_sum<S>(d, pf.function(), x);
  });
  return {base * (1 / log_real(params.x)), Value::of(dd)};
}

}  // namespace majorant

#endif  // MAJORANT_BOUNDS_HPP
