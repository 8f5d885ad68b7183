#ifndef MAJORANT_MFUNC_HPP
#define MAJORANT_MFUNC_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "majorant/arith.hpp"
#include "majorant/numeric.hpp"
#include "majorant/polyarith.hpp"

namespace majorant {

/// Growth budget of the class M_k(A, B, eps): e(p, nu) <= min(A^s, B p^(eps s)), s = |nu|.
struct ClassBudget {
  Rational A{1};
  Real B{1};
  Real eps{Real(1) / 100};
};

/// Calls fn(nu) for every nu in N^k with |nu| = s, lexicographically decreasing in nu[0].
template <class Fn>
void for_each_composition(std::size_t k, unsigned s, Fn&& fn) {
  std::vector<unsigned> nu(k, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == k) {
      nu[i] = left;
      fn(std::span<const unsigned>(nu));
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      nu[i] = v;
      rec(i + 1, left - v);
    }
  };
  if (k == 0) {
    if (s == 0) fn(std::span<const unsigned>(nu));
    return;
  }
  rec(0, s);
}

inline unsigned total(std::span<const unsigned> nu) {
  unsigned s = 0;
  for (unsigned v : nu) s += v;
  return s;
}

/// min(A^s, B p^(eps s)).
inline Real G_cap(const ClassBudget& b, u64 p, unsigned s) {
  const Real a = Real(pow(b.A, s));
  const Real c = b.B * exp(b.eps * Real(s) * log(Real(p)));
  return a < c ? a : c;
}

using PrimePowerEvaluator = std::function<Rational(u64 p, std::span<const unsigned> nu)>;

/// Non-negative multiplicative function of k variables, determined by its
/// values at prime powers: F(n_1..n_k) = prod_p e(p, v_p(n_1), .., v_p(n_k)).
class MultiplicativeFunction {
 public:
  MultiplicativeFunction(std::size_t arity, PrimePowerEvaluator e, ClassBudget budget,
                         std::optional<Rational> eta = std::nullopt, std::string name = "custom")
      : k_(arity), e_(std::move(e)), budget_(std::move(budget)), eta_(std::move(eta)), name_(std::move(name)) {
    if (k_ == 0) throw std::invalid_argument("MultiplicativeFunction: arity must be positive");
    if (budget_.A < 1) throw std::invalid_argument("MultiplicativeFunction: A must be >= 1");
    if (budget_.B < 1) throw std::invalid_argument("MultiplicativeFunction: B must be >= 1");
    if (!(budget_.eps > 0)) throw std::invalid_argument("MultiplicativeFunction: eps must be positive");
    if (eta_ && (*eta_ <= 0 || *eta_ >= 1)) throw std::invalid_argument("MultiplicativeFunction: eta must lie in (0,1)");
    const std::vector<unsigned> zero(k_, 0);
    for (u64 p : {2ull, 3ull, 5ull, 7ull})
      if (e_(p, zero) != 1) throw std::invalid_argument("MultiplicativeFunction: normalization F(1,...,1) = 1 violated");
  }

  std::size_t arity() const { return k_; }
  const ClassBudget& budget() const { return budget_; }
  const std::optional<Rational>& eta() const { return eta_; }
  const std::string& name() const { return name_; }
  const PrimePowerEvaluator& evaluator() const { return e_; }

  Rational at(u64 p, std::span<const unsigned> nu) const {
    if (nu.size() != k_) throw std::invalid_argument("MultiplicativeFunction: exponent tuple has wrong length");
    Rational v = e_(p, nu);
    if (v < 0) throw std::domain_error("MultiplicativeFunction '" + name_ + "' returned a negative value");
    return v;
  }
  Rational at(u64 p, std::initializer_list<unsigned> nu) const {
    return at(p, std::span<const unsigned>(nu.begin(), nu.size()));
  }

 private:
  std::size_t k_;
  PrimePowerEvaluator e_;
  ClassBudget budget_;
  std::optional<Rational> eta_;
  std::string name_;
};

/// F(n_1..n_k) from the prime-power lists of the arguments (increasing primes).
inline Rational eval_terms(const MultiplicativeFunction& F, std::span<const std::span<const PrimePower>> rows) {
  if (rows.size() != F.arity()) throw std::invalid_argument("eval: argument count != arity");
  std::vector<std::size_t> pos(rows.size(), 0);
  std::vector<unsigned> nu(rows.size());
  Rational value(1);
  while (true) {
    u64 p = 0;
    bool any = false;
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (pos[j] < rows[j].size()) {
        const u64 q = rows[j][pos[j]].p;
        if (!any || q < p) p = q;
        any = true;
      }
    if (!any) break;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      nu[j] = 0;
      if (pos[j] < rows[j].size() && rows[j][pos[j]].p == p) nu[j] = rows[j][pos[j]++].e;
    }
    value *= F.at(p, nu);
    if (value == 0) break;
  }
  return value;
}

/// F(n_1..n_k) from factorizations of the arguments.
inline Rational eval_factored(const MultiplicativeFunction& F, std::span<const Factorization> fs) {
  std::vector<std::span<const PrimePower>> rows;
  rows.reserve(fs.size());
  for (const auto& f : fs) rows.emplace_back(f.terms());
  return eval_terms(F, rows);
}

inline Rational eval(const MultiplicativeFunction& F, std::span<const u64> n) {
  std::vector<Factorization> fs;
  fs.reserve(n.size());
  for (u64 v : n) {
    if (v == 0) throw std::domain_error("eval: arguments must be positive");
    fs.push_back(factor(v));
  }
  return eval_factored(F, fs);
}

inline Rational eval(const MultiplicativeFunction& F, std::initializer_list<u64> n) {
  return eval(F, std::span<const u64>(n.begin(), n.size()));
}

// ---------------------------------------------------------------------------
// Built-in functions

/// Budget defaults for the built-ins.
inline constexpr double kDefaultEps = 0.01;
inline constexpr double kDefaultB = 1e6;

inline Int binomial(unsigned n, unsigned r) {
  if (r > n) return Int(0);
  Int b(1);
  for (unsigned i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

inline MultiplicativeFunction one_function(std::size_t k) {
  return MultiplicativeFunction(
      k, [](u64, std::span<const unsigned>) { return Rational(1); }, ClassBudget{1, 1, Real(kDefaultEps)},
      Rational(1, 2), "one");
}

/// tau_m(n_1) ... tau_m(n_k).
inline MultiplicativeFunction tau_function(std::size_t k, unsigned m = 2) {
  if (m < 1) throw std::invalid_argument("tau_m: m must be >= 1");
  auto e = [m](u64, std::span<const unsigned> nu) {
    Int v(1);
    for (unsigned x : nu) v *= binomial(x + m - 1, m - 1);
    return Rational(v);
  };
  return MultiplicativeFunction(k, e, ClassBudget{Rational(m), Real(kDefaultB), Real(kDefaultEps)}, Rational(1, 2),
                                m == 2 ? "tau" : "tau_m:" + std::to_string(m));
}

/// A^Omega capped: e(p, nu) = min(A^s, floor(B p^(eps s))).
inline MultiplicativeFunction pow_function(std::size_t k, const Rational& A, ClassBudget budget) {
  budget.A = A;
  auto e = [A, budget](u64 p, std::span<const unsigned> nu) {
    const unsigned s = total(nu);
    if (s == 0) return Rational(1);
    const Rational a = pow(A, s);
    const Real cap = budget.B * exp(budget.eps * Real(s) * log(Real(p)));
    if (Real(a) <= cap) return a;
    return Rational(Int(floor(cap).convert_to<Int>()));
  };
  return MultiplicativeFunction(k, e, budget, std::nullopt, "powA:" + format_rational(A));
}

namespace detail {

inline u64 splitmix(u64 x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Seeded random member of M_k(A, B, eps) with lower parameter eta:
/// e(p, nu) drawn in [eta^s, min(A^s, B p^(eps s))], dyadic with 32 fractional bits.
inline MultiplicativeFunction random_function(std::size_t k, u64 seed, ClassBudget budget, Rational eta) {
  auto e = [seed, budget, eta](u64 p, std::span<const unsigned> nu) {
    const unsigned s = total(nu);
    if (s == 0) return Rational(1);
    u64 h = detail::splitmix(seed ^ detail::splitmix(p));
    for (unsigned v : nu) h = detail::splitmix(h ^ v);
    const Rational lo = pow(eta, s);
    const Real hi = G_cap(budget, p, s);
    const Real u = Real(h >> 32) / Real(4294967296.0);
    const Int steps = floor((hi - Real(lo)) * u * Real(4294967296.0)).convert_to<Int>();
    return lo + Rational(steps, Int(4294967296ull));
  };
  return MultiplicativeFunction(k, e, budget, eta, "random:" + std::to_string(seed));
}

/// Builds a builtin from its config name: one | tau | tau_m:m | powA:A | random:seed.
/// `budget` overrides the builtin's default where given.
inline MultiplicativeFunction make_builtin(const std::string& text, std::size_t k,
                                           std::optional<ClassBudget> budget = std::nullopt,
                                           std::optional<Rational> eta = std::nullopt) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto with = [&](MultiplicativeFunction f) {
    if (!budget && !eta) return f;
    return MultiplicativeFunction(k, f.evaluator(), budget.value_or(f.budget()), eta ? eta : f.eta(), f.name());
  };
  if (head == "one" && arg.empty()) return with(one_function(k));
  if (head == "tau" && arg.empty()) return with(tau_function(k, 2));
  if (head == "tau_m") {
    if (arg.empty()) throw std::invalid_argument("tau_m needs a parameter, e.g. tau_m:3");
    return with(tau_function(k, static_cast<unsigned>(std::stoul(arg))));
  }
  if (head == "powA") {
    if (arg.empty()) throw std::invalid_argument("powA needs a parameter, e.g. powA:2");
    ClassBudget b = budget.value_or(ClassBudget{1, Real(kDefaultB), Real(kDefaultEps)});
    return pow_function(k, parse_rational(arg), b);
  }
  if (head == "random") {
    if (arg.empty()) throw std::invalid_argument("random needs a seed, e.g. random:7");
    ClassBudget b = budget.value_or(ClassBudget{2, Real(kDefaultB), Real(kDefaultEps)});
    return random_function(k, std::stoull(arg), b, eta.value_or(Rational(1, 2)));
  }
  throw std::invalid_argument("unknown function '" + text + "' (expected one|tau|tau_m:m|powA:A|random:seed)");
}

// ---------------------------------------------------------------------------
// Pushforward F -> F~

/// F~(n_1..n_r) = F(prod_h n_h^gamma[0][h], .., prod_h n_h^gamma[k-1][h]),
/// in the class M_r(A^g, B, g eps).
class PushforwardFunction {
 public:
  PushforwardFunction(MultiplicativeFunction base, std::vector<std::vector<unsigned>> gamma, unsigned g)
      : base_(std::move(base)), gamma_(std::move(gamma)), tilde_(make(base_, gamma_, g)) {}

  const MultiplicativeFunction& base() const { return base_; }
  const std::vector<std::vector<unsigned>>& gamma() const { return gamma_; }
  std::size_t arity() const { return tilde_.arity(); }
  const MultiplicativeFunction& function() const { return tilde_; }
  Rational operator()(std::span<const u64> n) const { return eval(tilde_, n); }

 private:
  static MultiplicativeFunction make(const MultiplicativeFunction& F, const std::vector<std::vector<unsigned>>& gamma,
                                     unsigned g) {
    if (gamma.size() != F.arity()) throw std::invalid_argument("pushforward: gamma must have k rows");
    const std::size_t r = gamma.front().size();
    for (const auto& row : gamma)
      if (row.size() != r) throw std::invalid_argument("pushforward: ragged gamma");
    auto e = [F, gamma](u64 p, std::span<const unsigned> mu) {
      std::vector<unsigned> nu(gamma.size(), 0);
      for (std::size_t j = 0; j < gamma.size(); ++j)
        for (std::size_t h = 0; h < mu.size(); ++h) nu[j] += gamma[j][h] * mu[h];
      return F.at(p, nu);
    };
    const ClassBudget& b = F.budget();
    ClassBudget nb{pow(b.A, g), b.B, b.eps * g};
    std::optional<Rational> eta;
    if (F.eta()) eta = pow(*F.eta(), g);
    return MultiplicativeFunction(r, e, nb, eta, F.name() + "~");
  }

  MultiplicativeFunction base_;
  std::vector<std::vector<unsigned>> gamma_;
  MultiplicativeFunction tilde_;
};

/// Smallest g for which the budget statement holds: the largest column sum of gamma.
inline unsigned gamma_weight(const std::vector<std::vector<unsigned>>& gamma) {
  unsigned g = 1;
  if (gamma.empty()) return g;
  for (std::size_t h = 0; h < gamma.front().size(); ++h) {
    unsigned c = 0;
    for (const auto& row : gamma) c += row[h];
    g = std::max(g, c);
  }
  return g;
}

inline PushforwardFunction pushforward(const MultiplicativeFunction& F, std::vector<std::vector<unsigned>> gamma) {
  const unsigned g = gamma_weight(gamma);
  return PushforwardFunction(F, std::move(gamma), g);
}

/// Pushforward along a system, with budget exponent g = deg Q.
inline PushforwardFunction pushforward(const MultiplicativeFunction& F, const FactoredSystem& sys) {
  return PushforwardFunction(F, sys.exponents(), static_cast<unsigned>(sys.g()));
}

// ---------------------------------------------------------------------------
// Class checks

/// Deterministic sample grid: primes p <= max_prime, 1 <= |nu| <= max_total.
struct SampleGrid {
  u64 max_prime = 97;
  unsigned max_total = 12;
};

struct GridViolation {
  u64 p = 0;
  std::vector<unsigned> nu;
  Rational value;
  Real bound;
};

struct CheckReport {
  bool pass = true;
  std::size_t checked = 0;
  std::optional<GridViolation> violation;

  std::string describe() const {
    if (pass) return "pass (" + std::to_string(checked) + " prime powers)";
    std::string s = "fail at p=" + std::to_string(violation->p) + ", nu=(";
    for (std::size_t i = 0; i < violation->nu.size(); ++i) s += (i ? "," : "") + std::to_string(violation->nu[i]);
    return s + "): value " + format_rational(violation->value) + " vs bound " + format_real(violation->bound, 12);
  }
};

namespace detail {

template <class Check>
CheckReport scan_grid(const MultiplicativeFunction& F, const SampleGrid& grid, Check&& check) {
  CheckReport rep;
  for (u64 p : primes_up_to(grid.max_prime)) {
    for (unsigned s = 1; s <= grid.max_total && rep.pass; ++s) {
      for_each_composition(F.arity(), s, [&](std::span<const unsigned> nu) {
        if (!rep.pass) return;
        ++rep.checked;
        const Rational v = F.at(p, nu);
        Real bound;
        if (!check(p, s, v, bound)) {
          rep.pass = false;
          rep.violation = GridViolation{p, std::vector<unsigned>(nu.begin(), nu.end()), v, bound};
        }
      });
    }
    if (!rep.pass) break;
  }
  return rep;
}

}  // namespace detail

/// e(p, nu) <= min(A^s, B p^(eps s)) on the grid. The A-part is compared
/// exactly; the B-part in binary floating point with relative slack 1e-30.
inline CheckReport check_membership(const MultiplicativeFunction& F, const SampleGrid& grid = {}) {
  const ClassBudget& b = F.budget();
  return detail::scan_grid(F, grid, [&](u64 p, unsigned s, const Rational& v, Real& bound) {
    const Rational a = pow(b.A, s);
    const Real c = b.B * exp(b.eps * Real(s) * log(Real(p)));
    bound = Real(a) < c ? Real(a) : c;
    if (v > a) return false;
    return Real(v) <= c * (1 + Real(1e-30));
  });
}

/// e(p, nu) >= eta^s on the grid.
inline CheckReport check_lower(const MultiplicativeFunction& F, const Rational& eta, const SampleGrid& grid = {}) {
  if (eta <= 0 || eta >= 1) throw std::invalid_argument("check_lower: eta must lie in (0,1)");
  return detail::scan_grid(F, grid, [&](u64, unsigned s, const Rational& v, Real& bound) {
    const Rational lo = pow(eta, s);
    bound = Real(lo);
    return v >= lo;
  });
}

/// G = F for multiplicative F with strictly positive prime-power values.
inline MultiplicativeFunction minimal_G(const MultiplicativeFunction& F, const SampleGrid& grid = {}) {
  auto rep = detail::scan_grid(F, grid, [](u64, unsigned, const Rational& v, Real& bound) {
    bound = 0;
    return v > 0;
  });
  if (!rep.pass)
    throw std::domain_error("minimal_G unsupported: F vanishes at a prime power (" + rep.describe() +
                            "); G = F needs strictly positive values");
  return F;
}

}  // namespace majorant

#endif  // MAJORANT_MFUNC_HPP
