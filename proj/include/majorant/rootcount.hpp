#ifndef MAJORANT_ROOTCOUNT_HPP
#define MAJORANT_ROOTCOUNT_HPP

#include <algorithm>
#include <iterator>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "majorant/arith.hpp"
#include "majorant/numeric.hpp"
#include "majorant/polyarith.hpp"

namespace majorant {

/// Default modulus bound for the exhaustive-scan oracles.
inline constexpr u64 kDefaultScanBound = 10'000'000;

namespace fp {

// Dense polynomials over F_p, low degree first, no trailing zeros.
using Poly = std::vector<u64>;

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline u64 inv(u64 a, u64 p) { return detail::powmod(a, p - 2, p); }

inline Poly reduce(const IntPoly& q, u64 p) {
  Poly r = reduce_coeffs(q, p);
  trim(r);
  return r;
}

inline Poly mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + detail::mulmod(a[i], b[j], p)) % p;
  trim(r);
  return r;
}

inline Poly mod(Poly a, const Poly& m, u64 p) {
  if (m.empty()) throw std::domain_error("fp::mod by zero");
  const std::size_t dm = m.size() - 1;
  const u64 linv = inv(m.back(), p);
  while (a.size() > dm && !a.empty()) {
    const u64 c = detail::mulmod(a.back(), linv, p);
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + p - detail::mulmod(c, m[i], p)) % p;
    trim(a);
  }
  return a;
}

inline Poly gcd(Poly a, Poly b, u64 p) {
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const u64 li = inv(a.back(), p);
    for (auto& c : a) c = detail::mulmod(c, li, p);
  }
  return a;
}

/// base^e mod m.
inline Poly powmod(Poly base, u64 e, const Poly& m, u64 p) {
  Poly r{1};
  base = mod(base, m, p);
  while (e) {
    if (e & 1) r = mod(mul(r, base, p), m, p);
    e >>= 1;
    if (e) base = mod(mul(base, base, p), m, p);
  }
  return r;
}

inline Poly sub(Poly a, const Poly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

/// gcd(X^p - X, f): the product of the distinct linear factors of f.
inline Poly linear_part(const Poly& f, u64 p) {
  Poly xp = powmod(Poly{0, 1}, p, f, p);
  return gcd(f, sub(xp, Poly{0, 1}, p), p);
}

// Splits a monic squarefree product of distinct linear factors into roots.
inline void split_roots(const Poly& g, u64 p, u64& seed, std::vector<u64>& out) {
  const std::size_t d = g.size() - 1;
  if (d == 0) return;
  if (d == 1) {
    out.push_back((p - g[0]) % p);
    return;
  }
  while (true) {
    const u64 delta = seed++ % p;
    Poly h = powmod(Poly{delta, 1}, (p - 1) / 2, g, p);
    h = sub(h, Poly{1}, p);
    Poly f = gcd(g, h, p);
    const std::size_t df = f.empty() ? 0 : f.size() - 1;
    if (df > 0 && df < d) {
      split_roots(f, p, seed, out);
      Poly rest = g;
      // exact division g / f
      Poly q(d - df + 1, 0);
      Poly r = g;
      for (std::size_t k = d + 1; k-- > df;) {
        const u64 c = r[k];
        q[k - df] = c;
        for (std::size_t i = 0; i <= df; ++i) r[k - df + i] = (r[k - df + i] + p - detail::mulmod(c, f[i], p)) % p;
      }
      trim(q);
      split_roots(q, p, seed, out);
      return;
    }
  }
}

}  // namespace fp

inline bool primitive_at(const IntPoly& poly, u64 p) {
  for (const auto& c : poly.coeffs())
    if (c % p != 0) return true;
  return false;
}

/// Roots of P modulo the prime p, sorted. Scans residues for small p and
/// splits gcd(X^p - X, P) otherwise. P must not vanish identically mod p.
inline std::vector<u64> roots_mod_p(const IntPoly& poly, u64 p) {
  std::vector<u64> out;
  if (p < 64) {
    if (!primitive_at(poly, p)) throw std::domain_error("polynomial not primitive at p=" + std::to_string(p));
    auto red = reduce_coeffs(poly, p);
    for (u64 n = 0; n < p; ++n)
      if (evaluate_mod(red, n, p) == 0) out.push_back(n);
    return out;
  }
  fp::Poly f = fp::reduce(poly, p);
  if (f.empty()) throw std::domain_error("polynomial not primitive at p=" + std::to_string(p));
  if (f.size() == 1) return out;
  fp::Poly g = fp::linear_part(f, p);
  u64 seed = 1;
  fp::split_roots(g, p, seed, out);
  std::sort(out.begin(), out.end());
  return out;
}

/// Number of distinct roots of P modulo the prime p.
inline u64 count_roots_mod_p(const IntPoly& poly, u64 p) {
  if (p < 64) return roots_mod_p(poly, p).size();
  fp::Poly f = fp::reduce(poly, p);
  if (f.empty()) throw std::domain_error("polynomial not primitive at p=" + std::to_string(p));
  if (f.size() == 1) return 0;
  return fp::linear_part(f, p).size() - 1;
}

// ---------------------------------------------------------------------------
// Lifting tree for rho_P(p^nu)

namespace detail {

// Roots mod p^nu lying above the root r mod p^j.
inline Int lift_count(const IntPoly& poly, const IntPoly& dpoly, u64 p, const Int& r, unsigned j, unsigned nu) {
  if (j == nu) return Int(1);
  const Int pj = ipow(p, j);
  const Int val = evaluate(poly, r);
  if (mod_u64(evaluate(dpoly, r), p) != 0) return Int(1);  // Hensel: unique lift at every level
  if (mod_u64(val / pj, p) != 0) return Int(0);
  Int total(0);
  for (u64 t = 0; t < p; ++t) total += lift_count(poly, dpoly, p, r + Int(t) * pj, j + 1, nu);
  return total;
}

}  // namespace detail

/// rho_P(p^nu) through the lifting tree alone (roots mod p by search, then
/// branching 1, p or 0 by derivative and valuation).
inline Int rho_prime_power_lifting(const IntPoly& poly, u64 p, unsigned nu) {
  if (!primitive_at(poly, p)) throw std::domain_error("not primitive at p=" + std::to_string(p));
  if (nu == 0) return Int(1);
  const IntPoly dpoly = derivative(poly);
  Int total(0);
  for (u64 r : roots_mod_p(poly, p)) total += detail::lift_count(poly, dpoly, p, Int(r), 1, nu);
  return total;
}

/// rho_P(p^nu) = #{n mod p^nu : P(n) = 0 mod p^nu}. For p not dividing
/// Disc(P) every root is simple and rho(p^nu) = rho(p).
inline Int rho_prime_power(const IntPoly& poly, u64 p, unsigned nu) {
  if (!primitive_at(poly, p)) throw std::domain_error("not primitive at p=" + std::to_string(p));
  if (nu == 0) return Int(1);
  if (poly.degree() >= 1) {
    const Int d = discriminant(poly);
    if (d != 0 && d % p != 0) return Int(count_roots_mod_p(poly, p));
  }
  return rho_prime_power_lifting(poly, p, nu);
}

/// rho_P(n) = prod over p^nu || n of rho_P(p^nu).
inline Int rho(const IntPoly& poly, u64 n) {
  if (n == 0) throw std::domain_error("rho: modulus must be positive");
  Int r(1);
  for (const auto& t : factor(n)) {
    r *= rho_prime_power(poly, t.p, t.e);
    if (r == 0) break;
  }
  return r;
}

/// Exhaustive residue scan; modulus must not exceed `bound`.
inline u64 rho_oracle(const IntPoly& poly, u64 n, u64 bound = kDefaultScanBound) {
  if (n == 0) throw std::domain_error("rho_oracle: modulus must be positive");
  if (n > bound) throw std::range_error("rho_oracle: modulus " + std::to_string(n) + " above scan bound");
  auto red = reduce_coeffs(poly, n);
  u64 count = 0;
  for (u64 v = 0; v < n; ++v)
    if (evaluate_mod(red, v, n) == 0) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// Joint exact-valuation counts

namespace detail {

struct Lift {
  enum Kind { none, unique, all } kind = none;
  u64 t = 0;
  bool contains(u64 v) const { return kind == all || (kind == unique && t == v); }
};

struct ValuationTree {
  std::vector<const IntPoly*> polys;
  std::vector<IntPoly> derivs;
  std::vector<unsigned> nu;
  u64 p = 0;
  unsigned top = 0;  // max nu + 1

  Int bulk(unsigned level) const { return ipow(p, top - level); }

  // Residue r mod p^j; `pending` lists the polynomials with R(r) = 0 mod p^j
  // (valuation >= j), every other constrained polynomial already has its
  // exact valuation settled and matching.
  Int count(const Int& r, unsigned j, const std::vector<std::size_t>& pending) const {
    if (pending.empty()) return bulk(j);
    for (std::size_t h : pending)
      if (j > nu[h]) return Int(0);
    const Int pj = ipow(p, j);
    std::vector<Lift> lifts(pending.size());
    bool need_any = false;
    bool any_all = false;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const std::size_t h = pending[i];
      const Int val = evaluate(*polys[h], r);
      const u64 a = mod_u64(val / pj, p);
      const u64 d = mod_u64(evaluate(derivs[h], r), p);
      if (d != 0) {
        lifts[i] = {Lift::unique, detail::mulmod(p - a % p, fp::inv(d, p), p)};
      } else {
        lifts[i] = {a == 0 ? Lift::all : Lift::none, 0};
      }
      if (nu[h] != j) need_any = true;
      if (lifts[i].kind == Lift::all) any_all = true;
    }

    // Children t whose pattern can still succeed: every pending h with
    // nu_h != j must stay pending.
    std::vector<u64> candidates;
    bool enumerate_all = false;
    if (need_any) {
      bool restricted = false;
      std::vector<u64> cand;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (nu[pending[i]] == j) continue;
        const Lift& L = lifts[i];
        if (L.kind == Lift::none) return Int(0);
        if (L.kind == Lift::all) continue;
        if (!restricted) {
          cand = {L.t};
          restricted = true;
        } else if (cand.empty() || cand.front() != L.t) {
          return Int(0);
        }
      }
      if (restricted)
        candidates = cand;
      else
        enumerate_all = true;
    } else {
      // Every pending h is satisfied by settling at valuation j; children
      // outside every lift set are counted in bulk.
      if (any_all) {
        enumerate_all = true;
      } else {
        for (const auto& L : lifts)
          if (L.kind == Lift::unique) candidates.push_back(L.t);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      }
    }

    Int total(0);
    auto visit = [&](u64 t) {
      std::vector<std::size_t> next;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (lifts[i].contains(t))
          next.push_back(pending[i]);
        else if (nu[pending[i]] != j)
          return;
      }
      total += count(r + Int(t) * pj, j + 1, next);
    };
    if (enumerate_all) {
      for (u64 t = 0; t < p; ++t) visit(t);
    } else {
      for (u64 t : candidates) visit(t);
      if (!need_any) total += Int(p - candidates.size()) * bulk(j + 1);
    }
    return total;
  }
};

}  // namespace detail

/// #{n mod p^(max nu + 1) : p^nu_h || P_h(n) for every h with nu_h >= 1}.
/// Coordinates with nu_h = 0 impose no condition. Lifting-tree evaluation.
inline Int count_exact_valuations(std::span<const IntPoly> polys, std::span<const unsigned> nu, u64 p) {
  if (polys.size() != nu.size()) throw std::invalid_argument("count_exact_valuations: size mismatch");
  detail::ValuationTree tree;
  tree.p = p;
  for (std::size_t h = 0; h < polys.size(); ++h) {
    if (nu[h] == 0) continue;
    if (!primitive_at(polys[h], p)) throw std::domain_error("not primitive at p=" + std::to_string(p));
    tree.polys.push_back(&polys[h]);
    tree.derivs.push_back(derivative(polys[h]));
    tree.nu.push_back(nu[h]);
    tree.top = std::max(tree.top, nu[h] + 1);
  }
  if (tree.polys.empty()) return Int(1);

  // Level 1: residues that are roots of every constrained polynomial.
  std::vector<u64> common = roots_mod_p(*tree.polys[0], p);
  for (std::size_t h = 1; h < tree.polys.size() && !common.empty(); ++h) {
    auto rh = roots_mod_p(*tree.polys[h], p);
    std::vector<u64> both;
    std::set_intersection(common.begin(), common.end(), rh.begin(), rh.end(), std::back_inserter(both));
    common = std::move(both);
  }
  std::vector<std::size_t> all(tree.polys.size());
  for (std::size_t h = 0; h < all.size(); ++h) all[h] = h;
  Int total(0);
  for (u64 r : common) total += tree.count(Int(r), 1, all);
  return total;
}

/// Scan oracle for count_exact_valuations.
inline u64 count_exact_valuations_scan(std::span<const IntPoly> polys, std::span<const unsigned> nu, u64 p,
                                       u64 bound = kDefaultScanBound) {
  unsigned top = 0;
  for (unsigned v : nu)
    if (v > 0) top = std::max(top, v + 1);
  if (top == 0) return 1;
  const Int mod_int = ipow(p, top);
  if (mod_int > Int(bound)) throw std::range_error("count_exact_valuations_scan: modulus above scan bound");
  const u64 m = mod_int.convert_to<u64>();
  std::vector<std::vector<u64>> red;
  for (const auto& q : polys) red.push_back(reduce_coeffs(q, m));
  u64 count = 0;
  for (u64 n = 0; n < m; ++n) {
    bool ok = true;
    for (std::size_t h = 0; h < polys.size() && ok; ++h) {
      if (nu[h] == 0) continue;
      const u64 v = evaluate_mod(red[h], n, m);
      const u64 lo = ipow(p, nu[h]).convert_to<u64>();
      ok = (v % lo == 0) && (v % (lo * p) != 0);
    }
    if (ok) ++count;
  }
  return count;
}

/// rho-hat of the system at a prime: nu_h = v_p(n_h).
inline Int rho_hat_prime_power(const FactoredSystem& sys, std::span<const unsigned> nu, u64 p) {
  if (nu.size() != sys.r()) throw std::invalid_argument("rho_hat_prime_power: tuple length != r");
  std::size_t nonzero = 0, which = 0;
  for (std::size_t h = 0; h < nu.size(); ++h)
    if (nu[h] > 0) {
      ++nonzero;
      which = h;
    }
  if (nonzero == 0) return Int(1);
  if (sys.disc_star() % p != 0) {
    // Roots of distinct factors are distinct and simple modulo p.
    if (nonzero > 1) return Int(0);
    return Int(count_roots_mod_p(sys.factor(which), p)) * Int(p - 1);
  }
  return count_exact_valuations(sys.factors(), nu, p);
}

/// rho-hat(n_1..n_r) = #{n mod lcm(n_h kappa(n_h)) : n_h || R_h(n) for all h}.
inline Int rho_hat(const FactoredSystem& sys, std::span<const u64> n) {
  if (n.size() != sys.r()) throw std::invalid_argument("rho_hat: tuple length != r");
  std::vector<Factorization> fs;
  std::vector<u64> primes;
  for (u64 v : n) {
    if (v == 0) throw std::domain_error("rho_hat: components must be positive");
    fs.push_back(factor(v));
    for (const auto& t : fs.back()) primes.push_back(t.p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  Int result(1);
  std::vector<unsigned> nu(n.size());
  for (u64 p : primes) {
    for (std::size_t h = 0; h < n.size(); ++h) nu[h] = fs[h].exponent(p);
    result *= rho_hat_prime_power(sys, nu, p);
    if (result == 0) break;
  }
  return result;
}

/// lcm(n_1 kappa(n_1), ..., n_r kappa(n_r)).
inline Int rho_hat_modulus(std::span<const u64> n) {
  Int m(1);
  for (u64 v : n) m = lcm(m, Int(v) * Int(kappa(v)));
  return m;
}

/// Scan oracle for rho_hat.
inline u64 rho_hat_oracle(const FactoredSystem& sys, std::span<const u64> n, u64 bound = kDefaultScanBound) {
  const Int mod_int = rho_hat_modulus(n);
  if (mod_int > Int(bound)) throw std::range_error("rho_hat_oracle: modulus above scan bound");
  const u64 m = mod_int.convert_to<u64>();
  std::vector<std::vector<u64>> red;
  for (const auto& f : sys.factors()) red.push_back(reduce_coeffs(f, m));
  u64 count = 0;
  for (u64 v = 0; v < m; ++v) {
    bool ok = true;
    for (std::size_t h = 0; h < n.size() && ok; ++h) {
      if (n[h] == 1) continue;
      const u64 nk = n[h] * kappa(n[h]);
      const u64 val = evaluate_mod(red[h], v, m) % nk;
      ok = std::gcd(val, nk) == n[h];
    }
    if (ok) ++count;
  }
  return count;
}

}  // namespace majorant

#endif  // MAJORANT_ROOTCOUNT_HPP
