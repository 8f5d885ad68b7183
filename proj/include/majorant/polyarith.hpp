#ifndef MAJORANT_POLYARITH_HPP
#define MAJORANT_POLYARITH_HPP

#include <algorithm>
#include <cctype>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "majorant/arith.hpp"
#include "majorant/numeric.hpp"

namespace majorant {

/// Dense univariate polynomial with integer coefficients, low degree first.
/// The zero polynomial has no stored coefficients.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPoly(std::initializer_list<long long> coeffs) {
    c_.reserve(coeffs.size());
    for (long long v : coeffs) c_.emplace_back(v);
    trim();
  }

  static IntPoly constant(const Int& v) { return IntPoly(std::vector<Int>{v}); }
  static IntPoly x() { return IntPoly{0, 1}; }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Int>& coeffs() const { return c_; }
  const Int& operator[](std::size_t i) const { return c_[i]; }
  Int coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
  const Int& leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
  }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> r(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
    return IntPoly(std::move(r));
  }
  friend IntPoly operator-(const IntPoly& a) {
    std::vector<Int> r(a.c_);
    for (auto& v : r) v = -v;
    return IntPoly(std::move(r));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Int> r(a.c_.size() + b.c_.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return IntPoly(std::move(r));
  }
  friend IntPoly operator*(const Int& s, const IntPoly& a) {
    std::vector<Int> r(a.c_);
    for (auto& v : r) v *= s;
    return IntPoly(std::move(r));
  }

  IntPoly pow(unsigned e) const {
    IntPoly r{1};
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

/// Human-readable rendering such as "x^2 - 3*x + 1".
inline std::string to_string(const IntPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const Int& c = p[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    Int a = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0 || a != 1) {
      os << a;
      if (i > 0) os << '*';
    }
    if (i >= 1) os << 'x';
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const IntPoly& p) { return os << to_string(p); }

/// Comma-separated coefficient list, low degree first ("1,0,1" = x^2+1).
inline std::string to_coeff_list(const IntPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (i) s += ',';
    s += p[i].str();
  }
  return s;
}

/// Parses either a coefficient list ("1,0,1") or a human form ("x^2+1",
/// "2*x^3 - 5x + 7"). Only integer coefficients and caret powers of x.
inline IntPoly parse_poly(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty polynomial text");

  const bool has_x = s.find_first_of("xX") != std::string::npos;
  if (!has_x && (s.find(',') != std::string::npos || s.find_first_of("+") == std::string::npos)) {
    // Coefficient list (a lone integer is a constant).
    std::vector<Int> c;
    std::size_t start = 0;
    while (start <= s.size()) {
      auto comma = s.find(',', start);
      std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (tok.empty() || tok == "-" || tok == "+")
        throw std::invalid_argument("bad coefficient list: '" + text + "'");
      if (tok.front() == '+') tok.erase(0, 1);
      for (std::size_t i = (tok.front() == '-') ? 1 : 0; i < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i])))
          throw std::invalid_argument("bad coefficient '" + tok + "' in '" + text + "'");
      c.emplace_back(tok);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return IntPoly(std::move(c));
  }

  std::vector<Int> c;
  std::size_t i = 0;
  auto fail = [&]() -> IntPoly { throw std::invalid_argument("cannot parse polynomial '" + text + "'"); };
  auto digits = [&](std::size_t& pos) {
    std::size_t b = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(b, pos - b);
  };
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      return fail();
    }
    std::string num = digits(i);
    Int coef = num.empty() ? Int(1) : Int(num);
    unsigned power = 0;
    if (i < s.size() && s[i] == '*') {
      if (num.empty()) return fail();
      ++i;
    }
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X')) {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string e = digits(i);
        if (e.empty()) return fail();
        power = static_cast<unsigned>(std::stoul(e));
      }
    } else if (num.empty()) {
      return fail();
    }
    if (c.size() <= power) c.resize(power + 1, Int(0));
    c[power] += sign * coef;
  }
  return IntPoly(std::move(c));
}

// ---------------------------------------------------------------------------
// Elementary operations

/// P(n), Horner evaluation.
inline Int evaluate(const IntPoly& p, const Int& n) {
  Int acc(0);
  for (int i = p.degree(); i >= 0; --i) acc = acc * n + p[static_cast<std::size_t>(i)];
  return acc;
}

/// P(n) mod m in [0, m), for m < 2^63.
inline u64 evaluate_mod(const std::vector<u64>& reduced, u64 n, u64 m) {
  u128 acc = 0;
  for (auto it = reduced.rbegin(); it != reduced.rend(); ++it) acc = (acc * n + *it) % m;
  return static_cast<u64>(acc);
}

inline std::vector<u64> reduce_coeffs(const IntPoly& p, u64 m) {
  std::vector<u64> r;
  r.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) r.push_back(mod_u64(c, m));
  return r;
}

/// Sum of absolute values of the coefficients.
inline Int norm(const IntPoly& p) {
  Int s(0);
  for (const auto& c : p.coeffs()) s += abs(c);
  return s;
}

inline IntPoly derivative(const IntPoly& p) {
  if (p.degree() < 1) return {};
  std::vector<Int> r(p.coeffs().size() - 1);
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) r[i - 1] = p[i] * Int(i);
  return IntPoly(std::move(r));
}

/// gcd of the coefficients (0 for the zero polynomial).
inline Int content(const IntPoly& p) {
  Int g(0);
  for (const auto& c : p.coeffs()) g = gcd(g, c);
  return g;
}

inline bool is_primitive(const IntPoly& p) { return !p.is_zero() && content(p) == 1; }

/// Primitive part with positive leading coefficient.
inline IntPoly primitive_part(const IntPoly& p) {
  if (p.is_zero()) return p;
  Int g = content(p);
  if (p.leading() < 0) g = -g;
  std::vector<Int> r(p.coeffs());
  for (auto& v : r) v /= g;
  return IntPoly(std::move(r));
}

inline IntPoly normalize_sign(const IntPoly& p) {
  return (!p.is_zero() && p.leading() < 0) ? -p : p;
}

/// Pseudo-remainder: lc(B)^(degA-degB+1) A = q B + r.
inline IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw std::domain_error("pseudo_remainder by zero polynomial");
  if (a.degree() < b.degree()) return a;
  std::vector<Int> r(a.coeffs());
  const int db = b.degree();
  const Int& lb = b.leading();
  for (int k = a.degree(); k >= db; --k) {
    const Int lead = r[static_cast<std::size_t>(k)];
    for (auto& v : r) v *= lb;
    if (lead != 0)
      for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k - db + i)] -= lead * b[static_cast<std::size_t>(i)];
  }
  return IntPoly(std::move(r));
}

/// Exact quotient a / b in Z[X]; throws if the division is not exact.
inline IntPoly exact_divide(const IntPoly& a, const IntPoly& b) {
  if (b.is_zero()) throw std::domain_error("exact_divide by zero polynomial");
  if (a.is_zero()) return {};
  if (a.degree() < b.degree()) throw std::domain_error("exact_divide: inexact division");
  std::vector<Int> r(a.coeffs());
  std::vector<Int> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), Int(0));
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    const Int& lead = r[static_cast<std::size_t>(k)];
    if (lead == 0) continue;
    if (lead % b.leading() != 0) throw std::domain_error("exact_divide: inexact division");
    Int t = lead / b.leading();
    q[static_cast<std::size_t>(k - db)] = t;
    for (int i = 0; i <= db; ++i) r[static_cast<std::size_t>(k - db + i)] -= t * b[static_cast<std::size_t>(i)];
  }
  for (const auto& v : r)
    if (v != 0) throw std::domain_error("exact_divide: inexact division");
  return IntPoly(std::move(q));
}

/// gcd in Z[X] via the primitive remainder sequence; primitive, positive
/// leading coefficient (times the gcd of the contents).
inline IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero()) return normalize_sign(b);
  if (b.is_zero()) return normalize_sign(a);
  Int c = gcd(content(a), content(b));
  IntPoly u = primitive_part(a), v = primitive_part(b);
  if (u.degree() < v.degree()) std::swap(u, v);
  while (!v.is_zero()) {
    IntPoly r = pseudo_remainder(u, v);
    u = v;
    v = r.is_zero() ? r : primitive_part(r);
  }
  return c * primitive_part(u);
}

// ---------------------------------------------------------------------------
// Resultants and discriminants

/// Res(P, Q) by the subresultant remainder sequence.
inline Int resultant(const IntPoly& p, const IntPoly& q) {
  if (p.is_zero() || q.is_zero()) throw std::domain_error("resultant: zero polynomial input");
  IntPoly a = p, b = q;
  Int s(1);
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) s = -s;
  }
  if (b.degree() == 0) return s * ipow(b.leading(), static_cast<unsigned>(a.degree()));

  const Int ca = content(a), cb = content(b);
  const Int t = ipow(ca, static_cast<unsigned>(b.degree())) * ipow(cb, static_cast<unsigned>(a.degree()));
  {
    std::vector<Int> va(a.coeffs()), vb(b.coeffs());
    for (auto& v : va) v /= ca;
    for (auto& v : vb) v /= cb;
    a = IntPoly(std::move(va));
    b = IntPoly(std::move(vb));
  }
  Int g(1), h(1);
  while (true) {
    const int delta = a.degree() - b.degree();
    if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) s = -s;
    IntPoly r = pseudo_remainder(a, b);
    a = b;
    if (r.is_zero()) return Int(0);
    const Int div = g * ipow(h, static_cast<unsigned>(delta));
    std::vector<Int> vr(r.coeffs());
    for (auto& v : vr) v /= div;
    b = IntPoly(std::move(vr));
    g = a.leading();
    // h <- g^delta / h^(delta-1)
    if (delta > 0) h = ipow(g, static_cast<unsigned>(delta)) / ipow(h, static_cast<unsigned>(delta - 1));
    if (b.degree() == 0) {
      const unsigned da = static_cast<unsigned>(a.degree());
      return s * t * (ipow(b.leading(), da) / ipow(h, da - 1));
    }
  }
}

/// Determinant by fraction-free Gaussian elimination (Bareiss).
inline Int bareiss_determinant(std::vector<std::vector<Int>> m) {
  const std::size_t n = m.size();
  if (n == 0) return Int(1);
  Int sign(1), prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k] == 0) ++piv;
      if (piv == n) return Int(0);
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Res(P, Q) as the determinant of the Sylvester matrix. Independent route
/// used to cross-check resultant().
inline Int resultant_sylvester(const IntPoly& p, const IntPoly& q) {
  if (p.is_zero() || q.is_zero()) throw std::domain_error("resultant: zero polynomial input");
  const int m = p.degree(), n = q.degree();
  if (m == 0 && n == 0) return Int(1);
  const std::size_t size = static_cast<std::size_t>(m + n);
  std::vector<std::vector<Int>> s(size, std::vector<Int>(size, Int(0)));
  for (int row = 0; row < n; ++row)
    for (int i = 0; i <= m; ++i) s[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + i)] = p[static_cast<std::size_t>(m - i)];
  for (int row = 0; row < m; ++row)
    for (int i = 0; i <= n; ++i)
      s[static_cast<std::size_t>(n + row)][static_cast<std::size_t>(row + i)] = q[static_cast<std::size_t>(n - i)];
  return bareiss_determinant(std::move(s));
}

/// Disc(P) = (-1)^(d(d-1)/2) Res(P, P') / lc(P); equal to 1 for linear P.
inline Int discriminant(const IntPoly& p) {
  const int d = p.degree();
  if (d < 1) throw std::domain_error("discriminant: degree must be at least 1");
  if (d == 1) return Int(1);
  Int r = resultant(p, derivative(p));
  if (r % p.leading() != 0) throw std::logic_error("discriminant: inexact division by leading coefficient");
  r /= p.leading();
  if ((d * (d - 1) / 2) % 2 == 1) r = -r;
  return r;
}

/// Q / gcd(Q, Q'), primitive with positive leading coefficient.
inline IntPoly squarefree_part(const IntPoly& q) {
  if (q.is_zero()) throw std::domain_error("squarefree_part: zero polynomial");
  if (!is_primitive(q)) throw std::domain_error("squarefree_part: polynomial is not primitive");
  if (q.degree() < 1) return normalize_sign(q);
  IntPoly g = gcd(q, derivative(q));
  return primitive_part(exact_divide(q, g));
}

/// Primes p <= deg Q with Q(n) = 0 mod p for every n.
inline std::vector<u64> fixed_prime_divisors(const IntPoly& q) {
  if (!is_primitive(q)) throw std::domain_error("fixed_prime_divisors: polynomial is not primitive");
  std::vector<u64> out;
  if (q.degree() < 1) return out;
  for (u64 p : primes_up_to(static_cast<u64>(q.degree()))) {
    auto red = reduce_coeffs(q, p);
    bool all = true;
    for (u64 n = 0; n < p && all; ++n) all = evaluate_mod(red, n, p) == 0;
    if (all) out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Factored system

/// The tuple (Q_1..Q_k) given through pairwise coprime squarefree factors
/// R_1..R_r and an exponent matrix gamma (k rows, r columns):
/// Q_j = prod_h R_h^gamma[j][h].
class FactoredSystem {
 public:
  FactoredSystem(std::vector<IntPoly> factors, std::vector<std::vector<unsigned>> exponents) {
    if (factors.empty()) throw std::invalid_argument("FactoredSystem: need at least one factor");
    if (exponents.empty()) throw std::invalid_argument("FactoredSystem: need at least one row");
    const std::size_t r = factors.size();
    for (const auto& row : exponents)
      if (row.size() != r) throw std::invalid_argument("FactoredSystem: exponent matrix has wrong width");
    for (auto& f : factors) {
      if (f.degree() < 1) throw std::invalid_argument("FactoredSystem: factor of degree < 1");
      f = normalize_sign(f);
    }
    factors_ = std::move(factors);
    gamma_ = std::move(exponents);

    for (std::size_t h = 0; h < r; ++h) {
      bool used = false;
      for (const auto& row : gamma_) used = used || row[h] > 0;
      if (!used) throw std::invalid_argument("FactoredSystem: factor " + std::to_string(h + 1) + " does not occur in Q");
    }

    qj_.reserve(gamma_.size());
    for (const auto& row : gamma_) {
      IntPoly qj{1};
      for (std::size_t h = 0; h < r; ++h) qj = qj * factors_[h].pow(row[h]);
      qj_.push_back(qj);
    }
    q_ = IntPoly{1};
    for (const auto& qj : qj_) q_ = q_ * qj;
    if (!is_primitive(q_)) throw std::invalid_argument("FactoredSystem: Q not primitive");

    for (std::size_t h = 0; h < r; ++h)
      for (std::size_t i = h + 1; i < r; ++i)
        if (resultant(factors_[h], factors_[i]) == 0)
          throw std::invalid_argument("FactoredSystem: pairwise resultant zero (factors " + std::to_string(h + 1) +
                                      ", " + std::to_string(i + 1) + ")");

    q_star_ = IntPoly{1};
    for (const auto& f : factors_) q_star_ = q_star_ * f;
    d_star_ = discriminant(q_star_);
    if (d_star_ == 0) throw std::invalid_argument("FactoredSystem: Q* not squarefree");
    d_ = discriminant(q_);
  }

  /// Identity exponent matrix: Q_j = R_j.
  static FactoredSystem identity(std::vector<IntPoly> factors) {
    const std::size_t r = factors.size();
    std::vector<std::vector<unsigned>> g(r, std::vector<unsigned>(r, 0));
    for (std::size_t i = 0; i < r; ++i) g[i][i] = 1;
    return FactoredSystem(std::move(factors), std::move(g));
  }

  std::size_t r() const { return factors_.size(); }
  std::size_t k() const { return gamma_.size(); }
  const std::vector<IntPoly>& factors() const { return factors_; }
  const IntPoly& factor(std::size_t h) const { return factors_[h]; }
  const std::vector<std::vector<unsigned>>& exponents() const { return gamma_; }
  const std::vector<IntPoly>& components() const { return qj_; }
  const IntPoly& q() const { return q_; }
  const IntPoly& q_star() const { return q_star_; }
  int g() const { return q_.degree(); }
  int g_star() const { return q_star_.degree(); }
  /// Disc(Q); zero when Q has repeated factors.
  const Int& disc() const { return d_; }
  /// Disc(Q*), never zero.
  const Int& disc_star() const { return d_star_; }

  /// Primes dividing D* (empty when |D*| = 1).
  std::vector<u64> disc_star_primes() const { return primes_of(d_star_); }
  std::vector<u64> disc_primes() const {
    if (d_ == 0) throw std::domain_error("Disc(Q) = 0");
    return primes_of(d_);
  }

 private:
  static std::vector<u64> primes_of(const Int& d) {
    std::vector<u64> out;
    for (const auto& t : majorant::factor(Int(abs(d)))) out.push_back(t.p);
    return out;
  }

  std::vector<IntPoly> factors_;
  std::vector<std::vector<unsigned>> gamma_;
  std::vector<IntPoly> qj_;
  IntPoly q_, q_star_;
  Int d_, d_star_;
};

inline FactoredSystem build_factored_system(std::vector<IntPoly> factors,
                                            std::vector<std::vector<unsigned>> exponents) {
  return FactoredSystem(std::move(factors), std::move(exponents));
}

}  // namespace majorant

#endif  // MAJORANT_POLYARITH_HPP
