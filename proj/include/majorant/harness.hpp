#ifndef MAJORANT_HARNESS_HPP
#define MAJORANT_HARNESS_HPP

#include <gmp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "majorant/arith.hpp"
#include "majorant/bounds.hpp"
#include "majorant/lhs.hpp"
#include "majorant/mfunc.hpp"
#include "majorant/numeric.hpp"
#include "majorant/polyarith.hpp"
#include "majorant/rootcount.hpp"

namespace majorant {

// ---------------------------------------------------------------------------
// Text parsing

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace detail

/// Integers, "n/d", decimals with optional exponent ("0.7", "1e6") and
/// integer powers ("10^6").
inline Rational parse_number(const std::string& text) {
  const std::string s = detail::trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (auto caret = s.find('^'); caret != std::string::npos) {
    const Rational base = parse_number(s.substr(0, caret));
    const long e = std::stol(s.substr(caret + 1));
    if (e < 0) return 1 / pow(base, static_cast<unsigned>(-e));
    return pow(base, static_cast<unsigned>(e));
  }
  if (s.find('/') != std::string::npos) {
    auto parts = detail::split(s, '/');
    if (parts.size() != 2) throw std::invalid_argument("bad fraction '" + s + "'");
    return parse_number(parts[0]) / parse_number(parts[1]);
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long shift = 0;
  bool seen_dot = false, any = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      any = true;
      if (seen_dot) --shift;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("bad number '" + s + "'");
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("bad number '" + s + "'");
    std::size_t used = 0;
    const std::string rest = s.substr(i + 1);
    shift += std::stol(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("bad number '" + s + "'");
  }
  Rational v{Int(digits)};
  if (shift > 0) v *= Rational(ipow(10, static_cast<unsigned>(shift)));
  if (shift < 0) v /= Rational(ipow(10, static_cast<unsigned>(-shift)));
  return neg ? -v : v;
}

/// Rational approximation of a Real through its decimal expansion.
inline Rational rational_approx(const Real& v) { return parse_number(format_real(v, 36)); }

/// x^e: exact when both numerator and denominator of x are perfect powers.
inline Value power_value(const Rational& x, const Rational& e) {
  if (x <= 0) throw std::domain_error("power_value: base must be positive");
  const Int en = numerator(e), ed = denominator(e);
  if (ed <= Int(64) && abs(en) <= Int(64)) {
    const unsigned long q = ed.convert_to<unsigned long>();
    Int rn, rd;
    const bool ok_n = mpz_root(rn.backend().data(), numerator(x).backend().data(), q) != 0;
    const bool ok_d = mpz_root(rd.backend().data(), denominator(x).backend().data(), q) != 0;
    if (ok_n && ok_d) {
      const Rational root(rn, rd);
      const long pe = en.convert_to<long>();
      return Value::of(pe >= 0 ? pow(root, static_cast<unsigned>(pe)) : 1 / pow(root, static_cast<unsigned>(-pe)));
    }
  }
  return Value::of(Real(exp(Real(e) * log(Real(x)))));
}

/// "R_1; R_2; ..." with an optional exponent matrix "| row; row", rows
/// comma-separated ("x; x+1 | 2,0; 0,1"). Without a matrix Q_j = R_j.
inline FactoredSystem parse_system(const std::string& text) {
  const auto bar = text.find('|');
  std::vector<IntPoly> factors;
  for (const auto& tok : detail::split(text.substr(0, bar), ';'))
    if (!tok.empty()) factors.push_back(parse_poly(tok));
  if (factors.empty()) throw std::invalid_argument("empty system '" + text + "'");
  if (bar == std::string::npos) return FactoredSystem::identity(std::move(factors));
  std::vector<std::vector<unsigned>> gamma;
  for (const auto& row : detail::split(text.substr(bar + 1), ';')) {
    if (row.empty()) continue;
    std::vector<unsigned> r;
    for (const auto& v : detail::split(row, ',')) r.push_back(static_cast<unsigned>(std::stoul(v)));
    gamma.push_back(std::move(r));
  }
  return build_factored_system(std::move(factors), std::move(gamma));
}

inline std::string system_label(const FactoredSystem& sys) {
  std::string s;
  for (std::size_t h = 0; h < sys.r(); ++h) s += (h ? ";" : "") + to_string(sys.factor(h));
  bool identity = sys.k() == sys.r();
  for (std::size_t j = 0; j < sys.k() && identity; ++j)
    for (std::size_t h = 0; h < sys.r(); ++h) identity = identity && sys.exponents()[j][h] == (j == h ? 1u : 0u);
  if (identity) return s;
  s += " |";
  for (std::size_t j = 0; j < sys.k(); ++j) {
    s += j ? "; " : " ";
    for (std::size_t h = 0; h < sys.r(); ++h) s += (h ? " " : "") + std::to_string(sys.exponents()[j][h]);
  }
  return s;
}

/// Comma-separated integers and ranges: "1..100,7,smooth23:10000". The
/// smooth23:N item expands to all 2^a 3^b <= N. Sorted, duplicates removed.
inline std::vector<long long> parse_int_list(const std::string& text) {
  std::vector<long long> out;
  for (const auto& item : detail::split(text, ',')) {
    if (item.empty()) continue;
    if (item.rfind("smooth23:", 0) == 0) {
      const long long n = std::stoll(item.substr(9));
      for (long long a = 1; a <= n; a *= 2)
        for (long long b = a; b <= n; b *= 3) out.push_back(b);
    } else if (auto dots = item.find(".."); dots != std::string::npos) {
      const long long lo = std::stoll(item.substr(0, dots)), hi = std::stoll(item.substr(dots + 2));
      for (long long v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(std::stoll(item));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Interval length: a number, "x", or "x^e".
struct LengthSpec {
  std::optional<Rational> value;
  Rational exponent{1};

  static LengthSpec parse(const std::string& text) {
    const std::string s = detail::trim(text);
    LengthSpec l;
    if (s == "x") return l;
    if (s.rfind("x^", 0) == 0) {
      l.exponent = parse_number(s.substr(2));
      return l;
    }
    l.value = parse_number(s);
    return l;
  }
  Value at(const Rational& x) const { return value ? Value::of(*value) : power_value(x, exponent); }
  std::string str() const { return value ? format_rational(*value) : "x^" + format_rational(exponent); }
};

// ---------------------------------------------------------------------------
// Configuration

enum class Family { shifted, systems, quadratic };

struct ExperimentConfig {
  Family family = Family::systems;
  std::vector<long long> params;      // l for shifted pairs, c for X^2 + c
  std::vector<std::string> systems;   // explicit systems, '/'-separated in text
  std::string function = "tau";
  unsigned m = 2;                     // tau_m for shifted pairs
  std::vector<Rational> x{Rational(10000)};
  LengthSpec y = LengthSpec::parse("x^2/3");
  double alpha = 0.5, delta = 0.5, eps = 0.001, c0 = 1;
  Rational A{2};
  double B = 1e6;
  std::vector<std::string> variants{"main"};
  Mode mode = Mode::real;
  std::string output;
  std::string format = "csv";
  u64 seed = 1;
  unsigned threads = 0;               // 0: hardware concurrency
  double ratio_floor = 0.01, ratio_ceiling = 100, spread_ceiling = 10;
  std::vector<long long> mean_range;  // l-range for the Delta(l) mean; empty: params
  // sieve check
  std::vector<std::string> a{"1"};
  std::vector<u64> z{10};
  std::vector<u64> xi;
  // lemma suite
  std::string sigma = "one";
  u64 lemma_pmax = 10000;
  unsigned h1_samples = 200;
  u64 h1_max = 200;
  double lemma_ceiling = 100;

  /// Applies one key=value pair. Unknown keys are rejected.
  void set(const std::string& key, const std::string& value);
  void validate() const;
  BoundParams bound_params(const Rational& xv, const Rational& yv) const {
    BoundParams p;
    p.alpha = alpha;
    p.delta = delta;
    p.A = A;
    p.B = B;
    p.eps = eps;
    p.x = xv;
    p.y = yv;
    p.c0 = c0;
    return p;
  }
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::shifted: return "shifted";
    case Family::quadratic: return "quadratic";
    default: return "systems";
  }
}

inline const std::vector<std::string>& known_variants() {
  static const std::vector<std::string> v{"main", "cor-disc", "cor-mult", "shiu", "holowinsky", "primes"};
  return v;
}

inline void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = detail::trim(raw);
  auto doubles = [&](double& d) { d = parse_number(value).convert_to<double>(); };
  if (key == "family") {
    if (value == "shifted") family = Family::shifted;
    else if (value == "systems") family = Family::systems;
    else if (value == "quadratic") family = Family::quadratic;
    else throw std::invalid_argument("unknown family '" + value + "'");
  } else if (key == "params" || key == "l" || key == "c") {
    params = parse_int_list(value);
  } else if (key == "system" || key == "systems") {
    systems.clear();
    for (const auto& s : detail::split(value, '/'))
      if (!s.empty()) systems.push_back(s);
  } else if (key == "function") {
    function = value;
  } else if (key == "m") {
    m = static_cast<unsigned>(std::stoul(value));
  } else if (key == "x") {
    x.clear();
    for (const auto& v : detail::split(value, ',')) x.push_back(parse_number(v));
  } else if (key == "y") {
    y = LengthSpec::parse(value);
  } else if (key == "alpha") {
    doubles(alpha);
  } else if (key == "delta") {
    doubles(delta);
  } else if (key == "eps") {
    doubles(eps);
  } else if (key == "c0") {
    doubles(c0);
  } else if (key == "A") {
    A = parse_number(value);
  } else if (key == "B") {
    doubles(B);
  } else if (key == "variants" || key == "variant") {
    variants = detail::split(value, ',');
  } else if (key == "mode") {
    mode = parse_mode(value);
  } else if (key == "output") {
    output = value;
  } else if (key == "format") {
    format = value;
  } else if (key == "seed") {
    seed = std::stoull(value);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(std::stoul(value));
  } else if (key == "ratio_floor") {
    doubles(ratio_floor);
  } else if (key == "ratio_ceiling") {
    doubles(ratio_ceiling);
  } else if (key == "spread_ceiling") {
    doubles(spread_ceiling);
  } else if (key == "mean_range") {
    mean_range = parse_int_list(value);
  } else if (key == "a") {
    a = detail::split(value, ',');
  } else if (key == "z") {
    z.clear();
    for (long long v : parse_int_list(value)) z.push_back(static_cast<u64>(v));
  } else if (key == "xi") {
    xi.clear();
    for (long long v : parse_int_list(value)) xi.push_back(static_cast<u64>(v));
  } else if (key == "sigma") {
    sigma = value;
  } else if (key == "lemma_pmax") {
    lemma_pmax = std::stoull(value);
  } else if (key == "h1_samples") {
    h1_samples = static_cast<unsigned>(std::stoul(value));
  } else if (key == "h1_max") {
    h1_max = std::stoull(value);
  } else if (key == "lemma_ceiling") {
    doubles(lemma_ceiling);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

inline void ExperimentConfig::validate() const {
  if (x.empty()) throw std::invalid_argument("config: empty x grid");
  for (const auto& v : variants)
    if (std::find(known_variants().begin(), known_variants().end(), v) == known_variants().end())
      throw std::invalid_argument("config: unknown rhs variant '" + v + "'");
  if (family != Family::shifted) make_builtin(function, 1);  // throws on unknown names
  if (format != "csv" && format != "jsonl") throw std::invalid_argument("config: format must be csv or jsonl");
  if (family == Family::shifted)
    for (long long l : params)
      if (l < 1) throw std::invalid_argument("config: shifted pairs need l >= 1");
}

/// Flat key=value text; '#' starts a comment.
inline void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    cfg.set(detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg;
  apply_config_text(cfg, ss.str());
  return cfg;
}

// ---------------------------------------------------------------------------
// Reports

struct ReportRow {
  std::string family_param;
  std::string x;
  std::string y;
  std::string variant;
  std::optional<Value> lhs, rhs, ratio, delta_factor;
  double millis = 0;
  std::string note;  // failure reason or extra information; not a CSV column
};

struct VariantSummary {
  std::string variant;
  std::size_t rows = 0;
  Real min_ratio{0}, max_ratio{0};
  Real spread() const { return min_ratio > 0 ? max_ratio / min_ratio : Real(0); }
};

struct RatioReport {
  Mode mode = Mode::real;
  std::vector<ReportRow> rows;
  std::vector<VariantSummary> summary;
  std::optional<Real> mean_delta;
  std::size_t mean_delta_count = 0;
  std::map<std::string, std::string> info;  // ceilings and other header data
  std::vector<std::string> failures;        // threshold violations
  bool pass() const { return failures.empty(); }

  int digits() const { return mode == Mode::exact ? 30 : 12; }
  std::string render(const std::optional<Value>& v) const { return v ? v->str(mode, digits()) : ""; }

  /// Recomputes the per-variant summaries from the rows with a ratio.
  void summarize() {
    summary.clear();
    for (const auto& r : rows) {
      if (!r.ratio) continue;
      auto it = std::find_if(summary.begin(), summary.end(), [&](auto& s) { return s.variant == r.variant; });
      const Real q = r.ratio->approx;
      if (it == summary.end()) {
        summary.push_back({r.variant, 1, q, q});
      } else {
        ++it->rows;
        it->min_ratio = std::min(it->min_ratio, q);
        it->max_ratio = std::max(it->max_ratio, q);
      }
    }
  }
  const VariantSummary* find(const std::string& variant) const {
    for (const auto& s : summary)
      if (s.variant == variant) return &s;
    return nullptr;
  }
};

inline Value divide(const Value& a, const Value& b) {
  if (a.exact && b.exact && *b.exact != 0) return Value::of(*a.exact / *b.exact);
  return Value::of(a.approx / b.approx);
}

/// Drops exactness: used when an input (such as an irrational y) was only
/// available as a rational approximation.
inline Value inexact(const Value& v) { return Value::of(v.approx); }

inline const char* kCsvHeader = "family_param,x,y,variant,lhs,rhs,ratio,delta_factor,millis";

inline std::string to_csv(const RatioReport& r) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& row : r.rows) {
    const std::string ms = r.mode == Mode::exact ? "0" : format_real(Real(row.millis), 6);
    out += row.family_param + "," + row.x + "," + row.y + "," + row.variant + "," + r.render(row.lhs) + "," +
           r.render(row.rhs) + "," + r.render(row.ratio) + "," + r.render(row.delta_factor) + "," + ms + "\n";
  }
  return out;
}

inline std::string to_jsonl(const RatioReport& r) {
  using nlohmann::ordered_json;
  std::string out;
  auto num = [&](const std::optional<Value>& v) -> ordered_json {
    if (!v) return nullptr;
    return r.render(v);
  };
  for (const auto& row : r.rows) {
    ordered_json j;
    j["family_param"] = row.family_param;
    j["x"] = row.x;
    j["y"] = row.y;
    j["variant"] = row.variant;
    j["lhs"] = num(row.lhs);
    j["rhs"] = num(row.rhs);
    j["ratio"] = num(row.ratio);
    j["delta_factor"] = num(row.delta_factor);
    j["millis"] = r.mode == Mode::exact ? 0.0 : row.millis;
    j["note"] = row.note;
    out += j.dump() + "\n";
  }
  ordered_json s;
  s["mode"] = to_string(r.mode);
  ordered_json vars = ordered_json::array();
  for (const auto& v : r.summary)
    vars.push_back({{"variant", v.variant},
                    {"rows", v.rows},
                    {"min_ratio", format_real(v.min_ratio, 12)},
                    {"max_ratio", format_real(v.max_ratio, 12)},
                    {"spread", format_real(v.spread(), 12)}});
  s["variants"] = vars;
  if (r.mean_delta) s["mean_delta"] = format_real(*r.mean_delta, 12);
  s["info"] = r.info;
  s["failures"] = r.failures;
  out += ordered_json{{"summary", s}}.dump() + "\n";
  return out;
}

inline std::string render_report(const RatioReport& r, const std::string& format) {
  if (format == "csv") return to_csv(r);
  if (format == "jsonl") return to_jsonl(r);
  throw std::invalid_argument("unknown report format '" + format + "'");
}

inline void emit(const RatioReport& r, const std::string& path, const std::string& format) {
  const std::string text = render_report(r, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Reads a value cell: "n" or "n/d" is exact, anything else a decimal.
inline std::optional<Value> parse_value(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  const bool rational = cell.find_first_not_of("-0123456789/") == std::string::npos;
  if (rational) return Value::of(parse_rational(cell));
  return Value::of(Real(cell));
}

inline RatioReport parse_csv(const std::string& text, Mode mode) {
  RatioReport r;
  r.mode = mode;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::invalid_argument("parse_csv: missing or wrong header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = detail::split(line, ',');
    if (f.size() != 9) throw std::invalid_argument("parse_csv: expected 9 fields in '" + line + "'");
    ReportRow row;
    row.family_param = f[0];
    row.x = f[1];
    row.y = f[2];
    row.variant = f[3];
    row.lhs = parse_value(f[4]);
    row.rhs = parse_value(f[5]);
    row.ratio = parse_value(f[6]);
    row.delta_factor = parse_value(f[7]);
    row.millis = std::stod(f[8]);
    r.rows.push_back(std::move(row));
  }
  r.summarize();
  return r;
}

// ---------------------------------------------------------------------------
// Runner

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline double millis_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct FamilyMember {
  std::string label;
  FactoredSystem sys;
  long long param = 0;
};

inline std::vector<FamilyMember> expand_family(const ExperimentConfig& cfg) {
  std::vector<FamilyMember> out;
  switch (cfg.family) {
    case Family::shifted:
      for (long long l : cfg.params) out.push_back({std::to_string(l), shifted_pair(l), l});
      break;
    case Family::quadratic:
      for (long long c : cfg.params)
        out.push_back({std::to_string(c), FactoredSystem::identity({IntPoly{c, 0, 1}}), c});
      break;
    case Family::systems:
      for (const auto& s : cfg.systems) {
        auto sys = parse_system(s);
        out.push_back({system_label(sys), std::move(sys), 0});
      }
      break;
  }
  return out;
}

inline void add_ratio(ReportRow& row) {
  if (row.lhs && row.rhs && row.rhs->approx > 0) row.ratio = divide(*row.lhs, *row.rhs);
}

}  // namespace detail

/// LHS against each selected RHS for every family member and x. Rows are
/// ordered by family parameter, then x, then variant as configured.
inline RatioReport run_ratio_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RatioReport report;
  report.mode = cfg.mode;
  report.info["family"] = family_name(cfg.family);
  report.info["function"] = cfg.family == Family::shifted ? "tau_m:" + std::to_string(cfg.m) : cfg.function;
  report.info["y"] = cfg.y.str();
  report.info["ratio_floor"] = format_real(Real(cfg.ratio_floor), 12);
  report.info["ratio_ceiling"] = format_real(Real(cfg.ratio_ceiling), 12);
  report.info["spread_ceiling"] = format_real(Real(cfg.spread_ceiling), 12);
  const auto members = detail::expand_family(cfg);
  if (members.empty()) return report;

  Rational xmax(0);
  for (const auto& x : cfg.x) xmax = std::max(xmax, x);

  // shared across shifted pairs
  const auto l1 = tau_function(1, cfg.m);
  std::map<std::string, Value> holo_products;
  if (std::find(cfg.variants.begin(), cfg.variants.end(), "holowinsky") != cfg.variants.end())
    for (const auto& x : cfg.x) holo_products.emplace(format_rational(x), holowinsky_product(l1, l1, floor_u64(x), cfg.mode));

  std::vector<std::vector<ReportRow>> per_member(members.size());
  detail::parallel_for(members.size(), cfg.threads, [&](std::size_t mi) {
    const auto& mem = members[mi];
    const auto& sys = mem.sys;
    auto& rows = per_member[mi];
    const auto F = cfg.family == Family::shifted ? tau_function(sys.k(), cfg.m) : make_builtin(cfg.function, sys.k());
    std::optional<SystemData> data;
    auto system_data = [&]() -> const SystemData& {
      if (!data) data.emplace(sys, std::max<u64>(floor_u64(xmax), 2));
      return *data;
    };
    for (const auto& x : cfg.x) {
      const Value yv = cfg.y.at(x);
      const Rational y = yv.exact ? *yv.exact : rational_approx(yv.approx);
      const std::string xs = format_rational(x);
      const std::string ys = yv.str(cfg.mode, report.digits());
      std::map<std::string, std::pair<std::optional<Value>, std::string>> lhs_cache;
      for (const auto& variant : cfg.variants) {
        ReportRow row;
        row.family_param = mem.label;
        row.x = xs;
        row.variant = variant;
        const auto t0 = std::chrono::steady_clock::now();
        const bool full = variant == "holowinsky";
        row.y = full ? xs : ys;
        const std::string kind = full ? "full" : variant == "primes" ? "primes" : "short";
        if (!lhs_cache.count(kind)) {
          try {
            Rational v = kind == "full"     ? short_sum(sys, F, Rational(0), x)
                         : kind == "primes" ? prime_sum(sys, F, x, y)
                                            : short_sum(sys, F, x, y);
            lhs_cache[kind] = {Value::of(v), ""};
          } catch (const std::exception& e) {
            lhs_cache[kind] = {std::nullopt, std::string("lhs: ") + e.what()};
          }
        }
        row.lhs = lhs_cache[kind].first;
        row.note = lhs_cache[kind].second;
        if (row.lhs) {
          try {
            Rhs rhs;
            const BoundParams bp = cfg.bound_params(x, y);
            if (variant == "main") rhs = rhs_main(system_data(), F, bp, cfg.mode);
            else if (variant == "cor-disc") rhs = rhs_cor_disc(system_data(), F, bp, cfg.mode);
            else if (variant == "cor-mult") rhs = rhs_cor_mult(system_data(), F, bp, cfg.mode);
            else if (variant == "shiu") rhs = rhs_shiu(system_data(), F, bp, cfg.mode);
            else if (variant == "primes") rhs = rhs_primes(system_data(), F, bp, cfg.mode);
            else {
              if (cfg.family != Family::shifted) throw ValidationError("holowinsky needs the shifted family");
              rhs = rhs_holowinsky(mem.param, l1, l1, x, cfg.mode, holo_products.at(xs));
            }
            row.rhs = (!full && !yv.exact) ? inexact(rhs.value) : rhs.value;
            row.delta_factor = rhs.delta;
            detail::add_ratio(row);
          } catch (const std::exception& e) {
            row.note = std::string("rhs: ") + e.what();
          }
        }
        row.millis = detail::millis_since(t0);
        rows.push_back(std::move(row));
      }
    }
  });
  for (auto& rows : per_member)
    for (auto& row : rows) report.rows.push_back(std::move(row));
  report.summarize();
  for (const auto& row : report.rows) {
    if (!row.ratio) {
      report.failures.push_back(row.family_param + " x=" + row.x + " " + row.variant + ": no ratio (" + row.note + ")");
      continue;
    }
    const Real q = row.ratio->approx;
    if (!(q >= Real(cfg.ratio_floor) && q <= Real(cfg.ratio_ceiling)))
      report.failures.push_back(row.family_param + " x=" + row.x + " " + row.variant + ": ratio " + format_real(q, 6) +
                                " outside [" + format_real(Real(cfg.ratio_floor), 6) + ", " +
                                format_real(Real(cfg.ratio_ceiling), 6) + "]");
  }
  for (const auto& s : report.summary)
    if (!(s.spread() < Real(cfg.spread_ceiling)))
      report.failures.push_back(s.variant + ": spread " + format_real(s.spread(), 6) + " not below " +
                                format_real(Real(cfg.spread_ceiling), 6));
  return report;
}

/// Mean of Delta(l) for the shifted pairs (X, X + l), F = tau_m (x) tau_m.
inline Real mean_delta_shifted(std::span<const long long> ls, unsigned m) {
  if (ls.empty()) throw std::invalid_argument("mean_delta_shifted: empty range");
  const auto l1 = tau_function(1, m);
  Rational sum(0);
  for (long long l : ls) sum += delta_shifted(l, l1, l1);
  return Real(sum / Rational(static_cast<long long>(ls.size())));
}

/// Sum_{n <= x} tau_m(n) tau_m(n + l) against the shifted-convolution bound,
/// one row per l; also the mean of Delta(l) over mean_range (default: ls).
inline RatioReport sweep_shifted_pairs(const Rational& x, const std::vector<long long>& ls, unsigned m, Mode mode,
                                       std::vector<long long> mean_range = {}, unsigned threads = 0) {
  ExperimentConfig cfg;
  cfg.family = Family::shifted;
  cfg.params = ls;
  cfg.m = m;
  cfg.x = {x};
  cfg.variants = {"holowinsky"};
  cfg.mode = mode;
  cfg.threads = threads;
  cfg.ratio_floor = 0;
  cfg.ratio_ceiling = 1e300;
  cfg.spread_ceiling = 20;
  for (long long l : ls)
    if (Rational(l) > x) throw std::invalid_argument("sweep_shifted_pairs: need l <= x");
  auto rep = run_ratio_experiment(cfg);
  if (mean_range.empty()) mean_range = ls;
  if (!mean_range.empty()) {
    rep.mean_delta = mean_delta_shifted(mean_range, m);
    rep.mean_delta_count = mean_range.size();
  }
  return rep;
}


// ---------------------------------------------------------------------------
// Sieve check

/// a-tuple text: "2" or "2:1:5", one entry per factor R_h.
inline std::vector<u64> parse_tuple(const std::string& text) {
  std::vector<u64> out;
  for (const auto& v : detail::split(text, ':')) out.push_back(std::stoull(v));
  return out;
}

/// sieve_count against sieve_rhs over the (a, z) grid. Xi defaults to the
/// fixed prime divisors of Q. Grid points outside z <= x^eps3 and
/// a_1..a_r <= x^eps1 (eps1 = 3 alpha / 25, eps3 = eps1 / 6g) are still
/// evaluated; the note records it. Points with sieve_rhs = 0 carry no ratio.
inline RatioReport run_sieve_check(const ExperimentConfig& cfg) {
  RatioReport report;
  report.mode = cfg.mode;
  report.info["ratio_floor"] = format_real(Real(cfg.ratio_floor), 12);
  report.info["ratio_ceiling"] = format_real(Real(cfg.ratio_ceiling), 12);
  u64 zmax = 2;
  for (u64 z : cfg.z) zmax = std::max(zmax, z);
  for (const auto& mem : detail::expand_family(cfg)) {
    const auto& sys = mem.sys;
    const SystemData data(sys, zmax);
    std::vector<u64> xi = cfg.xi;
    if (xi.empty())
      for (const auto& p : fixed_prime_divisors(sys.q())) xi.push_back(static_cast<u64>(p));
    const double eps1 = 3 * cfg.alpha / 25, eps3 = eps1 / (6 * sys.g());
    for (const auto& x : cfg.x) {
      const Value yv = cfg.y.at(x);
      const Rational y = yv.exact ? *yv.exact : rational_approx(yv.approx);
      const auto table = factor_values_in_interval(sys.factors(), x, y);
      const Real lx = log(Real(x));
      for (const auto& atext : cfg.a) {
        const auto a = parse_tuple(atext);
        if (a.size() != sys.r()) throw std::invalid_argument("sieve check: tuple '" + atext + "' has wrong length");
        Real aprod(1);
        for (u64 v : a) aprod *= Real(v);
        for (u64 z : cfg.z) {
          const auto t0 = std::chrono::steady_clock::now();
          ReportRow row;
          row.family_param = mem.label + " a=" + atext + " z=" + std::to_string(z);
          row.x = format_rational(x);
          row.y = yv.str(cfg.mode, report.digits());
          row.variant = "sieve";
          row.lhs = Value::of(Rational(Int(sieve_count(table, a, z, xi))));
          const Value rhs = sieve_rhs(data, a, z, y, cfg.mode);
          row.rhs = yv.exact ? rhs : inexact(rhs);
          detail::add_ratio(row);
          const bool admissible = Real(z) <= exp(Real(eps3) * lx) && aprod <= exp(Real(eps1) * lx);
          row.note = admissible ? "admissible" : "outside z <= x^eps3, a <= x^eps1";
          if (!row.ratio) row.note += "; sieve_rhs = 0";
          row.millis = detail::millis_since(t0);
          report.rows.push_back(std::move(row));
        }
      }
    }
  }
  report.summarize();
  for (const auto& row : report.rows) {
    if (!row.ratio) continue;
    const Real q = row.ratio->approx;
    if (!(q >= Real(cfg.ratio_floor) && q <= Real(cfg.ratio_ceiling)))
      report.failures.push_back(row.family_param + ": ratio " + format_real(q, 6) + " outside [" +
                                format_real(Real(cfg.ratio_floor), 6) + ", " + format_real(Real(cfg.ratio_ceiling), 6) +
                                "]");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Technical lemma suite

/// Weights sigma_h, theta_h: 1, lambda(n) = (n / phi(n))^g, or its inverse.
enum class Weight { one, lambda, lambda_inv };

inline Weight parse_weight(const std::string& s) {
  if (s == "one") return Weight::one;
  if (s == "lambda") return Weight::lambda;
  if (s == "lambda-inv") return Weight::lambda_inv;
  throw std::invalid_argument("unknown weight '" + s + "' (one|lambda|lambda-inv)");
}

inline const char* weight_name(Weight w) {
  return w == Weight::one ? "one" : w == Weight::lambda ? "lambda" : "lambda-inv";
}

/// w(p^nu).
inline Rational weight_local(Weight w, u64 p, unsigned nu, int g) {
  if (nu == 0 || w == Weight::one) return Rational(1);
  const Rational l = pow(Rational(p, p - 1), static_cast<unsigned>(g));
  return w == Weight::lambda ? l : 1 / l;
}

inline Rational weight(Weight w, u64 n, int g) {
  Rational v(1);
  if (w == Weight::one) return v;
  for (const auto& t : factor(n)) v *= weight_local(w, t.p, t.e, g);
  return v;
}

struct LemmaGrid {
  std::vector<u64> z{100, 1000, 10000};
  u64 p_max = 10000;
  Weight sigma = Weight::one;
  unsigned h1_samples = 200;
  u64 h1_max = 200;
  u64 seed = 1;
  double ceiling = 100;
  Mode mode = Mode::exact;
};

namespace detail {

/// Calls fn(nu, term) for |nu| = s and every nonzero
/// term = Ft(p^nu) rho-hat(p^nu) / p^(max nu + 1) sigma(p^nu).
template <class Fn>
void lemma_terms(const SystemData& d, const MultiplicativeFunction& Ft, std::size_t i, unsigned s, Weight sigma,
                 Fn&& fn) {
  const std::size_t r = d.system().r();
  const u64 p = d.primes()[i];
  const int g = d.system().g();
  if (!d.divides_dstar(i)) {
    for (std::size_t h = 0; h < r; ++h) {
      const unsigned rh = d.rho_factor(h, i);
      if (rh == 0) continue;
      const auto nu = unit_vector(r, h, s);
      const Rational term =
          Ft.at(p, nu) * Rational(Int(rh) * Int(p - 1), ipow(p, s + 1)) * weight_local(sigma, p, s, g);
      if (term != 0) fn(std::span<const unsigned>(nu), term);
    }
    return;
  }
  for_each_composition(r, s, [&](std::span<const unsigned> nu) {
    const Rational dens = d.rho_hat_density(i, nu);
    if (dens == 0) return;
    Rational term = Ft.at(p, nu) * dens;
    for (unsigned v : nu) term *= weight_local(sigma, p, v, g);
    if (term != 0) fn(nu, term);
  });
}

/// Local value of H theta at p^s.
inline Rational lemma_local(const SystemData& d, const MultiplicativeFunction& Ft, std::size_t i, unsigned s,
                            Weight sigma, Weight theta) {
  const u64 p = d.primes()[i];
  const int g = d.system().g();
  Rational acc(0);
  lemma_terms(d, Ft, i, s, sigma, [&](std::span<const unsigned> nu, const Rational& term) {
    Rational t = term;
    for (unsigned v : nu) t *= weight_local(theta, p, v, g);
    acc += t;
  });
  return acc;
}

/// Per-prime truncation for Euler products over P+ <= z: the exponent range
/// covers every p^s <= z, so the product dominates the sum over n_1..n_r <= z.
inline unsigned euler_depth(u64 p, u64 z, int g) {
  return std::max(floor_log(z, p), static_cast<unsigned>(2 * g)) + 4;
}

/// prod_{p <= z} (1 + sum_{s=1}^{L_p} h(p^s) p^(beta s)).
template <class Scalar>
Scalar smooth_euler(const SystemData& d, const MultiplicativeFunction& Ft, u64 z, Weight sigma,
                    std::optional<Real> beta = std::nullopt) {
  Scalar prod(1);
  const int g = d.system().g();
  const std::size_t n = d.count_upto(z);
  for (std::size_t i = 0; i < n; ++i) {
    const u64 p = d.primes()[i];
    Scalar local(1);
    const unsigned L = euler_depth(p, z, g);
    for (unsigned s = 1; s <= L; ++s) {
      const Rational h = lemma_local(d, Ft, i, s, sigma, Weight::one);
      if (h == 0) continue;
      if constexpr (is_exact_v<Scalar>) {
        local += h;
      } else {
        Scalar t = to_scalar<Scalar>(h);
        if (beta) t *= exp(*beta * Real(s) * log(Real(p)));
        local += t;
      }
    }
    prod *= local;
  }
  return prod;
}

template <class Scalar>
Scalar product_sum(const SystemData& d, const MultiplicativeFunction& Ft, u64 z, Weight sigma, Weight theta) {
  const std::size_t n = d.count_upto(z);
  auto fn = [&](std::size_t i, unsigned s) { return lemma_local(d, Ft, i, s, sigma, theta); };
  return multiplicative_sum<Scalar>(z, std::span<const u64>(d.primes().data(), n), fn);
}

inline Rational lemma_H(const FactoredSystem& sys, const MultiplicativeFunction& Ft, std::span<const u64> n,
                        Weight sigma) {
  Rational v = eval(Ft, n);
  if (v == 0) return v;
  const Int rh = rho_hat(sys, n);
  if (rh == 0) return Rational(0);
  v *= Rational(rh, rho_hat_modulus(n));
  for (u64 c : n) v *= weight(sigma, c, sys.g());
  return v;
}

}  // namespace detail

/// Both sides of the comparisons behind the main bound, for H built from F~
/// and T from G~ (the minimal function of F~):
///   normalization  H(1..1) = 1
///   submult        H(ab) <= T(b) H(a) on sampled coprime a, b
///   local-sum      sup_p p sum' T(p^nu)
///   tail           sup_p p^(5/4) sum_{|nu| > 2g} T(p^nu) p^(|nu|/4g)
///   theta:*        sum_{n <= z} H theta / sum_{n <= z} H
///   beta           sum_{P+ <= z} H n^beta / sum_{P+ <= z} H, beta = 1/log z, z >= e^(4g)
///   truncate-K     sum_{P+ <= z} H / sum_{P+ <= z^(1/K)} H, K = 2, 3
///   smooth-vs-product  sum_{P+ <= z} H / sum_{n_1..n_r <= z} H, at least 1
/// Local sums over nu are truncated at |nu| <= 8g + 8; the P+ sums keep
/// every p^s <= z and a margin, so the last ratio stays a true lower bound.
inline RatioReport verify_technical_lemmas(const FactoredSystem& sys, const MultiplicativeFunction& F,
                                           const LemmaGrid& grid) {
  RatioReport report;
  report.mode = grid.mode;
  report.info["sigma"] = weight_name(grid.sigma);
  report.info["ceiling"] = format_real(Real(grid.ceiling), 12);
  const auto pf = pushforward(F, sys);
  const auto& Ft = pf.function();
  const auto Gt = minimal_G(Ft);
  const int g = sys.g();
  u64 limit = grid.p_max;
  for (u64 z : grid.z) limit = std::max(limit, z);
  const SystemData d(sys, limit);
  const std::string label = system_label(sys);
  const Real ceiling(grid.ceiling);
  auto fail = [&](const std::string& what) { report.failures.push_back(what); };
  auto timed = [&](auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    ReportRow row;
    row.family_param = label;
    body(row);
    row.millis = detail::millis_since(t0);
    report.rows.push_back(std::move(row));
    return report.rows.back();
  };

  // normalization
  timed([&](ReportRow& row) {
    const std::vector<u64> ones(sys.r(), 1);
    row.x = "1";
    row.variant = "normalization";
    row.lhs = Value::of(detail::lemma_H(sys, Ft, ones, grid.sigma));
    row.rhs = Value::of(Rational(1));
    detail::add_ratio(row);
    if (*row.lhs->exact != 1) fail("normalization: H(1..1) = " + format_rational(*row.lhs->exact));
  });

  // submultiplicativity on sampled coprime pairs
  timed([&](ReportRow& row) {
    std::mt19937_64 rng(grid.seed);
    std::uniform_int_distribution<u64> pick(1, std::max<u64>(grid.h1_max, 1));
    const std::size_t r = sys.r();
    std::vector<u64> a(r), b(r), ab(r);
    std::optional<Rational> worst;
    Rational worst_l(0), worst_r(0);
    std::size_t compared = 0;
    for (unsigned t = 0; t < grid.h1_samples; ++t) {
      Int pa(1), pb(1);
      do {
        pa = 1;
        pb = 1;
        for (std::size_t h = 0; h < r; ++h) {
          a[h] = pick(rng);
          b[h] = pick(rng);
          pa *= a[h];
          pb *= b[h];
        }
      } while (gcd(pa, pb) != 1);
      for (std::size_t h = 0; h < r; ++h) ab[h] = a[h] * b[h];
      const Rational lhs = detail::lemma_H(sys, Ft, ab, grid.sigma);
      const Rational rhs = detail::lemma_H(sys, Gt, b, grid.sigma) * detail::lemma_H(sys, Ft, a, grid.sigma);
      if (lhs == 0 && rhs == 0) continue;
      ++compared;
      if (rhs == 0) {
        fail("submult: H(ab) > 0 = T(b)H(a)");
        continue;
      }
      const Rational q = lhs / rhs;
      if (!worst || q > *worst) {
        worst = q;
        worst_l = lhs;
        worst_r = rhs;
      }
    }
    row.x = "samples=" + std::to_string(grid.h1_samples);
    row.variant = "submult";
    row.note = std::to_string(compared) + " nonzero comparisons";
    if (worst) {
      row.lhs = Value::of(worst_l);
      row.rhs = Value::of(worst_r);
      row.ratio = Value::of(*worst);
      if (*worst > 1) fail("submult: H(ab) / (T(b) H(a)) = " + format_rational(*worst) + " > 1");
    }
  });

  // local sums of T over p <= p_max
  {
    const unsigned L = 8 * static_cast<unsigned>(g) + 8;
    Real best2(-1), best3(-1), s2_at(0), s3_at(0);
    u64 p2 = 0, p3 = 0;
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = d.count_upto(grid.p_max);
    for (std::size_t i = 0; i < n; ++i) {
      const u64 p = d.primes()[i];
      Real s2(0), s3(0);
      for (unsigned s = 1; s <= L; ++s) {
        Rational local(0);
        detail::lemma_terms(d, Gt, i, s, grid.sigma, [&](std::span<const unsigned>, const Rational& t) { local += t; });
        if (local == 0) continue;
        const Real lv(local);
        s2 += lv;
        if (s > static_cast<unsigned>(2 * g)) s3 += lv * exp(Real(s) / Real(4 * g) * log(Real(p)));
      }
      const Real q2 = s2 * Real(p), q3 = s3 * exp(Real(5) / 4 * log(Real(p)));
      if (q2 > best2) {
        best2 = q2;
        s2_at = s2;
        p2 = p;
      }
      if (q3 > best3) {
        best3 = q3;
        s3_at = s3;
        p3 = p;
      }
    }
    const double ms = detail::millis_since(t0);
    const std::string xs = "p<=" + std::to_string(grid.p_max);
    ReportRow r2{label, xs, "", "local-sum", Value::of(s2_at), Value::of(Real(1) / Real(p2)), Value::of(best2),
                 std::nullopt, ms, "sup at p=" + std::to_string(p2)};
    ReportRow r3{label, xs, "", "tail", Value::of(s3_at), Value::of(exp(Real(-5) / 4 * log(Real(p3)))),
                 Value::of(best3), std::nullopt, 0, "sup at p=" + std::to_string(p3)};
    if (!(best2 <= ceiling)) fail("local-sum: sup p sum' T = " + format_real(best2, 6));
    if (!(best3 <= ceiling)) fail("tail: sup = " + format_real(best3, 6));
    report.rows.push_back(std::move(r2));
    report.rows.push_back(std::move(r3));
  }

  auto check_ceiling = [&](const ReportRow& row) {
    if (!row.ratio) return;
    const Real q = row.ratio->approx;
    if (!(q > 0 && q <= ceiling))
      fail(row.variant + " z=" + row.x + ": ratio " + format_real(q, 6) + " outside (0, " + format_real(ceiling, 6) + "]");
  };

  for (u64 z : grid.z) {
    const std::string zs = std::to_string(z);
    const Value plain = in_mode(grid.mode, [&]<class S>() {
      return detail::product_sum<S>(d, Ft, z, grid.sigma, Weight::one);
    });
    const Value smooth = in_mode(grid.mode, [&]<class S>() { return detail::smooth_euler<S>(d, Ft, z, grid.sigma); });

    for (Weight th : {Weight::lambda, Weight::lambda_inv})
      check_ceiling(timed([&](ReportRow& row) {
        row.x = zs;
        row.variant = std::string("theta:") + weight_name(th);
        row.lhs = in_mode(grid.mode, [&]<class S>() { return detail::product_sum<S>(d, Ft, z, grid.sigma, th); });
        row.rhs = plain;
        detail::add_ratio(row);
      }));

    check_ceiling(timed([&](ReportRow& row) {
      row.x = zs;
      row.variant = "beta";
      if (Real(z) < exp(Real(4 * g))) {
        row.note = "skipped: z < e^(4g)";
        return;
      }
      const Real beta = 1 / log(Real(z));
      row.lhs = Value::of(detail::smooth_euler<Real>(d, Ft, z, grid.sigma, beta));
      row.rhs = Value::of(detail::smooth_euler<Real>(d, Ft, z, grid.sigma));
      detail::add_ratio(row);
    }));

    for (unsigned K : {2u, 3u})
      check_ceiling(timed([&](ReportRow& row) {
        row.x = zs;
        row.variant = "truncate-K" + std::to_string(K);
        u64 zk = static_cast<u64>(std::floor(std::pow(static_cast<double>(z), 1.0 / K) + 1e-9));
        while (ipow(zk + 1, K) <= Int(z)) ++zk;
        while (zk > 1 && ipow(zk, K) > Int(z)) --zk;
        row.note = "z^(1/K) -> " + std::to_string(zk);
        row.lhs = smooth;
        row.rhs = in_mode(grid.mode, [&]<class S>() { return detail::smooth_euler<S>(d, Ft, zk, grid.sigma); });
        detail::add_ratio(row);
      }));

    timed([&](ReportRow& row) {
      row.x = zs;
      row.variant = "smooth-vs-product";
      row.lhs = smooth;
      row.rhs = plain;
      detail::add_ratio(row);
      const bool below = row.ratio && (row.ratio->exact ? *row.ratio->exact < 1 : row.ratio->approx < 1);
      if (!row.ratio || below)
        fail("smooth-vs-product z=" + zs + ": ratio below 1");
      else if (!(row.ratio->approx <= ceiling))
        fail("smooth-vs-product z=" + zs + ": ratio above ceiling");
    });
  }
  report.summarize();
  return report;
}

}  // namespace majorant

#endif  // MAJORANT_HARNESS_HPP
