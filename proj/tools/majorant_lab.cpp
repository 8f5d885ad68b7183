// majorant-lab <rho|disc|delta|bound|lhs|ratio|sweep|lemmas> [flags]
// exit: 0 ok, 2 bad input or parameters, 3 thresholds exceeded, 1 I/O trouble.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "majorant/harness.hpp"

using namespace majorant;

namespace {

constexpr int kOk = 0, kIo = 1, kInvalid = 2, kSuite = 3;

// Flags double as config keys: --config is read first, flags given on the
// command line then override it.
struct Flags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> opts;
  std::string config;
  std::vector<std::string> sets;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    opts[key] = app->add_option("--" + key, values[key], help);
  }
  void add_common(CLI::App* app) {
    app->add_option("--config", config, "key=value file; flags override it");
    app->add_option("--set", sets, "extra key=value override (repeatable)");
  }
  ExperimentConfig build() const {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
    for (const auto& [key, opt] : opts)
      if (opt->count()) cfg.set(key, key == "system" ? read_systems(values.at(key)) : values.at(key));
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
      cfg.set(detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    return cfg;
  }

  // --system takes inline text or a file with one system per line.
  static std::string read_systems(const std::string& v) {
    if (!std::filesystem::is_regular_file(v)) return v;
    std::ifstream in(v);
    std::string line, joined;
    while (std::getline(in, line)) {
      line = detail::trim(line.substr(0, line.find('#')));
      if (!line.empty()) joined += (joined.empty() ? "" : "/") + line;
    }
    return joined;
  }
};

void add_bound_flags(Flags& f, CLI::App* app) {
  f.add(app, "system", "system text ('x; x+2', '1,0,1', 'R1; R2 | 1,0; 0,2') or a file of them");
  f.add(app, "function", "one | tau | tau_m:m | powA:A | random:seed");
  f.add(app, "x", "x value(s), comma-separated");
  f.add(app, "y", "interval length: number, x or x^e");
  for (const char* k : {"alpha", "delta", "A", "B", "eps", "c0"}) f.add(app, k, std::string("parameter ") + k);
  f.add(app, "mode", "exact | float");
  f.add_common(app);
}

const FactoredSystem only_system(const ExperimentConfig& cfg) {
  if (cfg.systems.size() != 1) throw std::invalid_argument("need exactly one --system");
  return parse_system(cfg.systems.front());
}

std::string join(const std::vector<u64>& v) {
  std::string s;
  for (u64 p : v) s += (s.empty() ? "" : " ") + std::to_string(p);
  return s.empty() ? "-" : s;
}

std::string show(const Value& v, Mode mode) { return v.str(mode, mode == Mode::exact ? 30 : 12); }

int write_report(const RatioReport& rep, const ExperimentConfig& cfg) {
  if (cfg.output.empty() || cfg.output == "-")
    std::cout << render_report(rep, cfg.format);
  else
    emit(rep, cfg.output, cfg.format);
  for (const auto& f : rep.failures) std::cerr << "threshold: " << f << "\n";
  return rep.pass() ? kOk : kSuite;
}

// ---------------------------------------------------------------------------

int cmd_rho(const std::string& poly, const std::string& modulus) {
  const IntPoly q = parse_poly(poly);
  const u64 n = std::stoull(modulus);
  std::cout << rho(q, n) << "\n";
  return kOk;
}

int cmd_disc(const ExperimentConfig& cfg) {
  if (cfg.systems.empty()) throw std::invalid_argument("need --system");
  for (const auto& text : cfg.systems) {
    const auto sys = parse_system(text);
    std::cout << "system  " << system_label(sys) << "\n"
              << "Q       " << to_string(sys.q()) << "\n"
              << "Q*      " << to_string(sys.q_star()) << "\n"
              << "g g* r k " << sys.g() << " " << sys.g_star() << " " << sys.r() << " " << sys.k() << "\n"
              << "D       " << sys.disc() << "\n"
              << "D*      " << sys.disc_star() << "\n"
              << "p | D   " << (sys.disc() == 0 ? std::string("all (D = 0)") : join(sys.disc_primes())) << "\n"
              << "p | D*  " << join(sys.disc_star_primes()) << "\n"
              << "fixed   " << join(fixed_prime_divisors(sys.q())) << "\n";
  }
  return kOk;
}

int cmd_delta(const ExperimentConfig& cfg) {
  const auto sys = only_system(cfg);
  const auto F = make_builtin(cfg.function, sys.k());
  const auto G = minimal_G(pushforward(F, sys).function());
  const Rational ds = delta_Dstar(sys, G);
  const auto up = delta_Dstar_upper(sys, G);
  std::cout << "Delta_D*        " << format_rational(ds) << " ~ " << format_real(Real(ds), 12) << "\n"
            << "upper bound     " << show(up.bound, Mode::real) << " (C = " << format_rational(up.C) << ")\n";
  if (sys.disc() != 0) {
    const Rational dg = delta_D_general(sys, F);
    std::cout << "Delta_D         " << format_rational(dg) << " ~ " << format_real(Real(dg), 12) << "\n";
  }
  if (sys.k() == 1 && sys.disc() != 0) {
    const Rational t = delta_D_k1(sys.q(), F).second;
    std::cout << "Delta~_D        " << format_rational(t) << " ~ " << format_real(Real(t), 12) << "\n";
  }
  return kOk;
}

int cmd_bound(const ExperimentConfig& cfg) {
  const auto sys = only_system(cfg);
  const auto F = make_builtin(cfg.function, sys.k());
  int rc = kOk;
  for (const auto& x : cfg.x) {
    const Value yv = cfg.y.at(x);
    const Rational y = yv.exact ? *yv.exact : rational_approx(yv.approx);
    const BoundParams bp = cfg.bound_params(x, y);
    const auto check = validate(bp, sys);
    for (const auto& w : check.warnings) std::cerr << "warning: " << w << "\n";
    if (!check.ok()) {
      std::cerr << "x=" << format_rational(x) << ": " << check.summary() << "\n";
      rc = kInvalid;
      continue;
    }
    SystemData d(sys, std::max<u64>(floor_u64(x), 2));
    std::cout << "x=" << format_rational(x) << " y=" << show(yv, cfg.mode) << "\n";
    for (const auto& v : cfg.variants) {
      try {
        Rhs r;
        if (v == "main") r = rhs_main(d, F, bp, cfg.mode);
        else if (v == "cor-disc") r = rhs_cor_disc(d, F, bp, cfg.mode);
        else if (v == "cor-mult") r = rhs_cor_mult(d, F, bp, cfg.mode);
        else if (v == "shiu") r = rhs_shiu(d, F, bp, cfg.mode);
        else if (v == "primes") r = rhs_primes(d, F, bp, cfg.mode);
        else throw std::invalid_argument("variant '" + v + "' is only available through sweep");
        if (!yv.exact) r.value = inexact(r.value);
        std::cout << "  " << v << " " << show(r.value, cfg.mode) << "  delta " << show(r.delta, cfg.mode) << "\n";
      } catch (const std::invalid_argument& e) {
        std::cerr << "  " << v << ": " << e.what() << "\n";
        rc = kInvalid;
      }
    }
  }
  return rc;
}

int cmd_lhs(const ExperimentConfig& cfg, bool primes) {
  const auto sys = only_system(cfg);
  const auto F = make_builtin(cfg.function, sys.k());
  for (const auto& x : cfg.x) {
    const Value yv = cfg.y.at(x);
    const Rational y = yv.exact ? *yv.exact : rational_approx(yv.approx);
    const auto t0 = std::chrono::steady_clock::now();
    const Rational s = primes ? prime_sum(sys, F, x, y) : short_sum(sys, F, x, y);
    const double ms = detail::millis_since(t0);
    const auto iv = IntegerInterval::of(x, y);
    std::cout << "n in [" << iv.first << ", " << iv.last() << "]: " << format_rational(s) << "  (" << ms << " ms)\n";
  }
  return kOk;
}

int cmd_ratio(const ExperimentConfig& cfg, bool sieve) {
  return write_report(sieve ? run_sieve_check(cfg) : run_ratio_experiment(cfg), cfg);
}

int cmd_sweep(ExperimentConfig cfg) {
  cfg.family = Family::shifted;
  if (cfg.params.empty()) throw std::invalid_argument("sweep needs --l");
  if (cfg.x.size() != 1) throw std::invalid_argument("sweep takes a single x");
  return write_report(sweep_shifted_pairs(cfg.x.front(), cfg.params, cfg.m, cfg.mode, cfg.mean_range, cfg.threads), cfg);
}

int cmd_lemmas(const ExperimentConfig& cfg) {
  const auto sys = only_system(cfg);
  LemmaGrid grid;
  grid.z = cfg.z;
  grid.p_max = cfg.lemma_pmax;
  grid.sigma = parse_weight(cfg.sigma);
  grid.h1_samples = cfg.h1_samples;
  grid.h1_max = cfg.h1_max;
  grid.seed = cfg.seed;
  grid.ceiling = cfg.lemma_ceiling;
  grid.mode = cfg.mode;
  return write_report(verify_technical_lemmas(sys, make_builtin(cfg.function, sys.k()), grid), cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"majorant-lab: root densities, discriminant factors, majorants and ratio experiments"};
  app.require_subcommand(1);

  std::string poly, modulus;
  auto* rho_cmd = app.add_subcommand("rho", "number of roots of P mod n");
  rho_cmd->add_option("poly", poly, "polynomial, e.g. x^2+1 or 1,0,1")->required();
  rho_cmd->add_option("modulus", modulus, "modulus n >= 1")->required();

  Flags disc_f, delta_f, bound_f, lhs_f, ratio_f, sweep_f, lemma_f;
  auto* disc_cmd = app.add_subcommand("disc", "discriminants and their primes");
  disc_f.add(disc_cmd, "system", "system text or file");
  disc_f.add_common(disc_cmd);

  auto* delta_cmd = app.add_subcommand("delta", "discriminant factors");
  add_bound_flags(delta_f, delta_cmd);

  auto* bound_cmd = app.add_subcommand("bound", "right-hand sides");
  add_bound_flags(bound_f, bound_cmd);
  bound_f.add(bound_cmd, "variants", "main,cor-disc,cor-mult,shiu,primes");

  bool primes = false;
  auto* lhs_cmd = app.add_subcommand("lhs", "exact short sum over x < n <= x + y");
  add_bound_flags(lhs_f, lhs_cmd);
  lhs_cmd->add_flag("--primes", primes, "sum over prime n only");

  bool sieve = false;
  auto* ratio_cmd = app.add_subcommand("ratio", "LHS/RHS ratio experiment");
  add_bound_flags(ratio_f, ratio_cmd);
  for (const char* k : {"family", "params", "l", "c", "m", "mean_range", "variants", "output", "format", "seed", "threads", "ratio_floor",
                        "ratio_ceiling", "spread_ceiling", "a", "z", "xi"})
    ratio_f.add(ratio_cmd, k, k);
  ratio_cmd->add_flag("--sieve", sieve, "sieve count check over the (a, z) grid instead");

  auto* sweep_cmd = app.add_subcommand("sweep", "shifted pairs (X, X + l) against the holowinsky-type bound");
  sweep_f.add(sweep_cmd, "l", "l range, e.g. 1..100,smooth23:10000");
  for (const char* k : {"x", "m", "mode", "mean_range", "output", "format", "threads"}) sweep_f.add(sweep_cmd, k, k);
  sweep_f.add_common(sweep_cmd);

  auto* lemma_cmd = app.add_subcommand("lemmas", "numeric checks of the technical lemmas");
  lemma_f.add(lemma_cmd, "system", "system text or file");
  for (const char* k : {"function", "z", "sigma", "lemma_pmax", "h1_samples", "h1_max", "lemma_ceiling", "seed", "mode",
                        "output", "format"})
    lemma_f.add(lemma_cmd, k, k);
  lemma_f.add_common(lemma_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (rho_cmd->parsed()) return cmd_rho(poly, modulus);
    if (disc_cmd->parsed()) return cmd_disc(disc_f.build());
    if (delta_cmd->parsed()) return cmd_delta(delta_f.build());
    if (bound_cmd->parsed()) return cmd_bound(bound_f.build());
    if (lhs_cmd->parsed()) return cmd_lhs(lhs_f.build(), primes);
    if (ratio_cmd->parsed()) return cmd_ratio(ratio_f.build(), sieve);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_f.build());
    if (lemma_cmd->parsed()) return cmd_lemmas(lemma_f.build());
  } catch (const std::invalid_argument& e) {  // includes ValidationError
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
