// Shifted divisor pairs: sum_{n <= x} tau(n) tau(n + l) against
// Delta(l) x (log x)^-2 prod_{p <= x} (1 + 2/p)^2 for a few l.
//   sample_shifted_pairs [x]

#include <cstdio>
#include <string>

#include "majorant/harness.hpp"

using namespace majorant;

int main(int argc, char** argv) {
  const Rational x(argc > 1 ? std::stoll(argv[1]) : 20000);
  const auto rep = sweep_shifted_pairs(x, {1, 2, 3, 4, 6, 12, 30, 210}, 2, Mode::real);
  std::printf("%6s %14s %16s %10s %8s\n", "l", "lhs", "rhs", "ratio", "Delta");
  for (const auto& r : rep.rows)
    std::printf("%6s %14s %16s %10s %8s\n", r.family_param.c_str(), rep.render(r.lhs).c_str(),
                format_real(r.rhs->approx, 8).c_str(), format_real(r.ratio->approx, 4).c_str(),
                format_real(r.delta_factor->approx, 4).c_str());
  std::printf("mean Delta over these l: %s\n", format_real(*rep.mean_delta, 6).c_str());
}
