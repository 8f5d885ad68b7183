#ifndef MAJORANT_NUMERIC_HPP
#define MAJORANT_NUMERIC_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace majorant {

namespace bmp = boost::multiprecision;

/// Arbitrary-precision integer (GMP backed, no expression templates).
using Int = bmp::number<bmp::gmp_int, bmp::et_off>;
/// Exact rational (GMP backed).
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;
/// Binary float with a 114-bit mantissa, used by the float fast path.
using Real = bmp::number<bmp::cpp_bin_float<34>, bmp::et_off>;

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Arithmetic mode of the right-hand-side machinery.
enum class Mode { exact, real };

inline const char* to_string(Mode m) { return m == Mode::exact ? "exact" : "float"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::exact;
  if (s == "float" || s == "real") return Mode::real;
  throw std::invalid_argument("unknown mode '" + s + "' (expected exact|float)");
}

template <class Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

/// Converts an exact rational into the working scalar type.
template <class Scalar>
Scalar to_scalar(const Rational& q) {
  if constexpr (is_exact_v<Scalar>) {
    return q;
  } else {
    return Scalar(q);
  }
}

inline Real to_real(const Rational& q) { return Real(q); }
inline Real to_real(const Real& r) { return r; }

inline Rational make_rational(const Int& num, const Int& den) { return Rational(num, den); }
inline Rational make_rational(long long num, long long den = 1) {
  return Rational(Int(num), Int(den));
}

inline Int to_int(u64 v) { return Int(v); }

inline Int to_int(u128 v) {
  Int hi(static_cast<u64>(v >> 64));
  Int lo(static_cast<u64>(v));
  return (hi << 64) + lo;
}

inline bool fits_u64(const Int& v) {
  return v >= 0 && v <= Int(std::numeric_limits<u64>::max());
}

inline u64 to_u64(const Int& v) {
  if (!fits_u64(v)) throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
  return v.convert_to<u64>();
}

/// Reduces v into [0, m).
inline u64 mod_u64(const Int& v, u64 m) {
  Int r = v % Int(m);
  if (r < 0) r += Int(m);
  return r.convert_to<u64>();
}

inline Rational pow(const Rational& base, unsigned e) {
  Rational r(1);
  Rational b = base;
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return r;
}

inline Int ipow(const Int& base, unsigned e) { return bmp::pow(base, e); }

inline Int ipow(u64 base, unsigned e) { return bmp::pow(Int(base), e); }

/// Decimal rendering with `digits` significant digits.
inline std::string format_real(const Real& v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

/// Exact rendering: "n" for integers, "n/d" otherwise.
inline std::string format_rational(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(Int(s));
  return Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

}  // namespace majorant

#endif  // MAJORANT_NUMERIC_HPP
