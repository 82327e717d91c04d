#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace chargelab {

using Int = boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// Library-wide error type. Messages are stable strings the CLI maps to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal invariant violations (exit code 3 in the CLI).
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }
inline const Rat& rat_min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

inline Rat rat_pow(const Rat& q, unsigned p) {
  Rat acc(1);
  Rat base = q;
  while (p) {
    if (p & 1) acc *= base;
    base *= base;
    p >>= 1;
  }
  return acc;
}

/// Formats as "p/q" with q > 0 and gcd(p,q) = 1, including "p/1" for integers.
inline std::string rat_str(const Rat& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Accepts "p/q" or a bare integer "p"; q must be positive after normalisation.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw Error("rational with zero denominator: " + s);
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw Error("malformed rational: " + s);
  }
}

/// Largest integer n with n <= q.
inline Int rat_floor(const Rat& q) {
  Int n = numerator(q) / denominator(q);
  if (q < 0 && n * denominator(q) != numerator(q)) --n;
  return n;
}

/// Floor of the p-th root of a nonnegative integer.
inline Int int_root_floor(const Int& a, unsigned p) {
  if (a < 0) throw InternalError("int_root_floor: negative radicand");
  if (a == 0 || a == 1 || p == 1) return a;
  Int lo = 0, hi = a;
  // Tighten hi: 2^(ceil(bits/p)) bounds the root.
  unsigned bits = static_cast<unsigned>(msb(a)) + 1;
  hi = Int(1) << (bits / p + 1);
  while (lo < hi) {
    Int mid = (lo + hi + 1) / 2;
    Int mp = 1;
    bool over = false;
    for (unsigned i = 0; i < p; ++i) {
      mp *= mid;
      if (mp > a) { over = true; break; }
    }
    if (over) hi = mid - 1; else lo = mid;
  }
  return lo;
}

}  // namespace chargelab
