#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "chargelab/rational.hpp"

namespace chargelab {

/// Limit of a Laurent polynomial as n -> infinity.
struct LimitVal {
  enum Kind { Finite, PlusInf, MinusInf } kind = Finite;
  Rat value;  // meaningful for Finite

  bool finite() const { return kind == Finite; }
  static LimitVal fin(Rat v) { return {Finite, std::move(v)}; }
};

/// Rational-coefficient Laurent polynomial in an integer variable n >= 1,
/// sum of c_e * n^e over a finite set of (possibly negative) exponents e.
/// This class is the exact value model for functions on N: it is closed under
/// sums, products and integer powers, evaluates exactly at every n, and its
/// sign is eventually constant, with a computable threshold.
class Laurent {
 public:
  Laurent() = default;

  static Laurent constant(Rat c) {
    Laurent l;
    if (c != 0) l.c_[0] = std::move(c);
    return l;
  }

  static Laurent monomial(int exp, Rat coeff) {
    Laurent l;
    if (coeff != 0) l.c_[exp] = std::move(coeff);
    return l;
  }

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.empty() || (c_.size() == 1 && c_.begin()->first == 0); }
  Rat constant_value() const {
    if (is_zero()) return Rat(0);
    if (!is_constant()) throw InternalError("not a constant polynomial");
    return c_.begin()->second;
  }

  Rat eval(std::uint64_t n) const {
    if (n == 0) throw Error("naturals start at 1");
    Rat sum(0);
    Int nn(n);
    for (const auto& [e, coeff] : c_) {
      if (e >= 0) {
        Int p = 1;
        for (int i = 0; i < e; ++i) p *= nn;
        sum += coeff * Rat(p);
      } else {
        Int p = 1;
        for (int i = 0; i < -e; ++i) p *= nn;
        sum += coeff / Rat(p);
      }
    }
    return sum;
  }

  LimitVal limit() const {
    if (c_.empty()) return LimitVal::fin(Rat(0));
    auto top = c_.rbegin();  // largest exponent
    if (top->first > 0) return {top->second > 0 ? LimitVal::PlusInf : LimitVal::MinusInf, Rat(0)};
    if (top->first == 0) return LimitVal::fin(top->second);
    return LimitVal::fin(Rat(0));
  }

  /// Sign of eval(n) for all n >= sign_threshold(): -1, 0 (zero polynomial) or +1.
  int tail_sign() const {
    if (c_.empty()) return 0;
    const Rat& lead = c_.rbegin()->second;
    return lead > 0 ? 1 : -1;
  }

  /// Smallest N we certify such that sign(eval(n)) == tail_sign() for all
  /// n >= N, via the Cauchy root bound on the numerator polynomial.
  std::uint64_t sign_threshold() const {
    if (c_.empty() || c_.size() == 1) return 1;
    int shift = -c_.begin()->first;  // clear negative exponents
    if (shift < 0) shift = 0;
    // Numerator polynomial coefficients a_e for exponents e+shift.
    const Rat& lead = c_.rbegin()->second;
    Rat maxratio(0);
    for (auto it = c_.begin(); std::next(it) != c_.end(); ++it)
      maxratio = rat_max(maxratio, rat_abs(it->second / lead));
    Rat bound = 1 + maxratio;
    Int fl = rat_floor(bound);
    if (fl < 1) fl = 1;
    if (fl > Int(std::uint64_t(1) << 62)) throw Error("sign threshold overflow");
    return static_cast<std::uint64_t>(fl) + 1;
  }

  /// Formal derivative with respect to the (real) variable.
  Laurent derivative() const {
    Laurent d;
    for (const auto& [e, coeff] : c_)
      if (e != 0) d.c_[e - 1] = coeff * e;
    return d;
  }

  /// Threshold beyond which eval is monotone (derivative sign constant).
  std::uint64_t monotone_threshold() const { return derivative().sign_threshold(); }

  friend Laurent operator+(const Laurent& a, const Laurent& b) {
    Laurent r = a;
    for (const auto& [e, coeff] : b.c_) {
      Rat& slot = r.c_[e];
      slot += coeff;
      if (slot == 0) r.c_.erase(e);
    }
    return r;
  }

  friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + b.scaled(Rat(-1)); }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    for (const auto& [ea, ca] : a.c_)
      for (const auto& [eb, cb] : b.c_) {
        Rat& slot = r.c_[ea + eb];
        slot += ca * cb;
        if (slot == 0) r.c_.erase(ea + eb);
      }
    return r;
  }

  Laurent scaled(const Rat& s) const {
    Laurent r;
    if (s == 0) return r;
    for (const auto& [e, coeff] : c_) r.c_[e] = coeff * s;
    return r;
  }

  Laurent pow(unsigned p) const {
    Laurent acc = constant(Rat(1));
    Laurent base = *this;
    while (p) {
      if (p & 1) acc = acc * base;
      base = base * base;
      p >>= 1;
    }
    return acc;
  }

  bool operator==(const Laurent& o) const { return c_ == o.c_; }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      if (!s.empty()) s += " + ";
      s += rat_str(it->second);
      if (it->first != 0) s += "*n^" + std::to_string(it->first);
    }
    return s;
  }

 private:
  std::map<int, Rat> c_;  // exponent -> nonzero coefficient
};

}  // namespace chargelab
