#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <vector>

#include "chargelab/rational.hpp"

namespace chargelab {

inline constexpr std::uint64_t kDefaultPeriodCap = 1u << 16;

/// Period-length cap for eventually periodic sets. Intersections multiply
/// periods via lcm; exceeding the cap raises an error instead of degrading.
/// Overridable through the CHARGELAB_PERIOD_CAP environment variable.
inline std::uint64_t& period_cap() {
  static std::uint64_t cap = [] {
    if (const char* env = std::getenv("CHARGELAB_PERIOD_CAP")) {
      std::uint64_t v = std::strtoull(env, nullptr, 10);
      if (v >= 1) return v;
    }
    return kDefaultPeriodCap;
  }();
  return cap;
}

/// An eventually periodic subset of N = {1, 2, 3, ...}, held in canonical
/// form: `pre` lists membership of 1..p, `per` is the repeating pattern from
/// p+1 onward with minimal period, and p is minimal (no preperiod suffix
/// agrees with the periodic extension). Canonical form makes extensional
/// equality coincide with representation equality.
class EpSet {
 public:
  EpSet() : per_{false} {}  // empty set

  static EpSet from_bits(std::vector<bool> pre, std::vector<bool> per) {
    if (per.empty()) throw Error("period must be nonempty");
    if (per.size() > period_cap()) throw Error("period length exceeds cap");
    EpSet s;
    s.pre_ = std::move(pre);
    s.per_ = std::move(per);
    s.canonicalize();
    return s;
  }

  static EpSet from_strings(const std::string& pre, const std::string& per) {
    auto bits = [](const std::string& str) {
      std::vector<bool> v;
      for (char c : str) {
        if (c != '0' && c != '1') throw Error("bit string must contain only 0 and 1");
        v.push_back(c == '1');
      }
      return v;
    };
    return from_bits(bits(pre), bits(per));
  }

  static EpSet empty_set() { return EpSet(); }

  static EpSet all() {
    EpSet s;
    s.per_ = {true};
    return s;
  }

  /// Finite set of listed naturals (1-based).
  static EpSet finite(const std::vector<std::uint64_t>& elems) {
    std::uint64_t hi = 0;
    for (auto e : elems) {
      if (e == 0) throw Error("naturals start at 1");
      hi = std::max(hi, e);
    }
    std::vector<bool> pre(hi, false);
    for (auto e : elems) pre[e - 1] = true;
    return from_bits(std::move(pre), {false});
  }

  static EpSet cofinite_complement(const std::vector<std::uint64_t>& missing) {
    return complement(finite(missing));
  }

  bool member(std::uint64_t n) const {
    if (n == 0) throw Error("naturals start at 1");
    if (n <= pre_.size()) return pre_[n - 1];
    return per_[(n - pre_.size() - 1) % per_.size()];
  }

  std::uint64_t preperiod_len() const { return pre_.size(); }
  std::uint64_t period_len() const { return per_.size(); }
  const std::vector<bool>& preperiod_bits() const { return pre_; }
  const std::vector<bool>& period_bits() const { return per_; }

  bool is_empty() const { return pre_.empty() && per_.size() == 1 && !per_[0]; }
  bool is_all() const { return pre_.empty() && per_.size() == 1 && per_[0]; }
  bool is_finite() const { return per_.size() == 1 && !per_[0]; }
  bool is_cofinite() const { return per_.size() == 1 && per_[0]; }
  bool is_infinite() const { return !is_finite(); }
  bool purely_periodic() const { return pre_.empty(); }

  /// Natural density: ones per period. The preperiod does not contribute.
  Rat density() const {
    int ones = 0;
    for (bool b : per_) ones += b;
    return Rat(ones, static_cast<Int>(per_.size()));
  }

  /// The purely periodic set that agrees with this one from some point on.
  EpSet core() const {
    if (pre_.empty()) return *this;
    std::uint64_t q = per_.size(), p = pre_.size();
    std::vector<bool> rot(q);
    for (std::uint64_t i = 0; i < q; ++i) rot[i] = per_[((i + q - (p % q)) % q + q) % q];
    // rot[i] = per[(i - p) mod q], so member(n) = rot[(n-1) mod q] eventually.
    return from_bits({}, std::move(rot));
  }

  /// Elements of a finite set (error otherwise).
  std::vector<std::uint64_t> finite_elements() const {
    if (!is_finite()) throw Error("set is not finite");
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < pre_.size(); ++i)
      if (pre_[i]) out.push_back(i + 1);
    return out;
  }

  /// Members strictly below n, in increasing order.
  std::vector<std::uint64_t> elements_below(std::uint64_t n) const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = 1; k < n; ++k)
      if (member(k)) out.push_back(k);
    return out;
  }

  /// Smallest member >= n, or 0 if none exists.
  std::uint64_t first_at_least(std::uint64_t n) const {
    std::uint64_t horizon = std::max<std::uint64_t>(n, pre_.size() + 1) + per_.size();
    for (std::uint64_t k = n; k <= horizon; ++k)
      if (member(k)) return k;
    return 0;
  }

  friend EpSet complement(const EpSet& a) {
    EpSet s;
    s.pre_ = a.pre_;
    s.pre_.flip();
    s.per_ = a.per_;
    s.per_.flip();
    s.canonicalize();
    return s;
  }

  friend EpSet ep_union(const EpSet& a, const EpSet& b) {
    return combine(a, b, [](bool x, bool y) { return x || y; });
  }
  friend EpSet ep_intersect(const EpSet& a, const EpSet& b) {
    return combine(a, b, [](bool x, bool y) { return x && y; });
  }
  friend EpSet ep_symdiff(const EpSet& a, const EpSet& b) {
    return combine(a, b, [](bool x, bool y) { return x != y; });
  }
  friend EpSet ep_diff(const EpSet& a, const EpSet& b) {
    return combine(a, b, [](bool x, bool y) { return x && !y; });
  }

  friend bool ep_subset(const EpSet& a, const EpSet& b) { return ep_diff(a, b).is_empty(); }

  bool operator==(const EpSet& o) const { return pre_ == o.pre_ && per_ == o.per_; }
  bool operator<(const EpSet& o) const {
    if (pre_ != o.pre_) return pre_ < o.pre_;
    return per_ < o.per_;
  }

  std::string to_string() const {
    std::string s = "(";
    for (bool b : pre_) s += b ? '1' : '0';
    s += "|";
    for (bool b : per_) s += b ? '1' : '0';
    s += ")";
    return s;
  }

 private:
  template <class Op>
  static EpSet combine(const EpSet& a, const EpSet& b, Op op) {
    std::uint64_t p = std::max(a.pre_.size(), b.pre_.size());
    std::uint64_t q = std::lcm(a.per_.size(), b.per_.size());
    if (q > period_cap()) throw Error("period length exceeds cap");
    EpSet s;
    s.pre_.resize(p);
    for (std::uint64_t i = 0; i < p; ++i) s.pre_[i] = op(a.member(i + 1), b.member(i + 1));
    s.per_.resize(q);
    for (std::uint64_t i = 0; i < q; ++i)
      s.per_[i] = op(a.member(p + 1 + i), b.member(p + 1 + i));
    s.canonicalize();
    return s;
  }

  void canonicalize() {
    reduce_period();
    // Absorb preperiod bits that already match the periodic extension.
    // Dropping the last preperiod bit shifts the period's phase by one.
    while (!pre_.empty() && pre_.back() == per_.back()) {
      pre_.pop_back();
      bool last = per_.back();
      per_.pop_back();
      per_.insert(per_.begin(), last);
    }
  }

  void reduce_period() {
    std::uint64_t q = per_.size();
    for (std::uint64_t d = 1; d <= q / 2; ++d) {
      if (q % d != 0) continue;
      bool ok = true;
      for (std::uint64_t i = d; i < q && ok; ++i) ok = per_[i] == per_[i % d];
      if (ok) {
        per_.resize(d);
        return;
      }
    }
  }

  std::vector<bool> pre_;
  std::vector<bool> per_;  // never empty
};

/// The three fields of subsets of N used throughout: finite-or-cofinite sets
/// with the 0/1 charge, purely periodic sets with the density charge, and the
/// completion of the latter by its null sets (the eventually periodic sets).
enum class NatField { Cofinite, Periodic, EventuallyPeriodic };

inline std::string nat_field_name(NatField k) {
  switch (k) {
    case NatField::Cofinite: return "cofinite";
    case NatField::Periodic: return "periodic";
    case NatField::EventuallyPeriodic: return "eventually-periodic";
  }
  throw InternalError("bad NatField");
}

inline bool nat_field_contains(NatField kind, const EpSet& a) {
  switch (kind) {
    case NatField::Cofinite: return a.is_finite() || a.is_cofinite();
    case NatField::Periodic: return a.purely_periodic();
    case NatField::EventuallyPeriodic: return true;
  }
  throw InternalError("bad NatField");
}

inline Rat nat_charge(NatField kind, const EpSet& a) {
  if (!nat_field_contains(kind, a)) throw Error("not a field element");
  if (kind == NatField::Cofinite) return a.is_finite() ? Rat(0) : Rat(1);
  return a.density();
}

}  // namespace chargelab
