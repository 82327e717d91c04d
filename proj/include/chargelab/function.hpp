#pragma once

#include <algorithm>
#include <optional>
#include <variant>
#include <vector>

#include "chargelab/finite_space.hpp"
#include "chargelab/laurent.hpp"
#include "chargelab/periodic_set.hpp"

namespace chargelab {

/// A representable subset of whichever universe is in play.
using UniSet = std::variant<Mask, EpSet>;

inline bool uniset_is_finite_universe(const UniSet& s) { return std::holds_alternative<Mask>(s); }

enum class RayFlavor { OpenUp, ClosedUp, OpenDown, ClosedDown, Level };

/// One piece of a function on N: an eventually periodic set together with the
/// Laurent polynomial giving the value at each of its members.
struct NatPiece {
  EpSet set;
  Laurent fn;
};

/// Exact representation of f : X -> Q with computable rays.
///
/// Finite universe: one rational per point. Natural numbers: a finite
/// partition of N into eventually periodic pieces, each carrying a Laurent
/// polynomial in n. This normal form is closed under the whole function
/// catalog (affine combinations, products, absolute value, positive and
/// negative parts, integer powers), evaluates exactly everywhere, and every
/// ray f^{-1}(y,.) is again a representable set.
class Func {
 public:
  static Func finite_pointwise(std::vector<Rat> values) {
    if (values.empty()) throw Error("empty ground set");
    Func f;
    f.v_ = std::move(values);
    return f;
  }

  static Func nat_pieces(std::vector<NatPiece> pieces) {
    Func f;
    f.v_ = normalize(std::move(pieces));
    return f;
  }

  static Func constant_finite(int num_points, Rat c) {
    return finite_pointwise(std::vector<Rat>(num_points, std::move(c)));
  }

  static Func constant_nat(Rat c) {
    return nat_pieces({{EpSet::all(), Laurent::constant(std::move(c))}});
  }

  static Func indicator_nat(const EpSet& e) {
    std::vector<NatPiece> pieces;
    pieces.push_back({e, Laurent::constant(Rat(1))});
    pieces.push_back({complement(e), Laurent::constant(Rat(0))});
    return nat_pieces(std::move(pieces));
  }

  static Func indicator_finite(int num_points, Mask m) {
    std::vector<Rat> v(num_points, Rat(0));
    for (int i = 0; i < num_points; ++i)
      if (m & (Mask(1) << i)) v[i] = 1;
    return finite_pointwise(std::move(v));
  }

  /// f(n) = scale / n on the naturals.
  static Func reciprocal(Rat scale) {
    return nat_pieces({{EpSet::all(), Laurent::monomial(-1, std::move(scale))}});
  }

  /// f(n) = scale * n on the naturals.
  static Func linear_nat(Rat scale) {
    return nat_pieces({{EpSet::all(), Laurent::monomial(1, std::move(scale))}});
  }

  bool finite_universe() const { return std::holds_alternative<std::vector<Rat>>(v_); }
  int num_points() const { return static_cast<int>(std::get<std::vector<Rat>>(v_).size()); }
  const std::vector<Rat>& values() const { return std::get<std::vector<Rat>>(v_); }
  const std::vector<NatPiece>& pieces() const { return std::get<std::vector<NatPiece>>(v_); }

  Rat eval_point(int point) const { return values().at(point); }

  Rat eval_nat(std::uint64_t n) const {
    for (const auto& p : pieces())
      if (p.set.member(n)) return p.fn.eval(n);
    throw InternalError("nat pieces do not cover N");
  }

  friend Func operator+(const Func& a, const Func& b) {
    return combine(a, b, [](const Laurent& x, const Laurent& y) { return x + y; },
                   [](const Rat& x, const Rat& y) { return x + y; });
  }
  friend Func operator-(const Func& a, const Func& b) {
    return combine(a, b, [](const Laurent& x, const Laurent& y) { return x - y; },
                   [](const Rat& x, const Rat& y) { return x - y; });
  }
  friend Func operator*(const Func& a, const Func& b) {
    return combine(a, b, [](const Laurent& x, const Laurent& y) { return x * y; },
                   [](const Rat& x, const Rat& y) { return x * y; });
  }

  Func scaled(const Rat& s) const {
    if (finite_universe()) {
      auto v = values();
      for (Rat& x : v) x *= s;
      return finite_pointwise(std::move(v));
    }
    std::vector<NatPiece> out;
    for (const auto& p : pieces()) out.push_back({p.set, p.fn.scaled(s)});
    return nat_pieces(std::move(out));
  }

  static Func affine(const Rat& a, const Func& f, const Rat& b, const Func& g) {
    return f.scaled(a) + g.scaled(b);
  }

  Func pow_int(unsigned p) const {
    if (p == 0) throw Error("power must be positive");
    if (finite_universe()) {
      auto v = values();
      for (Rat& x : v) x = rat_pow(x, p);
      return finite_pointwise(std::move(v));
    }
    std::vector<NatPiece> out;
    for (const auto& pc : pieces()) out.push_back({pc.set, pc.fn.pow(p)});
    return nat_pieces(std::move(out));
  }

  /// |f|: on N, pieces split at the threshold beyond which the sign of the
  /// polynomial is constant; the finitely many early points go to their own
  /// finite pieces.
  Func abs_() const { return sign_select(true, true); }
  Func pos_part() const { return sign_select(true, false); }
  Func neg_part() const { return sign_select(false, true); }

  static Func max_(const Func& a, const Func& b) { return a + (b - a).pos_part(); }
  static Func min_(const Func& a, const Func& b) { return a - (a - b).pos_part(); }

  /// Exact inverse image of a ray or level set.
  UniSet ray(const Rat& y, RayFlavor flavor) const {
    if (finite_universe()) {
      Mask m = 0;
      const auto& vals = values();
      for (size_t i = 0; i < vals.size(); ++i)
        if (cmp(vals[i], y, flavor)) m |= Mask(1) << i;
      return m;
    }
    EpSet acc = EpSet::empty_set();
    for (const auto& p : pieces()) {
      Laurent g = p.fn - Laurent::constant(y);
      if (g.is_zero()) {
        if (flavor == RayFlavor::ClosedUp || flavor == RayFlavor::ClosedDown ||
            flavor == RayFlavor::Level)
          acc = ep_union(acc, p.set);
        continue;
      }
      std::uint64_t thr = g.sign_threshold();
      std::vector<std::uint64_t> in;
      for (std::uint64_t n : p.set.elements_below(thr))
        if (cmp(g.eval(n), Rat(0), flavor)) in.push_back(n);
      if (!in.empty()) acc = ep_union(acc, EpSet::finite(in));
      int ts = g.tail_sign();
      bool tail_in = cmp(Rat(ts), Rat(0), flavor);  // sign decides all comparisons to 0
      if (tail_in && p.set.is_infinite()) acc = ep_union(acc, ep_intersect(p.set, at_least(thr)));
    }
    return acc;
  }

  /// Levels where the outer charge of rays can change: the attained values on
  /// a finite universe, the finite tail limits of infinite pieces on N.
  std::vector<Rat> critical_levels() const {
    std::vector<Rat> out;
    if (finite_universe()) {
      out = values();
    } else {
      for (const auto& p : pieces()) {
        if (!p.set.is_infinite()) continue;
        LimitVal l = p.fn.limit();
        if (l.finite()) out.push_back(l.value);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// True iff some infinite piece diverges (the function is unbounded off
  /// every finite set). Always false on a finite universe.
  bool unbounded_tail() const {
    if (finite_universe()) return false;
    for (const auto& p : pieces())
      if (p.set.is_infinite() && !p.fn.limit().finite()) return true;
    return false;
  }

  /// The simple function equal to f almost everywhere on every N field:
  /// pieces merged by tail limit, finite pieces absorbed into the zero group.
  /// Empty result if some infinite piece diverges.
  std::optional<Func> reduce_ae_simple() const {
    if (finite_universe()) return *this;
    if (unbounded_tail()) return std::nullopt;
    std::vector<std::pair<Rat, EpSet>> groups;  // limit value -> union of cores
    for (const auto& p : pieces()) {
      if (!p.set.is_infinite()) continue;
      Rat c = p.fn.limit().value;
      EpSet core = p.set.core();
      bool merged = false;
      for (auto& g : groups)
        if (g.first == c) {
          g.second = ep_union(g.second, core);
          merged = true;
          break;
        }
      if (!merged) groups.emplace_back(c, core);
    }
    // Disjointify and cover: remaining points take value 0.
    std::vector<NatPiece> out;
    EpSet used = EpSet::empty_set();
    for (auto& g : groups) {
      EpSet s = ep_diff(g.second, used);
      used = ep_union(used, s);
      if (!s.is_empty()) out.push_back({s, Laurent::constant(g.first)});
    }
    EpSet rest = complement(used);
    if (!rest.is_empty()) out.push_back({rest, Laurent::constant(Rat(0))});
    return nat_pieces(std::move(out));
  }

  /// True iff the function is piecewise constant (a simple function shape).
  bool piecewise_constant() const {
    if (finite_universe()) return true;
    for (const auto& p : pieces())
      if (!p.fn.is_constant()) return false;
    return true;
  }

  /// Canonical (value, set) pieces of a piecewise constant function:
  /// distinct values, disjoint sets, union = X.
  std::vector<std::pair<Rat, UniSet>> simple_pieces() const {
    std::vector<std::pair<Rat, UniSet>> out;
    if (finite_universe()) {
      std::vector<Rat> vals = critical_levels();
      for (const Rat& v : vals) {
        Mask m = 0;
        for (int i = 0; i < num_points(); ++i)
          if (values()[i] == v) m |= Mask(1) << i;
        out.emplace_back(v, m);
      }
      return out;
    }
    if (!piecewise_constant()) throw Error("function is not simple");
    for (const auto& p : pieces()) {
      Rat v = p.fn.constant_value();
      bool merged = false;
      for (auto& q : out)
        if (q.first == v) {
          q.second = ep_union(std::get<EpSet>(q.second), p.set);
          merged = true;
          break;
        }
      if (!merged) out.emplace_back(v, p.set);
    }
    return out;
  }

  friend bool equal_pointwise(const Func& a, const Func& b) {
    Func d = a - b;
    if (d.finite_universe()) {
      for (const Rat& v : d.values())
        if (v != 0) return false;
      return true;
    }
    for (const auto& p : d.pieces()) {
      if (p.fn.is_zero()) continue;
      if (p.set.is_infinite()) return false;  // nonzero polynomial, infinitely many points
      for (std::uint64_t n : p.set.finite_elements())
        if (p.fn.eval(n) != 0) return false;
    }
    return true;
  }

  /// Exact supremum of the function over a subset of its universe.
  struct SupReport {
    bool bounded = true;
    Rat sup;          // valid when bounded and the domain is nonempty
    bool attained = false;
    bool empty_domain = false;
  };

  SupReport sup_over(const UniSet& domain) const;

 private:
  static bool cmp(const Rat& v, const Rat& y, RayFlavor f) {
    switch (f) {
      case RayFlavor::OpenUp: return v > y;
      case RayFlavor::ClosedUp: return v >= y;
      case RayFlavor::OpenDown: return v < y;
      case RayFlavor::ClosedDown: return v <= y;
      case RayFlavor::Level: return v == y;
    }
    throw InternalError("bad flavor");
  }

  static EpSet at_least(std::uint64_t n) {
    if (n <= 1) return EpSet::all();
    return EpSet::from_bits(std::vector<bool>(n - 1, false), {true});
  }

  template <class NatOp, class FinOp>
  static Func combine(const Func& a, const Func& b, NatOp nop, FinOp fop) {
    if (a.finite_universe() != b.finite_universe()) throw Error("universe mismatch");
    if (a.finite_universe()) {
      if (a.num_points() != b.num_points()) throw Error("universe mismatch");
      std::vector<Rat> v(a.num_points());
      for (int i = 0; i < a.num_points(); ++i) v[i] = fop(a.values()[i], b.values()[i]);
      return finite_pointwise(std::move(v));
    }
    std::vector<NatPiece> out;
    for (const auto& pa : a.pieces())
      for (const auto& pb : b.pieces()) {
        EpSet s = ep_intersect(pa.set, pb.set);
        if (!s.is_empty()) out.push_back({std::move(s), nop(pa.fn, pb.fn)});
      }
    return nat_pieces(std::move(out));
  }

  /// keep_pos: keep value where f > 0; keep_neg: keep -value where f < 0.
  /// Both true gives |f|; exactly one gives the positive or negative part.
  Func sign_select(bool keep_pos, bool keep_neg) const {
    if (finite_universe()) {
      auto v = values();
      for (Rat& x : v) {
        if (x > 0) x = keep_pos ? x : Rat(0);
        else if (x < 0) x = keep_neg ? Rat(-x) : Rat(0);
      }
      return finite_pointwise(std::move(v));
    }
    std::vector<NatPiece> out;
    for (const auto& p : pieces()) {
      if (p.fn.is_zero()) {
        out.push_back({p.set, Laurent()});
        continue;
      }
      std::uint64_t thr = p.fn.sign_threshold();
      std::vector<std::uint64_t> pos, neg, zero;
      for (std::uint64_t n : p.set.elements_below(thr)) {
        Rat v = p.fn.eval(n);
        (v > 0 ? pos : v < 0 ? neg : zero).push_back(n);
      }
      EpSet tail =
          p.set.is_infinite() ? ep_intersect(p.set, at_least(thr)) : EpSet::empty_set();
      int ts = p.fn.tail_sign();
      EpSet pos_set = pos.empty() ? EpSet::empty_set() : EpSet::finite(pos);
      EpSet neg_set = neg.empty() ? EpSet::empty_set() : EpSet::finite(neg);
      EpSet zero_set = zero.empty() ? EpSet::empty_set() : EpSet::finite(zero);
      if (ts > 0) pos_set = ep_union(pos_set, tail);
      if (ts < 0) neg_set = ep_union(neg_set, tail);
      if (!pos_set.is_empty()) out.push_back({pos_set, keep_pos ? p.fn : Laurent()});
      if (!neg_set.is_empty())
        out.push_back({neg_set, keep_neg ? p.fn.scaled(Rat(-1)) : Laurent()});
      if (!zero_set.is_empty()) out.push_back({zero_set, Laurent()});
    }
    return nat_pieces(std::move(out));
  }

  static std::vector<NatPiece> normalize(std::vector<NatPiece> pieces) {
    // Drop empties, merge equal polynomials, and validate the partition.
    std::vector<NatPiece> merged;
    for (auto& p : pieces) {
      if (p.set.is_empty()) continue;
      bool found = false;
      for (auto& m : merged)
        if (m.fn == p.fn) {
          m.set = ep_union(m.set, p.set);
          found = true;
          break;
        }
      if (!found) merged.push_back(std::move(p));
    }
    EpSet cover = EpSet::empty_set();
    for (size_t i = 0; i < merged.size(); ++i) {
      for (size_t j = i + 1; j < merged.size(); ++j)
        if (!ep_intersect(merged[i].set, merged[j].set).is_empty())
          throw Error("function pieces overlap");
      cover = ep_union(cover, merged[i].set);
    }
    if (!cover.is_all()) throw Error("function pieces do not cover N");
    return merged;
  }

  std::variant<std::vector<Rat>, std::vector<NatPiece>> v_;
};

inline Func::SupReport Func::sup_over(const UniSet& domain) const {
  SupReport r;
  if (finite_universe()) {
    Mask d = std::get<Mask>(domain);
    if (d == 0) {
      r.empty_domain = true;
      return r;
    }
    bool first = true;
    for (int i = 0; i < num_points(); ++i)
      if (d & (Mask(1) << i)) {
        if (first || values()[i] > r.sup) r.sup = values()[i];
        first = false;
      }
    r.attained = true;
    return r;
  }
  const EpSet& d = std::get<EpSet>(domain);
  if (d.is_empty()) {
    r.empty_domain = true;
    return r;
  }
  bool any_attained = false;
  Rat attained_max;
  bool any_limit = false;
  Rat limit_max;
  for (const auto& p : pieces()) {
    EpSet s = ep_intersect(p.set, d);
    if (s.is_empty()) continue;
    LimitVal lim = p.fn.limit();
    if (s.is_infinite() && lim.kind == LimitVal::PlusInf) {
      r.bounded = false;
      return r;
    }
    std::uint64_t thr = std::max(p.fn.sign_threshold(), p.fn.monotone_threshold());
    for (std::uint64_t n : s.elements_below(thr + 1)) {
      Rat v = p.fn.eval(n);
      if (!any_attained || v > attained_max) attained_max = v;
      any_attained = true;
    }
    if (s.is_infinite()) {
      // Beyond thr the polynomial is monotone, so the tail's values are
      // bracketed by the first tail point and the limit.
      std::uint64_t first_tail = s.first_at_least(thr + 1);
      if (first_tail != 0) {
        Rat v = p.fn.eval(first_tail);
        if (!any_attained || v > attained_max) attained_max = v;
        any_attained = true;
      }
      if (lim.finite() && (!any_limit || lim.value > limit_max)) {
        limit_max = lim.value;
        any_limit = true;
      }
    }
  }
  if (!any_attained && !any_limit) {
    r.empty_domain = true;
    return r;
  }
  if (any_limit && (!any_attained || limit_max > attained_max)) {
    r.sup = limit_max;
    r.attained = false;
  } else {
    r.sup = attained_max;
    r.attained = true;
  }
  return r;
}

}  // namespace chargelab
