#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "chargelab/finite_space.hpp"
#include "chargelab/function.hpp"
#include "chargelab/periodic_set.hpp"

namespace chargelab {

struct NatChargeSpace {
  NatField kind;
};

/// Tagged handle for the charge spaces the library computes with: an explicit
/// finite space, or one of the three N-based fields with its canonical charge.
class ChargeSpace {
 public:
  ChargeSpace(FiniteChargeSpace s) : v_(std::move(s)) {}
  ChargeSpace(NatChargeSpace s) : v_(s) {}
  static ChargeSpace nat(NatField kind) { return ChargeSpace(NatChargeSpace{kind}); }

  bool finite() const { return std::holds_alternative<FiniteChargeSpace>(v_); }
  const FiniteChargeSpace& fin() const { return std::get<FiniteChargeSpace>(v_); }
  NatField nat_kind() const { return std::get<NatChargeSpace>(v_).kind; }

  Rat total_charge() const { return finite() ? fin().total_charge() : Rat(1); }

 private:
  std::variant<FiniteChargeSpace, NatChargeSpace> v_;
};

inline void check_universe(const ChargeSpace& s, const UniSet& a) {
  if (s.finite() != uniset_is_finite_universe(a)) throw Error("set/universe mismatch");
  if (s.finite() && !mask_subset(std::get<Mask>(a), s.fin().universe()))
    throw Error("set outside ground set");
}

inline bool in_field(const ChargeSpace& s, const UniSet& a) {
  check_universe(s, a);
  if (s.finite()) return s.fin().field_contains(std::get<Mask>(a));
  return nat_field_contains(s.nat_kind(), std::get<EpSet>(a));
}

inline Rat field_charge(const ChargeSpace& s, const UniSet& a) {
  check_universe(s, a);
  if (s.finite()) return s.fin().charge(std::get<Mask>(a));
  return nat_charge(s.nat_kind(), std::get<EpSet>(a));
}

/// Outer charge mu*(A) = inf { mu(B) : B in the field, A <= B }.
/// Finite spaces attain the minimum at the union of atoms meeting A. On the
/// N fields the closed forms are: cofinite -> 0/1 by finiteness; periodic and
/// eventually periodic -> the density of the periodic core (finitely many
/// exceptional points never change the infimum).
inline Rat outer_charge(const ChargeSpace& s, const UniSet& a) {
  check_universe(s, a);
  if (s.finite()) return s.fin().charge(s.fin().field_cover(std::get<Mask>(a)));
  const EpSet& e = std::get<EpSet>(a);
  if (s.nat_kind() == NatField::Cofinite) return e.is_finite() ? Rat(0) : Rat(1);
  return e.core().density();
}

inline bool is_null_set(const ChargeSpace& s, const UniSet& a) { return outer_charge(s, a) == 0; }

struct PjReport {
  bool inside = false;
  Rat inner;
  Rat outer;
  bool attained = false;  // both the sup and the inf are attained by field elements
};

/// Peano-Jordan completion membership: inner = sup of charges of field
/// subsets, outer = inf over field supersets; membership iff the two agree
/// (the epsilon-sandwich of the definition). Attainment is reported
/// separately: on the N fields the bounds are often approached but not met.
inline PjReport pj_membership(const ChargeSpace& s, const UniSet& a) {
  check_universe(s, a);
  PjReport r;
  if (s.finite()) {
    const auto& f = s.fin();
    Mask m = std::get<Mask>(a);
    r.inner = f.charge(f.field_interior(m));
    r.outer = f.charge(f.field_cover(m));
    r.inside = r.inner == r.outer;
    r.attained = true;
    return r;
  }
  const EpSet& e = std::get<EpSet>(a);
  switch (s.nat_kind()) {
    case NatField::Cofinite: {
      bool member = e.is_finite() || e.is_cofinite();
      r.inner = e.is_cofinite() ? Rat(1) : Rat(0);
      r.outer = e.is_finite() ? Rat(0) : Rat(1);
      r.inside = member;
      r.attained = true;
      return r;
    }
    case NatField::Periodic: {
      EpSet core = e.core();
      r.inner = core.density();
      r.outer = core.density();
      r.inside = true;
      EpSet extra = ep_diff(e, core);    // points added to the core
      EpSet removed = ep_diff(core, e);  // points carved out of the core
      r.attained = extra.is_empty() && removed.is_empty();
      return r;
    }
    case NatField::EventuallyPeriodic: {
      r.inner = r.outer = e.core().density();
      r.inside = true;
      r.attained = true;
      return r;
    }
  }
  throw InternalError("bad NatField");
}

/// The completed charge of a Peano-Jordan member.
inline Rat pj_charge(const ChargeSpace& s, const UniSet& a) {
  PjReport r = pj_membership(s, a);
  if (!r.inside) throw Error("not in the Peano-Jordan completion");
  return r.outer;
}

inline bool in_pj_completion(const ChargeSpace& s, const UniSet& a) {
  return pj_membership(s, a).inside;
}

/// Completion by null sets: alpha(A u N) with the unique charge extension.
/// Finite spaces split their null atoms into singletons; the periodic field
/// completes to the eventually periodic field; the other two N fields already
/// contain their null sets.
inline ChargeSpace complete_space(const ChargeSpace& s) {
  if (!s.finite()) {
    if (s.nat_kind() == NatField::Periodic) return ChargeSpace::nat(NatField::EventuallyPeriodic);
    return s;
  }
  const auto& f = s.fin();
  std::vector<Mask> atoms;
  std::vector<Rat> weights;
  for (size_t i = 0; i < f.atoms().size(); ++i) {
    if (f.weights()[i] == 0) {
      Mask rest = f.atoms()[i];
      while (rest) {
        Mask bit = rest & (~rest + 1);
        atoms.push_back(bit);
        weights.push_back(Rat(0));
        rest &= ~bit;
      }
    } else {
      atoms.push_back(f.atoms()[i]);
      weights.push_back(f.weights()[i]);
    }
  }
  return ChargeSpace(FiniteChargeSpace(f.points(), std::move(atoms), std::move(weights)));
}

/// A charge space is complete when it contains its null sets.
inline bool is_complete(const ChargeSpace& s) {
  if (!s.finite()) return s.nat_kind() != NatField::Periodic;
  const auto& f = s.fin();
  for (size_t i = 0; i < f.atoms().size(); ++i)
    if (f.weights()[i] == 0 && mask_size(f.atoms()[i]) > 1) return false;
  return true;
}

/// Quotient of a finite field by the kernel of its charge, represented on the
/// power set of the positive atoms (the finite Stone space). <A> is the set
/// of positive atoms contained in A; the induced charge is well defined.
struct QuotientAlgebra {
  std::vector<Mask> positive_atoms;         // the representation space Y
  std::vector<Mask> class_representatives;  // canonical member per class
  std::vector<Rat> class_charge;

  size_t num_classes() const { return class_representatives.size(); }
};

inline QuotientAlgebra quotient_representation(const FiniteChargeSpace& s) {
  QuotientAlgebra q;
  for (size_t i = 0; i < s.atoms().size(); ++i)
    if (s.weights()[i] > 0) q.positive_atoms.push_back(s.atoms()[i]);
  size_t k = q.positive_atoms.size();
  for (Mask sel = 0; sel < (Mask(1) << k); ++sel) {
    Mask rep = 0;
    Rat w(0);
    for (size_t i = 0; i < k; ++i)
      if (sel & (Mask(1) << i)) {
        rep |= q.positive_atoms[i];
        w += s.charge(q.positive_atoms[i]);
      }
    q.class_representatives.push_back(rep);
    q.class_charge.push_back(w);
  }
  return q;
}

/// <A>: indices of positive atoms contained in A (the embedded image).
inline Mask quotient_image(const QuotientAlgebra& q, const FiniteChargeSpace& s, Mask a) {
  if (!s.field_contains(a)) throw Error("not a field element");
  Mask img = 0;
  for (size_t i = 0; i < q.positive_atoms.size(); ++i)
    if (mask_subset(q.positive_atoms[i], a)) img |= Mask(1) << i;
  return img;
}

struct LpCompletenessReport {
  bool complete = false;
  enum Basis { Decided, Sampled } basis = Decided;
  std::optional<UniSet> witness;  // a D satisfying condition (3), when found
  std::optional<Rat> least_admissible_charge;
};

/// Completeness criterion for L_p: every bounded increasing chain in the
/// field admits D with mu(A_k \ D) = 0 and mu(D) within epsilon of the chain's
/// charge limit. Finite fields always qualify (chains stabilise). On the N
/// fields the quantifier ranges over infinitely many chains, so the verdict
/// is evaluated only for the chains the caller supplies and flagged "sampled".
inline LpCompletenessReport lp_completeness_check(const ChargeSpace& s,
                                                  const std::vector<std::vector<UniSet>>& chains = {}) {
  LpCompletenessReport r;
  if (s.finite()) {
    r.complete = true;
    r.basis = LpCompletenessReport::Decided;
    r.witness = UniSet(s.fin().universe());
    r.least_admissible_charge = Rat(0);
    return r;
  }
  r.basis = LpCompletenessReport::Sampled;
  r.complete = true;
  for (const auto& chain : chains) {
    if (chain.empty()) continue;
    EpSet d = EpSet::empty_set();
    Rat maxcharge(0);
    Rat prev(-1);
    for (const auto& a : chain) {
      if (!in_field(s, a)) throw Error("not a field element");
      const EpSet& e = std::get<EpSet>(a);
      if (!ep_subset(d, e) && !d.is_empty()) throw Error("chain is not increasing");
      d = ep_union(d, e);
      Rat c = field_charge(s, a);
      if (c < prev) throw Error("chain is not increasing");
      prev = c;
      maxcharge = rat_max(maxcharge, c);
    }
    // D = the union of the supplied prefix lies in each of the three fields
    // and satisfies mu(A_k \ D) = 0 exactly, with the least admissible charge.
    for (const auto& a : chain)
      if (!ep_diff(std::get<EpSet>(a), d).is_empty())
        throw InternalError("union does not dominate chain");
    r.witness = UniSet(d);
    r.least_admissible_charge = maxcharge;
  }
  return r;
}

}  // namespace chargelab
