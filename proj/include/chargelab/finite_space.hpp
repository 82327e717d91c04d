#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "chargelab/rational.hpp"

namespace chargelab {

/// Subset of a finite ground set, encoded as a bitmask over point indices.
using Mask = std::uint32_t;

inline int mask_size(Mask m) { return std::popcount(m); }
inline Mask full_mask(int n) { return n >= 32 ? ~Mask(0) : (Mask(1) << n) - 1; }
inline bool mask_subset(Mask a, Mask b) { return (a & ~b) == 0; }

inline constexpr int kDefaultPointCap = 16;
inline constexpr int kHardPointCap = 24;  // bitmask enumeration stays tractable

/// Finite charge space: ground set, field given by its atom partition, and
/// a nonnegative rational weight per atom. Finite additivity holds by
/// construction: the charge of a field element is the sum of its atoms.
/// Values are immutable after construction.
class FiniteChargeSpace {
 public:
  FiniteChargeSpace(std::vector<std::string> points, std::vector<Mask> atoms,
                    std::vector<Rat> weights, int point_cap = kDefaultPointCap)
      : points_(std::move(points)), atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (points_.empty()) throw Error("empty ground set");
    int n = static_cast<int>(points_.size());
    if (n > kHardPointCap) throw Error("ground set exceeds hard cap of 24 points");
    if (n > point_cap)
      std::cerr << "warning: ground set of " << n << " points exceeds the default cap of "
                << point_cap << "; exhaustive operations may be slow\n";
    std::set<std::string> labels(points_.begin(), points_.end());
    if (static_cast<int>(labels.size()) != n) throw Error("duplicate point labels");
    if (atoms_.size() != weights_.size()) throw Error("atom/weight count mismatch");
    Mask covered = 0;
    for (Mask a : atoms_) {
      if (a == 0) throw Error("empty atom");
      if (!mask_subset(a, full_mask(n))) throw Error("atom outside ground set");
      if (a & covered) throw Error("atoms overlap");
      covered |= a;
    }
    if (covered != full_mask(n)) throw Error("atoms do not cover the ground set");
    for (const Rat& w : weights_)
      if (w < 0) throw Error("negative atom weight");
  }

  int num_points() const { return static_cast<int>(points_.size()); }
  Mask universe() const { return full_mask(num_points()); }
  const std::vector<std::string>& points() const { return points_; }
  const std::vector<Mask>& atoms() const { return atoms_; }
  const std::vector<Rat>& weights() const { return weights_; }

  int point_index(const std::string& label) const {
    for (int i = 0; i < num_points(); ++i)
      if (points_[i] == label) return i;
    throw Error("unknown point label: " + label);
  }

  /// True iff A is a union of atoms.
  bool field_contains(Mask a) const {
    for (Mask atom : atoms_) {
      Mask common = atom & a;
      if (common != 0 && common != atom) return false;
    }
    return true;
  }

  /// Charge of a field element: the sum of its atoms' weights.
  Rat charge(Mask a) const {
    if (!field_contains(a)) throw Error("not a field element");
    Rat sum(0);
    for (size_t i = 0; i < atoms_.size(); ++i)
      if (mask_subset(atoms_[i], a)) sum += weights_[i];
    return sum;
  }

  Rat total_charge() const {
    Rat sum(0);
    for (const Rat& w : weights_) sum += w;
    return sum;
  }

  /// Index of the atom containing the given point.
  int atom_of_point(int point) const {
    Mask bit = Mask(1) << point;
    for (size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i] & bit) return static_cast<int>(i);
    throw InternalError("point not covered by any atom");
  }

  /// Union of atoms meeting A: the smallest field element containing A.
  Mask field_cover(Mask a) const {
    Mask cover = 0;
    for (Mask atom : atoms_)
      if (atom & a) cover |= atom;
    return cover;
  }

  /// Union of atoms contained in A: the largest field element inside A.
  Mask field_interior(Mask a) const {
    Mask inner = 0;
    for (Mask atom : atoms_)
      if (mask_subset(atom, a)) inner |= atom;
    return inner;
  }

  /// Union of the zero-weight atoms; every null set is a subset of this.
  Mask null_points() const {
    Mask z = 0;
    for (size_t i = 0; i < atoms_.size(); ++i)
      if (weights_[i] == 0) z |= atoms_[i];
    return z;
  }

  bool operator==(const FiniteChargeSpace& o) const {
    return points_ == o.points_ && sorted_atoms() == o.sorted_atoms() &&
           sorted_weights() == o.sorted_weights();
  }

 private:
  std::vector<Mask> sorted_atoms() const {
    auto a = atoms_;
    std::sort(a.begin(), a.end());
    return a;
  }
  std::vector<Rat> sorted_weights() const {
    std::vector<std::pair<Mask, Rat>> pairs;
    for (size_t i = 0; i < atoms_.size(); ++i) pairs.emplace_back(atoms_[i], weights_[i]);
    std::sort(pairs.begin(), pairs.end());
    std::vector<Rat> w;
    for (auto& p : pairs) w.push_back(p.second);
    return w;
  }

  std::vector<std::string> points_;
  std::vector<Mask> atoms_;
  std::vector<Rat> weights_;
};

/// Atom partition of the field generated by a list of subsets: the common
/// refinement of {G, G^c} over all generators. With no generators this is the
/// trivial field {empty, X}.
inline std::vector<Mask> generated_field(int num_points, const std::vector<Mask>& generators) {
  if (num_points <= 0) throw Error("empty ground set");
  Mask x = full_mask(num_points);
  for (Mask g : generators)
    if (!mask_subset(g, x)) throw Error("generator outside ground set");
  std::vector<Mask> blocks{x};
  for (Mask g : generators) {
    std::vector<Mask> next;
    for (Mask b : blocks) {
      Mask in = b & g, out = b & ~g;
      if (in) next.push_back(in);
      if (out) next.push_back(out);
    }
    blocks = std::move(next);
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

/// Atom partition of the coarsest common refinement of two atom partitions.
inline std::vector<Mask> refine_partitions(const std::vector<Mask>& a, const std::vector<Mask>& b) {
  std::vector<Mask> out;
  for (Mask x : a)
    for (Mask y : b) {
      Mask c = x & y;
      if (c) out.push_back(c);
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// True iff every atom of `sub` is a union of atoms of `fine`.
inline bool partition_refines(const std::vector<Mask>& fine, const std::vector<Mask>& sub) {
  for (Mask s : sub) {
    Mask acc = 0;
    for (Mask f : fine)
      if (mask_subset(f, s)) acc |= f;
    if (acc != s) return false;
  }
  return true;
}

/// All elements of the field with the given atoms (2^k masks).
inline std::vector<Mask> enumerate_field(const std::vector<Mask>& atoms) {
  size_t k = atoms.size();
  if (k > 20) throw Error("field too large to enumerate");
  std::vector<Mask> out;
  out.reserve(size_t(1) << k);
  for (Mask sel = 0; sel < (Mask(1) << k); ++sel) {
    Mask m = 0;
    for (size_t i = 0; i < k; ++i)
      if (sel & (Mask(1) << i)) m |= atoms[i];
    out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Boolean ideal of a field, stored by generating elements. On a finite
/// Boolean algebra every ideal is principal, so the ideal is determined by
/// the union of its generators.
struct BooleanIdealRep {
  std::vector<Mask> generators;

  Mask max_element() const {
    Mask u = 0;
    for (Mask g : generators) u |= g;
    return u;
  }

  /// All members: field elements below the maximal element.
  std::vector<Mask> materialize(const std::vector<Mask>& field_atoms) const {
    Mask u = max_element();
    std::vector<Mask> out;
    for (Mask a : enumerate_field(field_atoms))
      if (mask_subset(a, u)) out.push_back(a);
    return out;
  }

  bool contains(Mask a) const { return mask_subset(a, max_element()); }
};

/// Kernel of the charge: the ideal of field elements of charge zero.
inline BooleanIdealRep kernel_ideal(const FiniteChargeSpace& s) {
  BooleanIdealRep ideal;
  for (size_t i = 0; i < s.atoms().size(); ++i)
    if (s.weights()[i] == 0) ideal.generators.push_back(s.atoms()[i]);
  return ideal;
}

/// Atom partition of a collection of sets closed under complement and union.
/// The atom of x is the intersection of all members containing x.
inline std::vector<Mask> atoms_of_collection(int num_points, const std::vector<Mask>& sets) {
  std::vector<Mask> atoms;
  Mask x = full_mask(num_points);
  Mask seen = 0;
  for (int p = 0; p < num_points; ++p) {
    Mask bit = Mask(1) << p;
    if (seen & bit) continue;
    Mask atom = x;
    for (Mask s : sets) atom &= (s & bit) ? s : (x & ~s);
    atoms.push_back(atom);
    seen |= atom;
  }
  std::sort(atoms.begin(), atoms.end());
  return atoms;
}

struct ExtendedFieldResult {
  std::vector<Mask> atoms;     // atom partition of alpha(B u M)
  std::vector<Mask> elements;  // all members, sorted
};

/// Field generated by a subfield together with an ideal of the ambient field.
/// Computes both set descriptions of the lemma — the closure form
/// {(B n M^c) u N} and the symmetric-difference form {A : A delta B in M for
/// some B} — and verifies they coincide element by element.
inline ExtendedFieldResult extend_field_with_ideal(const std::vector<Mask>& ambient_atoms,
                                                   const std::vector<Mask>& base_atoms,
                                                   const BooleanIdealRep& ideal,
                                                   int num_points) {
  if (!partition_refines(ambient_atoms, base_atoms))
    throw Error("base is not a subfield of the ambient field");
  Mask u = ideal.max_element();
  std::vector<Mask> ambient = enumerate_field(ambient_atoms);
  if (!std::binary_search(ambient.begin(), ambient.end(), u))
    throw Error("ideal not contained in ambient field");

  std::vector<Mask> ideal_elems = ideal.materialize(ambient_atoms);
  std::vector<Mask> base = enumerate_field(base_atoms);

  std::set<Mask> closure_form;
  for (Mask b : base)
    for (Mask m : ideal_elems)
      for (Mask n : ideal_elems) closure_form.insert((b & ~m) | n);

  std::set<Mask> symdiff_form;
  for (Mask a : ambient)
    for (Mask b : base)
      if (mask_subset(a ^ b, u)) {
        symdiff_form.insert(a);
        break;
      }

  if (closure_form != symdiff_form)
    throw InternalError("field extension: closure and symmetric-difference forms disagree");

  ExtendedFieldResult r;
  r.elements.assign(closure_form.begin(), closure_form.end());
  r.atoms = atoms_of_collection(num_points, r.elements);
  return r;
}

}  // namespace chargelab
