#pragma once

#include <map>
#include <optional>
#include <vector>

#include "chargelab/integration.hpp"
#include "chargelab/measurability.hpp"

namespace chargelab {

/// A finite totally ordered family of sets indexed by strictly increasing
/// positive levels; sets are nonincreasing in the level. Entry (l, A) stands
/// for the closed superlevel set {f >= l}; between represented levels the
/// family extends as a right-continuous step (A_y is the entry at the
/// smallest represented level >= y, empty above the top).
struct ChainEntry {
  Rat level;
  UniSet set;
};

struct Chain {
  std::vector<ChainEntry> entries;
};

inline void validate_chain(const Chain& c) {
  for (size_t i = 0; i < c.entries.size(); ++i) {
    if (c.entries[i].level <= 0) throw Error("chain levels must be positive");
    if (i > 0) {
      if (!(c.entries[i - 1].level < c.entries[i].level))
        throw Error("chain levels must be strictly increasing");
      const UniSet& a = c.entries[i].set;
      const UniSet& b = c.entries[i - 1].set;
      bool sub;
      if (uniset_is_finite_universe(a) != uniset_is_finite_universe(b))
        throw Error("universe mismatch");
      if (auto* m = std::get_if<Mask>(&a))
        sub = mask_subset(*m, std::get<Mask>(b));
      else
        sub = ep_subset(std::get<EpSet>(a), std::get<EpSet>(b));
      if (!sub) throw Error("chain sets must be nonincreasing");
    }
  }
}

/// Reconstructs the function from a chain: f(x) is the largest represented
/// level whose set contains x, and 0 when none does. With the step
/// interpolation above, this is the infimum formula f(x) = inf{z : x not in
/// A_z}, and the closed rays of the result reproduce the entries exactly.
/// Under the step convention the full family always has empty intersection
/// (A_y is empty above the top level), so condition 2b cannot fail here.
inline Func chain_to_function(const ChargeSpace& s, const Chain& c) {
  validate_chain(c);
  if (s.finite()) {
    int n = s.fin().num_points();
    std::vector<Rat> vals(n, Rat(0));
    for (const auto& e : c.entries) {
      Mask m = std::get<Mask>(e.set);
      for (int i = 0; i < n; ++i)
        if (m & (Mask(1) << i)) vals[i] = e.level;  // increasing levels overwrite
    }
    return Func::finite_pointwise(std::move(vals));
  }
  std::vector<NatPiece> pieces;
  EpSet assigned = EpSet::empty_set();
  for (size_t i = c.entries.size(); i-- > 0;) {
    EpSet m = std::get<EpSet>(c.entries[i].set);
    EpSet fresh = ep_diff(m, assigned);
    if (!fresh.is_empty()) pieces.push_back({fresh, Laurent::constant(c.entries[i].level)});
    assigned = ep_union(assigned, m);
  }
  EpSet rest = complement(assigned);
  if (!rest.is_empty()) pieces.push_back({rest, Laurent()});
  return Func::nat_pieces(std::move(pieces));
}

/// Rays of a nonnegative function at the requested levels, as a chain.
inline Chain function_to_chain(const ChargeSpace& s, const Func& f, std::vector<Rat> levels,
                               RayFlavor flavor = RayFlavor::OpenUp) {
  check_function_universe(s, f);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  Chain c;
  for (const Rat& y : levels) {
    if (y <= 0) throw Error("chain levels must be positive");
    c.entries.push_back({y, f.ray(y, flavor)});
  }
  validate_chain(c);
  return c;
}

// ---------------------------------------------------------------------------
// Null modification
// ---------------------------------------------------------------------------

namespace detail {

/// Atom partition of the Peano-Jordan completion of the field with the given
/// atoms, under the ambient charge: null atoms split into singletons.
inline std::vector<Mask> complete_atoms(const std::vector<Mask>& atoms,
                                        const FiniteChargeSpace& ambient) {
  std::vector<Mask> out;
  for (Mask a : atoms) {
    if (ambient.charge(a) == 0) {
      Mask rest = a;
      while (rest) {
        Mask bit = rest & (~rest + 1);
        out.push_back(bit);
        rest &= ~bit;
      }
    } else {
      out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Atom partition of alpha(F u N) where N is the ideal of subsets of z.
inline std::vector<Mask> adjoin_null_points(const std::vector<Mask>& atoms, Mask z) {
  std::vector<Mask> out;
  for (Mask a : atoms) {
    Mask keep = a & ~z;
    if (keep) out.push_back(keep);
    Mask rest = a & z;
    while (rest) {
      Mask bit = rest & (~rest + 1);
      out.push_back(bit);
      rest &= ~bit;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Verifies the hypothesis of the null-modification lemma on a finite space:
/// completion of alpha(A' u N) coincides with alpha(completion(A') u N).
/// Both sides are computed exactly as atom partitions.
inline bool completion_identity_holds(const FiniteChargeSpace& ambient,
                                      const std::vector<Mask>& subfield_atoms) {
  if (!partition_refines(ambient.atoms(), subfield_atoms))
    throw Error("subfield is not a subfield of the ambient field");
  Mask z = ambient.null_points();
  auto lhs = detail::complete_atoms(detail::adjoin_null_points(subfield_atoms, z), ambient);
  auto rhs = detail::adjoin_null_points(detail::complete_atoms(subfield_atoms, ambient), z);
  return lhs == rhs;
}

struct NullModMap {
  std::vector<std::pair<Mask, Mask>> pairs;  // chain element -> image
  std::vector<Mask> target_atoms;            // atoms of completion(A')
  bool property1_ok = false;  // phi(A) symmetric-difference A is null
  bool property2_ok = false;  // class order corresponds to strict inclusion
  bool charges_match = false; // mu(phi(A)) = mu(A)
};

/// The null-modification construction: rewrites a chain inside the completion
/// of alpha(A' u N) into the completion of A', preserving charge and the
/// order structure of null-equivalence classes. The countable-subchain
/// selection of the lemma is the identity on finite chains; elements are
/// processed in the supplied order after deduplicating null-equivalent ones.
/// E_k is chosen canonically: the union of the positive atoms of the target
/// field that are almost contained in the current image.
inline NullModMap null_modification(const FiniteChargeSpace& ambient,
                                    const std::vector<Mask>& subfield_atoms,
                                    const std::vector<Mask>& chain_sets) {
  if (!is_complete(ChargeSpace(ambient)))
    throw Error("ambient space is not Peano-Jordan complete");
  if (!completion_identity_holds(ambient, subfield_atoms))
    throw Error("completion identity violated");
  Mask z = ambient.null_points();
  std::vector<Mask> target_atoms = detail::complete_atoms(subfield_atoms, ambient);
  std::vector<Mask> extended_atoms =
      detail::adjoin_null_points(detail::complete_atoms(subfield_atoms, ambient), z);

  auto in_partition_field = [](const std::vector<Mask>& atoms, Mask a) {
    for (Mask atom : atoms) {
      Mask c = atom & a;
      if (c != 0 && c != atom) return false;
    }
    return true;
  };
  for (Mask c : chain_sets)
    if (!in_partition_field(extended_atoms, c))
      throw Error("chain set outside the completed extension field");

  // Deduplicate null-equivalence classes ([A] = [B] iff A and B agree off z),
  // keeping the first representative, and check the family is a chain.
  std::vector<Mask> reps;
  std::map<Mask, Mask> class_rep;  // positive part -> representative
  for (Mask c : chain_sets) {
    Mask key = c & ~z;
    if (!class_rep.count(key)) {
      class_rep[key] = c;
      reps.push_back(c);
    }
  }
  for (Mask a : reps)
    for (Mask b : reps)
      if (!mask_subset(a & ~z, b & ~z) && !mask_subset(b & ~z, a & ~z))
        throw Error("sets do not form a chain");

  std::vector<Mask> positive_target_atoms;
  for (Mask a : target_atoms)
    if (ambient.charge(a) > 0) positive_target_atoms.push_back(a);

  std::map<Mask, Mask> phi;  // current image per representative
  for (Mask c : reps) phi[c] = c;

  auto image_of = [&](std::optional<Mask> key, Mask sentinel) {
    return key ? phi[*key] : sentinel;
  };

  for (size_t k = 0; k < reps.size(); ++k) {
    Mask ck = reps[k];
    // Largest earlier proper subset and smallest earlier proper superset,
    // in the class order (inclusion of positive parts).
    std::optional<Mask> bk, dk;
    for (size_t j = 0; j < k; ++j) {
      Mask cj = reps[j];
      if (mask_subset(cj & ~z, ck & ~z) && (cj & ~z) != (ck & ~z)) {
        if (!bk || mask_subset(*bk & ~z, cj & ~z)) bk = cj;
      }
      if (mask_subset(ck & ~z, cj & ~z) && (cj & ~z) != (ck & ~z)) {
        if (!dk || mask_subset(cj & ~z, *dk & ~z)) dk = cj;
      }
    }
    Mask s = phi[ck];
    Mask e = 0;
    for (Mask atom : positive_target_atoms)
      if (ambient.charge(atom & ~s) == 0) e |= atom;
    if (!mask_subset(e ^ s, z))
      throw InternalError("no admissible E despite the completion identity");
    Mask fk = (e | image_of(bk, 0)) & image_of(dk, ambient.universe());
    // Three-case update over the strict sandwiches, processed or not.
    // (Earlier elements never land in a sandwich: B_k and D_k are the nearest
    // of them, so their images are final once set.)
    Mask bp = bk ? (*bk & ~z) : 0;
    Mask dp = dk ? (*dk & ~z) : ambient.universe() & ~z;
    Mask ckp = ck & ~z;
    for (size_t j = 0; j < reps.size(); ++j) {
      if (j == k) continue;
      Mask cjp = reps[j] & ~z;
      bool above_b = mask_subset(bp, cjp) && bp != cjp;
      bool below_c = mask_subset(cjp, ckp) && cjp != ckp;
      bool above_c = mask_subset(ckp, cjp) && ckp != cjp;
      bool below_d = mask_subset(cjp, dp) && cjp != dp;
      if (above_b && below_c)
        phi[reps[j]] &= fk;
      else if (above_c && below_d)
        phi[reps[j]] |= fk;
    }
    phi[ck] = fk;
  }

  NullModMap out;
  out.target_atoms = target_atoms;
  for (Mask c : chain_sets) out.pairs.emplace_back(c, phi[class_rep[c & ~z]]);

  out.property1_ok = true;
  out.charges_match = true;
  for (const auto& [a, img] : out.pairs) {
    if (!mask_subset(a ^ img, z)) out.property1_ok = false;
    if (!in_partition_field(target_atoms, img)) out.property1_ok = false;
    if (ambient.charge(img) != ambient.charge(a)) out.charges_match = false;
  }
  out.property2_ok = true;
  for (const auto& [a, ia] : out.pairs)
    for (const auto& [b, ib] : out.pairs) {
      bool class_eq = (a & ~z) == (b & ~z);
      bool class_lt = !class_eq && mask_subset(a & ~z, b & ~z);
      bool img_eq = ia == ib;
      bool img_lt = !img_eq && mask_subset(ia, ib);
      if (class_eq != img_eq || class_lt != img_lt) out.property2_ok = false;
    }
  if (!out.property1_ok || !out.property2_ok)
    throw InternalError("null modification produced an invalid map");
  return out;
}

/// Null modification for functions: given f measurable over alpha(A' u N),
/// produces h measurable over A' with f = h almost everywhere. The ray chain
/// of each signed part is rewritten into completion(A') and converted back.
/// For bounded nonnegative parts the rays above the maximum value are empty,
/// so the global-intersection correction of the lemma is vacuous here.
inline Func null_modify_function(const FiniteChargeSpace& ambient,
                                 const std::vector<Mask>& subfield_atoms, const Func& f) {
  if (!is_complete(ChargeSpace(ambient)))
    throw Error("ambient space is not Peano-Jordan complete");
  if (!completion_identity_holds(ambient, subfield_atoms))
    throw Error("completion identity violated");
  Mask z = ambient.null_points();
  std::vector<Mask> ext_atoms = detail::adjoin_null_points(subfield_atoms, z);
  FiniteChargeSpace ext_space(ambient.points(), ext_atoms, [&] {
    std::vector<Rat> w;
    for (Mask a : ext_atoms) w.push_back(ambient.charge(a));
    return w;
  }());
  ChargeSpace ext(ext_space);
  if (!is_t1_measurable(ext, f).ok)
    throw Error("not T1-measurable over the extended field");

  auto modify_part = [&](const Func& g) {
    std::vector<Rat> levels;
    for (const Rat& v : g.critical_levels())
      if (v > 0) levels.push_back(v);
    if (levels.empty()) return Func::constant_finite(ambient.num_points(), Rat(0));
    std::vector<Mask> rays;
    for (const Rat& v : levels) rays.push_back(std::get<Mask>(g.ray(v, RayFlavor::ClosedUp)));
    NullModMap nm = null_modification(ambient, subfield_atoms, rays);
    Chain c;
    for (size_t i = 0; i < levels.size(); ++i) c.entries.push_back({levels[i], UniSet(nm.pairs[i].second)});
    // Entries are nonincreasing as images of a nonincreasing chain.
    return chain_to_function(ChargeSpace(ambient), c);
  };

  Func h = modify_part(f.pos_part()) - modify_part(f.neg_part());

  FiniteChargeSpace sub_space(ambient.points(), subfield_atoms, [&] {
    std::vector<Rat> w;
    for (Mask a : subfield_atoms) w.push_back(ambient.charge(a));
    return w;
  }());
  if (!equal_ae(ext, f, h)) throw InternalError("null modification changed the function class");
  if (!is_t1_measurable(ChargeSpace(sub_space), h).ok)
    throw InternalError("null modification left the function unmeasurable");
  return h;
}

struct IsomorphismReport {
  bool lp_equal = false;           // L_p(A') equals L_p(alpha(A' u N))
  bool classes_isomorphic = false; // quotients isomorphic via [f] -> [f]
  std::optional<Mask> missing_null_set;  // witness when lp_equal fails
  bool surjectivity_ok = false;
  bool isometry_ok = false;
};

/// Checks both halves of the completion-isomorphism theorem on a finite
/// Peano-Jordan complete ambient space: L_p equality holds exactly when the
/// null sets lie in the completion of the subfield, and the class map is an
/// isometric isomorphism exactly when the completion identity holds. When it
/// does, surjectivity and isometry are verified on the generating indicators
/// via explicit null modification.
inline IsomorphismReport completion_isomorphism_check(const FiniteChargeSpace& ambient,
                                                      const std::vector<Mask>& subfield_atoms,
                                                      unsigned p) {
  if (!is_complete(ChargeSpace(ambient)))
    throw Error("ambient space is not Peano-Jordan complete");
  if (!partition_refines(ambient.atoms(), subfield_atoms))
    throw Error("subfield is not a subfield of the ambient field");
  IsomorphismReport r;
  Mask z = ambient.null_points();
  r.lp_equal = true;
  for (Mask a : subfield_atoms)
    if (ambient.charge(a) > 0 && (a & z)) {
      r.lp_equal = false;
      r.missing_null_set = a & z;
      break;
    }
  r.classes_isomorphic = completion_identity_holds(ambient, subfield_atoms);
  if (!r.classes_isomorphic) return r;

  std::vector<Mask> ext_atoms = detail::adjoin_null_points(subfield_atoms, z);
  auto weights_for = [&](const std::vector<Mask>& atoms) {
    std::vector<Rat> w;
    for (Mask a : atoms) w.push_back(ambient.charge(a));
    return w;
  };
  ChargeSpace ext{FiniteChargeSpace(ambient.points(), ext_atoms, weights_for(ext_atoms))};
  ChargeSpace sub{FiniteChargeSpace(ambient.points(), subfield_atoms, weights_for(subfield_atoms))};

  // Surjectivity and isometry on the generating indicators.
  r.surjectivity_ok = true;
  r.isometry_ok = true;
  std::vector<Func> images, preimages;
  for (Mask a : ext_atoms) {
    Func ind = Func::indicator_finite(ambient.num_points(), a);
    Func h = null_modify_function(ambient, subfield_atoms, ind);
    if (!equal_ae(ext, ind, h)) r.surjectivity_ok = false;
    if (!lp_membership(sub, h, std::max(1u, p), 3)) r.surjectivity_ok = false;
    images.push_back(ind);
    preimages.push_back(h);
  }
  for (size_t i = 0; i < images.size(); ++i)
    for (size_t j = 0; j < images.size(); ++j) {
      Rat d_ext = pseudometric_d(ext, images[i], images[j]);
      Rat d_sub = pseudometric_d(sub, preimages[i], preimages[j]);
      if (d_ext != d_sub) r.isometry_ok = false;
    }
  return r;
}

}  // namespace chargelab
