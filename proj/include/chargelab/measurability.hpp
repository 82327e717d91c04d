#pragma once

#include <optional>
#include <set>
#include <vector>

#include "chargelab/charge_space.hpp"
#include "chargelab/function.hpp"

namespace chargelab {

inline void check_function_universe(const ChargeSpace& s, const Func& f) {
  if (s.finite() != f.finite_universe()) throw Error("function/universe mismatch");
  if (s.finite() && f.num_points() != s.fin().num_points())
    throw Error("function/universe mismatch");
}

inline Rat mu_star_above(const ChargeSpace& s, const Func& f, const Rat& y) {
  return outer_charge(s, f.ray(y, RayFlavor::OpenUp));
}

/// Representative levels probing each constancy region of the ray structure:
/// one below all critical levels, one in each gap, one above all of them.
inline std::vector<Rat> gap_representatives(std::vector<Rat> levels) {
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<Rat> reps;
  if (levels.empty()) {
    reps.push_back(Rat(0));
    return reps;
  }
  reps.push_back(levels.front() - 1);
  for (size_t i = 0; i + 1 < levels.size(); ++i)
    reps.push_back((levels[i] + levels[i + 1]) / 2);
  reps.push_back(levels.back() + 1);
  return reps;
}

/// The atom levels of f: values y where mu*(f^{-1}[y-d, y+d]) stays positive
/// as d -> 0. On a finite universe these are the attained values whose level
/// set meets a positive atom; on N they are the tail limits carrying positive
/// outer charge (every infinite piece does on the three N fields).
inline std::vector<Rat> atom_levels(const ChargeSpace& s, const Func& f) {
  check_function_universe(s, f);
  std::vector<Rat> out;
  if (s.finite()) {
    for (const Rat& v : f.critical_levels())
      if (outer_charge(s, f.ray(v, RayFlavor::Level)) > 0) out.push_back(v);
    return out;
  }
  for (const Rat& c : f.critical_levels()) {
    EpSet u = EpSet::empty_set();
    for (const auto& p : f.pieces()) {
      if (!p.set.is_infinite()) continue;
      LimitVal l = p.fn.limit();
      if (l.finite() && l.value == c) u = ep_union(u, p.set.core());
    }
    if (outer_charge(s, UniSet(u)) > 0) out.push_back(c);
  }
  return out;
}

/// A null function: mu*(|f| > eps) = 0 for every eps > 0. The map
/// eps -> mu*(|f| > eps) is a nonincreasing step function whose breakpoints
/// are the critical levels of |f|, so one probe in the first gap decides.
inline bool is_null_function(const ChargeSpace& s, const Func& f) {
  check_function_universe(s, f);
  Func a = f.abs_();
  Rat probe(1);
  for (const Rat& c : a.critical_levels())
    if (c > 0) {
      probe = c / 2;
      break;
    }
  return mu_star_above(s, a, probe) == 0;
}

/// Smoothness: mu*(|f| > k) can be made arbitrarily small. The step function
/// of k is constant beyond the largest critical level, so its infimum is the
/// value there.
inline bool is_smooth(const ChargeSpace& s, const Func& f) {
  check_function_universe(s, f);
  Func a = f.abs_();
  auto crit = a.critical_levels();
  Rat probe = crit.empty() ? Rat(1) : crit.back() + 1;
  return mu_star_above(s, a, probe) == 0;
}

// ---------------------------------------------------------------------------
// T2-measurability
// ---------------------------------------------------------------------------

struct T2Report {
  bool ok = false;
  // Witness partition: first element plays the role of the small exceptional
  // set A_0, the rest have oscillation below epsilon.
  std::optional<std::vector<UniSet>> partition;
};

namespace detail {

inline Rat atom_oscillation(const FiniteChargeSpace& sp, const Func& f, Mask atom) {
  bool first = true;
  Rat lo, hi;
  for (int i = 0; i < sp.num_points(); ++i)
    if (atom & (Mask(1) << i)) {
      Rat v = f.eval_point(i);
      if (first) {
        lo = hi = v;
        first = false;
      } else {
        lo = rat_min(lo, v);
        hi = rat_max(hi, v);
      }
    }
  return hi - lo;
}

/// Union of sets (full sets, not cores) of infinite pieces that diverge.
inline EpSet diverging_region(const Func& f) {
  EpSet u = EpSet::empty_set();
  for (const auto& p : f.pieces())
    if (p.set.is_infinite() && !p.fn.limit().finite()) u = ep_union(u, p.set);
  return u;
}

/// Distinct tail limits of the bounded infinite pieces.
inline std::vector<Rat> tail_limits(const Func& f) { return f.critical_levels(); }

/// A threshold beyond which every bounded infinite piece sits within delta of
/// its limit and all piece sets have entered their periodic patterns.
inline std::uint64_t convergence_threshold(const Func& f, const Rat& delta) {
  std::uint64_t thr = 1;
  for (const auto& p : f.pieces()) {
    thr = std::max(thr, p.set.preperiod_len() + 1);
    if (!p.set.is_infinite()) {
      auto elems = p.set.finite_elements();
      if (!elems.empty()) thr = std::max(thr, elems.back() + 1);
      continue;
    }
    LimitVal l = p.fn.limit();
    if (!l.finite()) continue;
    Laurent up = p.fn - Laurent::constant(l.value + delta);
    Laurent dn = p.fn - Laurent::constant(l.value - delta);
    thr = std::max({thr, up.sign_threshold(), dn.sign_threshold()});
  }
  return thr;
}

inline EpSet nat_at_least(std::uint64_t n) {
  if (n <= 1) return EpSet::all();
  return EpSet::from_bits(std::vector<bool>(n - 1, false), {true});
}

/// Cheapest purely periodic superset of a finite set with charge below eps:
/// one residue class of period M per element.
inline EpSet periodic_cover(const std::vector<std::uint64_t>& elems, const Rat& eps) {
  if (elems.empty()) return EpSet::empty_set();
  Int m = rat_floor(Rat(static_cast<Int>(elems.size())) / eps) + 1;
  std::uint64_t period = static_cast<std::uint64_t>(m);
  if (period < 1) period = 1;
  if (period > period_cap()) throw Error("period length exceeds cap");
  std::vector<bool> bits(period, false);
  for (auto e : elems) bits[(e - 1) % period] = true;
  return EpSet::from_bits({}, std::move(bits));
}

}  // namespace detail

/// T2-measurability at a fixed epsilon, with an explicit witness partition.
/// Finite spaces decide exactly by atom oscillation. On the N fields the
/// construction covers the finitely many non-converged points (and the
/// diverging region) by a small-charge field element and cuts cells from the
/// piece limits.
inline T2Report t2_measurability(const ChargeSpace& s, const Func& f, const Rat& eps) {
  check_function_universe(s, f);
  if (eps <= 0) throw Error("epsilon must be positive");
  T2Report r;
  if (s.finite()) {
    const auto& sp = s.fin();
    Mask bad = 0;
    for (Mask atom : sp.atoms())
      if (detail::atom_oscillation(sp, f, atom) >= eps) bad |= atom;
    if (sp.charge(bad) >= eps) {
      r.ok = false;
      return r;
    }
    std::vector<UniSet> parts{UniSet(bad)};
    for (Mask atom : sp.atoms())
      if (!mask_subset(atom, bad)) parts.push_back(UniSet(atom));
    r.ok = true;
    r.partition = std::move(parts);
    return r;
  }

  EpSet div = detail::diverging_region(f);
  Rat div_charge = outer_charge(s, UniSet(div.core()));
  NatField kind = s.nat_kind();
  if (kind == NatField::Cofinite) {
    // One cell must be cofinite; its oscillation is at least the spread of
    // the tail limits, and the diverging region cannot be carved out.
    if (eps > 1) {
      EpSet a0 = complement(EpSet::finite({1}));
      r.ok = true;
      r.partition = std::vector<UniSet>{UniSet(a0), UniSet(EpSet::finite({1}))};
      return r;
    }
    if (!div.is_empty()) {
      r.ok = false;
      return r;
    }
    auto limits = detail::tail_limits(f);
    Rat spread = limits.empty() ? Rat(0) : limits.back() - limits.front();
    if (spread >= eps) {
      r.ok = false;
      return r;
    }
    Rat delta = (eps - spread) / 3;
    std::uint64_t n0 = detail::convergence_threshold(f, delta);
    EpSet a0 = n0 <= 1 ? EpSet::empty_set()
                       : EpSet::from_bits(std::vector<bool>(n0 - 1, true), {false});
    r.ok = true;
    r.partition = std::vector<UniSet>{UniSet(a0), UniSet(complement(a0))};
    return r;
  }

  // Periodic / eventually periodic: feasible iff the diverging region is
  // smaller than eps; junk points are absorbed into A_0.
  if (div_charge >= eps) {
    r.ok = false;
    return r;
  }
  Rat delta = eps / 3;
  std::uint64_t n0 = detail::convergence_threshold(f, delta);
  std::vector<std::uint64_t> junk;
  for (std::uint64_t n = 1; n < n0; ++n) junk.push_back(n);
  EpSet a0 = div.core();
  if (kind == NatField::EventuallyPeriodic) {
    a0 = ep_union(ep_union(a0, div), junk.empty() ? EpSet::empty_set() : EpSet::finite(junk));
  } else {
    // Purely periodic cover of the junk and of the finite part of div.
    std::vector<std::uint64_t> extra = junk;
    for (std::uint64_t e : ep_diff(div, a0).elements_below(n0)) extra.push_back(e);
    if (!extra.empty()) {
      std::sort(extra.begin(), extra.end());
      extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
      a0 = ep_union(a0, detail::periodic_cover(extra, eps - div_charge));
    }
  }
  if (field_charge(s, UniSet(a0)) >= eps) {
    r.ok = false;  // cover construction could not get below eps
    return r;
  }
  // Cells: disjointified cores of the bounded infinite pieces, minus A_0.
  std::vector<UniSet> parts{UniSet(a0)};
  EpSet used = a0;
  for (const auto& p : f.pieces()) {
    if (!p.set.is_infinite() || !p.fn.limit().finite()) continue;
    EpSet cell = ep_diff(p.set.core(), used);
    used = ep_union(used, cell);
    if (!cell.is_empty()) parts.push_back(UniSet(cell));
  }
  EpSet rest = complement(used);
  if (!rest.is_empty()) {
    // Leftover points all lie beyond n0 inside some bounded piece's core
    // complement; absorb them pointwise-safe into A_0 is impossible without
    // growing its charge, but by construction rest is empty here.
    parts.push_back(UniSet(rest));
  }
  r.ok = true;
  r.partition = std::move(parts);
  return r;
}

/// The full T2 decision (for every epsilon). Finite: f must be constant on
/// every positive atom. Cofinite field: no diverging tail and a single tail
/// limit. Periodic fields: no diverging infinite piece.
inline bool decide_t2_all(const ChargeSpace& s, const Func& f) {
  check_function_universe(s, f);
  if (s.finite()) {
    const auto& sp = s.fin();
    for (size_t i = 0; i < sp.atoms().size(); ++i)
      if (sp.weights()[i] > 0 && detail::atom_oscillation(sp, f, sp.atoms()[i]) > 0) return false;
    return true;
  }
  EpSet div = detail::diverging_region(f);
  if (s.nat_kind() == NatField::Cofinite)
    return div.is_empty() && detail::tail_limits(f).size() <= 1;
  return div.is_empty();
}

// ---------------------------------------------------------------------------
// T1-measurability via the ray characterisation
// ---------------------------------------------------------------------------

struct T1Certificate {
  bool ok = false;
  bool smooth = false;
  std::vector<Rat> exception_levels;  // the countable set C (finite here)
  std::vector<std::pair<Rat, bool>> ray_checks;  // gap representative -> in completion
};

/// Decides T1-measurability through the characterisation: all rays at levels
/// off a countable exception set lie in the Peano-Jordan completion, and f is
/// smooth. The exception set is taken to be the critical levels; between
/// consecutive critical levels the membership verdict is constant, so one
/// probe per gap decides.
inline T1Certificate is_t1_measurable(const ChargeSpace& s, const Func& f) {
  check_function_universe(s, f);
  T1Certificate cert;
  cert.exception_levels = f.critical_levels();
  cert.smooth = is_smooth(s, f);
  bool rays_ok = true;
  for (const Rat& y : gap_representatives(cert.exception_levels)) {
    bool in = in_pj_completion(s, f.ray(y, RayFlavor::OpenUp));
    cert.ray_checks.emplace_back(y, in);
    rays_ok = rays_ok && in;
  }
  cert.ok = rays_ok && cert.smooth;
  return cert;
}

// ---------------------------------------------------------------------------
// The L_0 pseudometric and almost-everywhere relations
// ---------------------------------------------------------------------------

/// d(f,g) = inf { eps > 0 : mu*(|f-g| > eps) < eps }, evaluated exactly by
/// scanning the step function eps -> mu*(|f-g| > eps) over its breakpoints.
inline Rat pseudometric_d(const ChargeSpace& s, const Func& f, const Func& g) {
  check_function_universe(s, f);
  check_function_universe(s, g);
  Func h = (f - g).abs_();
  std::vector<Rat> brk;
  for (const Rat& c : h.critical_levels())
    if (c > 0) brk.push_back(c);
  // Regions of constancy: (0, b1), [b1, b2), ..., [bm, infinity).
  auto m_at = [&](const Rat& t) { return mu_star_above(s, h, t); };
  if (brk.empty()) return m_at(Rat(1));
  Rat m0 = m_at(brk.front() / 2);
  if (m0 < brk.front()) return m0;
  for (size_t i = 0; i < brk.size(); ++i) {
    Rat right = i + 1 < brk.size() ? brk[i + 1] : Rat(0);
    Rat mi = m_at(brk[i]);
    if (i + 1 < brk.size()) {
      if (mi < right) return rat_max(brk[i], mi);
    } else {
      return rat_max(brk[i], mi);
    }
  }
  throw InternalError("pseudometric scan fell through");
}

enum class AeMethod { Direct, RaySymdiff, TruncatedRay };

inline UniSet uniset_symdiff(const UniSet& a, const UniSet& b) {
  if (uniset_is_finite_universe(a) != uniset_is_finite_universe(b))
    throw Error("universe mismatch");
  if (auto* m = std::get_if<Mask>(&a)) return UniSet(*m ^ std::get<Mask>(b));
  return UniSet(ep_symdiff(std::get<EpSet>(a), std::get<EpSet>(b)));
}

inline Func indicator_for(const ChargeSpace& s, const UniSet& a) {
  if (s.finite()) return Func::indicator_finite(s.fin().num_points(), std::get<Mask>(a));
  return Func::indicator_nat(std::get<EpSet>(a));
}

/// Equality almost everywhere, by three routes that the characterisation
/// theorem proves equivalent for T1-measurable f: the definition (f - g is a
/// null function), the ray symmetric-difference criterion, and the truncated
/// ray criterion.
inline bool equal_ae(const ChargeSpace& s, const Func& f, const Func& g,
                     AeMethod method = AeMethod::Direct) {
  check_function_universe(s, f);
  check_function_universe(s, g);
  switch (method) {
    case AeMethod::Direct:
      return is_null_function(s, f - g);
    case AeMethod::RaySymdiff: {
      std::vector<Rat> levels = f.critical_levels();
      for (const Rat& c : g.critical_levels()) levels.push_back(c);
      for (const Rat& y : gap_representatives(levels)) {
        UniSet d = uniset_symdiff(f.ray(y, RayFlavor::OpenUp), g.ray(y, RayFlavor::OpenUp));
        if (outer_charge(s, d) != 0) return false;
      }
      return true;
    }
    case AeMethod::TruncatedRay: {
      std::vector<Rat> levels = f.critical_levels();
      for (const Rat& c : g.critical_levels()) levels.push_back(c);
      for (const Rat& y : gap_representatives(levels)) {
        Func fr = f * indicator_for(s, f.ray(y, RayFlavor::OpenUp));
        Func gr = g * indicator_for(s, g.ray(y, RayFlavor::OpenUp));
        if (!is_null_function(s, fr - gr)) return false;
      }
      return true;
    }
  }
  throw InternalError("bad method");
}

/// f <= g a.e. iff (f-g)^+ is a null function; the positive part is the
/// minimal witness h in the definition f <= g + h.
inline bool dominated_ae(const ChargeSpace& s, const Func& f, const Func& g) {
  return is_null_function(s, (f - g).pos_part());
}

/// Exact trace mu*(|f_k - f| > eps) per supplied index. A finite prefix
/// cannot certify a limit; callers judge the trace.
inline std::vector<Rat> hazy_convergence_report(const ChargeSpace& s,
                                                const std::vector<Func>& seq, const Func& f,
                                                const Rat& eps) {
  if (eps <= 0) throw Error("epsilon must be positive");
  std::vector<Rat> out;
  for (const Func& fk : seq) out.push_back(mu_star_above(s, (fk - f).abs_(), eps));
  return out;
}

// ---------------------------------------------------------------------------
// Dyadic approximation sequences
// ---------------------------------------------------------------------------

enum class GridRule { PreferHigh, PreferLow };

struct ApproxSequence {
  std::vector<std::vector<Rat>> grids;  // grids[n-1][j-1] = y_{n,j}, K_n = n 2^n levels
  std::vector<Rat> tail_levels;         // y_n = y_{n,K_n}
  std::vector<Func> pos_fns, neg_fns;   // f+_n and f-_n
  bool with_tail_term = true;
};

namespace detail {

inline Rat fresh_grid_level(int n, std::uint64_t j, const std::set<Rat>& avoid, GridRule rule) {
  Int pow_n = Int(1) << n;
  Rat hi(Int(2 * j), Int(2) * pow_n);       // j 2^{-n}, denominator 2^{n+1}
  Rat lo(Int(2 * j - 1), Int(2) * pow_n);   // the cell midpoint
  Rat first = rule == GridRule::PreferHigh ? hi : lo;
  Rat second = rule == GridRule::PreferHigh ? lo : hi;
  if (!avoid.count(first)) return first;
  if (!avoid.count(second)) return second;
  // Midpoint perturbation by 2^{-(n+2+t)} for minimal t.
  for (int t = 0;; ++t) {
    Rat step = Rat(1, (Int(1) << (n + 2 + t)));
    Rat cand = rule == GridRule::PreferHigh ? lo + step : lo - step;
    if (!avoid.count(cand)) return cand;
  }
}

}  // namespace detail

/// The staircase Sum_{j<K} y_j I_{g^{-1}(y_j, y_{j+1}]} (+ tail term
/// y_K I_{g^{-1}(y_K, inf)}) for a nonnegative g and a level grid.
inline Func assemble_dyadic(const ChargeSpace& s, const Func& g, const std::vector<Rat>& grid,
                            bool with_tail_term) {
  if (s.finite()) {
    std::vector<Rat> vals(g.num_points());
    for (int i = 0; i < g.num_points(); ++i) {
      const Rat v = g.eval_point(i);
      // Number of grid levels strictly below v.
      size_t j = std::lower_bound(grid.begin(), grid.end(), v) - grid.begin();
      if (j == 0)
        vals[i] = 0;  // v <= y_1
      else if (j == grid.size())
        vals[i] = with_tail_term ? grid.back() : Rat(0);  // v > y_K
      else
        vals[i] = grid[j - 1];
    }
    return Func::finite_pointwise(std::move(vals));
  }
  std::vector<NatPiece> pieces;
  EpSet prev_ray = std::get<EpSet>(g.ray(grid[0], RayFlavor::OpenUp));
  EpSet below = complement(prev_ray);
  if (!below.is_empty()) pieces.push_back({below, Laurent()});
  for (size_t j = 0; j + 1 < grid.size(); ++j) {
    EpSet next_ray = std::get<EpSet>(g.ray(grid[j + 1], RayFlavor::OpenUp));
    EpSet slab = ep_diff(prev_ray, next_ray);
    if (!slab.is_empty()) pieces.push_back({slab, Laurent::constant(grid[j])});
    prev_ray = next_ray;
  }
  if (!prev_ray.is_empty())
    pieces.push_back(
        {prev_ray, with_tail_term ? Laurent::constant(grid.back()) : Laurent()});
  return Func::nat_pieces(std::move(pieces));
}

/// Builds the approximation sequences of the measurability characterisation:
/// per n, a grid of K_n = n 2^n levels with y_{n,j} in ((j-1)2^{-n}, j 2^{-n}],
/// nested across n by reusing previous levels, all avoiding the atom-level
/// set D = {|y| : y in C}; and the induced simple functions for f^+ and f^-.
/// With the tail term, f_n equals y_n above the top level; without it, f_n is
/// zero there (the variant used for integration).
inline ApproxSequence build_dyadic_sequence(const ChargeSpace& s, const Func& f, int depth,
                                            GridRule rule = GridRule::PreferHigh,
                                            bool with_tail_term = true) {
  check_function_universe(s, f);
  if (depth < 1) throw Error("depth must be positive");
  T1Certificate cert = is_t1_measurable(s, f);
  if (!cert.ok) throw Error("not T1-measurable");

  std::set<Rat> avoid;
  for (const Rat& y : atom_levels(s, f)) avoid.insert(rat_abs(y));

  ApproxSequence seq;
  seq.with_tail_term = with_tail_term;
  Func fp = f.pos_part(), fn = f.neg_part();

  std::vector<Rat> prev;
  for (int n = 1; n <= depth; ++n) {
    std::uint64_t kn = std::uint64_t(n) << n;
    std::vector<Rat> grid;
    grid.reserve(kn);
    Int pow_n = Int(1) << n;
    for (std::uint64_t j = 1; j <= kn; ++j) {
      Rat left(Int(j - 1), pow_n), right(Int(j), pow_n);
      auto it = std::upper_bound(prev.begin(), prev.end(), left);
      Rat y;
      if (it != prev.end() && *it <= right)
        y = *it;  // reuse: grids are nested
      else
        y = detail::fresh_grid_level(n, j, avoid, rule);
      if (!(left < y && y <= right)) throw InternalError("grid level escaped its cell");
      if (avoid.count(y)) throw InternalError("grid level hit an atom level");
      grid.push_back(y);
    }
    seq.tail_levels.push_back(grid.back());
    seq.pos_fns.push_back(assemble_dyadic(s, fp, grid, with_tail_term));
    seq.neg_fns.push_back(assemble_dyadic(s, fn, grid, with_tail_term));
    prev = grid;
    seq.grids.push_back(std::move(grid));
  }
  return seq;
}

struct DyadicBoundReport {
  bool ok = false;
  bool domain_empty = false;
  Rat exact_sup;  // sup over the domain of |f+_n - f+| (valid unless empty)
  bool sup_attained = false;
};

/// Verifies the construction bound |f+_n(x) - f+(x)| < 2^{1-n} on
/// (f+)^{-1}[0, y_n], exactly, and reports the exact supremum.
inline DyadicBoundReport check_dyadic_bound(const ChargeSpace& s, const ApproxSequence& seq,
                                            const Func& f, int n) {
  const Func fp = f.pos_part();
  const Func& approx = seq.pos_fns.at(n - 1);
  const Rat& yn = seq.tail_levels.at(n - 1);
  UniSet domain = fp.ray(yn, RayFlavor::ClosedDown);
  Func err = (approx - fp).abs_() * indicator_for(s, domain);
  DyadicBoundReport r;
  Rat bound(Int(2), Int(1) << n);  // 2^{1-n}
  auto sup = err.sup_over(domain);
  if (sup.empty_domain) {
    r.ok = true;
    r.domain_empty = true;
    return r;
  }
  if (!sup.bounded) {
    r.ok = false;
    return r;
  }
  r.exact_sup = sup.sup;
  r.sup_attained = sup.attained;
  // Emptiness of {err >= bound} within the domain is the exact check.
  UniSet viol = err.ray(bound, RayFlavor::ClosedUp);
  bool viol_empty = s.finite() ? std::get<Mask>(viol) == 0 : std::get<EpSet>(viol).is_empty();
  r.ok = viol_empty && r.exact_sup < bound;
  return r;
}

}  // namespace chargelab
