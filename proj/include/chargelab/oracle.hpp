#pragma once

#include <cstdint>
#include <vector>

#include "chargelab/charge_space.hpp"
#include "chargelab/function.hpp"

namespace chargelab {

/// Deterministic 64-bit generator (splitmix64). Standard-library
/// distributions are implementation-defined, so sampling goes through
/// explicit arithmetic to keep reports byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t x = (state_ += 0x9e3779b97f4a7c15ull);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  int range(int lo, int hi) { return lo + static_cast<int>(below(std::uint64_t(hi - lo + 1))); }
  bool coin() { return next() & 1; }

  /// Random rational with |numerator| <= num_bound, denominator <= den_bound.
  Rat rat(int num_bound, int den_bound, bool nonneg = false) {
    int num = range(nonneg ? 0 : -num_bound, num_bound);
    int den = range(1, den_bound);
    return Rat(num, den);
  }

 private:
  std::uint64_t state_;
};

/// Instance generation parameters; generation is a pure function of these.
struct InstanceSpec {
  int max_points = 6;
  int charge_denominator_bound = 12;
  int function_value_bound = 4;
  std::uint64_t seed = 1;
};

/// All partitions of an n-point set into nonempty blocks (Bell-number many).
inline std::vector<std::vector<Mask>> set_partitions(int n) {
  if (n < 1) throw Error("empty ground set");
  if (n > 5) throw Error("partition enumeration capped at 5 points");
  std::vector<std::vector<Mask>> out;
  std::vector<int> block_of(n, 0);
  auto emit = [&]() {
    int blocks = 0;
    for (int i = 0; i < n; ++i) blocks = std::max(blocks, block_of[i] + 1);
    std::vector<Mask> atoms(blocks, 0);
    for (int i = 0; i < n; ++i) atoms[block_of[i]] |= Mask(1) << i;
    std::sort(atoms.begin(), atoms.end());
    out.push_back(std::move(atoms));
  };
  // Restricted growth strings enumerate set partitions exactly once.
  auto rec = [&](auto&& self, int i, int maxb) -> void {
    if (i == n) {
      emit();
      return;
    }
    for (int b = 0; b <= maxb + 1; ++b) {
      block_of[i] = b;
      self(self, i + 1, std::max(maxb, b));
    }
  };
  block_of[0] = 0;
  rec(rec, 1, 0);
  return out;
}

/// Literal minimum of the charge over all field elements containing A.
/// Independent of the closed-form outer charge; used to validate it.
inline Rat brute_outer_charge(const FiniteChargeSpace& s, Mask a) {
  size_t k = s.atoms().size();
  bool found = false;
  Rat best(0);
  for (Mask sel = 0; sel < (Mask(1) << k); ++sel) {
    Mask b = 0;
    for (size_t i = 0; i < k; ++i)
      if (sel & (Mask(1) << i)) b |= s.atoms()[i];
    if (!mask_subset(a, b)) continue;
    Rat c = s.charge(b);
    if (!found || c < best) {
      best = c;
      found = true;
    }
  }
  if (!found) throw InternalError("no field superset found");
  return best;
}

/// Literal maximum of the charge over all field elements inside A.
inline Rat brute_inner_charge(const FiniteChargeSpace& s, Mask a) {
  size_t k = s.atoms().size();
  Rat best(0);
  for (Mask sel = 0; sel < (Mask(1) << k); ++sel) {
    Mask b = 0;
    for (size_t i = 0; i < k; ++i)
      if (sel & (Mask(1) << i)) b |= s.atoms()[i];
    if (!mask_subset(b, a)) continue;
    Rat c = s.charge(b);
    if (c > best) best = c;
  }
  return best;
}

/// Bounded cover search on the periodic field: the cheapest purely periodic
/// superset with period at most max_period. A lower-bound oracle for the
/// closed-form outer charge, exact whenever the core period divides a
/// searched period.
inline Rat periodic_cover_search(const EpSet& a, std::uint64_t max_period) {
  Rat best(1);
  for (std::uint64_t q = 1; q <= max_period; ++q) {
    // The cheapest period-q superset keeps exactly the residues A occupies.
    std::uint64_t horizon = (a.preperiod_len() + a.period_len()) * 2 + q * 2 + 2;
    std::uint64_t window = std::lcm(q, a.period_len());
    horizon = std::max(horizon, a.preperiod_len() + window + 1);
    std::vector<bool> residues(q, false);
    for (std::uint64_t n = 1; n <= horizon; ++n)
      if (a.member(n)) residues[(n - 1) % q] = true;
    int ones = 0;
    for (bool b : residues) ones += b;
    best = rat_min(best, Rat(ones, static_cast<Int>(q)));
  }
  return best;
}

inline std::vector<std::string> default_labels(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(i + 1));
  return out;
}

/// Random finite charge space: a random atom partition with random
/// nonnegative weights, zero weights included deliberately.
inline FiniteChargeSpace random_space(Rng& rng, const InstanceSpec& spec) {
  int n = rng.range(1, spec.max_points);
  std::vector<int> block_of(n);
  int blocks = rng.range(1, n);
  for (int i = 0; i < n; ++i) block_of[i] = rng.range(0, blocks - 1);
  // Compact block ids so every block is nonempty.
  std::vector<int> remap(blocks, -1);
  int next_id = 0;
  for (int i = 0; i < n; ++i) {
    if (remap[block_of[i]] < 0) remap[block_of[i]] = next_id++;
    block_of[i] = remap[block_of[i]];
  }
  std::vector<Mask> atoms(next_id, 0);
  for (int i = 0; i < n; ++i) atoms[block_of[i]] |= Mask(1) << i;
  std::vector<Rat> weights;
  for (int i = 0; i < next_id; ++i) {
    // Roughly a third of the atoms are null.
    if (rng.below(3) == 0)
      weights.push_back(Rat(0));
    else
      weights.push_back(Rat(rng.range(1, 3), rng.range(1, spec.charge_denominator_bound)));
  }
  return FiniteChargeSpace(default_labels(n), std::move(atoms), std::move(weights));
}

/// Random pointwise function; splits atoms freely, so measurability is not
/// guaranteed (deliberately: decisions get exercised both ways).
inline Func random_function(Rng& rng, const FiniteChargeSpace& s, const InstanceSpec& spec) {
  std::vector<Rat> vals;
  for (int i = 0; i < s.num_points(); ++i)
    vals.push_back(rng.rat(spec.function_value_bound, spec.charge_denominator_bound));
  return Func::finite_pointwise(std::move(vals));
}

/// Random T1-measurable function: constant on every positive atom, free on
/// null atoms.
inline Func random_t1_function(Rng& rng, const FiniteChargeSpace& s, const InstanceSpec& spec) {
  std::vector<Rat> vals(s.num_points());
  for (size_t a = 0; a < s.atoms().size(); ++a) {
    Rat c = rng.rat(spec.function_value_bound, spec.charge_denominator_bound);
    for (int i = 0; i < s.num_points(); ++i)
      if (s.atoms()[a] & (Mask(1) << i)) {
        if (s.weights()[a] > 0)
          vals[i] = c;
        else
          vals[i] = rng.rat(spec.function_value_bound, spec.charge_denominator_bound);
      }
  }
  return Func::finite_pointwise(std::move(vals));
}

/// Random coarsening of an atom partition (a subfield's atoms).
inline std::vector<Mask> random_subfield_atoms(Rng& rng, const std::vector<Mask>& atoms) {
  int k = static_cast<int>(atoms.size());
  int groups = rng.range(1, k);
  std::vector<Mask> merged(groups, 0);
  for (int i = 0; i < k; ++i) merged[rng.range(0, groups - 1)] |= atoms[i];
  std::vector<Mask> out;
  for (Mask m : merged)
    if (m) out.push_back(m);
  std::sort(out.begin(), out.end());
  return out;
}

/// Random increasing chain of field elements: prefix unions of a shuffled
/// atom order, subsampled.
inline std::vector<Mask> random_increasing_chain(Rng& rng, const std::vector<Mask>& atoms,
                                                 int max_len) {
  std::vector<Mask> order = atoms;
  for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<Mask> chain;
  Mask acc = 0;
  for (Mask a : order) {
    acc |= a;
    if (rng.coin()) chain.push_back(acc);
    if (static_cast<int>(chain.size()) >= max_len) break;
  }
  if (chain.empty()) chain.push_back(acc);
  return chain;
}

/// Random eventually periodic set with small preperiod and period.
inline EpSet random_ep_set(Rng& rng, int max_pre, int max_per) {
  int p = rng.range(0, max_pre);
  int q = rng.range(1, max_per);
  std::vector<bool> pre(p), per(q);
  for (int i = 0; i < p; ++i) pre[i] = rng.coin();
  for (int i = 0; i < q; ++i) per[i] = rng.coin();
  return EpSet::from_bits(std::move(pre), std::move(per));
}

}  // namespace chargelab
