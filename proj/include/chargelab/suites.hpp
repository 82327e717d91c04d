#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chargelab/json_io.hpp"
#include "chargelab/oracle.hpp"

namespace chargelab {

struct SuiteReport {
  std::string id;
  int instances = 0;
  int failures = 0;
  std::vector<Json> counterexamples;

  bool ok() const { return failures == 0 && instances > 0; }
};

namespace detail {

inline FiniteChargeSpace drop_point(const FiniteChargeSpace& s, int p) {
  Mask keep = s.universe() & ~(Mask(1) << p);
  auto squeeze = [&](Mask m) {
    Mask out = 0;
    int j = 0;
    for (int i = 0; i < s.num_points(); ++i) {
      if (i == p) continue;
      if (m & (Mask(1) << i)) out |= Mask(1) << j;
      ++j;
    }
    return out;
  };
  (void)keep;
  std::vector<std::string> points;
  for (int i = 0; i < s.num_points(); ++i)
    if (i != p) points.push_back(s.points()[i]);
  std::vector<Mask> atoms;
  std::vector<Rat> weights;
  for (size_t i = 0; i < s.atoms().size(); ++i) {
    Mask m = squeeze(s.atoms()[i]);
    if (m) {
      atoms.push_back(m);
      weights.push_back(s.weights()[i]);
    }
  }
  return FiniteChargeSpace(std::move(points), std::move(atoms), std::move(weights));
}

inline Func drop_point_fn(const Func& f, int p) {
  std::vector<Rat> vals;
  for (int i = 0; i < f.num_points(); ++i)
    if (i != p) vals.push_back(f.values()[i]);
  return Func::finite_pointwise(std::move(vals));
}

/// Shrinks a failing (space, functions) instance by dropping points while the
/// failure persists, then serialises the minimal repro.
inline Json minimize_and_serialize(
    const std::string& id, std::uint64_t seed, FiniteChargeSpace space, std::vector<Func> fns,
    const std::function<bool(const FiniteChargeSpace&, const std::vector<Func>&)>& fails) {
  bool shrunk = true;
  while (shrunk && space.num_points() > 1) {
    shrunk = false;
    for (int p = 0; p < space.num_points(); ++p) {
      FiniteChargeSpace cand = drop_point(space, p);
      std::vector<Func> cand_fns;
      for (const Func& f : fns) cand_fns.push_back(drop_point_fn(f, p));
      bool still = false;
      try {
        still = fails(cand, cand_fns);
      } catch (const std::exception&) {
        still = true;  // a crash counts as a persisting failure
      }
      if (still) {
        space = std::move(cand);
        fns = std::move(cand_fns);
        shrunk = true;
        break;
      }
    }
  }
  Json j;
  j["theorem"] = id;
  j["seed"] = seed;
  ChargeSpace cs(space);
  j["space"] = space_to_json(cs);
  Json fjs = Json::array();
  for (const Func& f : fns) fjs.push_back(func_to_json(cs, f));
  j["functions"] = fjs;
  return j;
}

}  // namespace detail

/// Harness shared by the random-instance suites: runs `check` on seeded
/// instances and minimizes counterexamples.
class SuiteRunner {
 public:
  SuiteRunner(std::string id, const InstanceSpec& spec, int count)
      : id_(std::move(id)), spec_(spec), count_(count) {}

  /// check returns true on pass. The same callable reruns during shrinking.
  SuiteReport run(const std::function<bool(const FiniteChargeSpace&, const std::vector<Func>&)>&
                      check,
                  const std::function<std::pair<FiniteChargeSpace, std::vector<Func>>(Rng&)>& gen) {
    SuiteReport rep;
    rep.id = id_;
    Rng rng(spec_.seed);
    for (int i = 0; i < count_; ++i) {
      auto [space, fns] = gen(rng);
      ++rep.instances;
      bool pass = false;
      try {
        pass = check(space, fns);
      } catch (const std::exception&) {
        pass = false;
      }
      if (!pass) {
        ++rep.failures;
        if (rep.counterexamples.size() < 8)
          rep.counterexamples.push_back(detail::minimize_and_serialize(
              id_, spec_.seed, space, fns,
              [&](const FiniteChargeSpace& s, const std::vector<Func>& f) {
                try {
                  return !check(s, f);
                } catch (const std::exception&) {
                  return true;
                }
              }));
      }
    }
    return rep;
  }

 private:
  std::string id_;
  InstanceSpec spec_;
  int count_;
};

// ---------------------------------------------------------------------------
// Suite implementations
// ---------------------------------------------------------------------------

namespace suites {

/// Both set descriptions of the generated field alpha(B u M) coincide, for
/// every field over |X| <= max_points, every subfield and every ideal.
inline SuiteReport fieldplusnull(const InstanceSpec& spec) {
  SuiteReport rep;
  rep.id = "fieldplusnull";
  int n_max = std::min(spec.max_points, 4);
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& ambient : set_partitions(n)) {
      // Subfields: coarsenings, i.e. partitions of the atom index set.
      int k = static_cast<int>(ambient.size());
      for (const auto& grouping : set_partitions(k)) {
        std::vector<Mask> base;
        for (Mask group : grouping) {
          Mask m = 0;
          for (int i = 0; i < k; ++i)
            if (group & (Mask(1) << i)) m |= ambient[i];
          base.push_back(m);
        }
        std::sort(base.begin(), base.end());
        for (Mask ideal_sel = 0; ideal_sel < (Mask(1) << k); ++ideal_sel) {
          BooleanIdealRep ideal;
          for (int i = 0; i < k; ++i)
            if (ideal_sel & (Mask(1) << i)) ideal.generators.push_back(ambient[i]);
          ++rep.instances;
          try {
            extend_field_with_ideal(ambient, base, ideal, n);  // verifies both forms
          } catch (const std::exception&) {
            ++rep.failures;
          }
        }
      }
    }
  }
  return rep;
}

/// T2 decision, ray characterisation, and dyadic construction success agree.
inline SuiteReport t1_equivalence(const InstanceSpec& spec, int count = 1000) {
  SuiteRunner runner("t1-equivalence", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        const Func& f = fns[0];
        bool t2 = decide_t2_all(s, f);
        bool t1 = is_t1_measurable(s, f).ok;
        bool dyadic;
        try {
          auto seq = build_dyadic_sequence(s, f, 3);
          dyadic = true;
          for (int n = 1; n <= 3; ++n)
            dyadic = dyadic && check_dyadic_bound(s, seq, f, n).ok;
        } catch (const Error&) {
          dyadic = false;
        }
        return t2 == t1 && t1 == dyadic;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        Func f = rng.coin() ? random_t1_function(rng, sp, spec) : random_function(rng, sp, spec);
        return std::make_pair(sp, std::vector<Func>{f});
      });
}

/// The three equality-a.e. routes agree for T1-measurable f.
inline SuiteReport equality_ae(const InstanceSpec& spec, int count = 1000) {
  SuiteRunner runner("equality-ae-characterisation", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        bool a = equal_ae(s, fns[0], fns[1], AeMethod::Direct);
        bool b = equal_ae(s, fns[0], fns[1], AeMethod::RaySymdiff);
        bool c = equal_ae(s, fns[0], fns[1], AeMethod::TruncatedRay);
        return a == b && b == c;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        Func f = random_t1_function(rng, sp, spec);
        Func g = [&] {
          if (rng.coin()) return random_function(rng, sp, spec);
          // Perturb f on null points only: equal a.e. by construction.
          std::vector<Rat> vals = f.values();
          Mask z = sp.null_points();
          for (int i = 0; i < sp.num_points(); ++i)
            if (z & (Mask(1) << i)) vals[i] += rng.rat(3, 3);
          return Func::finite_pointwise(std::move(vals));
        }();
        return std::make_pair(sp, std::vector<Func>{f, g});
      });
}

/// Hazy limits are unique up to equality a.e. (both directions, emulated with
/// eventually-stationary sequences).
inline SuiteReport hazy_uniqueness(const InstanceSpec& spec, int count = 500) {
  SuiteRunner runner("hazy-uniqueness", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        const Func& f = fns[0];
        const Func& g = fns[1];
        // f_k := junk for k < 3, f afterwards: converges hazily to f.
        std::vector<Func> seq{fns[2], fns[2], f, f, f};
        bool eq = equal_ae(s, f, g);
        bool converges_to_g = true;
        Func diff = (f - g).abs_();
        std::vector<Rat> probes;
        for (const Rat& c : diff.critical_levels())
          if (c > 0) probes.push_back(c / 2);
        probes.push_back(Rat(1, 7));
        for (const Rat& eps : probes) {
          auto trace = hazy_convergence_report(s, seq, g, eps);
          for (size_t k = 2; k < trace.size(); ++k)
            if (trace[k] != 0) converges_to_g = false;
        }
        // Stationary tails make the hazy verdict exact: the sequence
        // converges to g iff f = g a.e.
        return converges_to_g == eq;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        Func f = random_t1_function(rng, sp, spec);
        Func g = [&] {
          if (rng.coin()) return random_function(rng, sp, spec);
          std::vector<Rat> vals = f.values();
          Mask z = sp.null_points();
          for (int i = 0; i < sp.num_points(); ++i)
            if (z & (Mask(1) << i)) vals[i] += rng.rat(3, 3);
          return Func::finite_pointwise(std::move(vals));
        }();
        Func junk = random_function(rng, sp, spec);
        return std::make_pair(sp, std::vector<Func>{f, g, junk});
      });
}

/// A dominated sequence has a dominated hazy limit.
inline SuiteReport dominated_limits(const InstanceSpec& spec, int count = 500) {
  SuiteRunner runner("dominated-limits", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        const Func& h = fns[0];  // the limit
        const Func& g = fns[1];  // the dominating function
        const Func& junk = fns[2];
        std::vector<Func> seq{junk, h, h, h};
        bool premise = true;
        for (const Func& fk : seq) premise = premise && dominated_ae(s, fk, g);
        if (!premise) return true;  // vacuous instance
        return dominated_ae(s, h, g);
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        Func h = random_function(rng, sp, spec);
        Func g = random_function(rng, sp, spec);
        Func junk = random_function(rng, sp, spec);
        return std::make_pair(sp, std::vector<Func>{h, g, junk});
      });
}

/// Linearity, a.e.-invariance and monotonicity of the integral.
inline SuiteReport integration_laws(const InstanceSpec& spec, int count = 1000) {
  SuiteRunner runner("integration-laws", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        const Func& f = fns[0];
        const Func& g = fns[1];
        Rat c(3, 2), d(-2, 5);
        Rat lhs = integrate(s, Func::affine(c, f, d, g), 4).value;
        Rat rhs = c * integrate(s, f, 4).value + d * integrate(s, g, 4).value;
        if (lhs != rhs) return false;
        // a.e. invariance: perturbing on null points keeps the integral.
        std::vector<Rat> vals = f.values();
        Mask z = sp.null_points();
        for (int i = 0; i < sp.num_points(); ++i)
          if (z & (Mask(1) << i)) vals[i] += 1;
        Func fz = Func::finite_pointwise(std::move(vals));
        if (integrate(s, fz, 4).value != integrate(s, f, 4).value) return false;
        // monotonicity via domination.
        Func gbig = g.abs_() + f.abs_();
        if (!dominated_ae(s, f, gbig)) return false;
        return integrate(s, f, 4).value <= integrate(s, gbig, 4).value;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        return std::make_pair(sp, std::vector<Func>{random_t1_function(rng, sp, spec),
                                                    random_t1_function(rng, sp, spec)});
      });
}

/// Two independently gridded determining sequences produce the same integral.
inline SuiteReport determining_well_defined(const InstanceSpec& spec, int count = 500) {
  SuiteRunner runner("determining-well-defined", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        IntegralResult hi = integrate(s, fns[0], 6, GridRule::PreferHigh);
        IntegralResult lo = integrate(s, fns[0], 6, GridRule::PreferLow);
        return hi.value == lo.value && hi.certified && lo.certified;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        return std::make_pair(sp, std::vector<Func>{random_t1_function(rng, sp, spec)});
      });
}

/// The construction bound of the approximation sequence holds at every depth.
inline SuiteReport dyadic_bound(const InstanceSpec& spec, int count = 100, int depth = 12) {
  SuiteRunner runner("dyadic-bound", spec, count);
  return runner.run(
      [depth](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        for (GridRule rule : {GridRule::PreferHigh, GridRule::PreferLow}) {
          ApproxSequence seq = build_dyadic_sequence(s, fns[0], depth, rule);
          for (int n = 1; n <= depth; ++n)
            if (!check_dyadic_bound(s, seq, fns[0], n).ok) return false;
          // Grid nesting: every level reappears at the next depth.
          for (int n = 0; n + 1 < depth; ++n) {
            std::set<Rat> next(seq.grids[n + 1].begin(), seq.grids[n + 1].end());
            for (const Rat& y : seq.grids[n])
              if (!next.count(y)) return false;
          }
        }
        return true;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        return std::make_pair(sp, std::vector<Func>{random_t1_function(rng, sp, spec)});
      });
}

/// Library outer charge equals the brute-force minimum over covers; outer
/// charge is monotone and subadditive; nested fields reverse the inequality.
inline SuiteReport outer_oracle(const InstanceSpec& spec, int count = 1000) {
  SuiteRunner runner("outer-oracle", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>&) {
        ChargeSpace s(sp);
        Rng inner_rng(static_cast<std::uint64_t>(sp.num_points()) * 77 + 13);
        for (int trial = 0; trial < 8; ++trial) {
          Mask a = static_cast<Mask>(inner_rng.below(sp.universe() + 1));
          Mask b = static_cast<Mask>(inner_rng.below(sp.universe() + 1));
          if (outer_charge(s, UniSet(a)) != brute_outer_charge(sp, a)) return false;
          PjReport pj = pj_membership(s, UniSet(a));
          if (pj.inner != brute_inner_charge(sp, a)) return false;
          if (pj.outer != brute_outer_charge(sp, a)) return false;
          if (mask_subset(a, b) && outer_charge(s, UniSet(a)) > outer_charge(s, UniSet(b)))
            return false;
          if (outer_charge(s, UniSet(Mask(a | b))) >
              outer_charge(s, UniSet(a)) + outer_charge(s, UniSet(b)))
            return false;
          if (pj.inside && outer_charge(s, UniSet(a)) != pj.outer) return false;
        }
        // Nested fields: the subfield's outer charge dominates the ambient's.
        std::vector<Mask> sub = sp.atoms();
        if (sub.size() >= 2) {
          sub[0] |= sub[1];
          sub.erase(sub.begin() + 1);
          std::vector<Rat> w;
          for (Mask m : sub) w.push_back(sp.charge(sp.field_cover(m)));
          // Rebuild the coarsened space with matching charges.
          std::vector<Rat> weights;
          for (Mask m : sub) weights.push_back(sp.charge(m));
          ChargeSpace coarse{FiniteChargeSpace(sp.points(), sub, weights)};
          for (int trial = 0; trial < 4; ++trial) {
            Mask a = static_cast<Mask>(inner_rng.below(sp.universe() + 1));
            if (outer_charge(coarse, UniSet(a)) < outer_charge(s, UniSet(a))) return false;
          }
        }
        return true;
      },
      [&](Rng& rng) {
        return std::make_pair(random_space(rng, spec), std::vector<Func>{});
      });
}

/// Periodic-universe outer charge: the closed form lower-bounds every cover
/// found by bounded period search and matches it for purely periodic sets
/// whose period is searched.
inline SuiteReport outer_periodic_search(const InstanceSpec& spec, int count = 300,
                                         std::uint64_t max_period = 12) {
  SuiteReport rep;
  rep.id = "outer-periodic-search";
  Rng rng(spec.seed);
  ChargeSpace periodic = ChargeSpace::nat(NatField::Periodic);
  for (int i = 0; i < count; ++i) {
    ++rep.instances;
    EpSet a = random_ep_set(rng, 4, 8);
    Rat closed = outer_charge(periodic, UniSet(a));
    Rat searched = periodic_cover_search(a, max_period);
    bool ok = closed <= searched;
    if (a.purely_periodic() && a.period_len() <= max_period && closed != searched) ok = false;
    if (!ok) {
      ++rep.failures;
      Json j;
      j["theorem"] = rep.id;
      j["set"] = set_to_json(periodic, UniSet(a));
      j["closed"] = rat_str(closed);
      j["searched"] = rat_str(searched);
      rep.counterexamples.push_back(j);
    }
  }
  return rep;
}

/// Completion behavior: completed spaces are complete, completion is
/// idempotent, and integrals and distances are invariant under it.
inline SuiteReport completion_behavior(const InstanceSpec& spec, int count = 500) {
  SuiteRunner runner("completion-behavior", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        ChargeSpace done = complete_space(s);
        if (!is_complete(done)) return false;
        ChargeSpace twice = complete_space(done);
        if (!(twice.fin() == done.fin())) return false;
        // mu* agrees with the completed charge on completion members.
        Rng inner_rng(static_cast<std::uint64_t>(sp.num_points()) * 31 + 7);
        for (int t = 0; t < 6; ++t) {
          Mask a = static_cast<Mask>(inner_rng.below(sp.universe() + 1));
          PjReport pj = pj_membership(s, UniSet(a));
          if (pj.inside && outer_charge(s, UniSet(a)) != pj.outer) return false;
          // Outer charges agree across completion.
          if (outer_charge(s, UniSet(a)) != outer_charge(done, UniSet(a))) return false;
        }
        const Func& f = fns[0];
        const Func& g = fns[1];
        if (integrate(s, f, 4).value != integrate(done, f, 4).value) return false;
        if (pseudometric_d(s, f, g) != pseudometric_d(done, f, g)) return false;
        if (is_t1_measurable(s, f).ok != is_t1_measurable(done, f).ok) return false;
        return true;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        return std::make_pair(sp, std::vector<Func>{random_t1_function(rng, sp, spec),
                                                    random_t1_function(rng, sp, spec)});
      });
}

/// L_p nesting, the pos/neg-part lemma, and norm sanity on bounded spaces.
inline SuiteReport lp_structure(const InstanceSpec& spec, int count = 400) {
  SuiteRunner runner("lp-structure", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        const Func& f = fns[0];
        bool m1 = lp_membership(s, f, 1, 3), m2 = lp_membership(s, f, 2, 3),
             m3 = lp_membership(s, f, 3, 3);
        if (m3 && !m2) return false;
        if (m2 && !m1) return false;
        if (m1) {
          // pos/neg part lemma.
          if (!lp_membership(s, f.pos_part(), 1, 3)) return false;
          if (!lp_membership(s, f.neg_part(), 1, 3)) return false;
          if (!lp_membership(s, f.abs_(), 1, 3)) return false;
          Rat i_abs = integrate(s, f.abs_(), 3).value;
          Rat i_pos = integrate(s, f.pos_part(), 3).value;
          Rat i_neg = integrate(s, f.neg_part(), 3).value;
          if (i_abs != i_pos + i_neg) return false;
        }
        if (m2) {
          LpNorm n2 = lp_pseudonorm(s, f, 2, 6);
          if (n2.exact && n2.value * n2.value != n2.integral) return false;
          if (!n2.exact && !(n2.low * n2.low <= n2.integral && n2.integral <= n2.high * n2.high))
            return false;
        }
        return true;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        Func f = rng.coin() ? random_t1_function(rng, sp, spec) : random_function(rng, sp, spec);
        return std::make_pair(sp, std::vector<Func>{f});
      });
}

/// Dominated integrability: for |g| <= f a.e. with f integrable, g is
/// integrable iff it is T1-measurable.
inline SuiteReport dominated_integrability(const InstanceSpec& spec, int count = 500) {
  SuiteRunner runner("dominated-integrability", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        const Func& f = fns[0];
        const Func& g = fns[1];
        if (!dominated_ae(s, g.abs_(), f)) return true;  // vacuous
        if (!is_t1_measurable(s, f).ok) return true;     // premise needs f integrable
        bool g_t1 = is_t1_measurable(s, g).ok;
        bool g_integrable;
        try {
          integrate(s, g, 3);
          g_integrable = true;
        } catch (const Error&) {
          g_integrable = false;
        }
        return g_integrable == g_t1;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        Func f = random_t1_function(rng, sp, spec).abs_();
        // g: scaled-down f with arbitrary signs, sometimes atom-splitting.
        std::vector<Rat> vals(sp.num_points());
        for (int i = 0; i < sp.num_points(); ++i) {
          Rat cap = f.values()[i];
          vals[i] = rng.coin() ? cap : Rat(rng.range(-1, 1)) * cap;
          if (rng.below(4) == 0 && cap > 0) vals[i] = cap / rng.range(1, 3);
        }
        return std::make_pair(sp, std::vector<Func>{f, Func::finite_pointwise(std::move(vals))});
      });
}

/// f in L_p iff f I_A in L_p for completion members A; simple functions are
/// dense (the a.e. reduction is at distance zero).
inline SuiteReport fi_a_and_density(const InstanceSpec& spec, int count = 500) {
  SuiteRunner runner("fI_A-and-simple-dense", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        const Func& f = fns[0];
        if (!lp_membership(s, f, 1, 3)) return true;  // vacuous
        Rng inner_rng(static_cast<std::uint64_t>(sp.num_points()) * 19 + 3);
        for (int t = 0; t < 6; ++t) {
          Mask a = static_cast<Mask>(inner_rng.below(sp.universe() + 1));
          if (!in_pj_completion(s, UniSet(a))) continue;
          Func fa = f * Func::indicator_finite(sp.num_points(), a);
          if (!lp_membership(s, fa, 1, 3)) return false;
        }
        // Simple functions are dense: the atom-constant version is at
        // distance zero from f.
        std::vector<Rat> vals(sp.num_points());
        for (size_t ai = 0; ai < sp.atoms().size(); ++ai) {
          int first = 0;
          while (!(sp.atoms()[ai] & (Mask(1) << first))) ++first;
          for (int i = 0; i < sp.num_points(); ++i)
            if (sp.atoms()[ai] & (Mask(1) << i)) vals[i] = f.eval_point(first);
        }
        Func simple = Func::finite_pointwise(std::move(vals));
        if (pseudometric_d(s, f, simple) != 0) return false;
        Rat norm_gap = integrate(s, (f - simple).abs_(), 3).value;
        return norm_gap == 0;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        return std::make_pair(sp, std::vector<Func>{random_t1_function(rng, sp, spec)});
      });
}

/// Dominated convergence with eventually stationary sequences: hazy
/// convergence coincides with L_p-norm convergence.
inline SuiteReport dominated_convergence(const InstanceSpec& spec, int count = 400) {
  SuiteRunner runner("dominated-convergence", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>& fns) {
        ChargeSpace s(sp);
        const Func& f = fns[0];
        const Func& noise = fns[1];
        // f_k = f + null-supported noise for k < 2, then exactly f.
        Mask z = sp.null_points();
        Func null_noise = noise * Func::indicator_finite(sp.num_points(), z);
        Func f_early = f + null_noise;
        std::vector<Func> seq{f_early, f_early, f, f};
        Func dom = f.abs_() + null_noise.abs_() + Func::constant_finite(sp.num_points(), Rat(1));
        for (const Func& fk : seq)
          if (!dominated_ae(s, fk.abs_(), dom)) return false;
        // Hazy trace vanishes at every probe, and the L_1 gaps vanish too.
        std::vector<Rat> probes{Rat(1, 9)};
        for (const Rat& c : (f_early - f).abs_().critical_levels())
          if (c > 0) probes.push_back(c / 2);
        for (const Rat& eps : probes) {
          auto trace = hazy_convergence_report(s, seq, f, eps);
          for (const Rat& v : trace)
            if (v != 0) return false;
        }
        for (const Func& fk : seq)
          if (integrate(s, (fk - f).abs_(), 3).value != 0) return false;
        return true;
      },
      [&](Rng& rng) {
        FiniteChargeSpace sp = random_space(rng, spec);
        return std::make_pair(sp, std::vector<Func>{random_t1_function(rng, sp, spec),
                                                    random_function(rng, sp, spec)});
      });
}

/// Null modification on random chains: the constructed map lands in the
/// subfield completion with properties 1 and 2 (violations throw inside).
inline SuiteReport null_modification_suite(const InstanceSpec& spec, int count = 500) {
  SuiteReport rep;
  rep.id = "null-modification";
  Rng rng(spec.seed);
  int attempts = 0;
  while (rep.instances < count && attempts < count * 50) {
    ++attempts;
    InstanceSpec local = spec;
    local.max_points = std::min(spec.max_points + 2, 8);
    FiniteChargeSpace raw = random_space(rng, local);
    ChargeSpace ambient_cs = complete_space(ChargeSpace(raw));
    const FiniteChargeSpace& ambient = ambient_cs.fin();
    std::vector<Mask> sub = random_subfield_atoms(rng, ambient.atoms());
    if (!completion_identity_holds(ambient, sub)) continue;
    std::vector<Mask> ext = detail::adjoin_null_points(
        detail::complete_atoms(sub, ambient), ambient.null_points());
    std::vector<Mask> chain = random_increasing_chain(rng, ext, 8);
    ++rep.instances;
    try {
      NullModMap nm = null_modification(ambient, sub, chain);
      if (!nm.property1_ok || !nm.property2_ok || !nm.charges_match) ++rep.failures;
    } catch (const std::exception& e) {
      ++rep.failures;
      Json j;
      j["theorem"] = rep.id;
      j["error"] = e.what();
      j["space"] = space_to_json(ambient_cs);
      rep.counterexamples.push_back(j);
    }
  }
  return rep;
}

/// Null modification for functions: h is subfield-measurable and equal to f
/// almost everywhere; membership in L_p carries over.
inline SuiteReport null_modify_function_suite(const InstanceSpec& spec, int count = 500) {
  SuiteReport rep;
  rep.id = "null-modify-function";
  Rng rng(spec.seed + 1);
  int attempts = 0;
  while (rep.instances < count && attempts < count * 50) {
    ++attempts;
    FiniteChargeSpace raw = random_space(rng, spec);
    ChargeSpace ambient_cs = complete_space(ChargeSpace(raw));
    const FiniteChargeSpace& ambient = ambient_cs.fin();
    std::vector<Mask> sub = random_subfield_atoms(rng, ambient.atoms());
    if (!completion_identity_holds(ambient, sub)) continue;
    std::vector<Mask> ext = detail::adjoin_null_points(
        detail::complete_atoms(sub, ambient), ambient.null_points());
    std::vector<Rat> ext_weights;
    for (Mask a : ext) ext_weights.push_back(ambient.charge(a));
    FiniteChargeSpace ext_space(ambient.points(), ext, ext_weights);
    Func f = random_t1_function(rng, ext_space, spec);
    if (!is_t1_measurable(ChargeSpace(ext_space), f).ok) continue;
    ++rep.instances;
    try {
      Func h = null_modify_function(ambient, sub, f);
      ChargeSpace ext_cs(ext_space);
      std::vector<Rat> sub_weights;
      for (Mask a : sub) sub_weights.push_back(ambient.charge(a));
      ChargeSpace sub_cs{FiniteChargeSpace(ambient.points(), sub, sub_weights)};
      bool ok = equal_ae(ext_cs, f, h) && is_t1_measurable(sub_cs, h).ok &&
                lp_membership(sub_cs, h, 1, 3) && lp_membership(sub_cs, h, 2, 3);
      if (!ok) ++rep.failures;
    } catch (const std::exception& e) {
      ++rep.failures;
      Json j;
      j["theorem"] = rep.id;
      j["error"] = e.what();
      j["space"] = space_to_json(ambient_cs);
      rep.counterexamples.push_back(j);
    }
  }
  return rep;
}

/// The completion-isomorphism theorem on enumerated (ambient, subfield)
/// pairs: L_p equality iff the null sets lie in the subfield completion, and
/// class isomorphism iff the completion identity holds.
inline SuiteReport isomorphism(const InstanceSpec& spec, int n_max = 5) {
  SuiteReport rep;
  rep.id = "isomorphism";
  n_max = std::min(n_max, 5);
  for (int n = 1; n <= n_max; ++n) {
    for (const auto& atoms : set_partitions(n)) {
      // Weight patterns: each atom gets 0 or 1 (nullity is what matters).
      size_t k = atoms.size();
      for (Mask wsel = 0; wsel < (Mask(1) << k); ++wsel) {
        std::vector<Rat> weights;
        bool pj_complete = true;
        for (size_t i = 0; i < k; ++i) {
          bool null_atom = !(wsel & (Mask(1) << i));
          weights.push_back(null_atom ? Rat(0) : Rat(1));
          if (null_atom && mask_size(atoms[i]) > 1) pj_complete = false;
        }
        if (!pj_complete) continue;  // theorem hypothesis
        FiniteChargeSpace ambient(default_labels(n), atoms, weights);
        for (const auto& grouping : set_partitions(static_cast<int>(k))) {
          std::vector<Mask> sub;
          for (Mask group : grouping) {
            Mask m = 0;
            for (size_t i = 0; i < k; ++i)
              if (group & (Mask(1) << i)) m |= atoms[i];
            sub.push_back(m);
          }
          std::sort(sub.begin(), sub.end());
          ++rep.instances;
          try {
            IsomorphismReport r = completion_isomorphism_check(ambient, sub, 1);
            // Cross-check lp_equal directly on the indicator generators.
            Mask z = ambient.null_points();
            std::vector<Mask> ext = detail::adjoin_null_points(sub, z);
            std::vector<Rat> sub_w, ext_w;
            for (Mask a : sub) sub_w.push_back(ambient.charge(a));
            for (Mask a : ext) ext_w.push_back(ambient.charge(a));
            ChargeSpace sub_cs{FiniteChargeSpace(ambient.points(), sub, sub_w)};
            bool direct = true;
            for (Mask a : ext) {
              Func ind = Func::indicator_finite(n, a);
              if (!is_t1_measurable(sub_cs, ind).ok) direct = false;
            }
            bool nsub = true;
            for (Mask a : sub)
              if (ambient.charge(a) > 0 && (a & z)) nsub = false;
            bool ident = completion_identity_holds(ambient, sub);
            bool ok = (r.lp_equal == nsub) && (r.lp_equal == direct) &&
                      (r.classes_isomorphic == ident);
            if (r.classes_isomorphic && (!r.surjectivity_ok || !r.isometry_ok)) ok = false;
            if (!ok) ++rep.failures;
          } catch (const std::exception& e) {
            ++rep.failures;
            Json j;
            j["theorem"] = rep.id;
            j["error"] = e.what();
            j["space"] = space_to_json(ChargeSpace(ambient));
            rep.counterexamples.push_back(j);
          }
        }
      }
    }
  }
  return rep;
}

/// Order-integrals corollary: chain domination at the ray levels implies
/// ordered integrals, including the truncated variants.
inline SuiteReport order_integrals(const InstanceSpec& spec, int count = 500) {
  SuiteReport rep;
  rep.id = "order-integrals";
  Rng rng(spec.seed + 2);
  int attempts = 0;
  while (rep.instances < count && attempts < count * 50) {
    ++attempts;
    FiniteChargeSpace sp = random_space(rng, spec);
    Func f = random_t1_function(rng, sp, spec).abs_();
    std::vector<Rat> w1 = sp.weights(), w2;
    if (rng.coin()) {
      // Atomwise domination: guarantees chain domination.
      for (const Rat& w : w1) w2.push_back(w + rng.rat(2, spec.charge_denominator_bound, true));
    } else {
      for (size_t i = 0; i < w1.size(); ++i)
        w2.push_back(rng.rat(2, spec.charge_denominator_bound, true));
    }
    OrderIntegralsReport r;
    try {
      r = order_integrals_check(sp.points(), sp.atoms(), w1, w2, f);
    } catch (const Error&) {
      continue;
    }
    if (!r.chain_dominated) continue;  // only established instances count
    ++rep.instances;
    if (!r.integrals_ordered || !r.variants_ok) {
      ++rep.failures;
      Json j;
      j["theorem"] = rep.id;
      j["space"] = space_to_json(ChargeSpace(sp));
      j["f"] = func_to_json(ChargeSpace(sp), f);
      rep.counterexamples.push_back(j);
    }
  }
  return rep;
}

/// Eventually periodic set algebra: results agree with direct membership
/// evaluation; density is additive on disjoint periodic sets; every rational
/// in [0,1] is attained as a charge.
inline SuiteReport ep_algebra(const InstanceSpec& spec, int count = 500) {
  SuiteReport rep;
  rep.id = "ep-algebra";
  Rng rng(spec.seed + 3);
  ChargeSpace periodic = ChargeSpace::nat(NatField::Periodic);
  for (int i = 0; i < count; ++i) {
    ++rep.instances;
    EpSet a = random_ep_set(rng, 4, 6);
    EpSet b = random_ep_set(rng, 4, 6);
    std::uint64_t horizon =
        3 * (std::max(a.preperiod_len(), b.preperiod_len()) +
             std::lcm(a.period_len(), b.period_len()));
    bool ok = true;
    EpSet u = ep_union(a, b), x = ep_intersect(a, b), d = ep_symdiff(a, b), c = complement(a);
    for (std::uint64_t n = 1; n <= horizon && ok; ++n) {
      if (u.member(n) != (a.member(n) || b.member(n))) ok = false;
      if (x.member(n) != (a.member(n) && b.member(n))) ok = false;
      if (d.member(n) != (a.member(n) != b.member(n))) ok = false;
      if (c.member(n) != !a.member(n)) ok = false;
    }
    // Density additivity on disjoint purely periodic sets.
    EpSet pa = a.core();
    EpSet pb = ep_diff(b.core(), pa);
    if (ep_union(pa, pb).density() != pa.density() + pb.density()) ok = false;
    // Every rational in [0,1] is attained as a density.
    int den = rng.range(1, 12), num = rng.range(0, den);
    std::vector<bool> bits(den, false);
    for (int j = 0; j < num; ++j) bits[j] = true;
    EpSet attain = EpSet::from_bits({}, bits);
    if (nat_charge(NatField::Periodic, attain) != Rat(num, den)) ok = false;
    // Canonical form is a normal form: rebuilding from raw bits of the same
    // set yields the identical representation.
    std::vector<bool> pre2, per2;
    for (std::uint64_t n = 1; n <= a.preperiod_len() + a.period_len(); ++n)
      pre2.push_back(a.member(n));
    for (std::uint64_t n = a.preperiod_len() + a.period_len() + 1;
         n <= a.preperiod_len() + 3 * a.period_len(); ++n)
      per2.push_back(a.member(n));
    if (!(EpSet::from_bits(pre2, per2) == a)) ok = false;
    if (!ok) {
      ++rep.failures;
      Json j;
      j["theorem"] = rep.id;
      j["a"] = set_to_json(periodic, UniSet(a));
      j["b"] = set_to_json(periodic, UniSet(b));
      rep.counterexamples.push_back(j);
    }
  }
  return rep;
}

/// Quotient representation and the completeness criterion on finite spaces:
/// the embedding is a Boolean isomorphism onto the power set of the positive
/// atoms, and condition (3) is decided positively.
inline SuiteReport lp_completeness(const InstanceSpec& spec, int count = 300) {
  SuiteRunner runner("lp-completeness", spec, count);
  return runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>&) {
        ChargeSpace s(sp);
        auto rep = lp_completeness_check(s);
        if (!rep.complete || rep.basis != LpCompletenessReport::Decided) return false;
        QuotientAlgebra q = quotient_representation(sp);
        if (q.num_classes() != (size_t(1) << q.positive_atoms.size())) return false;
        // The embedding respects the Boolean structure and the charge.
        Rng inner_rng(static_cast<std::uint64_t>(sp.num_points()) * 41 + 11);
        for (int t = 0; t < 6; ++t) {
          Mask a = sp.field_cover(static_cast<Mask>(inner_rng.below(sp.universe() + 1)));
          Mask b = sp.field_cover(static_cast<Mask>(inner_rng.below(sp.universe() + 1)));
          Mask ia = quotient_image(q, sp, a), ib = quotient_image(q, sp, b);
          if (quotient_image(q, sp, a | b) != (ia | ib)) return false;
          if (quotient_image(q, sp, sp.universe() & ~a) !=
              (full_mask(static_cast<int>(q.positive_atoms.size())) & ~ia))
            return false;
          // Well-defined induced charge: mu<A> = mu(A).
          Rat w(0);
          for (size_t i = 0; i < q.positive_atoms.size(); ++i)
            if (ia & (Mask(1) << i)) w += sp.charge(q.positive_atoms[i]);
          if (w != sp.charge(a)) return false;
        }
        return true;
      },
      [&](Rng& rng) {
        return std::make_pair(random_space(rng, spec), std::vector<Func>{});
      });
}

}  // namespace suites

inline const std::map<std::string, std::function<SuiteReport(const InstanceSpec&)>>&
theorem_registry() {
  static const std::map<std::string, std::function<SuiteReport(const InstanceSpec&)>> reg = {
      {"fieldplusnull", [](const InstanceSpec& s) { return suites::fieldplusnull(s); }},
      {"t1-equivalence", [](const InstanceSpec& s) { return suites::t1_equivalence(s); }},
      {"equality-ae-characterisation", [](const InstanceSpec& s) { return suites::equality_ae(s); }},
      {"hazy-uniqueness", [](const InstanceSpec& s) { return suites::hazy_uniqueness(s); }},
      {"dominated-limits", [](const InstanceSpec& s) { return suites::dominated_limits(s); }},
      {"integration-laws", [](const InstanceSpec& s) { return suites::integration_laws(s); }},
      {"determining-well-defined",
       [](const InstanceSpec& s) { return suites::determining_well_defined(s); }},
      {"dyadic-bound", [](const InstanceSpec& s) { return suites::dyadic_bound(s); }},
      {"outer-oracle", [](const InstanceSpec& s) { return suites::outer_oracle(s); }},
      {"outer-periodic-search",
       [](const InstanceSpec& s) { return suites::outer_periodic_search(s); }},
      {"completion-behavior",
       [](const InstanceSpec& s) { return suites::completion_behavior(s); }},
      {"lp-structure", [](const InstanceSpec& s) { return suites::lp_structure(s); }},
      {"dominated-integrability",
       [](const InstanceSpec& s) { return suites::dominated_integrability(s); }},
      {"fI_A", [](const InstanceSpec& s) { return suites::fi_a_and_density(s); }},
      {"dominated-convergence",
       [](const InstanceSpec& s) { return suites::dominated_convergence(s); }},
      {"null-modification",
       [](const InstanceSpec& s) { return suites::null_modification_suite(s); }},
      {"null-modify-function",
       [](const InstanceSpec& s) { return suites::null_modify_function_suite(s); }},
      {"isomorphism", [](const InstanceSpec& s) { return suites::isomorphism(s); }},
      {"order-integrals", [](const InstanceSpec& s) { return suites::order_integrals(s); }},
      {"ep-algebra", [](const InstanceSpec& s) { return suites::ep_algebra(s); }},
      {"lp-completeness", [](const InstanceSpec& s) { return suites::lp_completeness(s); }},
  };
  return reg;
}

inline SuiteReport run_theorem_suite(const std::string& id, const InstanceSpec& spec) {
  auto it = theorem_registry().find(id);
  if (it == theorem_registry().end()) throw Error("unknown theorem id: " + id);
  return it->second(spec);
}

}  // namespace chargelab
