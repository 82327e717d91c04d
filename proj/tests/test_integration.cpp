#include <catch2/catch_amalgamated.hpp>

#include "chargelab/integration.hpp"
#include "chargelab/oracle.hpp"

using namespace chargelab;

namespace {
EpSet evens() { return EpSet::from_strings("", "01"); }
}  // namespace

TEST_CASE("simple integrals") {
  ChargeSpace s{FiniteChargeSpace({"1", "2", "3", "4"}, {0b0011, 0b1100},
                                  {Rat(1, 4), Rat(1, 2)})};
  REQUIRE(integrate_simple(s, Func::constant_finite(4, Rat(0))) == 0);
  // 1 on A, mu(A)=1/4.
  REQUIRE(integrate_simple(s, Func::indicator_finite(4, 0b0011)) == Rat(1, 4));
  // 2 I_A + 3 I_B with mu(A)=1/4, mu(B)=1/2.
  Func f = Func::affine(Rat(2), Func::indicator_finite(4, 0b0011), Rat(3),
                        Func::indicator_finite(4, 0b1100));
  REQUIRE(integrate_simple(s, f) == Rat(2));
  // Pieces outside field and completion are rejected.
  ChargeSpace t{FiniteChargeSpace({"1", "2"}, {0b11}, {Rat(1)})};
  REQUIRE_THROWS_AS(integrate_simple(t, Func::indicator_finite(2, 0b01)), Error);
  // ... but pieces in the completion (splitting a null atom) are fine.
  ChargeSpace u{FiniteChargeSpace({"1", "2"}, {0b11}, {Rat(0)})};
  REQUIRE(integrate_simple(u, Func::indicator_finite(2, 0b01)) == 0);
}

TEST_CASE("integrate constants and reductions") {
  ChargeSpace s{FiniteChargeSpace({"1", "2"}, {0b01, 0b10}, {Rat(1, 3), Rat(1, 6)})};
  IntegralResult r = integrate(s, Func::constant_finite(2, Rat(4)), 4);
  REQUIRE(r.value == Rat(4) * Rat(1, 2));
  REQUIRE(r.method == IntegralResult::SimpleDirect);
  REQUIRE(r.certified);

  // 1/n on the cofinite field integrates to 0 via the a.e. reduction.
  ChargeSpace cof = ChargeSpace::nat(NatField::Cofinite);
  IntegralResult rc = integrate(cof, Func::reciprocal(Rat(1)), 4);
  REQUIRE(rc.value == 0);
  REQUIRE(rc.method == IntegralResult::AeReduction);
  REQUIRE(rc.certified);

  // Indicator of evens over the eventually periodic field: density 1/2.
  ChargeSpace ep = ChargeSpace::nat(NatField::EventuallyPeriodic);
  IntegralResult re = integrate(ep, Func::indicator_nat(evens()), 4);
  REQUIRE(re.value == Rat(1, 2));
  REQUIRE(re.certified);

  REQUIRE_THROWS_AS(integrate(cof, Func::linear_nat(Rat(1)), 3), Error);
}

TEST_CASE("cauchy trace shrinks within the analytic bound") {
  ChargeSpace s{FiniteChargeSpace({"1", "2", "3"}, {0b001, 0b010, 0b100},
                                  {Rat(1, 2), Rat(1, 3), Rat(1, 6)})};
  Func f = Func::finite_pointwise({Rat(3, 2), Rat(-2, 3), Rat(5)});
  IntegralResult r = integrate(s, f, 8);
  REQUIRE(r.certified);
  REQUIRE(r.cauchy_trace.size() == 7);
  for (int n = 1; n < 8; ++n)
    REQUIRE(r.cauchy_trace[n - 1] <= Rat(Int(2), Int(1) << n) * s.total_charge() + 0);
}

TEST_CASE("integration laws on random instances") {
  Rng rng(31);
  InstanceSpec spec;
  for (int i = 0; i < 100; ++i) {
    FiniteChargeSpace sp = random_space(rng, spec);
    ChargeSpace s(sp);
    Func f = random_t1_function(rng, sp, spec);
    Func g = random_t1_function(rng, sp, spec);
    Rat c(2, 3), d(-1, 2);
    REQUIRE(integrate(s, Func::affine(c, f, d, g), 3).value ==
            c * integrate(s, f, 3).value + d * integrate(s, g, 3).value);
    // Monotonicity: f <= f + |g| a.e.
    Func big = f + g.abs_();
    REQUIRE(integrate(s, f, 3).value <= integrate(s, big, 3).value);
  }
}

TEST_CASE("ae invariance of the integral") {
  // g = f a.e. implies equal integrals; the null perturbation is invisible.
  FiniteChargeSpace sp({"1", "2", "3"}, {0b001, 0b110}, {Rat(0), Rat(1)});
  ChargeSpace s(sp);
  Func f = Func::finite_pointwise({Rat(7), Rat(2), Rat(2)});
  Func g = Func::finite_pointwise({Rat(-100), Rat(2), Rat(2)});
  REQUIRE(equal_ae(s, f, g));
  REQUIRE(integrate(s, f, 3).value == integrate(s, g, 3).value);
  REQUIRE(integrate(s, f, 3).value == Rat(2));
}

TEST_CASE("two grid rules produce identical integrals") {
  Rng rng(37);
  InstanceSpec spec;
  for (int i = 0; i < 60; ++i) {
    FiniteChargeSpace sp = random_space(rng, spec);
    ChargeSpace s(sp);
    Func f = random_t1_function(rng, sp, spec);
    IntegralResult hi = integrate(s, f, 5, GridRule::PreferHigh);
    IntegralResult lo = integrate(s, f, 5, GridRule::PreferLow);
    REQUIRE(hi.value == lo.value);
    REQUIRE(hi.certified);
    REQUIRE(lo.certified);
  }
}

TEST_CASE("lp membership") {
  ChargeSpace cof = ChargeSpace::nat(NatField::Cofinite);
  REQUIRE(lp_membership(cof, Func::reciprocal(Rat(1)), 1, 3));
  REQUIRE_FALSE(lp_membership(cof, Func::linear_nat(Rat(1)), 1, 3));
  ChargeSpace s{FiniteChargeSpace({"1", "2"}, {0b01, 0b10}, {Rat(1, 2), Rat(1, 2)})};
  REQUIRE(lp_membership(s, Func::finite_pointwise({Rat(3), Rat(-1)}), 2, 3));
  // Splitting a positive atom: not T1, not in any L_p.
  ChargeSpace t{FiniteChargeSpace({"1", "2"}, {0b11}, {Rat(1)})};
  REQUIRE_FALSE(lp_membership(t, Func::finite_pointwise({Rat(0), Rat(1)}), 1, 3));
}

TEST_CASE("lp pseudonorm exact and enclosed") {
  ChargeSpace s{FiniteChargeSpace({"1", "2", "3", "4"},
                                  {0b0011, 0b1100}, {Rat(1, 4), Rat(3, 4)})};
  Func ind = Func::indicator_finite(4, 0b0011);
  LpNorm n1 = lp_pseudonorm(s, ind, 1);
  REQUIRE(n1.exact);
  REQUIRE(n1.value == Rat(1, 4));
  LpNorm n2 = lp_pseudonorm(s, ind, 2);
  REQUIRE(n2.exact);
  REQUIRE(n2.value == Rat(1, 2));

  // Integral 1/3 has no exact square root: certified enclosure.
  ChargeSpace t{FiniteChargeSpace({"1"}, {0b1}, {Rat(1, 3)})};
  LpNorm n3 = lp_pseudonorm(t, Func::constant_finite(1, Rat(1)), 2, 8);
  REQUIRE_FALSE(n3.exact);
  REQUIRE(n3.low * n3.low <= Rat(1, 3));
  REQUIRE(Rat(1, 3) <= n3.high * n3.high);
  REQUIRE(n3.high - n3.low <= Rat(1, 100000000));
}

TEST_CASE("order integrals corollary") {
  std::vector<std::string> pts{"1", "2", "3"};
  std::vector<Mask> atoms{0b001, 0b010, 0b100};
  std::vector<Rat> w1{Rat(1, 4), Rat(1, 4), Rat(1, 4)};
  Func f = Func::finite_pointwise({Rat(1), Rat(2), Rat(3)});

  // mu1 = mu2: both verdicts true.
  auto r = order_integrals_check(pts, atoms, w1, w1, f);
  REQUIRE(r.chain_dominated);
  REQUIRE(r.integrals_ordered);
  REQUIRE(r.variants_ok);

  // Atomwise domination.
  std::vector<Rat> w2{Rat(1, 2), Rat(1, 4), Rat(1, 2)};
  auto r2 = order_integrals_check(pts, atoms, w1, w2, f);
  REQUIRE(r2.chain_dominated);
  REQUIRE(r2.integrals_ordered);
  REQUIRE(r2.variants_ok);

  // Incomparable atomwise but dominated on the chain of a monotone f:
  // rays of f are {2,3},{3} and X; weights below shift mass down the chain.
  std::vector<Rat> wa{Rat(1, 2), Rat(1, 4), Rat(1, 4)};
  std::vector<Rat> wb{Rat(1, 4), Rat(1, 2), Rat(1, 4)};
  auto r3 = order_integrals_check(pts, atoms, wa, wb, f);
  bool atomwise = true;
  for (size_t i = 0; i < wa.size(); ++i) atomwise = atomwise && wa[i] <= wb[i];
  REQUIRE_FALSE(atomwise);
  REQUIRE(r3.chain_dominated);
  REQUIRE(r3.integrals_ordered);
  REQUIRE(r3.variants_ok);
}

TEST_CASE("lp nesting on bounded spaces") {
  Rng rng(41);
  InstanceSpec spec;
  for (int i = 0; i < 50; ++i) {
    FiniteChargeSpace sp = random_space(rng, spec);
    ChargeSpace s(sp);
    Func f = rng.coin() ? random_t1_function(rng, sp, spec) : random_function(rng, sp, spec);
    bool m1 = lp_membership(s, f, 1, 3);
    bool m2 = lp_membership(s, f, 2, 3);
    bool m3 = lp_membership(s, f, 3, 3);
    if (m3) REQUIRE(m2);
    if (m2) REQUIRE(m1);
  }
}

TEST_CASE("completion invariance of integrals") {
  Rng rng(43);
  InstanceSpec spec;
  for (int i = 0; i < 50; ++i) {
    FiniteChargeSpace sp = random_space(rng, spec);
    ChargeSpace s(sp);
    ChargeSpace done = complete_space(s);
    Func f = random_t1_function(rng, sp, spec);
    REQUIRE(integrate(s, f, 3).value == integrate(done, f, 3).value);
  }
}
