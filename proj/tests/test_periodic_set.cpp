#include <catch2/catch_amalgamated.hpp>

#include "chargelab/oracle.hpp"
#include "chargelab/periodic_set.hpp"

using namespace chargelab;

namespace {
EpSet evens() { return EpSet::from_strings("", "01"); }
EpSet odds() { return EpSet::from_strings("", "10"); }
EpSet mult3() { return EpSet::from_strings("", "001"); }
}  // namespace

TEST_CASE("canonical form examples") {
  REQUIRE(evens().density() == Rat(1, 2));
  REQUIRE(complement(evens()) == odds());
  REQUIRE(ep_union(evens(), odds()) == EpSet::all());
  REQUIRE(ep_union(evens(), odds()).period_len() == 1);

  // evens intersect multiples of 3 = multiples of 6.
  EpSet m6 = ep_intersect(evens(), mult3());
  REQUIRE(m6 == EpSet::from_strings("", "000001"));
  for (std::uint64_t n = 1; n <= 36; ++n) REQUIRE(m6.member(n) == (n % 6 == 0));
}

TEST_CASE("canonicalization strips preperiods and reduces periods") {
  // evens written with a redundant preperiod and doubled period.
  EpSet redundant = EpSet::from_strings("01", "0101");
  REQUIRE(redundant == evens());
  REQUIRE(redundant.preperiod_len() == 0);
  REQUIRE(redundant.period_len() == 2);

  // A tail set is not purely periodic: {n >= 6}.
  EpSet tail = EpSet::from_strings("00000", "1");
  REQUIRE(tail.preperiod_len() == 5);
  REQUIRE_FALSE(tail.purely_periodic());
  REQUIRE(tail.is_cofinite());
}

TEST_CASE("finite and cofinite conveniences") {
  EpSet f = EpSet::finite({1, 2, 3});
  REQUIRE(f.is_finite());
  REQUIRE(f.finite_elements() == std::vector<std::uint64_t>{1, 2, 3});
  REQUIRE(f.density() == 0);
  EpSet c = EpSet::cofinite_complement({5});
  REQUIRE(c.is_cofinite());
  REQUIRE_FALSE(c.member(5));
  REQUIRE(c.member(4));
  REQUIRE(EpSet::finite({}).is_empty());
}

TEST_CASE("density is the ones-per-period ratio") {
  REQUIRE(EpSet::finite({7, 9}).density() == 0);
  REQUIRE(EpSet::all().density() == 1);
  // Cross-check against partial sums over a long window.
  EpSet e = evens();
  int count = 0;
  const int N = 10000;
  for (int n = 1; n <= N; ++n) count += e.member(n);
  REQUIRE(Rat(count, N) == Rat(1, 2));
}

TEST_CASE("core extracts the eventual periodic pattern") {
  EpSet modified = ep_symdiff(evens(), EpSet::finite({2}));
  REQUIRE_FALSE(modified.purely_periodic());
  REQUIRE(modified.core() == evens());
  REQUIRE(EpSet::finite({1, 2}).core().is_empty());
  REQUIRE(EpSet::cofinite_complement({3}).core() == EpSet::all());
  // Core agrees with the set eventually.
  EpSet a = EpSet::from_strings("110", "0100101");
  EpSet core = a.core();
  for (std::uint64_t n = a.preperiod_len() + 1; n <= a.preperiod_len() + 30; ++n)
    REQUIRE(a.member(n) == core.member(n));
}

TEST_CASE("field membership per kind") {
  REQUIRE(nat_field_contains(NatField::Periodic, evens()));
  REQUIRE_FALSE(nat_field_contains(NatField::Periodic, EpSet::finite({1, 2, 3})));
  REQUIRE(nat_field_contains(NatField::EventuallyPeriodic, EpSet::finite({1, 2, 3})));
  REQUIRE(nat_field_contains(NatField::Cofinite, EpSet::finite({1, 2, 3})));
  REQUIRE_FALSE(nat_field_contains(NatField::Cofinite, evens()));
  REQUIRE(nat_field_contains(NatField::Cofinite, EpSet::cofinite_complement({5})));
}

TEST_CASE("charges per kind") {
  REQUIRE(nat_charge(NatField::Cofinite, EpSet::cofinite_complement({5})) == 1);
  REQUIRE(nat_charge(NatField::Cofinite, EpSet::finite({1, 2})) == 0);
  REQUIRE(nat_charge(NatField::Periodic, EpSet::empty_set()) == 0);
  REQUIRE(nat_charge(NatField::EventuallyPeriodic, ep_symdiff(evens(), EpSet::finite({2}))) ==
          Rat(1, 2));
  REQUIRE_THROWS_AS(nat_charge(NatField::Periodic, EpSet::finite({1})), Error);
  REQUIRE_THROWS_AS(nat_charge(NatField::Cofinite, evens()), Error);
}

TEST_CASE("period cap guards lcm blowup") {
  std::uint64_t saved = period_cap();
  period_cap() = 8;
  EpSet a = EpSet::from_strings("", "001");  // period 3
  EpSet b = EpSet::from_strings("", "00001");  // period 5
  REQUIRE_THROWS_AS(ep_intersect(a, b), Error);  // lcm 15 > 8
  period_cap() = saved;
}

TEST_CASE("set algebra matches pointwise evaluation on random pairs") {
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    EpSet a = random_ep_set(rng, 5, 7);
    EpSet b = random_ep_set(rng, 5, 7);
    std::uint64_t horizon = 3 * (std::max(a.preperiod_len(), b.preperiod_len()) +
                                 std::lcm(a.period_len(), b.period_len()));
    EpSet u = ep_union(a, b), x = ep_intersect(a, b), d = ep_symdiff(a, b);
    for (std::uint64_t n = 1; n <= horizon; ++n) {
      REQUIRE(u.member(n) == (a.member(n) || b.member(n)));
      REQUIRE(x.member(n) == (a.member(n) && b.member(n)));
      REQUIRE(d.member(n) == (a.member(n) != b.member(n)));
    }
  }
}

TEST_CASE("every rational in [0,1] is an attained charge") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    int den = rng.range(1, 20), num = rng.range(0, den);
    std::vector<bool> bits(den, false);
    for (int j = 0; j < num; ++j) bits[j] = true;
    EpSet s = EpSet::from_bits({}, bits);
    REQUIRE(nat_charge(NatField::Periodic, s) == Rat(num, den));
  }
}
