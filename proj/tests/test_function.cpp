#include <catch2/catch_amalgamated.hpp>

#include "chargelab/function.hpp"

using namespace chargelab;

namespace {
EpSet evens() { return EpSet::from_strings("", "01"); }
}  // namespace

TEST_CASE("laurent evaluation and limits") {
  Laurent recip = Laurent::monomial(-1, Rat(1));
  REQUIRE(recip.eval(3) == Rat(1, 3));
  REQUIRE(recip.limit().finite());
  REQUIRE(recip.limit().value == 0);

  Laurent lin = Laurent::monomial(1, Rat(2));
  REQUIRE(lin.eval(5) == 10);
  REQUIRE(lin.limit().kind == LimitVal::PlusInf);

  Laurent mixed = lin - Laurent::constant(Rat(7));  // 2n - 7
  std::uint64_t thr = mixed.sign_threshold();
  for (std::uint64_t n = thr; n < thr + 10; ++n) REQUIRE(mixed.eval(n) > 0);

  Laurent zero;
  REQUIRE(zero.is_zero());
  REQUIRE(zero.limit().value == 0);
}

TEST_CASE("rays on finite universes") {
  // f = (0, 1/2, 1) on three points.
  Func f = Func::finite_pointwise({Rat(0), Rat(1, 2), Rat(1)});
  REQUIRE(std::get<Mask>(f.ray(Rat(1, 4), RayFlavor::OpenUp)) == 0b110);
  REQUIRE(std::get<Mask>(f.ray(Rat(1, 2), RayFlavor::OpenUp)) == 0b100);
  REQUIRE(std::get<Mask>(f.ray(Rat(1, 2), RayFlavor::ClosedUp)) == 0b110);
  REQUIRE(std::get<Mask>(f.ray(Rat(1, 2), RayFlavor::Level)) == 0b010);
  REQUIRE(std::get<Mask>(f.ray(Rat(-1), RayFlavor::OpenUp)) == 0b111);
}

TEST_CASE("rays of 1/n") {
  Func f = Func::reciprocal(Rat(1));
  // 1/n > 1/3 iff n < 3.
  EpSet ray = std::get<EpSet>(f.ray(Rat(1, 3), RayFlavor::OpenUp));
  REQUIRE(ray == EpSet::finite({1, 2}));
  // 1/n > 0 everywhere.
  REQUIRE(std::get<EpSet>(f.ray(Rat(0), RayFlavor::OpenUp)).is_all());
  // 1/n > 1 nowhere.
  REQUIRE(std::get<EpSet>(f.ray(Rat(1), RayFlavor::OpenUp)).is_empty());
  // Level set of an attained value is the singleton.
  REQUIRE(std::get<EpSet>(f.ray(Rat(1, 4), RayFlavor::Level)) == EpSet::finite({4}));
  REQUIRE(std::get<EpSet>(f.ray(Rat(2, 7), RayFlavor::Level)).is_empty());
}

TEST_CASE("rays of simple indicator") {
  Func f = Func::indicator_nat(evens());
  REQUIRE(std::get<EpSet>(f.ray(Rat(1, 2), RayFlavor::OpenUp)) == evens());
  REQUIRE(std::get<EpSet>(f.ray(Rat(1), RayFlavor::ClosedUp)) == evens());
  REQUIRE(std::get<EpSet>(f.ray(Rat(1), RayFlavor::OpenUp)).is_empty());
}

TEST_CASE("constant ray below the constant is the whole universe") {
  Func c = Func::constant_nat(Rat(3, 4));
  REQUIRE(std::get<EpSet>(c.ray(Rat(1, 2), RayFlavor::OpenUp)).is_all());
}

TEST_CASE("catalog closure on N") {
  Func f = Func::reciprocal(Rat(1));
  Func g = Func::indicator_nat(evens());
  Func combo = Func::affine(Rat(2), f, Rat(-1), g);  // 2/n - I_evens
  REQUIRE(combo.eval_nat(1) == Rat(2));
  REQUIRE(combo.eval_nat(2) == Rat(0));
  REQUIRE(combo.eval_nat(4) == Rat(-1, 2));

  Func prod = f * g;  // I_evens / n
  REQUIRE(prod.eval_nat(2) == Rat(1, 2));
  REQUIRE(prod.eval_nat(3) == 0);

  Func sq = combo.pow_int(2);
  REQUIRE(sq.eval_nat(4) == Rat(1, 4));

  Func a = combo.abs_();
  for (std::uint64_t n = 1; n <= 40; ++n) REQUIRE(a.eval_nat(n) == rat_abs(combo.eval_nat(n)));
  Func p = combo.pos_part(), m = combo.neg_part();
  for (std::uint64_t n = 1; n <= 40; ++n) {
    REQUIRE(p.eval_nat(n) - m.eval_nat(n) == combo.eval_nat(n));
    REQUIRE(p.eval_nat(n) + m.eval_nat(n) == a.eval_nat(n));
    REQUIRE(p.eval_nat(n) >= 0);
    REQUIRE(m.eval_nat(n) >= 0);
  }
}

TEST_CASE("min and max are exact pointwise") {
  Func f = Func::reciprocal(Rat(1));
  Func g = Func::constant_nat(Rat(1, 3));
  Func mx = Func::max_(f, g), mn = Func::min_(f, g);
  for (std::uint64_t n = 1; n <= 20; ++n) {
    REQUIRE(mx.eval_nat(n) == rat_max(f.eval_nat(n), g.eval_nat(n)));
    REQUIRE(mn.eval_nat(n) == rat_min(f.eval_nat(n), g.eval_nat(n)));
  }
}

TEST_CASE("critical levels are tail limits on N") {
  Func f = Func::reciprocal(Rat(1));
  REQUIRE(f.critical_levels() == std::vector<Rat>{Rat(0)});
  Func g = Func::indicator_nat(evens());
  REQUIRE(g.critical_levels() == std::vector<Rat>{Rat(0), Rat(1)});
  Func lin = Func::linear_nat(Rat(1));
  REQUIRE(lin.critical_levels().empty());
  REQUIRE(lin.unbounded_tail());
  REQUIRE_FALSE(f.unbounded_tail());
}

TEST_CASE("ae reduction to a simple function") {
  Func f = Func::reciprocal(Rat(1));
  auto red = f.reduce_ae_simple();
  REQUIRE(red.has_value());
  REQUIRE(red->piecewise_constant());
  REQUIRE(red->eval_nat(17) == 0);

  Func g = Func::affine(Rat(1), Func::indicator_nat(evens()), Rat(1), f);
  auto red2 = g.reduce_ae_simple();
  REQUIRE(red2.has_value());
  // Limits: 1 on evens, 0 on odds.
  REQUIRE(red2->eval_nat(100) == 1);
  REQUIRE(red2->eval_nat(101) == 0);

  REQUIRE_FALSE(Func::linear_nat(Rat(1)).reduce_ae_simple().has_value());
  // n restricted to a finite set reduces fine.
  Func spike = Func::linear_nat(Rat(1)) * Func::indicator_nat(EpSet::finite({3, 5}));
  auto red3 = spike.reduce_ae_simple();
  REQUIRE(red3.has_value());
  REQUIRE(red3->eval_nat(100) == 0);
}

TEST_CASE("pointwise equality of representations") {
  Func a = Func::indicator_nat(evens());
  Func b = Func::nat_pieces({{evens(), Laurent::constant(Rat(1))},
                             {complement(evens()), Laurent()}});
  REQUIRE(equal_pointwise(a, b));
  Func c = a + Func::indicator_nat(EpSet::finite({2}));
  REQUIRE_FALSE(equal_pointwise(a, c));
}

TEST_CASE("sup over a domain") {
  Func f = Func::reciprocal(Rat(1));
  auto sup = f.sup_over(UniSet(EpSet::all()));
  REQUIRE(sup.bounded);
  REQUIRE(sup.sup == 1);
  REQUIRE(sup.attained);

  auto tail_sup = f.sup_over(UniSet(EpSet::from_strings("000", "1")));
  REQUIRE(tail_sup.sup == Rat(1, 4));

  Func lin = Func::linear_nat(Rat(1));
  REQUIRE_FALSE(lin.sup_over(UniSet(EpSet::all())).bounded);
  auto fin_sup = lin.sup_over(UniSet(EpSet::finite({2, 9})));
  REQUIRE(fin_sup.bounded);
  REQUIRE(fin_sup.sup == 9);

  // A limit that is approached but never attained: 1 - 1/n.
  Func approach = Func::affine(Rat(1), Func::constant_nat(Rat(1)), Rat(-1), f);
  auto s2 = approach.sup_over(UniSet(EpSet::all()));
  REQUIRE(s2.sup == 1);
  REQUIRE_FALSE(s2.attained);
}

TEST_CASE("piece validation rejects overlap and gaps") {
  REQUIRE_THROWS_AS(
      Func::nat_pieces({{evens(), Laurent::constant(Rat(1))}, {EpSet::all(), Laurent()}}), Error);
  REQUIRE_THROWS_AS(Func::nat_pieces({{evens(), Laurent::constant(Rat(1))}}), Error);
}
