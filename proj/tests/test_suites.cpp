#include <catch2/catch_amalgamated.hpp>

#include "chargelab/suites.hpp"

using namespace chargelab;

// Short smoke runs of every registered suite; the acceptance binary runs the
// full configurations.

TEST_CASE("registry covers the documented theorem ids") {
  for (const char* id :
       {"fieldplusnull", "t1-equivalence", "equality-ae-characterisation", "hazy-uniqueness",
        "dominated-limits", "integration-laws", "determining-well-defined", "dyadic-bound",
        "outer-oracle", "outer-periodic-search", "completion-behavior", "lp-structure",
        "dominated-integrability", "fI_A", "dominated-convergence", "null-modification",
        "null-modify-function", "isomorphism", "order-integrals", "ep-algebra",
        "lp-completeness"}) {
    REQUIRE(theorem_registry().count(id) == 1);
  }
  InstanceSpec spec;
  REQUIRE_THROWS_AS(run_theorem_suite("no-such-theorem", spec), Error);
}

TEST_CASE("small smoke runs are green") {
  InstanceSpec spec;
  spec.max_points = 4;
  spec.seed = 99;
  for (const char* id : {"fieldplusnull", "outer-oracle", "ep-algebra", "lp-completeness"}) {
    SuiteReport rep = run_theorem_suite(id, spec);
    INFO(rep.id);
    REQUIRE(rep.instances > 0);
    REQUIRE(rep.failures == 0);
  }
}

TEST_CASE("suite reports are deterministic in the seed") {
  InstanceSpec spec;
  spec.seed = 5;
  SuiteReport a = suites::t1_equivalence(spec, 50);
  SuiteReport b = suites::t1_equivalence(spec, 50);
  REQUIRE(a.instances == b.instances);
  REQUIRE(a.failures == b.failures);
  spec.seed = 6;
  SuiteReport c = suites::t1_equivalence(spec, 50);
  REQUIRE(c.instances == a.instances);  // same count, different draws
}

TEST_CASE("counterexamples minimize and serialize") {
  // A deliberately false property produces a shrunken repro file.
  InstanceSpec spec;
  spec.seed = 17;
  SuiteRunner runner("demo-false", spec, 5);
  SuiteReport rep = runner.run(
      [](const FiniteChargeSpace& sp, const std::vector<Func>&) {
        return sp.total_charge() == 0;  // fails for most spaces
      },
      [&](Rng& rng) {
        return std::make_pair(random_space(rng, spec), std::vector<Func>{});
      });
  REQUIRE(rep.failures > 0);
  REQUIRE_FALSE(rep.counterexamples.empty());
  const Json& ce = rep.counterexamples.front();
  REQUIRE(ce.contains("space"));
  REQUIRE(ce.at("theorem") == "demo-false");
  // Shrinking drove the instance to a single point.
  REQUIRE(ce.at("space").at("universe").at("points").size() == 1);
}
