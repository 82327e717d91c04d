#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "chargelab/cli.hpp"

using namespace chargelab;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::dispatch(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

const char* kCofinite = R"({"universe":{"kind":"nat"},"field":{"kind":"cofinite"}})";
const char* kPeriodic = R"({"universe":{"kind":"nat"},"field":{"kind":"periodic"}})";
const char* kFiniteSpace = R"({
  "universe":{"kind":"finite","points":["a","b","c"]},
  "field":{"kind":"atoms","atoms":[["a","b"],["c"]]},
  "charge":{"kind":"atom-weights","weights":{"0":"1/2","1":"1/2"}}})";

}  // namespace

TEST_CASE("outer charge of a finite set on the cofinite field is 0/1") {
  auto r = run({"outer", "--space", kCofinite, "--set",
                R"({"kind":"finite","elements":[1,2,3]})"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "0/1\n");
}

TEST_CASE("distance between 1/n and 0 is 0/1") {
  auto r = run({"distance", "--space", kCofinite, "--f",
                R"({"kind":"reciprocal","scale":"1/1"})", "--g",
                R"({"kind":"constant","value":"0"})"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "0/1\n");
}

TEST_CASE("verify fieldplusnull exits zero with no failures") {
  auto r = run({"verify", "fieldplusnull", "--max-points", "3"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("0 failures") != std::string::npos);
}

TEST_CASE("space validation and atom listing") {
  auto r = run({"space-validate", "--space", kFiniteSpace});
  REQUIRE(r.code == 0);
  auto r2 = run({"atoms", "--space", R"({
    "universe":{"kind":"finite","points":["a","b","c"]},
    "field":{"kind":"generators","sets":[["a","b"]]}})"});
  REQUIRE(r2.code == 0);
  REQUIRE(r2.out.find("[[\"a\",\"b\"],[\"c\"]]") != std::string::npos);
}

TEST_CASE("malformed documents exit 2 with a pointered message") {
  auto r = run({"outer", "--space", "{not json", "--set", "{}"});
  REQUIRE(r.code == 2);
  REQUIRE(r.err.find("error:") != std::string::npos);
  auto r2 = run({"outer", "--space", kCofinite, "--set", R"({"kind":"bogus"})"});
  REQUIRE(r2.code == 2);
  auto r3 = run({"outer", "--space", "/nonexistent/path.json", "--set", "{}"});
  REQUIRE(r3.code == 2);
}

TEST_CASE("verdict-false exits 1") {
  // Indicator of evens is not T1-measurable over the cofinite field.
  auto r = run({"measurable", "--space", kCofinite, "--f",
                R"({"kind":"indicator","set":{"kind":"eventually-periodic","period":"01"}})"});
  REQUIRE(r.code == 1);
  // But it is over the periodic field.
  auto r2 = run({"measurable", "--space", kPeriodic, "--f",
                 R"({"kind":"indicator","set":{"kind":"eventually-periodic","period":"01"}})"});
  REQUIRE(r2.code == 0);
}

TEST_CASE("pj report is schema-stable json") {
  auto r = run({"pj", "--space", kPeriodic, "--set", R"({"kind":"finite","elements":[1,2,3]})",
                "--format", "json"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j.at("inner") == "0/1");
  REQUIRE(j.at("outer") == "0/1");
  REQUIRE(j.at("inside") == true);
  REQUIRE(j.at("attained") == false);
}

TEST_CASE("integrate and norm through the cli") {
  auto r = run({"integrate", "--space", kPeriodic, "--f",
                R"({"kind":"indicator","set":{"kind":"eventually-periodic","period":"01"}})",
                "--depth", "4", "--format", "json"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j.at("value") == "1/2");
  REQUIRE(j.at("certified") == true);

  auto r2 = run({"norm", "--space", kFiniteSpace, "--f",
                 R"({"kind":"indicator","set":{"kind":"points","elements":["a","b"]}})",
                 "--p", "2", "--format", "json"});
  REQUIRE(r2.code == 0);
  Json j2 = Json::parse(r2.out);
  REQUIRE(j2.at("exact") == true);
}

TEST_CASE("round trip: emitted space documents reload identically") {
  auto r = run({"complete", "--space", kFiniteSpace, "--format", "json"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  ChargeSpace reloaded = space_from_json(j);
  REQUIRE(reloaded.finite());
  Json again = space_to_json(reloaded);
  REQUIRE(j == again);
}

TEST_CASE("chain commands round trip") {
  auto r = run({"fn-to-chain", "--space", kFiniteSpace, "--f",
                R"({"kind":"indicator","set":{"kind":"points","elements":["a","b"]}})",
                "--levels", "1/2", "--format", "json"});
  REQUIRE(r.code == 0);
  Json chain = Json::parse(r.out);
  REQUIRE(chain.at("entries").size() == 1);
  auto r2 = run({"chain-to-fn", "--space", kFiniteSpace, "--chain", chain.dump(), "--format",
                 "json"});
  REQUIRE(r2.code == 0);
}

TEST_CASE("enumerate counts partitions") {
  auto r = run({"enumerate", "--n", "4", "--format", "json"});
  REQUIRE(r.code == 0);
  REQUIRE(Json::parse(r.out).at("count") == 15);
  auto r2 = run({"enumerate", "--n", "3"});
  REQUIRE(r2.out.find("5 partitions") != std::string::npos);
}

TEST_CASE("iso-check on the counterexample shape exits 1") {
  const char* amb = R"({
    "universe":{"kind":"finite","points":["1","2","3"]},
    "field":{"kind":"atoms","atoms":[["1"],["2"],["3"]]},
    "charge":{"kind":"atom-weights","weights":{"0":"1/2","1":"1/2","2":"0"}}})";
  auto r = run({"iso-check", "--space", amb, "--subfield",
                R"({"atoms":[["1"],["2","3"]]})", "--format", "json"});
  REQUIRE(r.code == 1);
  Json j = Json::parse(r.out);
  REQUIRE(j.at("lp_equal") == false);
  REQUIRE(j.at("classes_isomorphic") == true);
}

TEST_CASE("help exits zero") {
  auto r = run({"--help"});
  REQUIRE(r.code == 0);
}
