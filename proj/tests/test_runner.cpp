#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "gafield/runner.hpp"

using namespace gafield;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Report run_into(const Scenario& scn, const std::string& dir, bool force_fd = false) {
  fs::remove_all(dir);
  RunOptions opts;
  opts.out_dir = dir;
  opts.force_fd = force_fd;
  return run_scenario(scn, opts);
}

}  // namespace

TEST_CASE("scenario schema: validation failures name the field", "[scenario]") {
  CHECK_THROWS_MATCHES(scenario_from_string("{\"kind\":\"nope\",\"algebra\":{\"dim\":2}}"),
                       ga_error, MessageMatches(ContainsSubstring("kind")));
  CHECK_THROWS_MATCHES(scenario_from_string("{\"kind\":\"geodesic\"}"), ga_error,
                       MessageMatches(ContainsSubstring("algebra")));
  CHECK_THROWS_MATCHES(
      scenario_from_string(
          "{\"kind\":\"geodesic\",\"algebra\":{\"dim\":2,\"signature\":[1]}}"),
      ga_error, MessageMatches(ContainsSubstring("signature")));
  CHECK_THROWS_MATCHES(
      scenario_from_string("{\"kind\":\"geodesic\",\"algebra\":{\"dim\":0}}"), ga_error,
      MessageMatches(ContainsSubstring("dim")));
  CHECK_THROWS_MATCHES(
      scenario_from_string(
          "{\"kind\":\"action-sweep\",\"algebra\":{\"dim\":3},\"split\":0}"),
      ga_error, MessageMatches(ContainsSubstring("split")));
  CHECK_THROWS_MATCHES(
      scenario_from_string(
          "{\"kind\":\"geodesic\",\"algebra\":{\"dim\":2},\"dtau\":-1}"),
      ga_error, MessageMatches(ContainsSubstring("dtau")));
  CHECK_THROWS_MATCHES(scenario_from_string("{not json"), ga_error,
                       MessageMatches(ContainsSubstring("scenario parse error")));

  // malformed field expressions surface the field path
  const Scenario bad = scenario_from_string(
      "{\"kind\":\"geodesic\",\"algebra\":{\"dim\":2},"
      "\"fields\":{\"hbar\":[[\"1\",\"0\"],[\"0\",\"1/\"]],"
      "\"q0\":[0,0],\"U0\":[1,0]}}");
  RunOptions opts;
  opts.write_outputs = false;
  CHECK_THROWS_MATCHES(run_scenario(bad, opts), ga_error, MessageMatches(ContainsSubstring("fields.hbar")));

  CHECK_THROWS_MATCHES(preset_scenario("no-such-preset"), ga_error,
                       MessageMatches(ContainsSubstring("unknown preset")));
}

TEST_CASE("preset registry: required presets exist and every kind is exercised", "[runner]") {
  const auto& presets = preset_registry();
  std::set<std::string> names, kinds;
  for (const auto& p : presets) {
    names.insert(p.name);
    kinds.insert(p.kind);
    const Scenario s = preset_scenario(p.name);
    CHECK(s.kind == p.kind);
    CHECK(s.name == p.name);
    CHECK(std::string(p.topic).size() > 0);
    CHECK(std::string(p.invariant).size() > 0);
  }
  for (const char* required :
       {"flat-geodesic", "polar-killing", "pure-gauge-F", "ym-covariant-commutator",
        "torsion-vielbein", "em-complex-equivalence"})
    CHECK(names.count(required) == 1);
  for (const auto& kind : scenario_kinds()) CHECK(kinds.count(kind) == 1);
}

TEST_CASE("presets: every built-in scenario passes its own checks", "[runner]") {
  RunOptions opts;
  opts.write_outputs = false;
  for (const auto& p : preset_registry()) {
    const Report rep = run_scenario(preset_scenario(p.name), opts);
    for (const auto& c : rep.checks) {
      INFO(p.name << " / " << c.name << ": residual " << c.residual << " tol " << c.tolerance);
      CHECK(c.pass);
    }
    CHECK(rep.pass);
    CHECK(!rep.checks.empty());
  }
}

TEST_CASE("runner: identical scenario and seed give byte-identical tables", "[runner]") {
  for (const char* name : {"polar-killing", "scalar-action-sweep", "flat-killing-scan",
                           "em-complex-equivalence"}) {
    const Scenario scn = preset_scenario(name);
    const Report a = run_into(scn, "runner-det-a");
    const Report b = run_into(scn, "runner-det-b");
    REQUIRE(a.tables == b.tables);
    REQUIRE(!a.tables.empty());
    for (const auto& t : a.tables) {
      INFO(name << " table " << t);
      CHECK(slurp(fs::path("runner-det-a") / t) == slurp(fs::path("runner-det-b") / t));
    }
    // the report carries volatile timing but must parse and agree on the verdict
    const json ra = json::parse(slurp(fs::path("runner-det-a") / "report.json"));
    CHECK(ra.at("pass").get<bool>() == a.pass);
    CHECK(a.pass);
  }
  fs::remove_all("runner-det-a");
  fs::remove_all("runner-det-b");
}

TEST_CASE("runner: option plumbing for seeds, tolerances, derivative routes", "[runner]") {
  // tolerance scale multiplies every recorded tolerance
  {
    const Scenario scn = preset_scenario("algebra-identities");
    RunOptions opts;
    opts.write_outputs = false;
    opts.tolerance_scale = 10.0;
    const Report rep = run_scenario(scn, opts);
    for (const auto& c : rep.checks) CHECK(c.tolerance == Catch::Approx(1e-11));
  }

  // seed override reroutes the sampled instances but keeps the verdict
  {
    const Scenario scn = preset_scenario("algebra-identities");
    RunOptions opts;
    opts.write_outputs = false;
    opts.has_seed = true;
    opts.seed = 999;
    const Report a = run_scenario(scn, opts);
    const Report b = run_scenario(scn, RunOptions{.out_dir = ".", .write_outputs = false});
    CHECK(a.pass);
    CHECK(b.pass);
    bool any_differ = false;
    for (std::size_t i = 0; i < a.checks.size(); ++i)
      any_differ = any_differ || (a.checks[i].residual != b.checks[i].residual);
    CHECK(any_differ);
  }

  // the finite-difference route passes under its own wider tolerances
  for (const char* name : {"gauge-forms", "torsion-vielbein", "em-complex-equivalence"}) {
    RunOptions opts;
    opts.write_outputs = false;
    opts.force_fd = true;
    const Report rep = run_scenario(preset_scenario(name), opts);
    for (const auto& c : rep.checks) {
      INFO(name << " [fd] / " << c.name << ": residual " << c.residual << " tol "
                << c.tolerance);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("runner: failing checks flip the report verdict", "[runner]") {
  // a shear is not a symmetry of the flat metric; expecting it to be one must fail
  const Scenario scn = scenario_from_string(R"({
    "name":"bad-expectation","kind":"killing-scan",
    "algebra":{"dim":2,"signature":[1,1]},
    "fields":{"hbar":[["1","0"],["0","1"]],
              "candidates":{"shear":["q2","0"]},
              "expected":{"shear":true}},
    "points":8})");
  RunOptions opts;
  opts.write_outputs = false;
  const Report rep = run_scenario(scn, opts);
  CHECK(!rep.pass);
  bool saw_expected = false;
  for (const auto& c : rep.checks)
    if (c.name == "expected:shear") {
      saw_expected = true;
      CHECK(!c.pass);
    }
  CHECK(saw_expected);
}
