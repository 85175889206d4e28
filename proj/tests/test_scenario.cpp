#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "icnsim/scenario.hpp"

using namespace icnsim;

namespace {

const char* kMinimalText = R"(
seed = 5
duration_us = 1000000

[node bs-a]
role = icn_bs
cpu = 4
storage = 1000000

[node bs-b]
role = icn_bs
cpu = 4
storage = 1000000

[link l1]
from = bs-a
to = bs-b
latency_us = 1000
bandwidth_bps = 10000000
queue = 8

[ue u1]

[at 0 submit_intent]
service = base

[at 1000 ue_attach]
ue = u1
poa = bs-a
)";

std::string scenario_dir() {
  // tests run from the build tree; the corpus lives in the source tree
  return std::string(SCENARIO_DIR);
}

}  // namespace

TEST_CASE("minimal text scenario parses") {
  Scenario s = parse_scenario_text(kMinimalText);
  CHECK(s.seed == 5);
  CHECK(s.duration_us == 1'000'000);
  CHECK(s.nodes.size() == 2);
  CHECK(s.links.size() == 1);
  CHECK(s.ues.size() == 1);
  REQUIRE(s.timeline.size() == 2);
  CHECK(std::holds_alternative<SubmitIntentAction>(s.timeline[0].action));
  CHECK(std::holds_alternative<UeAttachAction>(s.timeline[1].action));
}

TEST_CASE("canonical maas_demo scenario parses with the six-stage timeline") {
  Scenario s = load_scenario(scenario_dir() + "/maas_demo.icnscn");
  CHECK(s.nodes.size() == 5);
  CHECK(s.ues.size() == 2);
  // stages: base, mobility, conference intents; join x2; enable; fetch; move
  std::size_t intents = 0, joins = 0, enables = 0, moves = 0, fetches = 0;
  for (const auto& item : s.timeline) {
    if (std::holds_alternative<SubmitIntentAction>(item.action)) ++intents;
    if (std::holds_alternative<JoinConferenceAction>(item.action)) ++joins;
    if (std::holds_alternative<EnableMobilityAction>(item.action)) ++enables;
    if (std::holds_alternative<UeMoveAction>(item.action)) ++moves;
    if (std::holds_alternative<StartFetchAction>(item.action)) ++fetches;
  }
  CHECK(intents == 3);
  CHECK(joins == 2);
  CHECK(enables == 1);
  CHECK(fetches == 1);
  CHECK(moves == 1);
}

TEST_CASE("json scenarios are accepted equivalently") {
  Scenario s = load_scenario(scenario_dir() + "/smoke.json");
  CHECK(s.seed == 3);
  CHECK(s.nodes.size() == 3);
  CHECK(s.timeline.size() == 7);
  const auto* intent = std::get_if<SubmitIntentAction>(&s.timeline[3].action);
  REQUIRE(intent != nullptr);
  CHECK(intent->intent.name_space == Name::parse("/demo"));
  CHECK(intent->intent.participants.size() == 2);
}

TEST_CASE("unsorted timelines are rejected with a line number") {
  std::string text = std::string(kMinimalText) + R"(
[at 500 ue_detach]
ue = u1
)";
  try {
    parse_scenario_text(text);
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.line > 0);
    CHECK(std::string(e.what()).find("sorted") != std::string::npos);
  }
}

TEST_CASE("references to undefined ids are rejected") {
  std::string bad_node = std::string(kMinimalText) + R"(
[at 2000 ue_attach]
ue = u1
poa = nowhere
)";
  CHECK_THROWS_AS(parse_scenario_text(bad_node), ScenarioError);

  std::string bad_ue = std::string(kMinimalText) + R"(
[at 2000 ue_attach]
ue = ghost
poa = bs-a
)";
  CHECK_THROWS_AS(parse_scenario_text(bad_ue), ScenarioError);

  std::string bad_link = R"(
[node a]
role = icn_bs
cpu = 1

[link l1]
from = a
to = missing
latency_us = 10
bandwidth_bps = 1000
queue = 2
)";
  CHECK_THROWS_AS(parse_scenario_text(bad_link), ScenarioError);
}

TEST_CASE("schema violations carry the offending line") {
  const char* text = R"(
seed = x
)";
  try {
    parse_scenario_text(text);
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("unknown keys and sections are rejected") {
  CHECK_THROWS_AS(parse_scenario_text("bogus = 1\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario_text("[sky]\ncolor = blue\n"), ScenarioError);
  std::string bad_action = std::string(kMinimalText) + "\n[at 5000 do_magic]\nue = u1\n";
  CHECK_THROWS_AS(parse_scenario_text(bad_action), ScenarioError);
}

TEST_CASE("attachment requires a PoA-capable role") {
  std::string text = R"(
[node router]
role = core_router
cpu = 4

[ue u1]

[at 0 ue_attach]
ue = u1
poa = router
)";
  CHECK_THROWS_AS(parse_scenario_text(text), ScenarioError);
}

TEST_CASE("build_substrate mirrors the scenario topology") {
  Scenario s = parse_scenario_text(kMinimalText);
  Substrate substrate = build_substrate(s);
  CHECK(substrate.nodes().size() == 2);
  CHECK(substrate.links().size() == 1);
  CHECK(substrate.path_latency("bs-a", "bs-b") == Duration{1'000});
}
