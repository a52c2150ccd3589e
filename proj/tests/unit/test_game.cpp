#include <doctest.h>

#include "../support/fixtures.hpp"
#include "polyswitch/error.hpp"
#include "polyswitch/io.hpp"

using namespace polyswitch;
using testing::make_star;

namespace {

bool has_code(const std::vector<Finding>& findings, const std::string& code) {
  for (const auto& f : findings) {
    if (f.code == code) return true;
  }
  return false;
}

const char* kMinimal = R"({
  "name": "one", "states": ["s"], "initial": "s", "inputs": ["e"], "outputs": ["a"],
  "transitions": [["s", "e", "a", "s", 0]],
  "labels": {"F": ["s"]},
  "spec": {"guarantees": ["F"], "scenarios": ["F"], "scenario_to_guarantee": [0]}
})";

}  // namespace

TEST_CASE("minimal document parses into a valid game") {
  const auto doc = parse_game(kMinimal);
  CHECK(doc.game.num_states() == 1);
  CHECK(doc.game.legal_outputs(0, 0) == std::vector<SymbolId>{0});
  CHECK(validate_game(doc.game, doc.spec).empty());
}

TEST_CASE("missing outputs for a state and input is rejected") {
  const std::string text = R"({
    "name": "gap", "states": ["s", "t"], "initial": "s", "inputs": ["e"], "outputs": ["a"],
    "transitions": [["s", "e", "a", "t", 1]],
    "labels": {"F": ["s"]},
    "spec": {"guarantees": ["F"], "scenarios": ["F"]}
  })";
  try {
    parse_game(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("incomplete transition function") != std::string::npos);
  }
}

TEST_CASE("STAR fixture is valid and its arm lengths are 1, 2, 3") {
  const auto doc = make_star();
  CHECK(validate_game(doc.game, doc.spec).empty());
  CHECK(doc.game.num_states() == 7);
  CHECK(doc.spec.num_scenarios() == 3);
  // Breadth-first distances from the hub, computed here.
  std::vector<int> dist(7, -1);
  std::vector<StateId> queue{0};
  dist[0] = 0;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    for (SymbolId a : doc.game.legal_outputs(queue[k], 0)) {
      StateId t = doc.game.edge(queue[k], 0, a)->next;
      if (dist[static_cast<std::size_t>(t)] < 0) {
        dist[static_cast<std::size_t>(t)] = dist[static_cast<std::size_t>(queue[k])] + 1;
        queue.push_back(t);
      }
    }
  }
  int j = 1;
  for (const auto& label : doc.spec.scenarios) {
    CHECK(dist[static_cast<std::size_t>(doc.game.labels.at(label).front())] == j++);
  }
}

TEST_CASE("validator reports structural findings") {
  auto doc = make_star();
  SUBCASE("negative weight") {
    doc.game.edge(0, 0, 1)->weight = Rational(-1, 2);
    CHECK(has_code(validate_game(doc.game, doc.spec), "NEGATIVE_WEIGHT"));
  }
  SUBCASE("unknown scenario label") {
    doc.spec.scenarios[1] = "nowhere";
    CHECK(has_code(validate_game(doc.game, doc.spec), "UNKNOWN_LABEL"));
  }
  SUBCASE("no legal output") {
    for (SymbolId a = 0; a < doc.game.num_outputs(); ++a) doc.game.edge(3, 0, a).reset();
    CHECK(has_code(validate_game(doc.game, doc.spec), "INCOMPLETE_TRANSITION"));
  }
  SUBCASE("bad scenario map") {
    doc.spec.scenario_to_guarantee = {0, 1, 7};
    CHECK(has_code(validate_game(doc.game, doc.spec), "SCENARIO_MAP"));
  }
}

TEST_CASE("information vectors are normalized exactly") {
  CHECK(normalize_info({1, 1, 2}) == testing::info({Rational(1, 4), Rational(1, 4), Rational(1, 2)}));
  CHECK(normalize_info({1, 0, 0}) == InfoVector::basis(3, 0));
  CHECK_THROWS_AS(normalize_info({0, 0, 0}), std::invalid_argument);
  CHECK(parse_info("0.6,0.3,0.1").str() == "3/5,3/10,1/10");
  CHECK_THROWS(parse_info("0.5,,0.5"));
  CHECK_THROWS(InfoVector({Rational(1, 2), Rational(1, 3)}));
}

TEST_CASE("game documents round-trip") {
  const auto doc = make_star();
  const auto again = parse_game(dump_game(doc.game, doc.spec));
  CHECK(again.game.states == doc.game.states);
  CHECK(again.game.labels == doc.game.labels);
  CHECK(dump_game(again.game, again.spec) == dump_game(doc.game, doc.spec));
  for (std::size_t k = 0; k < doc.game.transitions.size(); ++k) {
    const auto& a = doc.game.transitions[k];
    const auto& b = again.game.transitions[k];
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK((a->next == b->next && a->weight == b->weight));
  }
}

TEST_CASE("parse errors carry positions and names") {
  try {
    parse_game("{\"name\": \"x\", \"states\": [}");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.position() != ParseError::npos);
  }
  std::string dup = kMinimal;
  dup.replace(dup.find("[\"s\"]"), 5, "[\"s\", \"s\"]");
  CHECK_THROWS_WITH_AS(parse_game(dup), doctest::Contains("duplicate state"), ParseError);
  std::string unknown = kMinimal;
  unknown.replace(unknown.find("\"a\", \"s\", 0"), 11, "\"a\", \"z\", 0");
  CHECK_THROWS_WITH_AS(parse_game(unknown), doctest::Contains("unknown state 'z'"), ParseError);
  CHECK_THROWS_AS(parse_game(R"({"name": "x"})"), ParseError);
}

TEST_CASE("decimal weights are read as exact fractions") {
  std::string text = kMinimal;
  text.replace(text.find("\"s\", 0]"), 7, "\"s\", 0.1]");
  CHECK(parse_game(text).game.edge(0, 0, 0)->weight == Rational(1, 10));
  text = kMinimal;
  text.replace(text.find("\"s\", 0]"), 7, "\"s\", \"2/3\"]");
  CHECK(parse_game(text).game.edge(0, 0, 0)->weight == Rational(2, 3));
}
