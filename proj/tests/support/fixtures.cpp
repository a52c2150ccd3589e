#include "fixtures.hpp"

#include <map>
#include <stdexcept>

namespace polyswitch::testing {

namespace {

const std::map<std::string, std::vector<std::string>>& star_adjacency() {
  static const std::map<std::string, std::vector<std::string>> adj{
      {"hub", {"a1", "b1", "c1"}}, {"a1", {"hub"}},       {"b1", {"hub", "b2"}}, {"b2", {"b1"}},
      {"c1", {"hub", "c2"}},       {"c2", {"c1", "c3"}}, {"c3", {"c2"}}};
  return adj;
}

GameDocument build_star(bool pit) {
  GameDocument doc;
  GameStructure& g = doc.game;
  g.name = pit ? "star-pit" : "star";
  g.states = {"hub", "a1", "b1", "b2", "c1", "c2", "c3"};
  if (pit) g.states.push_back("pit");
  g.inputs = {"tick"};
  g.outputs = g.states;
  g.initial = 0;
  g.reset_transitions();
  for (const auto& [from, targets] : star_adjacency()) {
    const StateId s = *g.find_state(from);
    g.set_edge(s, 0, s, s, 1);
    for (const auto& to : targets) {
      const StateId t = *g.find_state(to);
      g.set_edge(s, 0, t, t, 1);
    }
  }
  if (pit) {
    const StateId p = *g.find_state("pit");
    g.set_edge(0, 0, p, p, 1);
    g.set_edge(p, 0, p, p, 1);
  }
  g.labels["goal_a"] = {*g.find_state("a1")};
  g.labels["goal_b"] = {*g.find_state("b2")};
  g.labels["goal_c"] = {*g.find_state("c3")};
  doc.spec.guarantees = {"goal_a", "goal_b", "goal_c"};
  doc.spec.scenarios = {"goal_a", "goal_b", "goal_c"};
  doc.spec.scenario_to_guarantee = {0, 1, 2};
  return doc;
}

}  // namespace

GameDocument make_star() { return build_star(false); }
GameDocument make_star_with_pit() { return build_star(true); }

Strategy star_tour_strategy(const GameDocument& doc, bool trap_memory) {
  const GameStructure& g = doc.game;
  const std::vector<std::vector<std::string>> arms{{"a1"}, {"b1", "b2"}, {"c1", "c2", "c3"}};
  // Memory 1 + k serves arm k; memory 0 (if used) is the trap.
  Strategy s(4, g.num_states(), 1);
  auto id = [&](const std::string& name) { return *g.find_state(name); };
  auto arm_of = [&](StateId st, int& depth) {
    for (int k = 0; k < 3; ++k) {
      for (std::size_t d = 0; d < arms[static_cast<std::size_t>(k)].size(); ++d) {
        if (id(arms[static_cast<std::size_t>(k)][d]) == st) {
          depth = static_cast<int>(d);
          return k;
        }
      }
    }
    return -1;
  };
  for (int k = 0; k < 3; ++k) {
    const int mem = 1 + k;
    const auto& arm = arms[static_cast<std::size_t>(k)];
    for (StateId st = 0; st < g.num_states(); ++st) {
      if (g.states[static_cast<std::size_t>(st)] == "pit") {
        s.set(mem, st, 0, st, mem);
        continue;
      }
      if (st == id("hub")) {
        const StateId next = id(arm.front());
        s.set(mem, st, 0, next, arm.size() == 1 ? 1 + (k + 1) % 3 : mem);
        continue;
      }
      int depth = 0;
      const int on = arm_of(st, depth);
      const auto& own = arms[static_cast<std::size_t>(on)];
      StateId next;
      if (on == k && depth + 1 < static_cast<int>(own.size())) {
        next = id(own[static_cast<std::size_t>(depth + 1)]);
      } else {
        next = depth == 0 ? id("hub") : id(own[static_cast<std::size_t>(depth - 1)]);
      }
      const bool reaches_tip = on == k && depth + 2 == static_cast<int>(own.size());
      s.set(mem, st, 0, next, reaches_tip ? 1 + (k + 1) % 3 : mem);
    }
  }
  s.start_memory.assign(static_cast<std::size_t>(g.num_states()), 1);
  if (trap_memory) {
    const StateId pit = *g.find_state("pit");
    for (StateId st = 0; st < g.num_states(); ++st) s.set(0, st, 0, st == id("hub") ? pit : st, 0);
    s.start_memory[static_cast<std::size_t>(id("hub"))] = 0;
    s.start_memory[static_cast<std::size_t>(pit)] = -1;
    s.initial_memory = 0;
  } else {
    for (StateId st = 0; st < g.num_states(); ++st) s.set(0, st, 0, s.move_at(1, st, 0), s.update_at(1, st, 0));
    s.initial_memory = 1;
  }
  return s;
}

GameDocument make_adversarial_branch() {
  // From "start" the environment chooses left or right. Left leads to goal
  // x at cost 0 and goal y at cost 10, right the other way round.
  GameDocument doc;
  GameStructure& g = doc.game;
  g.name = "branch";
  g.states = {"start", "x", "y", "xy", "yx"};
  g.inputs = {"left", "right"};
  g.outputs = {"go"};
  g.initial = 0;
  g.reset_transitions();
  for (SymbolId e = 0; e < 2; ++e) {
    g.set_edge(0, e, 0, e == 0 ? 1 : 2, 0);
    g.set_edge(1, e, 0, 3, 10);
    g.set_edge(2, e, 0, 4, 10);
    g.set_edge(3, e, 0, 0, 0);
    g.set_edge(4, e, 0, 0, 0);
  }
  g.labels["gx"] = {1, 4};
  g.labels["gy"] = {2, 3};
  doc.spec.guarantees = {"gx", "gy"};
  doc.spec.scenarios = {"gx", "gy"};
  doc.spec.scenario_to_guarantee = {0, 1};
  return doc;
}

InfoVector info(std::initializer_list<Rational> entries) { return InfoVector(std::vector<Rational>(entries)); }

}  // namespace polyswitch::testing
