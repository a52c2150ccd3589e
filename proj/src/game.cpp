#include "polyswitch/game.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace polyswitch {

void GameStructure::reset_transitions() {
  transitions.assign(states.size() * inputs.size() * outputs.size(), std::nullopt);
}

std::vector<SymbolId> GameStructure::legal_outputs(StateId g, SymbolId input) const {
  std::vector<SymbolId> legal;
  for (SymbolId a = 0; a < num_outputs(); ++a) {
    if (edge(g, input, a)) legal.push_back(a);
  }
  return legal;
}

namespace {

std::optional<int> index_of(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

}  // namespace

std::optional<StateId> GameStructure::find_state(const std::string& state_name) const {
  return index_of(states, state_name);
}

std::optional<SymbolId> GameStructure::find_input(const std::string& symbol) const {
  return index_of(inputs, symbol);
}

std::optional<SymbolId> GameStructure::find_output(const std::string& symbol) const {
  return index_of(outputs, symbol);
}

StateSet GameStructure::label_set(const std::string& label) const {
  auto it = labels.find(label);
  if (it == labels.end()) throw std::out_of_range("undeclared label '" + label + "'");
  StateSet set(states.size(), false);
  for (StateId g : it->second) set.at(static_cast<std::size_t>(g)) = true;
  return set;
}

InfoVector::InfoVector(std::vector<Rational> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("information vector must have at least one entry");
  Rational total;
  for (const auto& q : entries_) {
    if (q.sign() < 0) throw std::invalid_argument("information vector has a negative entry");
    total += q;
  }
  if (total != Rational(1)) {
    throw std::invalid_argument("information vector entries sum to " + total.str() + ", not 1");
  }
}

InfoVector InfoVector::basis(int n, int j) {
  if (j < 0 || j >= n) throw std::out_of_range("basis index out of range");
  std::vector<Rational> e(static_cast<std::size_t>(n));
  e[static_cast<std::size_t>(j)] = 1;
  return InfoVector(std::move(e));
}

InfoVector InfoVector::uniform(int n) {
  if (n < 1) throw std::invalid_argument("uniform vector needs n >= 1");
  return InfoVector(std::vector<Rational>(static_cast<std::size_t>(n), Rational(1, n)));
}

std::string InfoVector::str() const {
  std::string out;
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (j) out += ',';
    out += entries_[j].str();
  }
  return out;
}

InfoVector normalize_info(const std::vector<Rational>& raw) {
  if (raw.empty()) throw std::invalid_argument("empty information vector");
  Rational total;
  for (const auto& q : raw) {
    if (q.sign() < 0) throw std::invalid_argument("information vector has a negative entry");
    total += q;
  }
  if (total.is_zero()) throw std::invalid_argument("information vector is all zero");
  std::vector<Rational> normalized;
  normalized.reserve(raw.size());
  for (const auto& q : raw) normalized.push_back(q / total);
  return InfoVector(std::move(normalized));
}

InfoVector parse_info(const std::string& text) {
  std::vector<Rational> raw;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) raw.push_back(Rational::parse(item));
  if (!text.empty() && text.back() == ',') throw std::invalid_argument("trailing comma in vector '" + text + "'");
  return normalize_info(raw);
}

std::vector<Finding> validate_game(const GameStructure& game, const SpecTask& spec) {
  std::vector<Finding> out;
  auto add = [&](std::string code, std::string location, std::string message) {
    out.push_back({std::move(code), std::move(location), std::move(message)});
  };

  auto check_unique = [&](const std::vector<std::string>& names, const char* what) {
    std::set<std::string> seen;
    for (const auto& n : names) {
      if (!seen.insert(n).second) add("DUPLICATE_ID", what, std::string("duplicate ") + what + " '" + n + "'");
    }
  };
  check_unique(game.states, "state");
  check_unique(game.inputs, "input");
  check_unique(game.outputs, "output");

  const int ns = game.num_states();
  if (ns == 0) add("NO_STATES", "states", "game has no states");
  if (game.inputs.empty()) add("NO_INPUTS", "inputs", "input alphabet is empty");
  if (game.outputs.empty()) add("NO_OUTPUTS", "outputs", "output alphabet is empty");
  if (game.initial < 0 || game.initial >= ns) add("BAD_INITIAL", "initial", "initial state is not a declared state");

  const std::size_t expected = static_cast<std::size_t>(ns) * game.inputs.size() * game.outputs.size();
  if (game.transitions.size() != expected) {
    add("TABLE_SIZE", "transitions", "transition table does not match the alphabets");
  } else {
    for (StateId g = 0; g < ns; ++g) {
      for (SymbolId e = 0; e < game.num_inputs(); ++e) {
        bool any = false;
        for (SymbolId a = 0; a < game.num_outputs(); ++a) {
          const auto& edge = game.edge(g, e, a);
          if (!edge) continue;
          any = true;
          std::string where = game.states[static_cast<std::size_t>(g)] + "/" +
                              game.inputs[static_cast<std::size_t>(e)] + "/" +
                              game.outputs[static_cast<std::size_t>(a)];
          if (edge->next < 0 || edge->next >= ns) add("BAD_SUCCESSOR", where, "successor is not a declared state");
          if (edge->weight.sign() < 0) add("NEGATIVE_WEIGHT", where, "weight " + edge->weight.str() + " is negative");
        }
        if (!any) {
          add("INCOMPLETE_TRANSITION", game.states[static_cast<std::size_t>(g)] + "/" + game.inputs[static_cast<std::size_t>(e)],
              "incomplete transition function: no legal output");
        }
      }
    }
  }

  for (const auto& [label, members] : game.labels) {
    for (StateId g : members) {
      if (g < 0 || g >= ns) add("BAD_LABEL_STATE", "labels." + label, "label refers to an undeclared state");
    }
  }

  auto check_refs = [&](const std::vector<std::string>& refs, const char* field) {
    for (std::size_t i = 0; i < refs.size(); ++i) {
      if (!game.labels.count(refs[i])) {
        add("UNKNOWN_LABEL", std::string("spec.") + field + "[" + std::to_string(i) + "]",
            "label '" + refs[i] + "' is not declared");
      }
    }
  };
  if (spec.guarantees.empty()) add("NO_GUARANTEES", "spec.guarantees", "at least one guarantee is required");
  if (spec.scenarios.empty()) add("NO_SCENARIOS", "spec.scenarios", "at least one scenario is required");
  check_refs(spec.guarantees, "guarantees");
  check_refs(spec.assumptions, "assumptions");
  check_refs(spec.scenarios, "scenarios");
  if (spec.scenario_to_guarantee.size() != spec.scenarios.size()) {
    add("SCENARIO_MAP", "spec.scenario_to_guarantee", "must have one entry per scenario");
  }
  for (std::size_t i = 0; i < spec.scenario_to_guarantee.size(); ++i) {
    int j = spec.scenario_to_guarantee[i];
    if (j < 0 || j >= spec.num_guarantees()) {
      add("SCENARIO_MAP", "spec.scenario_to_guarantee[" + std::to_string(i) + "]", "guarantee index out of range");
    }
  }
  return out;
}

}  // namespace polyswitch
