#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polyswitch/rational.hpp"

namespace polyswitch {

using StateId = int;
using SymbolId = int;

/// Membership vector over the states of one game.
using StateSet = std::vector<bool>;

struct Edge {
  StateId next = 0;
  Rational weight;
};

/// Finite turn-based arena: the environment picks an input, then the agent
/// picks a legal output, and the pair determines the successor state.
///
/// Transitions are kept in a dense table indexed by (state, input, output);
/// an empty slot means the output is illegal for that (state, input).
struct GameStructure {
  std::string name;
  std::vector<std::string> states;
  StateId initial = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::optional<Edge>> transitions;
  std::map<std::string, std::vector<StateId>> labels;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_inputs() const { return static_cast<int>(inputs.size()); }
  int num_outputs() const { return static_cast<int>(outputs.size()); }

  /// Sizes the transition table for the current alphabets and clears it.
  void reset_transitions();

  std::size_t slot(StateId g, SymbolId input, SymbolId output) const {
    return (static_cast<std::size_t>(g) * inputs.size() + static_cast<std::size_t>(input)) *
               outputs.size() +
           static_cast<std::size_t>(output);
  }
  const std::optional<Edge>& edge(StateId g, SymbolId input, SymbolId output) const {
    return transitions.at(slot(g, input, output));
  }
  std::optional<Edge>& edge(StateId g, SymbolId input, SymbolId output) {
    return transitions.at(slot(g, input, output));
  }
  void set_edge(StateId g, SymbolId input, SymbolId output, StateId next, Rational weight) {
    edge(g, input, output) = Edge{next, weight};
  }

  std::vector<SymbolId> legal_outputs(StateId g, SymbolId input) const;

  std::optional<StateId> find_state(const std::string& state_name) const;
  std::optional<SymbolId> find_input(const std::string& symbol) const;
  std::optional<SymbolId> find_output(const std::string& symbol) const;

  /// Membership vector of a declared label; throws std::out_of_range if undeclared.
  StateSet label_set(const std::string& label) const;
};

/// Liveness objective: visit every guarantee set infinitely often. Scenarios
/// are the goal sets weighted by the runtime information vector.
struct SpecTask {
  std::vector<std::string> guarantees;
  std::vector<std::string> assumptions;
  std::vector<std::string> scenarios;
  std::vector<int> scenario_to_guarantee;

  int num_guarantees() const { return static_cast<int>(guarantees.size()); }
  int num_scenarios() const { return static_cast<int>(scenarios.size()); }
};

/// A point of the probability simplex over the scenarios.
class InfoVector {
public:
  InfoVector() = default;

  /// Throws std::invalid_argument unless entries are non-negative and sum to 1.
  explicit InfoVector(std::vector<Rational> entries);

  static InfoVector basis(int n, int j);
  static InfoVector uniform(int n);

  const std::vector<Rational>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Rational& operator[](std::size_t j) const { return entries_[j]; }

  friend bool operator==(const InfoVector&, const InfoVector&) = default;
  friend auto operator<=>(const InfoVector& a, const InfoVector& b) { return a.entries_ <=> b.entries_; }

  /// Comma-separated fractions, e.g. "3/5,3/10,1/10".
  std::string str() const;

private:
  std::vector<Rational> entries_;
};

/// Divides non-negative entries by their sum.
InfoVector normalize_info(const std::vector<Rational>& raw);

/// Parses "0.6,0.3,0.1" or "1/2,1/2,0" exactly and normalizes it.
InfoVector parse_info(const std::string& text);

struct Finding {
  std::string code;
  std::string location;
  std::string message;
};

/// Empty exactly when every structural invariant of the game and its task holds.
std::vector<Finding> validate_game(const GameStructure& game, const SpecTask& spec);

}  // namespace polyswitch
