#pragma once

#include <cstddef>
#include <vector>

#include "polyswitch/game.hpp"
#include "polyswitch/rational.hpp"

namespace polyswitch {

using CostVector = std::vector<ExtRational>;

/// Deterministic finite-memory agent strategy.
///
/// Memory ids are 0..memory_count-1. The tables are dense over
/// (memory, state, input); -1 marks an undefined entry. `update` gives the
/// memory after playing `move` from the same (memory, state, input).
struct Strategy {
  int id = 0;
  int memory_count = 1;
  int initial_memory = 0;
  int num_states = 0;
  int num_inputs = 0;
  std::vector<int> move;
  std::vector<int> update;
  /// Memory to adopt when the strategy takes control at a state; -1 where the
  /// strategy is not meant to start.
  std::vector<int> start_memory;
  CostVector basis_costs;
  /// Worst-case weighted cost-to-go per (memory, state); empty for strategies
  /// that were not synthesized.
  std::vector<ExtRational> cost_to_go;
  /// Optimal weighted value at the vector the strategy was synthesized for.
  ExtRational value;
  std::vector<Rational> synthesized_for;

  Strategy() = default;
  Strategy(int memory, int states, int input_count);

  std::size_t index(int memory, StateId g, SymbolId input) const {
    return (static_cast<std::size_t>(memory) * static_cast<std::size_t>(num_states) +
            static_cast<std::size_t>(g)) *
               static_cast<std::size_t>(num_inputs) +
           static_cast<std::size_t>(input);
  }
  int move_at(int memory, StateId g, SymbolId input) const { return move[index(memory, g, input)]; }
  int update_at(int memory, StateId g, SymbolId input) const { return update[index(memory, g, input)]; }
  void set(int memory, StateId g, SymbolId input, SymbolId output, int next_memory) {
    move[index(memory, g, input)] = output;
    update[index(memory, g, input)] = next_memory;
  }
};

/// States from which the agent forces every guarantee set to be visited
/// infinitely often against an unconstrained environment.
StateSet winning_region(const GameStructure& game, const SpecTask& spec);

/// States from which the agent can force a visit to `target` (possibly now).
StateSet agent_attractor(const GameStructure& game, const StateSet& target, const StateSet& arena);

/// Scenarios whose goal is forcibly reachable from every winning state; only
/// these are serviced in a round.
std::vector<bool> serviceable_scenarios(const GameStructure& game, const SpecTask& spec, const StateSet& winning);

/// Cost-optimal correct strategy for the weighted reach-cost objective at `p`.
/// Throws DomainError when the initial state is losing or a scenario with
/// positive weight cannot be serviced.
Strategy synth_optimal(const GameStructure& game, const SpecTask& spec, const InfoVector& p);

/// Worst-case accumulated weight until the first visit of scenario goal `j`.
ExtRational eval_cost_basis(const GameStructure& game, const SpecTask& spec, const Strategy& strategy, int j);

CostVector eval_all_basis(const GameStructure& game, const SpecTask& spec, const Strategy& strategy);

/// Inner product of basis costs with `p`; infinite when a weighted basis cost is.
ExtRational eval_cost(const CostVector& basis_costs, const InfoVector& p);
inline ExtRational eval_cost(const Strategy& strategy, const InfoVector& p) {
  return eval_cost(strategy.basis_costs, p);
}

/// Per-scenario optimal reach costs; unreachable goals yield infinite entries.
CostVector optimal_basis_costs(const GameStructure& game, const SpecTask& spec);

/// Independent reference for the optimal weighted value at `p`, by plain
/// value iteration. Throws std::length_error when the product exceeds
/// `max_nodes`.
Rational oracle_optimal_cost(const GameStructure& game, const SpecTask& spec, const InfoVector& p,
                             std::size_t max_nodes = 100000);

}  // namespace polyswitch
