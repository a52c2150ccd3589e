#include "oracles.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "polyswitch/synthesis.hpp"

namespace polyswitch::testing {

ExtRational tour_optimal_cost(const GameStructure& game, const SpecTask& spec, const InfoVector& p) {
  if (game.num_inputs() != 1) throw std::invalid_argument("tour oracle needs a single input");
  const int ns = game.num_states();
  const StateSet w = winning_region(game, spec);
  const ExtRational inf = ExtRational::infinity();

  // All-pairs shortest paths inside W.
  std::vector<std::vector<ExtRational>> d(static_cast<std::size_t>(ns), std::vector<ExtRational>(static_cast<std::size_t>(ns), inf));
  for (StateId s = 0; s < ns; ++s) {
    if (!w[static_cast<std::size_t>(s)]) continue;
    d[static_cast<std::size_t>(s)][static_cast<std::size_t>(s)] = Rational(0);
    for (SymbolId a = 0; a < game.num_outputs(); ++a) {
      const auto& e = game.edge(s, 0, a);
      if (!e || !w[static_cast<std::size_t>(e->next)]) continue;
      auto& cell = d[static_cast<std::size_t>(s)][static_cast<std::size_t>(e->next)];
      if (e->next != s) cell = std::min(cell, ExtRational(e->weight));
    }
  }
  for (int k = 0; k < ns; ++k) {
    for (int i = 0; i < ns; ++i) {
      for (int j = 0; j < ns; ++j) {
        auto via = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] + d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        auto& cell = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (via < cell) cell = via;
      }
    }
  }

  std::vector<int> order;
  for (int j = 0; j < spec.num_scenarios(); ++j) {
    if (p[static_cast<std::size_t>(j)].sign() > 0) order.push_back(j);
  }
  std::vector<StateSet> goals;
  for (const auto& label : spec.scenarios) goals.push_back(game.label_set(label));

  ExtRational best = inf;
  do {
    // Remaining weight multiplies every segment still ahead of a goal.
    Rational remaining;
    for (int j : order) remaining += p[static_cast<std::size_t>(j)];
    std::vector<ExtRational> at(static_cast<std::size_t>(ns), inf);
    at[static_cast<std::size_t>(game.initial)] = Rational(0);
    for (int j : order) {
      std::vector<ExtRational> next(static_cast<std::size_t>(ns), inf);
      for (StateId t = 0; t < ns; ++t) {
        if (!goals[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]) continue;
        for (StateId s = 0; s < ns; ++s) {
          const auto& seg = d[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
          if (at[static_cast<std::size_t>(s)].is_infinite() || seg.is_infinite()) continue;
          ExtRational c = at[static_cast<std::size_t>(s)] + ExtRational(seg.value() * remaining);
          if (c < next[static_cast<std::size_t>(t)]) next[static_cast<std::size_t>(t)] = c;
        }
      }
      at = std::move(next);
      remaining -= p[static_cast<std::size_t>(j)];
    }
    for (const auto& c : at) best = std::min(best, c);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

ExtRational relaxed_basis_cost(const GameStructure& game, const SpecTask& spec, const Strategy& strategy, int j) {
  const int ns = game.num_states();
  const int nm = strategy.memory_count;
  const StateSet goal = game.label_set(spec.scenarios.at(static_cast<std::size_t>(j)));
  const std::size_t nodes = static_cast<std::size_t>(ns * nm);
  auto node = [&](int m, StateId s) { return static_cast<std::size_t>(m * ns + s); };
  struct Step {
    std::size_t to;
    Rational w;
  };
  std::vector<std::vector<Step>> succ(nodes);
  for (int m = 0; m < nm; ++m) {
    for (StateId s = 0; s < ns; ++s) {
      for (SymbolId e = 0; e < game.num_inputs(); ++e) {
        const int a = strategy.move_at(m, s, e);
        if (a < 0) continue;
        const Edge& edge = *game.edge(s, e, a);
        succ[node(m, s)].push_back({node(strategy.update_at(m, s, e), edge.next), edge.weight});
      }
    }
  }
  auto in_goal = [&](std::size_t v) { return goal[v % static_cast<std::size_t>(ns)]; };

  // Nodes that can avoid the goal forever.
  std::vector<bool> avoid(nodes);
  for (std::size_t v = 0; v < nodes; ++v) avoid[v] = !in_goal(v);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < nodes; ++v) {
      if (!avoid[v]) continue;
      bool keep = false;
      for (const auto& st : succ[v]) keep = keep || avoid[st.to];
      if (!keep) {
        avoid[v] = false;
        changed = true;
      }
    }
  }
  const std::size_t root = node(strategy.initial_memory, game.initial);
  if (avoid[root]) return ExtRational::infinity();

  std::vector<Rational> value(nodes, Rational(0));
  for (std::size_t round = 0; round <= nodes; ++round) {
    for (std::size_t v = 0; v < nodes; ++v) {
      if (in_goal(v) || avoid[v]) continue;
      Rational best;
      for (const auto& st : succ[v]) best = std::max(best, st.w + value[st.to]);
      value[v] = best;
    }
  }
  return value[root];
}

ExtRational simulated_basis_cost(const GameStructure& game, const SpecTask& spec, const Strategy& strategy, int j) {
  const StateSet goal = game.label_set(spec.scenarios.at(static_cast<std::size_t>(j)));
  std::vector<bool> seen(static_cast<std::size_t>(strategy.memory_count * game.num_states()), false);
  int m = strategy.initial_memory;
  StateId s = game.initial;
  Rational cost;
  while (!goal[static_cast<std::size_t>(s)]) {
    auto flag = seen[static_cast<std::size_t>(m * game.num_states() + s)];
    if (flag) return ExtRational::infinity();
    flag = true;
    const int a = strategy.move_at(m, s, 0);
    const Edge& edge = *game.edge(s, 0, a);
    cost += edge.weight;
    m = strategy.update_at(m, s, 0);
    s = edge.next;
  }
  return cost;
}

Rational plain_mixed_cost(const std::vector<Rational>& costs, const InfoVector& p) {
  Rational total;
  for (std::size_t j = 0; j < costs.size(); ++j) total += costs[j] * p[j];
  return total;
}

namespace {

void compose(int n, int k, int left, std::vector<int>& parts, std::vector<InfoVector>& out) {
  if (static_cast<int>(parts.size()) + 1 == n) {
    parts.push_back(left);
    std::vector<Rational> entries;
    for (int v : parts) entries.emplace_back(v, k);
    out.emplace_back(entries);
    parts.pop_back();
    return;
  }
  for (int v = 0; v <= left; ++v) {
    parts.push_back(v);
    compose(n, k, left - v, parts, out);
    parts.pop_back();
  }
}

}  // namespace

std::vector<InfoVector> composition_grid(int n, int k) {
  std::vector<InfoVector> out;
  std::vector<int> parts;
  compose(n, k, k, parts, out);
  return out;
}

bool plain_contains(const std::vector<std::vector<Rational>>& rows, const std::vector<Rational>& rhs,
                    const InfoVector& p) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (plain_mixed_cost(rows[r], p) > rhs[r]) return false;
  }
  return true;
}

}  // namespace polyswitch::testing
