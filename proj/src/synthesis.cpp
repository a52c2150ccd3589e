#include "polyswitch/synthesis.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "polyswitch/error.hpp"

namespace polyswitch {

Strategy::Strategy(int memory, int states, int input_count)
    : memory_count(memory), num_states(states), num_inputs(input_count) {
  const auto cells = static_cast<std::size_t>(memory) * static_cast<std::size_t>(states) *
                     static_cast<std::size_t>(input_count);
  move.assign(cells, -1);
  update.assign(cells, -1);
  start_memory.assign(static_cast<std::size_t>(states), 0);
}

namespace {

// g can keep the play inside `target` for every input.
bool controllable_pre(const GameStructure& game, StateId g, const StateSet& target) {
  for (SymbolId e = 0; e < game.num_inputs(); ++e) {
    bool ok = false;
    for (SymbolId a = 0; a < game.num_outputs() && !ok; ++a) {
      const auto& edge = game.edge(g, e, a);
      ok = edge && target[static_cast<std::size_t>(edge->next)];
    }
    if (!ok) return false;
  }
  return true;
}

StateSet set_and(StateSet a, const StateSet& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
  return a;
}

bool any_of(const StateSet& s) {
  return std::find(s.begin(), s.end(), true) != s.end();
}

std::vector<StateSet> resolve(const GameStructure& game, const std::vector<std::string>& labels) {
  std::vector<StateSet> sets;
  sets.reserve(labels.size());
  for (const auto& label : labels) sets.push_back(game.label_set(label));
  return sets;
}

}  // namespace

StateSet agent_attractor(const GameStructure& game, const StateSet& target, const StateSet& arena) {
  StateSet attr = set_and(target, arena);
  bool grew = true;
  while (grew) {
    grew = false;
    for (StateId g = 0; g < game.num_states(); ++g) {
      auto gi = static_cast<std::size_t>(g);
      if (attr[gi] || !arena[gi]) continue;
      if (controllable_pre(game, g, attr)) {
        attr[gi] = true;
        grew = true;
      }
    }
  }
  return attr;
}

StateSet winning_region(const GameStructure& game, const SpecTask& spec) {
  const auto n = static_cast<std::size_t>(game.num_states());
  const auto guarantees = resolve(game, spec.guarantees);
  for (const auto& f : guarantees) {
    if (!any_of(f)) return StateSet(n, false);
  }
  const StateSet everywhere(n, true);
  StateSet z(n, true);
  while (true) {
    StateSet cpre(n, false);
    for (StateId g = 0; g < game.num_states(); ++g) cpre[static_cast<std::size_t>(g)] = controllable_pre(game, g, z);
    StateSet next = z;
    for (const auto& f : guarantees) next = set_and(next, agent_attractor(game, set_and(f, cpre), everywhere));
    if (next == z) return z;
    z = std::move(next);
  }
}

std::vector<bool> serviceable_scenarios(const GameStructure& game, const SpecTask& spec, const StateSet& winning) {
  std::vector<bool> ok;
  for (const auto& goal : resolve(game, spec.scenarios)) {
    StateSet reach = agent_attractor(game, set_and(goal, winning), winning);
    bool all = any_of(winning);
    for (std::size_t g = 0; g < winning.size(); ++g) all = all && (!winning[g] || reach[g]);
    ok.push_back(all);
  }
  return ok;
}

namespace {

void require_realizable(const GameStructure& game, const SpecTask& spec, const StateSet& winning) {
  if (winning[static_cast<std::size_t>(game.initial)]) return;
  if (!spec.assumptions.empty()) {
    throw DomainError("unrealizable: the initial state is losing against an unconstrained environment "
                      "(assumption exploitation unsupported)");
  }
  throw DomainError("unrealizable: the initial state is outside the winning region");
}

void require_weighted_serviceable(const SpecTask& spec, const std::vector<bool>& serviceable, const InfoVector& p) {
  if (p.size() != static_cast<std::size_t>(spec.num_scenarios())) {
    throw std::invalid_argument("information vector has " + std::to_string(p.size()) + " entries, expected " +
                                std::to_string(spec.num_scenarios()));
  }
  for (std::size_t j = 0; j < serviceable.size(); ++j) {
    if (!serviceable[j] && p[j].sign() > 0) {
      throw DomainError("scenario " + std::to_string(j + 1) + " (" + spec.scenarios[j] +
                        ") goal is unreachable under an adversarial environment");
    }
  }
}

using LexValue = std::vector<Rational>;

// Product of the game with the set of items visited in the current round.
// Items are the serviceable scenarios followed by all guarantees.
class RoundProduct {
public:
  RoundProduct(const GameStructure& game, const SpecTask& spec, const StateSet& winning,
               const std::vector<bool>& serviceable, const InfoVector& p)
      : game_(game), winning_(winning), weights_(p.entries()) {
    for (int j = 0; j < spec.num_scenarios(); ++j) {
      if (serviceable[static_cast<std::size_t>(j)]) scenarios_.push_back(j);
    }
    std::vector<StateSet> sets;
    for (const auto& goal : resolve(game, spec.scenarios)) sets.push_back(goal);
    std::vector<StateSet> items;
    for (int j : scenarios_) items.push_back(sets[static_cast<std::size_t>(j)]);
    for (auto& f : resolve(game, spec.guarantees)) items.push_back(std::move(f));
    if (items.size() > 20) throw std::length_error("too many scenarios and guarantees to track");
    item_count_ = static_cast<int>(items.size());
    full_ = (1u << item_count_) - 1;
    items_at_.assign(static_cast<std::size_t>(game.num_states()), 0);
    for (StateId g = 0; g < game.num_states(); ++g) {
      for (int k = 0; k < item_count_; ++k) {
        if (items[static_cast<std::size_t>(k)][static_cast<std::size_t>(g)]) items_at_[static_cast<std::size_t>(g)] |= 1u << k;
      }
    }
  }

  int memory_count() const { return static_cast<int>(full_) + 1; }
  unsigned full() const { return full_; }
  unsigned items_at(StateId g) const { return items_at_[static_cast<std::size_t>(g)]; }
  std::size_t lex_width() const { return scenarios_.size() + 1; }

  // Weighted charge first, then one entry per serviceable scenario.
  LexValue charge(unsigned mask, const Rational& weight) const {
    LexValue c(lex_width());
    Rational pending;
    for (std::size_t k = 0; k < scenarios_.size(); ++k) {
      if (mask & (1u << k)) continue;
      pending += weights_[static_cast<std::size_t>(scenarios_[k])];
      c[k + 1] = weight;
    }
    c[0] = weight * pending;
    return c;
  }

  const GameStructure& game() const { return game_; }
  bool in_arena(StateId g) const { return winning_[static_cast<std::size_t>(g)]; }

private:
  const GameStructure& game_;
  const StateSet& winning_;
  std::vector<Rational> weights_;
  std::vector<int> scenarios_;
  int item_count_ = 0;
  unsigned full_ = 0;
  std::vector<unsigned> items_at_;
};

LexValue add(const LexValue& a, const LexValue& b) {
  LexValue out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

// Min-max shortest path from every product node to the full item set. The
// environment's node is finalized once all its inputs are; the agent's node
// once its best successor is. Moves point to earlier-finalized nodes only, so
// a round always terminates even across zero-weight cycles.
struct SolvedProduct {
  std::vector<std::optional<LexValue>> env_value;    // (mask, g)
  std::vector<std::optional<LexValue>> agent_value;  // (mask, g, input)
  std::vector<int> choice;                           // (mask, g, input) -> output
};

SolvedProduct solve_round_product(const RoundProduct& prod) {
  const GameStructure& game = prod.game();
  const int ns = game.num_states();
  const int ni = game.num_inputs();
  const int no = game.num_outputs();
  const auto masks = static_cast<std::size_t>(prod.memory_count());
  auto env_id = [&](unsigned mask, StateId g) { return static_cast<std::size_t>(mask) * static_cast<std::size_t>(ns) + static_cast<std::size_t>(g); };
  auto agent_id = [&](unsigned mask, StateId g, SymbolId e) { return env_id(mask, g) * static_cast<std::size_t>(ni) + static_cast<std::size_t>(e); };

  SolvedProduct out;
  out.env_value.assign(masks * static_cast<std::size_t>(ns), std::nullopt);
  out.agent_value.assign(masks * static_cast<std::size_t>(ns) * static_cast<std::size_t>(ni), std::nullopt);
  out.choice.assign(out.agent_value.size(), -1);

  struct Pred {
    std::size_t agent;
    Rational weight;
    unsigned mask;
  };
  std::vector<std::vector<Pred>> preds(out.env_value.size());
  for (unsigned mask = 0; mask < masks; ++mask) {
    if (mask == prod.full()) continue;
    for (StateId g = 0; g < ns; ++g) {
      if (!prod.in_arena(g)) continue;
      for (SymbolId e = 0; e < ni; ++e) {
        for (SymbolId a = 0; a < no; ++a) {
          const auto& edge = game.edge(g, e, a);
          if (!edge || !prod.in_arena(edge->next)) continue;
          unsigned next = mask | prod.items_at(edge->next);
          preds[env_id(next, edge->next)].push_back({agent_id(mask, g, e), edge->weight, mask});
        }
      }
    }
  }

  std::vector<bool> env_done(out.env_value.size(), false);
  std::vector<bool> agent_done(out.agent_value.size(), false);
  std::vector<int> pending_inputs(out.env_value.size(), ni);

  using Entry = std::tuple<LexValue, int, std::size_t>;  // value, 0 = env / 1 = agent, node
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (StateId g = 0; g < ns; ++g) {
    if (!prod.in_arena(g)) continue;
    auto id = env_id(prod.full(), g);
    out.env_value[id] = LexValue(prod.lex_width());
    queue.emplace(*out.env_value[id], 0, id);
  }

  while (!queue.empty()) {
    auto [value, kind, id] = queue.top();
    queue.pop();
    if (kind == 0) {
      if (env_done[id]) continue;
      env_done[id] = true;
      for (const auto& pred : preds[id]) {
        if (agent_done[pred.agent]) continue;
        LexValue candidate = add(prod.charge(pred.mask, pred.weight), value);
        auto& tentative = out.agent_value[pred.agent];
        if (!tentative || candidate < *tentative) {
          tentative = candidate;
          queue.emplace(std::move(candidate), 1, pred.agent);
        }
      }
    } else {
      if (agent_done[id] || value != *out.agent_value[id]) continue;
      agent_done[id] = true;
      const std::size_t env = id / static_cast<std::size_t>(ni);
      const auto e = static_cast<SymbolId>(id % static_cast<std::size_t>(ni));
      const auto g = static_cast<StateId>(env % static_cast<std::size_t>(ns));
      const auto mask = static_cast<unsigned>(env / static_cast<std::size_t>(ns));
      std::optional<LexValue> best;
      for (SymbolId a = 0; a < no; ++a) {
        const auto& edge = game.edge(g, e, a);
        if (!edge || !prod.in_arena(edge->next)) continue;
        auto succ = env_id(mask | prod.items_at(edge->next), edge->next);
        if (!env_done[succ]) continue;
        LexValue candidate = add(prod.charge(mask, edge->weight), *out.env_value[succ]);
        if (!best || candidate < *best) {
          best = std::move(candidate);
          out.choice[id] = a;
        }
      }
      if (--pending_inputs[env] == 0) {
        // Agent nodes leave the queue in non-decreasing order: the last input
        // to finish carries the environment's maximum.
        out.env_value[env] = value;
        queue.emplace(value, 0, env);
      }
    }
  }
  for (std::size_t i = 0; i < env_done.size(); ++i) {
    if (!env_done[i]) out.env_value[i].reset();
  }
  return out;
}

}  // namespace

Strategy synth_optimal(const GameStructure& game, const SpecTask& spec, const InfoVector& p) {
  const StateSet winning = winning_region(game, spec);
  require_realizable(game, spec, winning);
  const auto serviceable = serviceable_scenarios(game, spec, winning);
  require_weighted_serviceable(spec, serviceable, p);

  RoundProduct prod(game, spec, winning, serviceable, p);
  SolvedProduct solved = solve_round_product(prod);

  const int ns = game.num_states();
  const int ni = game.num_inputs();
  Strategy strategy(prod.memory_count(), ns, ni);
  strategy.cost_to_go.assign(strategy.move.size(), ExtRational::infinity());
  for (int mem = 0; mem < prod.memory_count(); ++mem) {
    // A completed round restarts from the empty item set.
    const unsigned mask = static_cast<unsigned>(mem) == prod.full() ? 0u : static_cast<unsigned>(mem);
    for (StateId g = 0; g < ns; ++g) {
      if (!prod.in_arena(g)) continue;
      for (SymbolId e = 0; e < ni; ++e) {
        const std::size_t node = (static_cast<std::size_t>(mask) * static_cast<std::size_t>(ns) + static_cast<std::size_t>(g)) *
                                     static_cast<std::size_t>(ni) + static_cast<std::size_t>(e);
        const int a = solved.choice[node];
        if (a < 0) continue;
        const StateId next = game.edge(g, e, a)->next;
        strategy.set(mem, g, e, a, static_cast<int>(mask | prod.items_at(next)));
        strategy.cost_to_go[strategy.index(mem, g, e)] = solved.agent_value[node]->front();
      }
    }
  }
  for (StateId g = 0; g < ns; ++g) {
    strategy.start_memory[static_cast<std::size_t>(g)] = prod.in_arena(g) ? static_cast<int>(prod.items_at(g)) : -1;
  }
  strategy.initial_memory = static_cast<int>(prod.items_at(game.initial));

  const auto& start = solved.env_value[static_cast<std::size_t>(prod.items_at(game.initial)) * static_cast<std::size_t>(ns) +
                                       static_cast<std::size_t>(game.initial)];
  if (!start) throw DomainError("no strategy completes a service round from the initial state");
  strategy.value = start->front();
  strategy.synthesized_for = p.entries();
  strategy.basis_costs = eval_all_basis(game, spec, strategy);
  return strategy;
}

ExtRational eval_cost_basis(const GameStructure& game, const SpecTask& spec, const Strategy& strategy, int j) {
  if (j < 0 || j >= spec.num_scenarios()) throw std::out_of_range("scenario index out of range");
  const StateSet goal = game.label_set(spec.scenarios[static_cast<std::size_t>(j)]);
  const int ns = game.num_states();
  const int ni = game.num_inputs();
  const auto nodes = static_cast<std::size_t>(strategy.memory_count) * static_cast<std::size_t>(ns);

  // Longest path to the goal on the strategy-game product; a reachable cycle
  // that avoids the goal lets the environment postpone it forever.
  enum : std::uint8_t { kNew, kOpen, kDone };
  std::vector<std::uint8_t> mark(nodes, kNew);
  std::vector<ExtRational> value(nodes);
  struct Frame {
    std::size_t node;
    SymbolId next_input;
    ExtRational worst;
  };
  auto node_of = [&](int mem, StateId g) { return static_cast<std::size_t>(mem) * static_cast<std::size_t>(ns) + static_cast<std::size_t>(g); };
  const std::size_t root = node_of(strategy.initial_memory, game.initial);
  if (goal[static_cast<std::size_t>(game.initial)]) return Rational(0);

  std::vector<Frame> stack{{root, 0, Rational(0)}};
  mark[root] = kOpen;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const int mem = static_cast<int>(top.node / static_cast<std::size_t>(ns));
    const auto g = static_cast<StateId>(top.node % static_cast<std::size_t>(ns));
    if (top.next_input == ni) {
      value[top.node] = top.worst;
      mark[top.node] = kDone;
      stack.pop_back();
      if (!stack.empty()) {
        Frame& parent = stack.back();
        const int pm = static_cast<int>(parent.node / static_cast<std::size_t>(ns));
        const auto pg = static_cast<StateId>(parent.node % static_cast<std::size_t>(ns));
        const SymbolId pe = parent.next_input - 1;
        const auto& edge = game.edge(pg, pe, strategy.move_at(pm, pg, pe));
        parent.worst = std::max(parent.worst, edge->weight + value[top.node]);
      }
      continue;
    }
    const SymbolId e = top.next_input++;
    const int a = strategy.move_at(mem, g, e);
    if (a < 0 || !game.edge(g, e, a)) {
      throw std::invalid_argument("strategy has no legal move at a reachable (memory, state, input)");
    }
    const Edge& edge = *game.edge(g, e, a);
    const std::size_t succ = node_of(strategy.update_at(mem, g, e), edge.next);
    if (goal[static_cast<std::size_t>(edge.next)]) {
      top.worst = std::max(top.worst, ExtRational(edge.weight));
      continue;
    }
    if (mark[succ] == kOpen) return ExtRational::infinity();
    if (mark[succ] == kDone) {
      top.worst = std::max(top.worst, edge.weight + value[succ]);
      continue;
    }
    mark[succ] = kOpen;
    stack.push_back({succ, 0, Rational(0)});
  }
  return value[root];
}

CostVector eval_all_basis(const GameStructure& game, const SpecTask& spec, const Strategy& strategy) {
  CostVector costs;
  for (int j = 0; j < spec.num_scenarios(); ++j) costs.push_back(eval_cost_basis(game, spec, strategy, j));
  return costs;
}

ExtRational eval_cost(const CostVector& basis_costs, const InfoVector& p) {
  if (basis_costs.size() != p.size()) throw std::invalid_argument("cost vector and information vector differ in length");
  Rational total;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j].is_zero()) continue;
    if (basis_costs[j].is_infinite()) return ExtRational::infinity();
    total += basis_costs[j].value() * p[j];
  }
  return total;
}

CostVector optimal_basis_costs(const GameStructure& game, const SpecTask& spec) {
  const StateSet winning = winning_region(game, spec);
  require_realizable(game, spec, winning);
  const auto serviceable = serviceable_scenarios(game, spec, winning);
  CostVector ell;
  for (int j = 0; j < spec.num_scenarios(); ++j) {
    if (!serviceable[static_cast<std::size_t>(j)]) {
      ell.push_back(ExtRational::infinity());
      continue;
    }
    ell.push_back(synth_optimal(game, spec, InfoVector::basis(spec.num_scenarios(), j)).value);
  }
  return ell;
}

Rational oracle_optimal_cost(const GameStructure& game, const SpecTask& spec, const InfoVector& p, std::size_t max_nodes) {
  const StateSet winning = winning_region(game, spec);
  require_realizable(game, spec, winning);
  const auto serviceable = serviceable_scenarios(game, spec, winning);
  require_weighted_serviceable(spec, serviceable, p);

  std::vector<StateSet> goals;
  std::vector<Rational> q;
  for (int j = 0; j < spec.num_scenarios(); ++j) {
    if (!serviceable[static_cast<std::size_t>(j)]) continue;
    goals.push_back(game.label_set(spec.scenarios[static_cast<std::size_t>(j)]));
    q.push_back(p[static_cast<std::size_t>(j)]);
  }
  const std::size_t ns = static_cast<std::size_t>(game.num_states());
  const std::size_t masks = std::size_t{1} << goals.size();
  if (masks * ns > max_nodes) throw std::length_error("product too large for the reference oracle");
  const std::size_t full = masks - 1;

  auto seen_at = [&](StateId g) {
    std::size_t m = 0;
    for (std::size_t k = 0; k < goals.size(); ++k) {
      if (goals[k][static_cast<std::size_t>(g)]) m |= std::size_t{1} << k;
    }
    return m;
  };
  auto remaining = [&](std::size_t mask) {
    Rational r;
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (!(mask & (std::size_t{1} << k))) r += q[k];
    }
    return r;
  };

  std::vector<ExtRational> value(masks * ns, ExtRational::infinity());
  for (std::size_t g = 0; g < ns; ++g) value[full * ns + g] = Rational(0);

  const std::size_t max_sweeps = masks * ns + 2;
  for (std::size_t sweep = 0;; ++sweep) {
    if (sweep > max_sweeps) throw std::logic_error("value iteration did not stabilize");
    std::vector<ExtRational> next = value;
    for (std::size_t mask = 0; mask < full; ++mask) {
      const Rational rate = remaining(mask);
      for (StateId g = 0; g < game.num_states(); ++g) {
        if (!winning[static_cast<std::size_t>(g)]) continue;
        ExtRational worst = Rational(0);
        for (SymbolId e = 0; e < game.num_inputs(); ++e) {
          ExtRational best = ExtRational::infinity();
          for (SymbolId a = 0; a < game.num_outputs(); ++a) {
            const auto& edge = game.edge(g, e, a);
            if (!edge || !winning[static_cast<std::size_t>(edge->next)]) continue;
            const std::size_t succ = (mask | seen_at(edge->next)) * ns + static_cast<std::size_t>(edge->next);
            best = std::min(best, ExtRational(edge->weight * rate) + value[succ]);
          }
          worst = std::max(worst, best);
        }
        next[mask * ns + static_cast<std::size_t>(g)] = worst;
      }
    }
    if (next == value) break;
    value = std::move(next);
  }
  const ExtRational& start = value[seen_at(game.initial) * ns + static_cast<std::size_t>(game.initial)];
  if (start.is_infinite()) throw DomainError("no strategy completes a service round from the initial state");
  return start.value();
}

}  // namespace polyswitch
