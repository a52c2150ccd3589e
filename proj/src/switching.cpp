#include "polyswitch/switching.hpp"

#include <stdexcept>

namespace polyswitch {

StateSet strategy_winning_states(const GameStructure& game, const SpecTask& spec, const Strategy& strategy) {
  const int ns = game.num_states();
  const int ni = game.num_inputs();
  if (strategy.num_states != ns || strategy.num_inputs != ni) {
    throw std::invalid_argument("strategy tables do not match the game");
  }
  const std::size_t nodes = static_cast<std::size_t>(strategy.memory_count) * static_cast<std::size_t>(ns);
  auto state_of = [&](std::size_t node) { return static_cast<StateId>(node % static_cast<std::size_t>(ns)); };

  // Successor per (node, input); nodes with an undefined or illegal move are bad.
  std::vector<std::vector<std::size_t>> succ(nodes);
  std::vector<std::vector<std::size_t>> pred(nodes);
  std::vector<bool> bad(nodes, false);
  for (std::size_t node = 0; node < nodes; ++node) {
    const int mem = static_cast<int>(node / static_cast<std::size_t>(ns));
    const StateId g = state_of(node);
    for (SymbolId e = 0; e < ni; ++e) {
      const int a = strategy.move_at(mem, g, e);
      const int next_mem = strategy.update_at(mem, g, e);
      if (a < 0 || a >= game.num_outputs() || !game.edge(g, e, a) || next_mem < 0 || next_mem >= strategy.memory_count) {
        bad[node] = true;
        succ[node].clear();
        break;
      }
      const std::size_t s = static_cast<std::size_t>(next_mem) * static_cast<std::size_t>(ns) +
                            static_cast<std::size_t>(game.edge(g, e, a)->next);
      succ[node].push_back(s);
    }
    for (std::size_t s : succ[node]) pred[s].push_back(node);
  }

  // For each guarantee, peel nodes all of whose successors outside F are
  // already peeled; what remains can loop forever without visiting F.
  for (const auto& label : spec.guarantees) {
    const StateSet f = game.label_set(label);
    std::vector<int> out_degree(nodes, 0);
    std::vector<std::size_t> ready;
    for (std::size_t node = 0; node < nodes; ++node) {
      if (f[static_cast<std::size_t>(state_of(node))]) continue;
      for (std::size_t s : succ[node]) out_degree[node] += f[static_cast<std::size_t>(state_of(s))] ? 0 : 1;
      if (out_degree[node] == 0) ready.push_back(node);
    }
    std::vector<bool> peeled(nodes, false);
    while (!ready.empty()) {
      std::size_t node = ready.back();
      ready.pop_back();
      peeled[node] = true;
      for (std::size_t p : pred[node]) {
        if (f[static_cast<std::size_t>(state_of(p))]) continue;
        if (--out_degree[p] == 0) ready.push_back(p);
      }
    }
    for (std::size_t node = 0; node < nodes; ++node) {
      if (!f[static_cast<std::size_t>(state_of(node))] && !peeled[node]) bad[node] = true;
    }
  }

  std::vector<std::size_t> frontier;
  for (std::size_t node = 0; node < nodes; ++node) {
    if (bad[node]) frontier.push_back(node);
  }
  while (!frontier.empty()) {
    std::size_t node = frontier.back();
    frontier.pop_back();
    for (std::size_t p : pred[node]) {
      if (!bad[p]) {
        bad[p] = true;
        frontier.push_back(p);
      }
    }
  }

  StateSet winning(static_cast<std::size_t>(ns), false);
  for (StateId g = 0; g < ns; ++g) {
    const int mem = strategy.start_memory.at(static_cast<std::size_t>(g));
    if (mem < 0 || mem >= strategy.memory_count) continue;
    winning[static_cast<std::size_t>(g)] = !bad[static_cast<std::size_t>(mem) * static_cast<std::size_t>(ns) + static_cast<std::size_t>(g)];
  }
  return winning;
}

MonitorState monitor_init(int guarantee_count) {
  if (guarantee_count < 1 || guarantee_count > 63) throw std::invalid_argument("guarantee count must be in 1..63");
  return MonitorState{(std::uint64_t{1} << guarantee_count) - 1, 0};
}

SwitchMonitor::SwitchMonitor(const GameStructure& game, const SpecTask& spec, std::vector<StateSet> winning_sets,
                             const PolytopeCert* cert)
    : winning_sets_(std::move(winning_sets)), cert_(cert) {
  for (const auto& label : spec.guarantees) guarantees_.push_back(game.label_set(label));
  full_ = monitor_init(static_cast<int>(guarantees_.size())).visited;
  if (winning_sets_.empty()) throw std::invalid_argument("switch monitor needs at least one strategy");
  if (cert_ && cert_->size() != static_cast<int>(winning_sets_.size())) {
    throw std::invalid_argument("certificate and winning sets disagree on the number of strategies");
  }
}

MonitorState SwitchMonitor::step(const MonitorState& state, const Transition& t, std::optional<int> selected) const {
  if (state.visited == full_ && selected && *selected >= 0 && *selected < strategy_count() &&
      winning_sets_[static_cast<std::size_t>(*selected)][static_cast<std::size_t>(t.to)]) {
    return MonitorState{0, *selected};
  }
  MonitorState next = state;
  for (std::size_t j = 0; j < guarantees_.size(); ++j) {
    if (guarantees_[j][static_cast<std::size_t>(t.from)]) next.visited |= std::uint64_t{1} << j;
  }
  return next;
}

std::vector<bool> SwitchMonitor::regions_containing(const InfoVector& p) const {
  std::vector<bool> in(winning_sets_.size(), false);
  if (!cert_) return in;
  for (int i = 0; i < cert_->size(); ++i) in[static_cast<std::size_t>(i)] = membership(*cert_, i, p);
  return in;
}

int SwitchMonitor::add_strategy(StateSet winning) {
  if (cert_) throw std::logic_error("certified strategy families are fixed");
  winning_sets_.push_back(std::move(winning));
  return strategy_count() - 1;
}

std::optional<int> SwitchMonitor::select(StateId g, const std::vector<bool>& in_region) const {
  const auto gi = static_cast<std::size_t>(g);
  for (std::size_t i = 0; i < winning_sets_.size(); ++i) {
    if (in_region[i] && winning_sets_[i][gi]) return static_cast<int>(i);
  }
  const int fallback = strategy_count() - 1;
  if (winning_sets_.back()[gi]) return fallback;
  return std::nullopt;
}

std::optional<int> SwitchMonitor::select(StateId g, const InfoVector& p) const {
  if (!cert_) throw std::logic_error("strategy selection needs a certificate");
  return select(g, regions_containing(p));
}

MonitorState monitor_step(const SwitchMonitor& monitor, const MonitorState& state, const Transition& t,
                          std::optional<int> selected) {
  return monitor.step(state, t, selected);
}

std::optional<int> select_strategy(const SwitchMonitor& monitor, StateId g, const InfoVector& p) {
  return monitor.select(g, p);
}

}  // namespace polyswitch
