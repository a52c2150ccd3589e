#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polyswitch/game.hpp"
#include "polyswitch/polytope.hpp"
#include "polyswitch/synthesis.hpp"

namespace polyswitch {

/// States from which every play of `strategy`, started in its start memory,
/// visits each guarantee set infinitely often.
StateSet strategy_winning_states(const GameStructure& game, const SpecTask& spec, const Strategy& strategy);

/// Guarantees visited since the last switch, and the active strategy.
/// Bit j of `visited` is guarantee j; strategies are 0-based.
struct MonitorState {
  std::uint64_t visited = 0;
  int active = 0;

  friend bool operator==(const MonitorState&, const MonitorState&) = default;
};

/// All guarantees marked visited, first strategy active.
MonitorState monitor_init(int guarantee_count);

struct Transition {
  StateId from = 0;
  SymbolId input = 0;
  SymbolId output = 0;
  StateId to = 0;
};

/// Tracks guarantee visits and decides when a switch is legal.
class SwitchMonitor {
public:
  SwitchMonitor(const GameStructure& game, const SpecTask& spec, std::vector<StateSet> winning_sets,
                const PolytopeCert* cert);

  int guarantee_count() const { return static_cast<int>(guarantees_.size()); }
  int strategy_count() const { return static_cast<int>(winning_sets_.size()); }
  std::uint64_t full_mask() const { return full_; }
  const std::vector<StateSet>& winning_sets() const { return winning_sets_; }
  const StateSet& winning_set(int i) const { return winning_sets_.at(static_cast<std::size_t>(i)); }

  /// Pure transition function of the monitor: a full visited set and a
  /// selected strategy whose winning set holds the successor reset the set
  /// and activate that strategy; otherwise the guarantees holding at the
  /// source state are added.
  MonitorState step(const MonitorState& state, const Transition& t, std::optional<int> selected) const;

  /// Least i whose region contains p and whose winning set contains g; the
  /// last strategy otherwise, provided g is in its winning set.
  std::optional<int> select(StateId g, const InfoVector& p) const;

  /// Same as select() with region memberships already evaluated.
  std::optional<int> select(StateId g, const std::vector<bool>& in_region) const;

  std::vector<bool> regions_containing(const InfoVector& p) const;

  /// Appends a strategy to a monitor without certificate; returns its index.
  int add_strategy(StateSet winning);

  const PolytopeCert* cert() const { return cert_; }

private:
  std::vector<StateSet> guarantees_;
  std::vector<StateSet> winning_sets_;
  const PolytopeCert* cert_;
  std::uint64_t full_ = 0;
};

MonitorState monitor_step(const SwitchMonitor& monitor, const MonitorState& state, const Transition& t,
                          std::optional<int> selected);

std::optional<int> select_strategy(const SwitchMonitor& monitor, StateId g, const InfoVector& p);

}  // namespace polyswitch
