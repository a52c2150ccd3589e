#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "polyswitch/game.hpp"
#include "polyswitch/polytope.hpp"
#include "polyswitch/switching.hpp"
#include "polyswitch/synthesis.hpp"

namespace polyswitch {

using Likelihoods = std::map<std::string, std::vector<Rational>>;

/// posterior_j ∝ prior_j · likelihood_j(obs). Throws DomainError when the
/// observation has zero total evidence.
InfoVector bayes_update(const InfoVector& prior, const std::string& observation, const Likelihoods& model);

/// Time-varying runtime information.
struct InfoStream {
  enum class Mode { constant, scripted, bayes };

  Mode mode = Mode::constant;
  InfoVector constant;
  /// Scripted: the vector in force from each step on; strictly increasing steps.
  std::vector<std::pair<int, InfoVector>> events;
  InfoVector prior;
  Likelihoods likelihoods;
  std::vector<std::pair<int, std::string>> schedule;
  /// Also observe "goal:<j>" (1-based scenario) whenever the current state is
  /// in scenario goal j and a likelihood for that symbol exists.
  bool observe_goals = false;
  /// On zero evidence, abort instead of keeping the prior.
  bool abort_on_zero_evidence = false;

  static InfoStream fixed(InfoVector p);
  static InfoStream scripted(std::vector<std::pair<int, InfoVector>> events);

  /// Throws std::invalid_argument on malformed streams.
  void validate(int dimension) const;
};

/// Replays an InfoStream step by step.
class InfoTracker {
public:
  InfoTracker(const InfoStream& stream, const GameStructure& game, const SpecTask& spec);

  /// Information in force at `step` (non-decreasing across calls) when the
  /// play is at state g.
  const InfoVector& at(int step, StateId g);

private:
  const InfoStream& stream_;
  std::vector<StateSet> goals_;
  InfoVector current_;
  std::size_t next_event_ = 0;
  int last_step_ = -1;
};

/// Environment player.
struct AdversaryModel {
  enum class Kind { uniform, scripted, greedy };

  Kind kind = Kind::uniform;
  std::uint64_t seed = 0;
  std::vector<SymbolId> script;

  static AdversaryModel uniform(std::uint64_t seed) { return {Kind::uniform, seed, {}}; }
  static AdversaryModel scripted(std::vector<SymbolId> inputs) { return {Kind::scripted, 0, std::move(inputs)}; }
  /// Picks the input with the largest cost-to-go for the active strategy;
  /// a one-step lookahead, not a solved adversary.
  static AdversaryModel greedy() { return {Kind::greedy, 0, {}}; }
};

struct TraceRecord {
  int step = 0;
  StateId from = 0;
  SymbolId input = 0;
  SymbolId output = 0;
  StateId to = 0;
  Rational weight;
  /// Monitor visited set after the step.
  std::uint64_t visited = 0;
  /// Active strategy after the step (0-based).
  int active = 0;
  std::optional<int> region;
  bool switched = false;
  /// Weighted cost charged at this step under the information in force.
  Rational charge;
  InfoVector info;
};

struct RunTrace {
  std::string label;
  StateId initial = 0;
  int initial_active = 0;
  std::vector<TraceRecord> steps;
  /// First step whose successor left an assumption invariant, when monitored.
  std::optional<int> excluded_from;
};

struct RunOptions {
  int horizon = 0;
  AdversaryModel adversary;
  /// Treat assumption sets as invariants and exclude cost after a violation.
  bool assumptions_as_invariants = false;
};

RunTrace run_switching(const GameStructure& game, const SpecTask& spec, const std::vector<Strategy>& strategies,
                       const PolytopeCert& cert, const InfoStream& stream, const RunOptions& options);

/// Runs the last strategy for the whole horizon.
RunTrace run_uninformed(const GameStructure& game, const SpecTask& spec, const std::vector<Strategy>& strategies,
                        const InfoStream& stream, const RunOptions& options);

/// Re-synthesizes at the current information every `resynth_period` steps and
/// whenever it changes; adopts the new strategy at the next legal switch point.
RunTrace run_resynthesis_oracle(const GameStructure& game, const SpecTask& spec, const InfoStream& stream,
                                const RunOptions& options, int resynth_period);

struct TraceMetrics {
  std::string label;
  int steps = 0;
  int switches = 0;
  Rational total_cost;
  Rational excluded_cost;
  Rational total_weight;
  int rounds = 0;
  Rational mean_round_cost;
  /// Per guarantee: largest and mean weight between consecutive visits.
  std::vector<Rational> max_gap_cost;
  std::vector<Rational> mean_gap_cost;
  /// Per guarantee: longest stretch of steps without a visit, counting the
  /// stretch before the first and after the last visit.
  std::vector<int> max_gap_steps;
};

TraceMetrics compute_metrics(const GameStructure& game, const SpecTask& spec, const RunTrace& trace);

struct MetricsTable {
  std::vector<TraceMetrics> rows;
  TraceMetrics mean;
};

/// Per-trace metrics and their average. Throws on an empty list.
MetricsTable metrics_summary(const GameStructure& game, const SpecTask& spec, const std::vector<RunTrace>& traces);

void write_trace_csv(std::ostream& out, const GameStructure& game, const RunTrace& trace);
void write_metrics_csv(std::ostream& out, const MetricsTable& table);
std::string metrics_json(const MetricsTable& table);

}  // namespace polyswitch
