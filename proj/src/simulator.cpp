#include "polyswitch/simulator.hpp"

#include <cstdio>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "polyswitch/error.hpp"

namespace polyswitch {

InfoVector bayes_update(const InfoVector& prior, const std::string& observation, const Likelihoods& model) {
  auto it = model.find(observation);
  if (it == model.end()) throw std::invalid_argument("no likelihood for observation '" + observation + "'");
  const auto& likelihood = it->second;
  if (likelihood.size() != prior.size()) throw std::invalid_argument("likelihood has the wrong dimension");
  std::vector<Rational> joint(prior.size());
  Rational evidence;
  for (std::size_t j = 0; j < prior.size(); ++j) {
    if (likelihood[j].sign() < 0) throw std::invalid_argument("negative likelihood");
    joint[j] = prior[j] * likelihood[j];
    evidence += joint[j];
  }
  if (evidence.is_zero()) throw DomainError("observation '" + observation + "' has zero evidence under the prior");
  for (auto& v : joint) v /= evidence;
  return InfoVector(std::move(joint));
}

InfoStream InfoStream::fixed(InfoVector p) {
  InfoStream s;
  s.mode = Mode::constant;
  s.constant = std::move(p);
  return s;
}

InfoStream InfoStream::scripted(std::vector<std::pair<int, InfoVector>> events) {
  InfoStream s;
  s.mode = Mode::scripted;
  s.events = std::move(events);
  return s;
}

void InfoStream::validate(int dimension) const {
  const auto n = static_cast<std::size_t>(dimension);
  switch (mode) {
    case Mode::constant:
      if (constant.size() != n) throw std::invalid_argument("stream vector has the wrong dimension");
      break;
    case Mode::scripted:
      if (events.empty()) throw std::invalid_argument("scripted stream has no events");
      for (std::size_t k = 0; k < events.size(); ++k) {
        if (events[k].second.size() != n) throw std::invalid_argument("stream vector has the wrong dimension");
        if (events[k].first < 0 || (k > 0 && events[k].first <= events[k - 1].first)) {
          throw std::invalid_argument("scripted stream steps must be non-negative and strictly increasing");
        }
      }
      break;
    case Mode::bayes:
      if (prior.size() != n) throw std::invalid_argument("prior has the wrong dimension");
      for (const auto& [symbol, l] : likelihoods) {
        if (l.size() != n) throw std::invalid_argument("likelihood '" + symbol + "' has the wrong dimension");
        for (const auto& v : l) {
          if (v.sign() < 0) throw std::invalid_argument("likelihood '" + symbol + "' is negative");
        }
      }
      for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!likelihoods.count(schedule[k].second)) {
          throw std::invalid_argument("scheduled observation '" + schedule[k].second + "' has no likelihood");
        }
        if (schedule[k].first < 0 || (k > 0 && schedule[k].first < schedule[k - 1].first)) {
          throw std::invalid_argument("observation schedule must be non-decreasing");
        }
      }
      break;
  }
}

InfoTracker::InfoTracker(const InfoStream& stream, const GameStructure& game, const SpecTask& spec) : stream_(stream) {
  stream.validate(spec.num_scenarios());
  switch (stream.mode) {
    case InfoStream::Mode::constant: current_ = stream.constant; break;
    case InfoStream::Mode::scripted: current_ = stream.events.front().second; break;
    case InfoStream::Mode::bayes: current_ = stream.prior; break;
  }
  if (stream.observe_goals) {
    for (const auto& label : spec.scenarios) goals_.push_back(game.label_set(label));
  }
}

const InfoVector& InfoTracker::at(int step, StateId g) {
  if (step < last_step_) throw std::logic_error("information stream queried backwards");
  if (step == last_step_) return current_;
  last_step_ = step;
  auto observe = [&](const std::string& symbol) {
    try {
      current_ = bayes_update(current_, symbol, stream_.likelihoods);
    } catch (const DomainError&) {
      if (stream_.abort_on_zero_evidence) throw;
    }
  };
  switch (stream_.mode) {
    case InfoStream::Mode::constant: break;
    case InfoStream::Mode::scripted:
      while (next_event_ < stream_.events.size() && stream_.events[next_event_].first <= step) {
        current_ = stream_.events[next_event_++].second;
      }
      break;
    case InfoStream::Mode::bayes:
      while (next_event_ < stream_.schedule.size() && stream_.schedule[next_event_].first <= step) {
        observe(stream_.schedule[next_event_++].second);
      }
      for (std::size_t j = 0; j < goals_.size(); ++j) {
        if (!goals_[j][static_cast<std::size_t>(g)]) continue;
        std::string symbol = "goal:" + std::to_string(j + 1);
        if (stream_.likelihoods.count(symbol)) observe(symbol);
      }
      break;
  }
  return current_;
}

namespace {

class Adversary {
public:
  explicit Adversary(const AdversaryModel& model) : model_(model), rng_(model.seed) {}

  SymbolId choose(int step, const GameStructure& game, const Strategy& strategy, int memory, StateId g) {
    const int ni = game.num_inputs();
    switch (model_.kind) {
      case AdversaryModel::Kind::uniform:
        return static_cast<SymbolId>(rng_() % static_cast<std::uint64_t>(ni));
      case AdversaryModel::Kind::scripted: {
        if (static_cast<std::size_t>(step) >= model_.script.size()) {
          throw std::invalid_argument("adversary script shorter than the horizon");
        }
        SymbolId e = model_.script[static_cast<std::size_t>(step)];
        if (e < 0 || e >= ni) throw std::invalid_argument("adversary script names an unknown input");
        return e;
      }
      case AdversaryModel::Kind::greedy: {
        SymbolId best = 0;
        ExtRational best_value = Rational(-1);
        for (SymbolId e = 0; e < ni; ++e) {
          ExtRational v;
          if (!strategy.cost_to_go.empty()) {
            v = strategy.cost_to_go[strategy.index(memory, g, e)];
          } else {
            int a = strategy.move_at(memory, g, e);
            v = a >= 0 ? ExtRational(game.edge(g, e, a)->weight) : ExtRational::infinity();
          }
          if (v > best_value) {
            best = e;
            best_value = v;
          }
        }
        return best;
      }
    }
    return 0;
  }

private:
  const AdversaryModel& model_;
  std::mt19937_64 rng_;
};

std::vector<unsigned> scenario_masks(const GameStructure& game, const SpecTask& spec) {
  std::vector<unsigned> masks(static_cast<std::size_t>(game.num_states()), 0);
  for (int j = 0; j < spec.num_scenarios(); ++j) {
    const StateSet goal = game.label_set(spec.scenarios[static_cast<std::size_t>(j)]);
    for (std::size_t g = 0; g < goal.size(); ++g) {
      if (goal[g]) masks[g] |= 1u << j;
    }
  }
  return masks;
}

Rational pending_weight(unsigned visited, const InfoVector& p) {
  Rational r;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (!(visited & (1u << j))) r += p[j];
  }
  return r;
}

// Chooses the strategy proposed to the monitor after a step.
using Selector = std::function<std::optional<int>(int step, StateId next, const InfoVector& p)>;

RunTrace execute(const GameStructure& game, const SpecTask& spec, const std::vector<Strategy>& strategies,
                 SwitchMonitor& monitor, int initial_active, const InfoStream& stream, const RunOptions& options,
                 const Selector& select, std::string label) {
  if (options.horizon < 0) throw std::invalid_argument("horizon must be non-negative");
  if (spec.num_scenarios() > 31) throw std::length_error("too many scenarios to track");
  RunTrace trace;
  trace.label = std::move(label);
  trace.initial = game.initial;
  trace.initial_active = initial_active;
  const StateId g0 = game.initial;
  if (initial_active < 0 || !monitor.winning_set(initial_active)[static_cast<std::size_t>(g0)]) {
    throw DomainError("initial state is losing for every available strategy");
  }

  std::vector<StateSet> invariants;
  if (options.assumptions_as_invariants) {
    for (const auto& label_name : spec.assumptions) invariants.push_back(game.label_set(label_name));
  }
  const auto masks = scenario_masks(game, spec);
  const unsigned all_scenarios = (1u << spec.num_scenarios()) - 1;

  InfoTracker info(stream, game, spec);
  Adversary adversary(options.adversary);
  MonitorState mon{monitor.full_mask(), initial_active};
  StateId g = g0;
  int memory = strategies[static_cast<std::size_t>(initial_active)].start_memory.at(static_cast<std::size_t>(g0));
  unsigned round = masks[static_cast<std::size_t>(g0)];
  if (round == all_scenarios) round = 0;

  trace.steps.reserve(static_cast<std::size_t>(options.horizon));
  for (int t = 0; t < options.horizon; ++t) {
    const InfoVector& p = info.at(t, g);
    const Strategy& active = strategies[static_cast<std::size_t>(mon.active)];
    const SymbolId e = adversary.choose(t, game, active, memory, g);
    const int a = active.move_at(memory, g, e);
    if (a < 0 || !game.edge(g, e, a)) throw std::logic_error("active strategy has no move at the current state");
    const Edge& edge = *game.edge(g, e, a);
    // Selection may grow the strategy pool; nothing below touches `active`.
    const int continued_memory = active.update_at(memory, g, e);

    TraceRecord rec;
    rec.step = t;
    rec.from = g;
    rec.input = e;
    rec.output = a;
    rec.to = edge.next;
    rec.weight = edge.weight;
    rec.region = select(t, edge.next, p);
    const MonitorState next = monitor.step(mon, Transition{g, e, a, edge.next}, rec.region);
    rec.visited = next.visited;
    rec.active = next.active;
    rec.switched = next.active != mon.active;
    rec.charge = edge.weight * pending_weight(round, p);
    rec.info = p;

    if (rec.switched) {
      memory = strategies[static_cast<std::size_t>(next.active)].start_memory.at(static_cast<std::size_t>(edge.next));
    } else {
      memory = continued_memory;
    }
    round |= masks[static_cast<std::size_t>(edge.next)];
    if (round == all_scenarios) round = 0;
    if (!trace.excluded_from) {
      for (const auto& inv : invariants) {
        if (!inv[static_cast<std::size_t>(edge.next)]) {
          trace.excluded_from = t;
          break;
        }
      }
    }
    mon = next;
    g = edge.next;
    trace.steps.push_back(std::move(rec));
  }
  return trace;
}

std::vector<StateSet> winning_sets_of(const GameStructure& game, const SpecTask& spec, const std::vector<Strategy>& strategies) {
  std::vector<StateSet> sets;
  for (const auto& s : strategies) sets.push_back(strategy_winning_states(game, spec, s));
  return sets;
}

}  // namespace

RunTrace run_switching(const GameStructure& game, const SpecTask& spec, const std::vector<Strategy>& strategies,
                       const PolytopeCert& cert, const InfoStream& stream, const RunOptions& options) {
  SwitchMonitor monitor(game, spec, winning_sets_of(game, spec, strategies), &cert);
  InfoTracker first(stream, game, spec);
  auto initial = monitor.select(game.initial, first.at(0, game.initial));
  if (!initial) throw DomainError("initial state is losing for every available strategy");

  // Region membership only changes with the information vector.
  std::optional<InfoVector> cached_for;
  std::vector<bool> in_region;
  Selector select = [&](int, StateId next, const InfoVector& p) {
    if (!cached_for || *cached_for != p) {
      cached_for = p;
      in_region = monitor.regions_containing(p);
    }
    return monitor.select(next, in_region);
  };
  return execute(game, spec, strategies, monitor, *initial, stream, options, select, "switching");
}

RunTrace run_uninformed(const GameStructure& game, const SpecTask& spec, const std::vector<Strategy>& strategies,
                        const InfoStream& stream, const RunOptions& options) {
  if (strategies.empty()) throw std::invalid_argument("at least one strategy is required");
  SwitchMonitor monitor(game, spec, winning_sets_of(game, spec, strategies), nullptr);
  Selector never = [](int, StateId, const InfoVector&) { return std::optional<int>(); };
  return execute(game, spec, strategies, monitor, static_cast<int>(strategies.size()) - 1, stream, options, never,
                 "uninformed");
}

RunTrace run_resynthesis_oracle(const GameStructure& game, const SpecTask& spec, const InfoStream& stream,
                                const RunOptions& options, int resynth_period) {
  if (resynth_period <= 0) throw std::invalid_argument("re-synthesis period must be positive");
  InfoTracker first(stream, game, spec);
  const InfoVector p0 = first.at(0, game.initial);

  std::vector<Strategy> strategies{synth_optimal(game, spec, p0)};
  strategies.front().id = 1;
  SwitchMonitor monitor(game, spec, winning_sets_of(game, spec, strategies), nullptr);
  std::map<InfoVector, int> synthesized{{p0, 0}};
  int target = 0;
  InfoVector last_seen = p0;

  Selector select = [&](int step, StateId, const InfoVector& p) {
    const bool changed = p != last_seen;
    last_seen = p;
    if (changed || step % resynth_period == 0) {
      auto it = synthesized.find(p);
      if (it == synthesized.end()) {
        strategies.push_back(synth_optimal(game, spec, p));
        strategies.back().id = static_cast<int>(strategies.size());
        const int index = monitor.add_strategy(strategy_winning_states(game, spec, strategies.back()));
        it = synthesized.emplace(p, index).first;
      }
      target = it->second;
    }
    return std::optional<int>(target);
  };
  return execute(game, spec, strategies, monitor, 0, stream, options, select, "oracle");
}

TraceMetrics compute_metrics(const GameStructure& game, const SpecTask& spec, const RunTrace& trace) {
  TraceMetrics m;
  m.label = trace.label;
  m.steps = static_cast<int>(trace.steps.size());
  const auto masks = scenario_masks(game, spec);
  const unsigned all_scenarios = (1u << spec.num_scenarios()) - 1;
  unsigned round = masks[static_cast<std::size_t>(trace.initial)];
  if (round == all_scenarios) round = 0;
  Rational round_cost;
  Rational round_total;
  for (const auto& rec : trace.steps) {
    if (rec.switched) ++m.switches;
    m.total_weight += rec.weight;
    if (trace.excluded_from && rec.step > *trace.excluded_from) {
      m.excluded_cost += rec.charge;
    } else {
      m.total_cost += rec.charge;
    }
    round_cost += rec.charge;
    round |= masks[static_cast<std::size_t>(rec.to)];
    if (round == all_scenarios) {
      round = 0;
      ++m.rounds;
      round_total += round_cost;
      round_cost = 0;
    }
  }
  if (m.rounds > 0) m.mean_round_cost = round_total / Rational(m.rounds);

  for (const auto& label : spec.guarantees) {
    const StateSet f = game.label_set(label);
    std::vector<int> visits;
    std::vector<Rational> prefix{Rational(0)};
    if (f[static_cast<std::size_t>(trace.initial)]) visits.push_back(0);
    for (const auto& rec : trace.steps) {
      prefix.push_back(prefix.back() + rec.weight);
      if (f[static_cast<std::size_t>(rec.to)]) visits.push_back(rec.step + 1);
    }
    Rational max_cost;
    Rational sum_cost;
    int max_steps = 0;
    for (std::size_t k = 1; k < visits.size(); ++k) {
      Rational c = prefix[static_cast<std::size_t>(visits[k])] - prefix[static_cast<std::size_t>(visits[k - 1])];
      max_cost = std::max(max_cost, c);
      sum_cost += c;
      max_steps = std::max(max_steps, visits[k] - visits[k - 1]);
    }
    if (visits.empty()) {
      max_steps = m.steps;
    } else {
      max_steps = std::max({max_steps, visits.front(), m.steps - visits.back()});
    }
    m.max_gap_cost.push_back(max_cost);
    m.mean_gap_cost.push_back(visits.size() > 1 ? sum_cost / Rational(static_cast<std::int64_t>(visits.size() - 1)) : Rational(0));
    m.max_gap_steps.push_back(max_steps);
  }
  return m;
}

MetricsTable metrics_summary(const GameStructure& game, const SpecTask& spec, const std::vector<RunTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("metrics need at least one trace");
  MetricsTable table;
  for (const auto& t : traces) table.rows.push_back(compute_metrics(game, spec, t));

  const Rational count(static_cast<std::int64_t>(table.rows.size()));
  TraceMetrics& mean = table.mean;
  mean.label = "mean";
  const std::size_t guarantees = table.rows.front().max_gap_cost.size();
  mean.max_gap_cost.assign(guarantees, Rational(0));
  mean.mean_gap_cost.assign(guarantees, Rational(0));
  mean.max_gap_steps.assign(guarantees, 0);
  Rational steps;
  Rational switches;
  Rational rounds;
  for (const auto& r : table.rows) {
    steps += r.steps;
    switches += r.switches;
    rounds += r.rounds;
    mean.total_cost += r.total_cost / count;
    mean.excluded_cost += r.excluded_cost / count;
    mean.total_weight += r.total_weight / count;
    mean.mean_round_cost += r.mean_round_cost / count;
    for (std::size_t j = 0; j < guarantees; ++j) {
      mean.max_gap_cost[j] += r.max_gap_cost[j] / count;
      mean.mean_gap_cost[j] += r.mean_gap_cost[j] / count;
      mean.max_gap_steps[j] = std::max(mean.max_gap_steps[j], r.max_gap_steps[j]);
    }
  }
  // Counts are reported rounded down; the exact averages live in the JSON.
  mean.steps = static_cast<int>((steps / count).num() / (steps / count).den());
  mean.switches = static_cast<int>((switches / count).num() / (switches / count).den());
  mean.rounds = static_cast<int>((rounds / count).num() / (rounds / count).den());
  return table;
}

void write_trace_csv(std::ostream& out, const GameStructure& game, const RunTrace& trace) {
  out << "step,game_state,input,output,next_state,visited_bitmask,active_index,region_selected,switched";
  std::size_t dims = trace.steps.empty() ? 0 : trace.steps.front().info.size();
  for (std::size_t j = 0; j < dims; ++j) out << ",p" << j + 1;
  out << '\n';
  for (const auto& r : trace.steps) {
    out << r.step << ',' << game.states[static_cast<std::size_t>(r.from)] << ','
        << game.inputs[static_cast<std::size_t>(r.input)] << ',' << game.outputs[static_cast<std::size_t>(r.output)] << ','
        << game.states[static_cast<std::size_t>(r.to)] << ',' << r.visited << ',' << r.active + 1 << ',';
    if (r.region) out << *r.region + 1;
    out << ',' << (r.switched ? "true" : "false");
    for (const auto& q : r.info.entries()) out << ',' << q;
    out << '\n';
  }
}

namespace {

std::string decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", r.to_double());
  return buf;
}

}  // namespace

void write_metrics_csv(std::ostream& out, const MetricsTable& table) {
  out << "run,steps,switches,total_cost,excluded_cost,total_weight,rounds,mean_round_cost";
  const std::size_t guarantees = table.mean.max_gap_cost.size();
  for (std::size_t j = 0; j < guarantees; ++j) {
    out << ",max_gap_cost_" << j + 1 << ",mean_gap_cost_" << j + 1 << ",max_gap_steps_" << j + 1;
  }
  out << '\n';
  for (const auto& r : table.rows) {
    out << r.label << ',' << r.steps << ',' << r.switches << ',' << decimal(r.total_cost) << ','
        << decimal(r.excluded_cost) << ',' << decimal(r.total_weight) << ',' << r.rounds << ','
        << decimal(r.mean_round_cost);
    for (std::size_t j = 0; j < guarantees; ++j) {
      out << ',' << decimal(r.max_gap_cost[j]) << ',' << decimal(r.mean_gap_cost[j]) << ',' << r.max_gap_steps[j];
    }
    out << '\n';
  }
}

std::string metrics_json(const MetricsTable& table) {
  auto row_json = [](const TraceMetrics& r) {
    nlohmann::ordered_json j;
    j["run"] = r.label;
    j["steps"] = r.steps;
    j["switches"] = r.switches;
    j["total_cost"] = r.total_cost.str();
    j["excluded_cost"] = r.excluded_cost.str();
    j["total_weight"] = r.total_weight.str();
    j["rounds"] = r.rounds;
    j["mean_round_cost"] = r.mean_round_cost.str();
    auto strs = [](const std::vector<Rational>& v) {
      std::vector<std::string> s;
      for (const auto& x : v) s.push_back(x.str());
      return s;
    };
    j["max_gap_cost"] = strs(r.max_gap_cost);
    j["mean_gap_cost"] = strs(r.mean_gap_cost);
    j["max_gap_steps"] = r.max_gap_steps;
    return j;
  };
  nlohmann::ordered_json doc;
  doc["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) doc["runs"].push_back(row_json(r));
  doc["mean"] = row_json(table.mean);
  return doc.dump(2) + "\n";
}

}  // namespace polyswitch
