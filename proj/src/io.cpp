#include "polyswitch/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "polyswitch/error.hpp"

namespace polyswitch {

namespace {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
  }
}

const Json& field(const Json& obj, const char* key, const std::string& context) {
  if (!obj.is_object()) throw ParseError(context + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(context + " is missing field '" + key + "'");
  return *it;
}

std::vector<std::string> string_array(const Json& value, const std::string& context) {
  if (!value.is_array()) throw ParseError(context + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw ParseError(context + " must be an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::map<std::string, int> index_names(const std::vector<std::string>& names, const std::string& what) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!index.emplace(names[i], static_cast<int>(i)).second) {
      throw ParseError("duplicate " + what + " id '" + names[i] + "'");
    }
  }
  return index;
}

int lookup(const std::map<std::string, int>& index, const Json& name, const std::string& what) {
  if (!name.is_string()) throw ParseError(what + " reference must be a string");
  auto it = index.find(name.get<std::string>());
  if (it == index.end()) throw ParseError("unknown " + what + " '" + name.get<std::string>() + "'");
  return it->second;
}

std::vector<Rational> rational_array(const Json& value, const std::string& context) {
  if (!value.is_array()) throw ParseError(context + " must be an array");
  std::vector<Rational> out;
  for (const auto& v : value) out.push_back(rational_from_json(v));
  return out;
}

Json rational_strings(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(v.str());
  return arr;
}

Json ext_strings(const CostVector& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(v.str());
  return arr;
}

InfoVector info_from_json(const Json& value, const std::string& context) {
  try {
    return normalize_info(rational_array(value, context));
  } catch (const std::invalid_argument& e) {
    throw ParseError(context + ": " + e.what());
  }
}

}  // namespace

Rational rational_from_json(const Json& value) {
  try {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (value.is_number_float()) {
      // The shortest round-trip spelling recovers the decimal literal.
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value.get<double>());
      if (ec != std::errc{}) throw ParseError("unrepresentable number");
      return Rational::parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
    }
    if (value.is_string()) return Rational::parse(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  } catch (const std::domain_error& e) {
    throw ParseError(e.what());
  }
  throw ParseError("expected a number or a fraction string");
}

GameDocument parse_game(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("game document must be a JSON object");
  static const std::set<std::string> known{"name", "states", "initial", "inputs", "outputs", "transitions", "labels", "spec"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw ParseError("unknown top-level field '" + key + "'");
  }

  GameDocument out;
  GameStructure& game = out.game;
  const Json& name = field(doc, "name", "game");
  if (!name.is_string()) throw ParseError("'name' must be a string");
  game.name = name.get<std::string>();
  game.states = string_array(field(doc, "states", "game"), "'states'");
  game.inputs = string_array(field(doc, "inputs", "game"), "'inputs'");
  game.outputs = string_array(field(doc, "outputs", "game"), "'outputs'");
  const auto state_index = index_names(game.states, "state");
  const auto input_index = index_names(game.inputs, "input");
  const auto output_index = index_names(game.outputs, "output");
  game.initial = lookup(state_index, field(doc, "initial", "game"), "state");
  game.reset_transitions();

  const Json& transitions = field(doc, "transitions", "game");
  if (!transitions.is_array()) throw ParseError("'transitions' must be an array");
  for (const auto& t : transitions) {
    if (!t.is_array() || t.size() != 5) throw ParseError("each transition must be [state, input, output, next_state, weight]");
    const int g = lookup(state_index, t[0], "state");
    const int e = lookup(input_index, t[1], "input");
    const int a = lookup(output_index, t[2], "output");
    const int next = lookup(state_index, t[3], "state");
    auto& slot = game.edge(g, e, a);
    if (slot) {
      throw ParseError("duplicate transition for (" + game.states[static_cast<std::size_t>(g)] + ", " +
                       game.inputs[static_cast<std::size_t>(e)] + ", " + game.outputs[static_cast<std::size_t>(a)] + ")");
    }
    slot = Edge{next, rational_from_json(t[4])};
  }

  const Json& labels = field(doc, "labels", "game");
  if (!labels.is_object()) throw ParseError("'labels' must be an object");
  for (const auto& [label, members] : labels.items()) {
    if (!members.is_array()) throw ParseError("label '" + label + "' must be an array of states");
    std::set<StateId> ids;
    for (const auto& m : members) ids.insert(lookup(state_index, m, "state"));
    game.labels[label] = std::vector<StateId>(ids.begin(), ids.end());
  }

  const Json& spec_doc = field(doc, "spec", "game");
  SpecTask& spec = out.spec;
  spec.guarantees = string_array(field(spec_doc, "guarantees", "'spec'"), "'spec.guarantees'");
  spec.scenarios = string_array(field(spec_doc, "scenarios", "'spec'"), "'spec.scenarios'");
  if (spec_doc.contains("assumptions")) spec.assumptions = string_array(spec_doc["assumptions"], "'spec.assumptions'");
  if (spec_doc.contains("scenario_to_guarantee")) {
    const Json& map = spec_doc["scenario_to_guarantee"];
    if (!map.is_array()) throw ParseError("'spec.scenario_to_guarantee' must be an array of indices");
    for (const auto& v : map) {
      if (!v.is_number_integer()) throw ParseError("'spec.scenario_to_guarantee' must be an array of indices");
      spec.scenario_to_guarantee.push_back(v.get<int>());
    }
  } else if (spec.scenarios.size() == spec.guarantees.size()) {
    for (int j = 0; j < spec.num_scenarios(); ++j) spec.scenario_to_guarantee.push_back(j);
  }
  for (const auto* refs : {&spec.guarantees, &spec.assumptions, &spec.scenarios}) {
    for (const auto& r : *refs) {
      if (!game.labels.count(r)) throw ParseError("unknown label '" + r + "' in 'spec'");
    }
  }

  auto findings = validate_game(game, spec);
  if (!findings.empty()) {
    std::string message = "invalid game:";
    for (const auto& f : findings) message += " [" + f.code + " at " + f.location + "] " + f.message + ";";
    message.pop_back();
    throw ParseError(message);
  }
  return out;
}

std::string dump_game(const GameStructure& game, const SpecTask& spec) {
  Json doc;
  doc["name"] = game.name;
  doc["states"] = game.states;
  doc["initial"] = game.states.at(static_cast<std::size_t>(game.initial));
  doc["inputs"] = game.inputs;
  doc["outputs"] = game.outputs;
  Json transitions = Json::array();
  for (StateId g = 0; g < game.num_states(); ++g) {
    for (SymbolId e = 0; e < game.num_inputs(); ++e) {
      for (SymbolId a = 0; a < game.num_outputs(); ++a) {
        const auto& edge = game.edge(g, e, a);
        if (!edge) continue;
        transitions.push_back({game.states[static_cast<std::size_t>(g)], game.inputs[static_cast<std::size_t>(e)],
                               game.outputs[static_cast<std::size_t>(a)], game.states[static_cast<std::size_t>(edge->next)],
                               edge->weight.str()});
      }
    }
  }
  doc["transitions"] = std::move(transitions);
  Json labels = Json::object();
  for (const auto& [label, members] : game.labels) {
    Json arr = Json::array();
    for (StateId g : members) arr.push_back(game.states.at(static_cast<std::size_t>(g)));
    labels[label] = std::move(arr);
  }
  doc["labels"] = std::move(labels);
  Json s;
  s["guarantees"] = spec.guarantees;
  s["assumptions"] = spec.assumptions;
  s["scenarios"] = spec.scenarios;
  s["scenario_to_guarantee"] = spec.scenario_to_guarantee;
  doc["spec"] = std::move(s);
  return doc.dump(2) + "\n";
}

Json strategy_to_json(const GameStructure& game, const Strategy& strategy) {
  Json doc;
  doc["id"] = strategy.id;
  Json memory = Json::array();
  for (int m = 0; m < strategy.memory_count; ++m) memory.push_back(m);
  doc["memory_states"] = std::move(memory);
  doc["initial_memory"] = strategy.initial_memory;
  Json moves = Json::array();
  Json updates = Json::array();
  Json values = Json::array();
  for (int m = 0; m < strategy.memory_count; ++m) {
    for (StateId g = 0; g < strategy.num_states; ++g) {
      for (SymbolId e = 0; e < strategy.num_inputs; ++e) {
        const int a = strategy.move_at(m, g, e);
        if (a < 0) continue;
        const auto& state = game.states[static_cast<std::size_t>(g)];
        const auto& input = game.inputs[static_cast<std::size_t>(e)];
        const auto& output = game.outputs[static_cast<std::size_t>(a)];
        moves.push_back({m, state, input, output});
        const auto& edge = game.edge(g, e, a);
        updates.push_back({m, state, input, output,
                           edge ? game.states[static_cast<std::size_t>(edge->next)] : std::string(),
                           strategy.update_at(m, g, e)});
        if (!strategy.cost_to_go.empty()) {
          values.push_back({m, state, input, strategy.cost_to_go[strategy.index(m, g, e)].str()});
        }
      }
    }
  }
  doc["move"] = std::move(moves);
  doc["memory_update"] = std::move(updates);
  Json start = Json::object();
  for (StateId g = 0; g < strategy.num_states; ++g) {
    const int m = strategy.start_memory[static_cast<std::size_t>(g)];
    if (m >= 0) start[game.states[static_cast<std::size_t>(g)]] = m;
  }
  doc["start_memory"] = std::move(start);
  doc["basis_costs"] = ext_strings(strategy.basis_costs);
  doc["value"] = strategy.value.str();
  doc["synthesized_for"] = rational_strings(strategy.synthesized_for);
  if (!strategy.cost_to_go.empty()) doc["cost_to_go"] = std::move(values);
  return doc;
}

Strategy strategy_from_json(const GameStructure& game, const Json& doc) {
  const std::string ctx = "strategy";
  const Json& memory = field(doc, "memory_states", ctx);
  if (!memory.is_array() || memory.empty()) throw ParseError("'memory_states' must be a non-empty array");
  for (std::size_t m = 0; m < memory.size(); ++m) {
    if (!memory[m].is_number_integer() || memory[m].get<std::size_t>() != m) {
      throw ParseError("'memory_states' must list 0..K-1 in order");
    }
  }
  Strategy s(static_cast<int>(memory.size()), game.num_states(), game.num_inputs());
  s.id = field(doc, "id", ctx).get<int>();
  s.initial_memory = field(doc, "initial_memory", ctx).get<int>();
  if (s.initial_memory < 0 || s.initial_memory >= s.memory_count) throw ParseError("'initial_memory' out of range");

  std::map<std::string, int> states;
  std::map<std::string, int> inputs;
  std::map<std::string, int> outputs;
  for (std::size_t i = 0; i < game.states.size(); ++i) states[game.states[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < game.inputs.size(); ++i) inputs[game.inputs[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < game.outputs.size(); ++i) outputs[game.outputs[i]] = static_cast<int>(i);
  auto memory_id = [&](const Json& v) {
    int m = v.get<int>();
    if (m < 0 || m >= s.memory_count) throw ParseError("memory id out of range");
    return m;
  };

  for (const auto& t : field(doc, "move", ctx)) {
    if (!t.is_array() || t.size() != 4) throw ParseError("'move' entries must be [memory, state, input, output]");
    const int m = memory_id(t[0]);
    const int g = lookup(states, t[1], "state");
    const int e = lookup(inputs, t[2], "input");
    const int a = lookup(outputs, t[3], "output");
    if (!game.edge(g, e, a)) throw ParseError("strategy plays an illegal output");
    s.move[s.index(m, g, e)] = a;
  }
  for (const auto& t : field(doc, "memory_update", ctx)) {
    if (!t.is_array() || t.size() != 6) {
      throw ParseError("'memory_update' entries must be [memory, state, input, output, next_state, next_memory]");
    }
    const int m = memory_id(t[0]);
    const int g = lookup(states, t[1], "state");
    const int e = lookup(inputs, t[2], "input");
    const int a = lookup(outputs, t[3], "output");
    const int next = lookup(states, t[4], "state");
    if (s.move[s.index(m, g, e)] != a || game.edge(g, e, a)->next != next) {
      throw ParseError("'memory_update' disagrees with 'move' or the transition function");
    }
    s.update[s.index(m, g, e)] = memory_id(t[5]);
  }
  for (std::size_t i = 0; i < s.move.size(); ++i) {
    if ((s.move[i] < 0) != (s.update[i] < 0)) throw ParseError("'move' and 'memory_update' cover different entries");
  }
  s.start_memory.assign(static_cast<std::size_t>(game.num_states()), -1);
  if (doc.contains("start_memory")) {
    for (const auto& [state, m] : doc["start_memory"].items()) {
      s.start_memory[static_cast<std::size_t>(lookup(states, Json(state), "state"))] = memory_id(m);
    }
  } else {
    s.start_memory.assign(static_cast<std::size_t>(game.num_states()), s.initial_memory);
  }
  for (const auto& c : field(doc, "basis_costs", ctx)) s.basis_costs.push_back(ExtRational::parse(c.get<std::string>()));
  if (doc.contains("value")) s.value = ExtRational::parse(doc["value"].get<std::string>());
  if (doc.contains("synthesized_for")) s.synthesized_for = rational_array(doc["synthesized_for"], "'synthesized_for'");
  if (doc.contains("cost_to_go")) {
    s.cost_to_go.assign(s.move.size(), ExtRational::infinity());
    for (const auto& t : doc["cost_to_go"]) {
      const int m = memory_id(t[0]);
      const int g = lookup(states, t[1], "state");
      const int e = lookup(inputs, t[2], "input");
      s.cost_to_go[s.index(m, g, e)] = ExtRational::parse(t[3].get<std::string>());
    }
  }
  return s;
}

CandidateFile parse_candidates(std::string_view text) {
  const Json doc = parse_json(text);
  CandidateFile out;
  if (!doc.is_object()) throw ParseError("candidate file must be a JSON object");
  if (doc.contains("epsilon") && !doc["epsilon"].is_null()) out.epsilon = rational_from_json(doc["epsilon"]);
  const Json& list = field(doc, "candidates", "candidate file");
  if (!list.is_array() || list.empty()) throw ParseError("'candidates' must be a non-empty array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.candidates.push_back(info_from_json(list[i], "candidate " + std::to_string(i + 1)));
    if (out.candidates.back().size() != out.candidates.front().size()) throw ParseError("candidates differ in dimension");
  }
  return out;
}

Json cert_to_json(const PolytopeCert& cert, const GameStructure* game, const std::vector<Strategy>* strategies) {
  Json doc;
  doc["epsilon"] = cert.epsilon.str();
  doc["ell"] = rational_strings(cert.ell);
  Json candidates = Json::array();
  for (const auto& c : cert.candidates) candidates.push_back(rational_strings(c.entries()));
  doc["candidates"] = std::move(candidates);
  Json basis = Json::array();
  for (const auto& row : cert.basis_costs) basis.push_back(rational_strings(row));
  doc["basis_costs"] = std::move(basis);
  Json h = Json::array();
  Json b = Json::array();
  for (const auto& sys : cert.systems) {
    Json rows = Json::array();
    for (const auto& row : sys.rows) rows.push_back(rational_strings(row));
    h.push_back(std::move(rows));
    b.push_back(rational_strings(sys.rhs));
  }
  doc["H"] = std::move(h);
  doc["b"] = std::move(b);
  doc["nonempty"] = cert.nonempty;
  Json gaps = Json::array();
  for (const auto& g : cert.gaps) gaps.push_back(rational_strings(g.entries()));
  doc["gaps"] = std::move(gaps);
  if (game && strategies) {
    Json list = Json::array();
    for (const auto& s : *strategies) list.push_back(strategy_to_json(*game, s));
    doc["strategies"] = std::move(list);
  }
  return doc;
}

PolytopeCert cert_from_json(const Json& doc) {
  const std::string ctx = "certificate";
  const Rational epsilon = rational_from_json(field(doc, "epsilon", ctx));
  CostVector ell;
  for (const auto& v : rational_array(field(doc, "ell", ctx), "'ell'")) ell.emplace_back(v);
  std::vector<CostVector> matrix;
  for (const auto& row : field(doc, "basis_costs", ctx)) {
    CostVector r;
    for (const auto& v : rational_array(row, "'basis_costs'")) r.emplace_back(v);
    matrix.push_back(std::move(r));
  }
  PolytopeCert cert;
  try {
    cert = build_polytopes(matrix, ell, epsilon);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("inconsistent certificate: ") + e.what());
  }
  const Json& h = field(doc, "H", ctx);
  const Json& b = field(doc, "b", ctx);
  if (!h.is_array() || !b.is_array() || h.size() != cert.systems.size() || b.size() != cert.systems.size()) {
    throw ParseError("certificate 'H'/'b' do not match its basis costs");
  }
  for (std::size_t i = 0; i < cert.systems.size(); ++i) {
    if (rational_array(b[i], "'b'") != cert.systems[i].rhs) throw ParseError("certificate 'b' does not match its basis costs");
    if (!h[i].is_array() || h[i].size() != cert.systems[i].rows.size()) throw ParseError("certificate 'H' has the wrong shape");
    for (std::size_t r = 0; r < h[i].size(); ++r) {
      if (rational_array(h[i][r], "'H'") != cert.systems[i].rows[r]) {
        throw ParseError("certificate 'H' does not match its basis costs");
      }
    }
  }
  for (const auto& c : field(doc, "candidates", ctx)) cert.candidates.push_back(info_from_json(c, "certificate candidate"));
  if (doc.contains("gaps")) {
    for (const auto& g : doc["gaps"]) cert.gaps.push_back(info_from_json(g, "certificate gap"));
  }
  return cert;
}

std::vector<Strategy> cert_strategies_from_json(const GameStructure& game, const Json& doc) {
  std::vector<Strategy> out;
  const Json& list = field(doc, "strategies", "certificate");
  for (const auto& s : list) out.push_back(strategy_from_json(game, s));
  return out;
}

InfoStream parse_stream(std::string_view text) {
  const Json doc = parse_json(text);
  const std::string ctx = "stream";
  const Json& mode = field(doc, "mode", ctx);
  InfoStream stream;
  const std::string m = mode.is_string() ? mode.get<std::string>() : "";
  if (m == "constant") {
    stream.mode = InfoStream::Mode::constant;
    stream.constant = info_from_json(field(doc, "vector", ctx), "stream vector");
  } else if (m == "scripted") {
    stream.mode = InfoStream::Mode::scripted;
    for (const auto& ev : field(doc, "events", ctx)) {
      if (!ev.is_array() || ev.size() != 2 || !ev[0].is_number_integer()) {
        throw ParseError("stream events must be [step, vector]");
      }
      stream.events.emplace_back(ev[0].get<int>(), info_from_json(ev[1], "stream event"));
    }
  } else if (m == "bayes") {
    stream.mode = InfoStream::Mode::bayes;
    stream.prior = info_from_json(field(doc, "prior", ctx), "stream prior");
    for (const auto& [symbol, l] : field(doc, "likelihoods", ctx).items()) {
      stream.likelihoods[symbol] = rational_array(l, "likelihood '" + symbol + "'");
    }
    if (doc.contains("schedule")) {
      for (const auto& ev : doc["schedule"]) {
        if (!ev.is_array() || ev.size() != 2 || !ev[0].is_number_integer() || !ev[1].is_string()) {
          throw ParseError("schedule entries must be [step, symbol]");
        }
        stream.schedule.emplace_back(ev[0].get<int>(), ev[1].get<std::string>());
      }
    }
    if (doc.contains("observe_goals")) stream.observe_goals = doc["observe_goals"].get<bool>();
    if (doc.contains("on_zero_evidence")) {
      const std::string policy = doc["on_zero_evidence"].get<std::string>();
      if (policy != "keep" && policy != "abort") throw ParseError("'on_zero_evidence' must be 'keep' or 'abort'");
      stream.abort_on_zero_evidence = policy == "abort";
    }
  } else {
    throw ParseError("stream 'mode' must be constant, scripted or bayes");
  }
  return stream;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace polyswitch
