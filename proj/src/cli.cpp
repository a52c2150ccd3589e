#include "polyswitch/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polyswitch/error.hpp"
#include "polyswitch/io.hpp"
#include "polyswitch/polytope.hpp"
#include "polyswitch/simulator.hpp"
#include "polyswitch/switching.hpp"
#include "polyswitch/synthesis.hpp"

namespace polyswitch {

namespace {

/// Bad flags or unreadable files; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", r.to_double());
  return buf;
}

std::string join(const std::vector<std::string>& parts, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string costs_str(const CostVector& costs) {
  std::vector<std::string> parts;
  for (const auto& c : costs) parts.push_back(c.str());
  return join(parts);
}

std::string costs_str(const std::vector<Rational>& costs) {
  std::vector<std::string> parts;
  for (const auto& c : costs) parts.push_back(c.str());
  return join(parts);
}

std::string load(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
}

void save(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path.string() + "'");
  file << content;
  if (!file) throw UsageError("cannot write '" + path.string() + "'");
}

InfoVector flag_info(const std::string& text, int dimension) {
  InfoVector p;
  try {
    p = parse_info(text);
  } catch (const std::exception& e) {
    throw UsageError("malformed --p '" + text + "': " + e.what());
  }
  if (static_cast<int>(p.size()) != dimension) {
    throw UsageError("--p has " + std::to_string(p.size()) + " entries, expected " + std::to_string(dimension));
  }
  return p;
}

Rational flag_rational(const std::string& text, const char* flag) {
  try {
    return Rational::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("malformed ") + flag + " '" + text + "': " + e.what());
  }
}

struct Options {
  std::string game;
  std::string cert;
  std::string p;
  std::string output;
  std::string candidates;
  std::string epsilon;
  int grid = 10;
  int expand = 0;
  std::optional<std::uint64_t> expand_seed;
  std::string stream;
  std::string adversary = "uniform:0";
  int horizon = 0;
  std::string runs = "switching,uninformed,oracle";
  std::string out_dir = ".";
  int period = 50;
  bool invariants = false;
};

int cmd_validate(const Options& o, std::ostream& out) {
  const auto doc = parse_game(load(o.game));
  const auto& game = doc.game;
  const StateSet w = winning_region(game, doc.spec);
  int winning = 0;
  for (bool b : w) winning += b ? 1 : 0;
  out << "ok: " << game.name << ": " << game.num_states() << " states, " << game.num_inputs() << " inputs, "
      << game.num_outputs() << " outputs, " << doc.spec.num_guarantees() << " guarantees, "
      << doc.spec.num_scenarios() << " scenarios\n";
  out << "winning states: " << winning << "/" << game.num_states() << ", initial state "
      << (w[static_cast<std::size_t>(game.initial)] ? "winning" : "losing") << "\n";
  return 0;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const auto doc = parse_game(load(o.game));
  const InfoVector p = flag_info(o.p, doc.spec.num_scenarios());
  Strategy s = synth_optimal(doc.game, doc.spec, p);
  s.id = 1;
  out << "value " << s.value.str() << " (" << decimal(s.value.value()) << ")\n";
  out << "basis costs: " << costs_str(s.basis_costs) << "\n";
  out << "memory states: " << s.memory_count << "\n";
  if (!o.output.empty()) save(o.output, strategy_to_json(doc.game, s).dump(2) + "\n");
  return 0;
}

int cmd_certify(const Options& o, std::ostream& out) {
  const auto doc = parse_game(load(o.game));
  const CandidateFile file = parse_candidates(load(o.candidates));
  if (static_cast<int>(file.candidates.front().size()) != doc.spec.num_scenarios()) {
    throw UsageError("candidate dimension does not match the number of scenarios");
  }
  if (o.grid < 1) throw UsageError("--grid must be at least 1");
  std::optional<Rational> epsilon = file.epsilon;
  if (!o.epsilon.empty()) epsilon = flag_rational(o.epsilon, "--epsilon");
  if (epsilon && epsilon->sign() < 0) throw UsageError("--epsilon must be non-negative");

  CertifiedFamily family = certify_candidates(doc.game, doc.spec, file.candidates, epsilon);
  if (o.expand > 0) {
    family = expand_candidates(doc.game, doc.spec, file.candidates, family.cert.epsilon, o.grid, o.expand,
                               o.expand_seed)
                 .family;
  }
  PolytopeCert& cert = family.cert;
  cert.gaps = coverage_gaps(cert, o.grid);
  const Rational eps_min = min_epsilon(cert.basis_costs, cert.ell, cert.candidates);

  out << "candidates: " << cert.size() << "\n";
  out << "epsilon: " << cert.epsilon.str() << " (min " << eps_min.str() << ")\n";
  out << "ell: " << costs_str(cert.ell) << "\n";
  for (int i = 0; i < cert.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out << "strategy " << i + 1 << " at [" << cert.candidates[ui].str() << "]: basis " << costs_str(cert.basis_costs[ui])
        << ", " << (cert.nonempty[ui] ? "nonempty" : "empty") << "\n";
  }
  out << "gaps at grid " << o.grid << ": " << cert.gaps.size() << "\n";
  for (const auto& g : cert.gaps) out << "  [" << g.str() << "]\n";
  if (!o.output.empty()) save(o.output, cert_to_json(cert, &doc.game, &family.strategies).dump(2) + "\n");
  return 0;
}

PolytopeCert load_cert(const std::string& path, Json* raw = nullptr) {
  const std::string text = load(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
  }
  PolytopeCert cert = cert_from_json(doc);
  if (raw) *raw = std::move(doc);
  return cert;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  const PolytopeCert cert = load_cert(o.cert);
  const InfoVector p = flag_info(o.p, cert.dimension());
  const Bounds b = bounds_for(cert, p);
  if (b.index) {
    out << "strategy " << *b.index + 1 << ", lower " << b.lower->str() << ", upper " << b.upper.str() << " (lower "
        << decimal(*b.lower) << ", upper " << decimal(b.upper) << ")\n";
  } else {
    out << "no polytope — dominating strategy " << b.dominating + 1 << ", cost " << b.upper.str() << " ("
        << decimal(b.upper) << ")\n";
  }
  return 0;
}

int cmd_export_partition(const Options& o, std::ostream& out) {
  const PolytopeCert cert = load_cert(o.cert);
  if (o.grid < 1) throw UsageError("--grid must be at least 1");
  std::ostringstream csv;
  for (int j = 0; j < cert.dimension(); ++j) csv << 'p' << j + 1 << ',';
  csv << "winner,epsilon_certified,chosen\n";
  for (const auto& p : simplex_grid(cert.dimension(), o.grid)) {
    std::optional<int> chosen;
    for (int i = 0; i < cert.size() && !chosen; ++i) {
      if (membership(cert, i, p)) chosen = i;
    }
    for (const auto& q : p.entries()) csv << q.str() << ',';
    csv << dominating_strategy(cert, p) + 1 << ',' << (chosen ? "true" : "false") << ','
        << (chosen ? *chosen : cert.size() - 1) + 1 << '\n';
  }
  if (o.output.empty()) {
    out << csv.str();
  } else {
    save(o.output, csv.str());
  }
  return 0;
}

AdversaryModel parse_adversary(const std::string& text, const GameStructure& game) {
  if (text == "greedy") return AdversaryModel::greedy();
  if (text.rfind("uniform:", 0) == 0) {
    const std::string seed = text.substr(8);
    if (seed.empty() || seed.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("malformed adversary seed '" + seed + "'");
    }
    try {
      return AdversaryModel::uniform(std::stoull(seed));
    } catch (const std::out_of_range&) {
      throw UsageError("adversary seed out of range");
    }
  }
  if (text.rfind("script:", 0) == 0) {
    std::string names = load(text.substr(7));
    for (char& c : names) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(names);
    std::vector<SymbolId> script;
    for (std::string name; in >> name;) {
      const auto e = game.find_input(name);
      if (!e) throw UsageError("adversary script names unknown input '" + name + "'");
      script.push_back(*e);
    }
    return AdversaryModel::scripted(std::move(script));
  }
  throw UsageError("--adversary must be uniform:<seed>, script:<file> or greedy");
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto doc = parse_game(load(o.game));
  Json raw;
  const PolytopeCert cert = load_cert(o.cert, &raw);
  const std::vector<Strategy> strategies = cert_strategies_from_json(doc.game, raw);
  if (static_cast<int>(strategies.size()) != cert.size() || cert.dimension() != doc.spec.num_scenarios()) {
    throw UsageError("certificate does not match the game");
  }
  InfoStream stream;
  try {
    stream = parse_stream(load(o.stream));
    stream.validate(doc.spec.num_scenarios());
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("malformed stream: ") + e.what());
  }
  if (o.horizon < 0) throw UsageError("--horizon must be non-negative");
  if (o.period < 1) throw UsageError("--period must be at least 1");
  RunOptions options;
  options.horizon = o.horizon;
  options.adversary = parse_adversary(o.adversary, doc.game);
  options.assumptions_as_invariants = o.invariants;

  std::vector<std::string> runs;
  {
    std::string list = o.runs;
    for (char& c : list) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(list);
    for (std::string r; in >> r;) {
      if (r != "switching" && r != "uninformed" && r != "oracle") throw UsageError("unknown executor '" + r + "'");
      runs.push_back(r);
    }
  }
  if (runs.empty()) throw UsageError("--run names no executor");

  std::vector<RunTrace> traces;
  for (const auto& r : runs) {
    if (r == "switching") traces.push_back(run_switching(doc.game, doc.spec, strategies, cert, stream, options));
    if (r == "uninformed") traces.push_back(run_uninformed(doc.game, doc.spec, strategies, stream, options));
    if (r == "oracle") traces.push_back(run_resynthesis_oracle(doc.game, doc.spec, stream, options, o.period));
  }

  const std::filesystem::path dir(o.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create '" + dir.string() + "'");
  for (const auto& trace : traces) {
    std::ostringstream csv;
    write_trace_csv(csv, doc.game, trace);
    save(dir / ("trace_" + trace.label + ".csv"), csv.str());
  }
  const MetricsTable table = metrics_summary(doc.game, doc.spec, traces);
  std::ostringstream csv;
  write_metrics_csv(csv, table);
  save(dir / "metrics.csv", csv.str());
  save(dir / "metrics.json", metrics_json(table));
  for (const auto& m : table.rows) {
    out << m.label << ": " << m.steps << " steps, " << m.switches << " switches, total cost " << m.total_cost.str()
        << " (" << decimal(m.total_cost) << ")\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pre-synthesized strategy switching for weighted graph games", "polyswitch"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a game file and report its winning region");
  validate->add_option("game", o.game, "Game JSON")->required();

  auto* synth = app.add_subcommand("synth", "Synthesize the cost-optimal strategy at one information vector");
  synth->add_option("game", o.game, "Game JSON")->required();
  synth->add_option("--p", o.p, "Information vector, e.g. 0.6,0.3,0.1")->required();
  synth->add_option("-o,--output", o.output, "Strategy JSON output");

  auto* certify = app.add_subcommand("certify", "Synthesize candidate strategies and certify their regions");
  certify->add_option("game", o.game, "Game JSON")->required();
  certify->add_option("--candidates", o.candidates, "Candidate JSON")->required();
  certify->add_option("--epsilon", o.epsilon, "Optimality slack (default: the smallest safe value)");
  certify->add_option("--grid", o.grid, "Grid resolution for gap reporting")->capture_default_str();
  certify->add_option("--expand", o.expand, "Add up to this many gap points as candidates");
  certify->add_option("--expand-seed", o.expand_seed, "Pick gap points at random with this seed");
  certify->add_option("-o,--output", o.output, "Certificate JSON output");

  auto* bounds = app.add_subcommand("bounds", "Cost bounds of the selected strategy at p");
  bounds->add_option("cert", o.cert, "Certificate JSON")->required();
  bounds->add_option("--p", o.p, "Information vector")->required();

  auto* partition = app.add_subcommand("export-partition", "Grid partition of the simplex as CSV");
  partition->add_option("cert", o.cert, "Certificate JSON")->required();
  partition->add_option("--grid", o.grid, "Grid resolution")->required();
  partition->add_option("-o,--output", o.output, "CSV output (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "Run executors against an information stream");
  simulate->add_option("game", o.game, "Game JSON")->required();
  simulate->add_option("cert", o.cert, "Certificate JSON with strategies")->required();
  simulate->add_option("--stream", o.stream, "Stream JSON")->required();
  simulate->add_option("--adversary", o.adversary, "uniform:<seed>, script:<file> or greedy")->capture_default_str();
  simulate->add_option("--horizon", o.horizon, "Steps per run")->required();
  simulate->add_option("--run", o.runs, "Executors: switching,uninformed,oracle")->capture_default_str();
  simulate->add_option("--out-dir", o.out_dir, "Directory for traces and metrics")->capture_default_str();
  simulate->add_option("--period", o.period, "Oracle re-synthesis period")->capture_default_str();
  simulate->add_flag("--assumptions-as-invariants", o.invariants, "Exclude cost after an assumption violation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
    if (certify->parsed()) return cmd_certify(o, out);
    if (bounds->parsed()) return cmd_bounds(o, out);
    if (partition->parsed()) return cmd_export_partition(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const RationalOverflow& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace polyswitch
