// Python bindings. Rationals cross the boundary as "a/b" strings; documents
// (games, certificates, streams) as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "polyswitch/cli.hpp"
#include "polyswitch/error.hpp"
#include "polyswitch/io.hpp"
#include "polyswitch/polytope.hpp"
#include "polyswitch/simulator.hpp"
#include "polyswitch/switching.hpp"
#include "polyswitch/synthesis.hpp"

namespace py = pybind11;
using namespace polyswitch;

namespace {

InfoVector to_info(const std::vector<std::string>& entries) {
  std::vector<Rational> raw;
  for (const auto& e : entries) raw.push_back(Rational::parse(e));
  return InfoVector(std::move(raw));
}

std::vector<std::string> to_strings(const CostVector& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

std::vector<std::string> to_strings(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

py::dict validate(const std::string& game_text) {
  const auto doc = parse_game(game_text);
  const StateSet w = winning_region(doc.game, doc.spec);
  py::list winning;
  for (int g = 0; g < doc.game.num_states(); ++g) {
    if (w[static_cast<std::size_t>(g)]) winning.append(doc.game.states[static_cast<std::size_t>(g)]);
  }
  py::dict out;
  out["name"] = doc.game.name;
  out["states"] = doc.game.states;
  out["inputs"] = doc.game.inputs;
  out["outputs"] = doc.game.outputs;
  out["scenarios"] = doc.spec.num_scenarios();
  out["guarantees"] = doc.spec.num_guarantees();
  out["winning"] = winning;
  return out;
}

py::dict synthesize(const std::string& game_text, const std::vector<std::string>& p) {
  const auto doc = parse_game(game_text);
  Strategy s = synth_optimal(doc.game, doc.spec, to_info(p));
  s.id = 1;
  py::dict out;
  out["value"] = s.value.str();
  out["basis_costs"] = to_strings(s.basis_costs);
  out["memory_count"] = s.memory_count;
  out["strategy"] = strategy_to_json(doc.game, s).dump();
  return out;
}

std::string oracle_cost(const std::string& game_text, const std::vector<std::string>& p) {
  const auto doc = parse_game(game_text);
  return oracle_optimal_cost(doc.game, doc.spec, to_info(p)).str();
}

std::string certify(const std::string& game_text, const std::vector<std::vector<std::string>>& candidates,
                    const std::optional<std::string>& epsilon, int grid, int expand) {
  const auto doc = parse_game(game_text);
  std::vector<InfoVector> points;
  for (const auto& c : candidates) points.push_back(to_info(c));
  std::optional<Rational> eps;
  if (epsilon) eps = Rational::parse(*epsilon);
  CertifiedFamily family = certify_candidates(doc.game, doc.spec, points, eps);
  if (expand > 0) {
    family = expand_candidates(doc.game, doc.spec, points, family.cert.epsilon, grid, expand).family;
  }
  family.cert.gaps = coverage_gaps(family.cert, grid);
  return cert_to_json(family.cert, &doc.game, &family.strategies).dump(2);
}

py::dict bounds(const std::string& cert_text, const std::vector<std::string>& p) {
  const PolytopeCert cert = cert_from_json(Json::parse(cert_text));
  const Bounds b = bounds_for(cert, to_info(p));
  py::dict out;
  out["index"] = b.index ? py::cast(*b.index + 1) : py::none();
  out["lower"] = b.lower ? py::cast(b.lower->str()) : py::none();
  out["upper"] = b.upper.str();
  out["dominating"] = b.dominating + 1;
  return out;
}

std::string simulate(const std::string& game_text, const std::string& cert_text, const std::string& stream_text,
                     int horizon, std::uint64_t seed, const std::vector<std::string>& runs, int period) {
  const auto doc = parse_game(game_text);
  const Json raw = Json::parse(cert_text);
  const PolytopeCert cert = cert_from_json(raw);
  const std::vector<Strategy> strategies = cert_strategies_from_json(doc.game, raw);
  const InfoStream stream = parse_stream(stream_text);
  stream.validate(doc.spec.num_scenarios());
  RunOptions options;
  options.horizon = horizon;
  options.adversary = AdversaryModel::uniform(seed);
  std::vector<RunTrace> traces;
  for (const auto& r : runs) {
    if (r == "switching") {
      traces.push_back(run_switching(doc.game, doc.spec, strategies, cert, stream, options));
    } else if (r == "uninformed") {
      traces.push_back(run_uninformed(doc.game, doc.spec, strategies, stream, options));
    } else if (r == "oracle") {
      traces.push_back(run_resynthesis_oracle(doc.game, doc.spec, stream, options, period));
    } else {
      throw std::invalid_argument("unknown executor '" + r + "'");
    }
  }
  return metrics_json(metrics_summary(doc.game, doc.spec, traces));
}

py::tuple cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"polyswitch"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_RuntimeError);
  py::register_exception<RationalOverflow>(m, "RationalOverflow", PyExc_OverflowError);

  m.def("validate", &validate, py::arg("game"));
  m.def("synthesize", &synthesize, py::arg("game"), py::arg("p"));
  m.def("oracle_cost", &oracle_cost, py::arg("game"), py::arg("p"));
  m.def("certify", &certify, py::arg("game"), py::arg("candidates"), py::arg("epsilon") = std::nullopt,
        py::arg("grid") = 10, py::arg("expand") = 0);
  m.def("bounds", &bounds, py::arg("cert"), py::arg("p"));
  m.def("simulate", &simulate, py::arg("game"), py::arg("cert"), py::arg("stream"), py::arg("horizon"),
        py::arg("seed") = 0, py::arg("runs") = std::vector<std::string>{"switching", "uninformed", "oracle"},
        py::arg("period") = 50);
  m.def("cli", &cli, py::arg("args"));
}
