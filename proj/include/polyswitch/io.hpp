#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polyswitch/game.hpp"
#include "polyswitch/polytope.hpp"
#include "polyswitch/simulator.hpp"
#include "polyswitch/synthesis.hpp"

namespace polyswitch {

using Json = nlohmann::ordered_json;

struct GameDocument {
  GameStructure game;
  SpecTask spec;
};

/// Parses and validates a game document. Throws ParseError on syntax errors,
/// unresolved references and any validation finding.
GameDocument parse_game(std::string_view text);
std::string dump_game(const GameStructure& game, const SpecTask& spec);

/// Weights and vector entries: JSON integers, decimals or "a/b" strings.
Rational rational_from_json(const Json& value);

Json strategy_to_json(const GameStructure& game, const Strategy& strategy);
Strategy strategy_from_json(const GameStructure& game, const Json& doc);

struct CandidateFile {
  std::optional<Rational> epsilon;
  std::vector<InfoVector> candidates;
};
CandidateFile parse_candidates(std::string_view text);

/// Certificate document; strategies are embedded when given.
Json cert_to_json(const PolytopeCert& cert, const GameStructure* game = nullptr,
                  const std::vector<Strategy>* strategies = nullptr);
PolytopeCert cert_from_json(const Json& doc);
std::vector<Strategy> cert_strategies_from_json(const GameStructure& game, const Json& doc);

InfoStream parse_stream(std::string_view text);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace polyswitch
