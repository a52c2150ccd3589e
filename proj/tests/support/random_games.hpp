#pragma once

#include <random>
#include <vector>

#include "polyswitch/io.hpp"

namespace polyswitch::testing {

struct RandomGameOptions {
  int max_states = 12;
  int max_scenarios = 3;
  /// 1 gives agent-controlled games; more lets the environment branch.
  int max_inputs = 1;
  int max_outputs = 3;
  int max_weight = 5;
  /// Chance of an extra guarantee that is not a scenario goal.
  double extra_guarantee = 0.3;
};

/// Random game whose initial state is winning and whose scenario goals are
/// all serviceable. Output 0 of every state follows a ring through all
/// states, except that some non-first inputs may lose it.
GameDocument random_game(std::mt19937_64& rng, const RandomGameOptions& options);

/// 1..max_count distinct simplex points with denominators up to 6.
std::vector<InfoVector> random_candidates(std::mt19937_64& rng, int n, int max_count);

/// Random simplex point with denominator up to `max_den`.
InfoVector random_info(std::mt19937_64& rng, int n, int max_den);

}  // namespace polyswitch::testing
