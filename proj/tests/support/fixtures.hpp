#pragma once

#include "polyswitch/io.hpp"

namespace polyswitch::testing {

/// Hub with arms of length 1, 2 and 3, unit weights, one goal per arm tip.
/// Single input "tick"; the outputs name the target state.
GameDocument make_star();

/// STAR plus a sink "pit" reachable from the hub.
GameDocument make_star_with_pit();

/// Hand-written cyclic tour a, b, c over STAR (memory = arm being served).
/// With `trap_memory`, an extra memory 0 steers the hub into the pit and is
/// the start memory at the hub.
Strategy star_tour_strategy(const GameDocument& doc, bool trap_memory);

/// The environment picks which of two goals is reached first (cost 0), the
/// other follows at cost 10. Each basis cost is 10 in the worst case, yet
/// every play costs 5 at [1/2, 1/2].
GameDocument make_adversarial_branch();

InfoVector info(std::initializer_list<Rational> entries);

}  // namespace polyswitch::testing
