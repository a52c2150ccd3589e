#pragma once

#include <optional>
#include <vector>

#include "polyswitch/rational.hpp"

namespace polyswitch::lp {

using Matrix = std::vector<std::vector<Rational>>;

/// Exact phase-1 simplex (Bland's rule) for
///   A_le x <= b_le,  A_eq x = b_eq,  x >= 0.
/// Returns a feasible point, or nullopt when the system is infeasible.
std::optional<std::vector<Rational>> feasible_point(const Matrix& a_le, const std::vector<Rational>& b_le,
                                                    const Matrix& a_eq, const std::vector<Rational>& b_eq);

}  // namespace polyswitch::lp
