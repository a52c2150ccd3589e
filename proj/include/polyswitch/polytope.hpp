#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polyswitch/game.hpp"
#include "polyswitch/rational.hpp"
#include "polyswitch/synthesis.hpp"

namespace polyswitch {

/// { p : rows · p <= rhs }.
struct HalfspaceSystem {
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;

  bool contains(const InfoVector& p) const;
};

/// ε-optimality regions for a family of N candidate strategies.
///
/// systems[i] has N + 1 rows: row m is the basis-cost difference between
/// strategy i and strategy m (row i is zero), the last row is strategy i's
/// excess over the per-scenario optimum, bounded by ε. dominance[i] drops
/// the last row.
struct PolytopeCert {
  std::vector<HalfspaceSystem> systems;
  std::vector<HalfspaceSystem> dominance;
  std::vector<Rational> ell;
  Rational epsilon;
  std::vector<InfoVector> candidates;
  std::vector<std::vector<Rational>> basis_costs;
  std::vector<bool> nonempty;
  std::vector<InfoVector> gaps;

  int size() const { return static_cast<int>(systems.size()); }
  int dimension() const { return static_cast<int>(ell.size()); }
};

/// Throws std::invalid_argument on infinite costs or negative ε. Candidates
/// and gaps are left for the caller; non-emptiness is decided exactly.
PolytopeCert build_polytopes(const std::vector<CostVector>& basis_costs, const CostVector& ell, const Rational& epsilon);

bool membership(const PolytopeCert& cert, int i, const InfoVector& p);

/// Exact mixed cost of candidate strategy i at p.
Rational mixed_cost(const PolytopeCert& cert, int i, const InfoVector& p);

/// Least-index strategy with the smallest mixed cost at p.
int dominating_strategy(const PolytopeCert& cert, const InfoVector& p);

struct Bounds {
  /// Least i with p in S_i; empty when no region contains p.
  std::optional<int> index;
  /// cost(i, p) - ε; may be negative.
  std::optional<Rational> lower;
  /// cost(i, p), or the dominating strategy's cost when uncovered.
  Rational upper;
  int dominating = 0;
};

Bounds bounds_for(const PolytopeCert& cert, const InfoVector& p);

/// Smallest ε for which every region is guaranteed to contain its candidate.
Rational min_epsilon(const std::vector<std::vector<Rational>>& basis_costs, const std::vector<Rational>& ell,
                     const std::vector<InfoVector>& candidates);

/// Exact LP feasibility of S_i intersected with the simplex.
bool check_nonempty(const PolytopeCert& cert, int i);

/// All simplex points with denominator k, lexicographically ascending.
std::vector<InfoVector> simplex_grid(int n, int k);

/// Grid points (denominator k) lying in no S_i. Reporting only; membership
/// itself is grid-free.
std::vector<InfoVector> coverage_gaps(const PolytopeCert& cert, int grid_k);

/// Candidate strategies and their certificate.
struct CertifiedFamily {
  std::vector<Strategy> strategies;
  PolytopeCert cert;
};

/// Synthesizes one strategy per candidate and certifies them at ε, or at
/// the minimal ε when none is given.
CertifiedFamily certify_candidates(const GameStructure& game, const SpecTask& spec,
                                   const std::vector<InfoVector>& candidates,
                                   const std::optional<Rational>& epsilon = std::nullopt);

/// Same as certify_candidates, reusing already synthesized strategies.
CertifiedFamily certify_strategies(std::vector<Strategy> strategies, const CostVector& ell,
                                   const std::vector<InfoVector>& candidates,
                                   const std::optional<Rational>& epsilon = std::nullopt);

struct Expansion {
  CertifiedFamily family;
  int rounds = 0;
  bool covered = false;
};

/// Adds uncovered grid points as new candidates until the grid is covered or
/// `max_rounds` candidates were added. New candidates are inserted before
/// the last one, which stays the default strategy. The first gap is taken
/// unless `random_seed` is set.
Expansion expand_candidates(const GameStructure& game, const SpecTask& spec, std::vector<InfoVector> candidates,
                            const Rational& epsilon, int grid_k, int max_rounds,
                            std::optional<std::uint64_t> random_seed = std::nullopt);

}  // namespace polyswitch
