#include "polyswitch/polytope.hpp"

#include <random>
#include <stdexcept>

#include "polyswitch/lp.hpp"

namespace polyswitch {

namespace {

Rational dot(const std::vector<Rational>& row, const InfoVector& p) {
  Rational sum;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (!p[k].is_zero() && !row[k].is_zero()) sum += row[k] * p[k];
  }
  return sum;
}

std::vector<Rational> finite(const CostVector& costs, const char* what) {
  std::vector<Rational> out;
  out.reserve(costs.size());
  for (const auto& c : costs) {
    if (c.is_infinite()) throw std::invalid_argument(std::string("infinite entry in ") + what);
    out.push_back(c.value());
  }
  return out;
}

void check_index(const PolytopeCert& cert, int i) {
  if (i < 0 || i >= cert.size()) throw std::out_of_range("polytope index out of range");
}

void check_dimension(const PolytopeCert& cert, const InfoVector& p) {
  if (static_cast<int>(p.size()) != cert.dimension()) {
    throw std::invalid_argument("information vector has the wrong dimension");
  }
}

}  // namespace

bool HalfspaceSystem::contains(const InfoVector& p) const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (dot(rows[r], p) > rhs[r]) return false;
  }
  return true;
}

PolytopeCert build_polytopes(const std::vector<CostVector>& basis_costs, const CostVector& ell, const Rational& epsilon) {
  if (epsilon.sign() < 0) throw std::invalid_argument("epsilon must be non-negative");
  if (basis_costs.empty()) throw std::invalid_argument("at least one candidate strategy is required");
  PolytopeCert cert;
  cert.epsilon = epsilon;
  cert.ell = finite(ell, "optimal basis costs");
  const std::size_t n = cert.ell.size();
  for (const auto& row : basis_costs) {
    cert.basis_costs.push_back(finite(row, "basis cost matrix"));
    if (row.size() != n) throw std::invalid_argument("basis cost row has the wrong length");
  }
  const std::size_t count = cert.basis_costs.size();
  for (std::size_t i = 0; i < count; ++i) {
    HalfspaceSystem sys;
    const auto& own = cert.basis_costs[i];
    for (std::size_t m = 0; m < count; ++m) {
      std::vector<Rational> row(n);
      for (std::size_t k = 0; k < n; ++k) row[k] = own[k] - cert.basis_costs[m][k];
      sys.rows.push_back(std::move(row));
      sys.rhs.emplace_back(0);
    }
    cert.dominance.push_back(sys);
    std::vector<Rational> slack(n);
    for (std::size_t k = 0; k < n; ++k) slack[k] = own[k] - cert.ell[k];
    sys.rows.push_back(std::move(slack));
    sys.rhs.push_back(epsilon);
    cert.systems.push_back(std::move(sys));
  }
  for (int i = 0; i < cert.size(); ++i) cert.nonempty.push_back(check_nonempty(cert, i));
  return cert;
}

bool membership(const PolytopeCert& cert, int i, const InfoVector& p) {
  check_index(cert, i);
  check_dimension(cert, p);
  return cert.systems[static_cast<std::size_t>(i)].contains(p);
}

Rational mixed_cost(const PolytopeCert& cert, int i, const InfoVector& p) {
  check_index(cert, i);
  check_dimension(cert, p);
  return dot(cert.basis_costs[static_cast<std::size_t>(i)], p);
}

int dominating_strategy(const PolytopeCert& cert, const InfoVector& p) {
  int best = 0;
  Rational best_cost = mixed_cost(cert, 0, p);
  for (int i = 1; i < cert.size(); ++i) {
    Rational c = mixed_cost(cert, i, p);
    if (c < best_cost) {
      best = i;
      best_cost = c;
    }
  }
  return best;
}

Bounds bounds_for(const PolytopeCert& cert, const InfoVector& p) {
  check_dimension(cert, p);
  Bounds b;
  b.dominating = dominating_strategy(cert, p);
  for (int i = 0; i < cert.size(); ++i) {
    if (!membership(cert, i, p)) continue;
    b.index = i;
    b.upper = mixed_cost(cert, i, p);
    b.lower = b.upper - cert.epsilon;
    return b;
  }
  b.upper = mixed_cost(cert, b.dominating, p);
  return b;
}

Rational min_epsilon(const std::vector<std::vector<Rational>>& basis_costs, const std::vector<Rational>& ell,
                     const std::vector<InfoVector>& candidates) {
  if (basis_costs.size() != candidates.size()) throw std::invalid_argument("one candidate per strategy is required");
  std::optional<Rational> worst;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Rational gap = dot(basis_costs[i], candidates[i]) - dot(ell, candidates[i]);
    if (!worst || gap > *worst) worst = gap;
  }
  return worst.value_or(Rational(0));
}

bool check_nonempty(const PolytopeCert& cert, int i) {
  check_index(cert, i);
  const auto& sys = cert.systems[static_cast<std::size_t>(i)];
  lp::Matrix simplex{std::vector<Rational>(static_cast<std::size_t>(cert.dimension()), Rational(1))};
  return lp::feasible_point(sys.rows, sys.rhs, simplex, {Rational(1)}).has_value();
}

std::vector<InfoVector> simplex_grid(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("grid needs n >= 1 and k >= 1");
  std::vector<InfoVector> out;
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  // Depth-first with ascending counts yields lexicographic order.
  auto emit = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      counts[static_cast<std::size_t>(pos)] = left;
      std::vector<Rational> q;
      q.reserve(counts.size());
      for (int c : counts) q.emplace_back(c, k);
      out.emplace_back(std::move(q));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, left - c);
    }
  };
  emit(emit, 0, k);
  return out;
}

std::vector<InfoVector> coverage_gaps(const PolytopeCert& cert, int grid_k) {
  if (grid_k < 1) throw std::invalid_argument("grid resolution must be at least 1");
  std::vector<InfoVector> gaps;
  for (const auto& p : simplex_grid(cert.dimension(), grid_k)) {
    bool covered = false;
    for (int i = 0; i < cert.size() && !covered; ++i) covered = membership(cert, i, p);
    if (!covered) gaps.push_back(p);
  }
  return gaps;
}

CertifiedFamily certify_strategies(std::vector<Strategy> strategies, const CostVector& ell,
                                   const std::vector<InfoVector>& candidates, const std::optional<Rational>& epsilon) {
  std::vector<CostVector> matrix;
  for (const auto& s : strategies) matrix.push_back(s.basis_costs);
  Rational eps;
  if (epsilon) {
    eps = *epsilon;
  } else {
    std::vector<std::vector<Rational>> finite_matrix;
    for (const auto& row : matrix) finite_matrix.push_back(finite(row, "basis cost matrix"));
    eps = min_epsilon(finite_matrix, finite(ell, "optimal basis costs"), candidates);
    if (eps.sign() < 0) eps = 0;
  }
  CertifiedFamily family;
  family.cert = build_polytopes(matrix, ell, eps);
  family.cert.candidates = candidates;
  family.strategies = std::move(strategies);
  return family;
}

CertifiedFamily certify_candidates(const GameStructure& game, const SpecTask& spec,
                                   const std::vector<InfoVector>& candidates, const std::optional<Rational>& epsilon) {
  if (candidates.empty()) throw std::invalid_argument("at least one candidate vector is required");
  std::vector<Strategy> strategies;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    strategies.push_back(synth_optimal(game, spec, candidates[i]));
    strategies.back().id = static_cast<int>(i) + 1;
  }
  return certify_strategies(std::move(strategies), optimal_basis_costs(game, spec), candidates, epsilon);
}

Expansion expand_candidates(const GameStructure& game, const SpecTask& spec, std::vector<InfoVector> candidates,
                            const Rational& epsilon, int grid_k, int max_rounds, std::optional<std::uint64_t> random_seed) {
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  if (candidates.empty()) throw std::invalid_argument("at least one candidate vector is required");
  std::optional<std::mt19937_64> rng;
  if (random_seed) rng.emplace(*random_seed);

  const CostVector ell = optimal_basis_costs(game, spec);
  std::vector<Strategy> strategies;
  for (const auto& c : candidates) strategies.push_back(synth_optimal(game, spec, c));

  Expansion result;
  while (true) {
    for (std::size_t i = 0; i < strategies.size(); ++i) strategies[i].id = static_cast<int>(i) + 1;
    result.family = certify_strategies(strategies, ell, candidates, epsilon);
    auto gaps = coverage_gaps(result.family.cert, grid_k);
    result.family.cert.gaps = gaps;
    if (gaps.empty()) {
      result.covered = true;
      break;
    }
    if (result.rounds == max_rounds) break;
    const std::size_t pick = rng ? static_cast<std::size_t>((*rng)() % gaps.size()) : 0;
    const auto at = static_cast<std::ptrdiff_t>(candidates.size() - 1);
    strategies.insert(strategies.begin() + at, synth_optimal(game, spec, gaps[pick]));
    candidates.insert(candidates.begin() + at, gaps[pick]);
    ++result.rounds;
  }
  return result;
}

}  // namespace polyswitch
