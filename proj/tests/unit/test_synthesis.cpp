#include <doctest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "../support/random_games.hpp"
#include "polyswitch/error.hpp"
#include "polyswitch/switching.hpp"
#include "polyswitch/synthesis.hpp"

using namespace polyswitch;
using testing::info;
using testing::make_star;
using testing::relaxed_basis_cost;
using testing::simulated_basis_cost;
using testing::tour_optimal_cost;

namespace {

std::vector<Rational> finite(const CostVector& costs) {
  std::vector<Rational> out;
  for (const auto& c : costs) out.push_back(c.value());
  return out;
}

std::vector<Rational> ints(std::initializer_list<int> v) {
  std::vector<Rational> out;
  for (int x : v) out.emplace_back(x);
  return out;
}

bool all(const StateSet& s) {
  for (bool b : s) {
    if (!b) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("winning regions") {
  SUBCASE("STAR is winning everywhere") { CHECK(all(winning_region(make_star().game, make_star().spec))); }
  SUBCASE("a sink outside every guarantee is losing") {
    const auto doc = testing::make_star_with_pit();
    const StateSet w = winning_region(doc.game, doc.spec);
    CHECK_FALSE(w[static_cast<std::size_t>(*doc.game.find_state("pit"))]);
    CHECK(w[0]);
  }
  SUBCASE("an empty guarantee set is never satisfied") {
    auto doc = make_star();
    doc.game.labels["goal_b"].clear();
    const StateSet w = winning_region(doc.game, doc.spec);
    CHECK(std::none_of(w.begin(), w.end(), [](bool b) { return b; }));
    CHECK_THROWS_AS(synth_optimal(doc.game, doc.spec, InfoVector::uniform(3)), DomainError);
  }
}

TEST_CASE("STAR optimal strategies follow the best tour") {
  const auto doc = make_star();
  struct Case {
    InfoVector p;
    std::vector<Rational> basis;
  };
  for (const auto& c : {Case{InfoVector::basis(3, 0), ints({1, 4, 9})}, Case{InfoVector::basis(3, 1), ints({5, 2, 9})},
                        Case{InfoVector::basis(3, 2), ints({7, 10, 3})}}) {
    const Strategy s = synth_optimal(doc.game, doc.spec, c.p);
    CHECK(finite(s.basis_costs) == c.basis);
    CHECK(s.value == tour_optimal_cost(doc.game, doc.spec, c.p));
    for (int j = 0; j < 3; ++j) CHECK(s.basis_costs[static_cast<std::size_t>(j)] == simulated_basis_cost(doc.game, doc.spec, s, j));
  }
  const Strategy u = synth_optimal(doc.game, doc.spec, InfoVector::uniform(3));
  CHECK(u.value == ExtRational(Rational(14, 3)));
  CHECK(u.value == tour_optimal_cost(doc.game, doc.spec, InfoVector::uniform(3)));
  CHECK(finite(u.basis_costs) == ints({1, 4, 9}));
}

TEST_CASE("basis costs of fixed strategies") {
  const auto doc = make_star();
  const Strategy tour = testing::star_tour_strategy(doc, false);
  CHECK(eval_cost_basis(doc.game, doc.spec, tour, 1) == ExtRational(Rational(4)));
  const Strategy arm3 = synth_optimal(doc.game, doc.spec, InfoVector::basis(3, 2));
  CHECK(eval_cost_basis(doc.game, doc.spec, arm3, 2) == ExtRational(Rational(3)));

  auto zero = make_star();
  for (auto& e : zero.game.transitions) {
    if (e) e->weight = 0;
  }
  const Strategy z = synth_optimal(zero.game, zero.spec, InfoVector::uniform(3));
  for (int j = 0; j < 3; ++j) CHECK(eval_cost_basis(zero.game, zero.spec, z, j) == ExtRational(Rational(0)));
  for (const auto& l : optimal_basis_costs(zero.game, zero.spec)) CHECK(l == ExtRational(Rational(0)));
}

TEST_CASE("mixed cost is the inner product with basis costs") {
  const CostVector rho1{Rational(1), Rational(4), Rational(9)};
  CHECK(eval_cost(rho1, parse_info("0.6,0.3,0.1")) == ExtRational(Rational(27, 10)));
  CHECK(eval_cost(rho1, InfoVector::basis(3, 2)) == ExtRational(Rational(9)));
  CHECK(eval_cost(rho1, parse_info("0.2,0.3,0.5")) == ExtRational(Rational(59, 10)));
  const CostVector partial{Rational(1), ExtRational::infinity(), Rational(2)};
  CHECK(eval_cost(partial, InfoVector::basis(3, 0)) == ExtRational(Rational(1)));
  CHECK(eval_cost(partial, InfoVector::uniform(3)).is_infinite());
}

TEST_CASE("per-scenario optima") {
  const auto doc = make_star();
  CHECK(finite(optimal_basis_costs(doc.game, doc.spec)) == ints({1, 2, 3}));
  auto hub_goal = make_star();
  hub_goal.game.labels["goal_b"].insert(hub_goal.game.labels["goal_b"].begin(), 0);
  CHECK(optimal_basis_costs(hub_goal.game, hub_goal.spec)[1] == ExtRational(Rational(0)));
}

TEST_CASE("value-iteration oracle on STAR") {
  const auto doc = make_star();
  CHECK(oracle_optimal_cost(doc.game, doc.spec, parse_info("0.6,0.3,0.1")) == Rational(27, 10));
  CHECK(oracle_optimal_cost(doc.game, doc.spec, InfoVector::basis(3, 1)) == Rational(2));
  CHECK(oracle_optimal_cost(doc.game, doc.spec, parse_info("1/2,1/2,0")) == Rational(5, 2));
  CHECK_THROWS_AS(oracle_optimal_cost(doc.game, doc.spec, InfoVector::uniform(3), 10), std::length_error);
}

TEST_CASE("goals outside the winning region") {
  auto doc = testing::make_star_with_pit();
  doc.game.labels["pit"] = {*doc.game.find_state("pit")};
  doc.spec.scenarios.push_back("pit");
  doc.spec.scenario_to_guarantee.push_back(0);
  CHECK_THROWS_AS(synth_optimal(doc.game, doc.spec, InfoVector::uniform(4)), DomainError);
  const Strategy s = synth_optimal(doc.game, doc.spec, info({1, 0, 0, 0}));
  CHECK(s.basis_costs[3].is_infinite());
  CHECK(optimal_basis_costs(doc.game, doc.spec)[3].is_infinite());
}

TEST_CASE("assumptions are recorded but not exploited") {
  auto doc = make_star();
  doc.game.labels["everywhere"] = {0, 1, 2, 3, 4, 5, 6};
  doc.spec.assumptions = {"everywhere"};
  CHECK(synth_optimal(doc.game, doc.spec, InfoVector::uniform(3)).value == ExtRational(Rational(14, 3)));
  doc.game.labels["goal_b"].clear();
  CHECK_THROWS_WITH_AS(synth_optimal(doc.game, doc.spec, InfoVector::uniform(3)),
                       doctest::Contains("assumption exploitation unsupported"), DomainError);
}

TEST_CASE("environment branching breaks the per-scenario lower bound") {
  // Worst cases of different scenarios come from different plays, so the
  // summed per-scenario optimum exceeds the true weighted optimum.
  const auto doc = testing::make_adversarial_branch();
  const InfoVector half = info({Rational(1, 2), Rational(1, 2)});
  const Strategy s = synth_optimal(doc.game, doc.spec, half);
  CHECK(s.value == ExtRational(Rational(5)));
  CHECK(oracle_optimal_cost(doc.game, doc.spec, half) == Rational(5));
  CHECK(finite(optimal_basis_costs(doc.game, doc.spec)) == ints({10, 10}));
  CHECK(eval_cost(s, half) == ExtRational(Rational(10)));
}

TEST_CASE("random agent-controlled games agree with the tour oracle") {
  std::mt19937_64 rng(11);
  testing::RandomGameOptions options;
  for (int k = 0; k < 60; ++k) {
    const auto doc = testing::random_game(rng, options);
    const InfoVector p = testing::random_info(rng, doc.spec.num_scenarios(), 6);
    const Strategy s = synth_optimal(doc.game, doc.spec, p);
    CAPTURE(k);
    CHECK(s.value == tour_optimal_cost(doc.game, doc.spec, p));
    CHECK(s.value == ExtRational(oracle_optimal_cost(doc.game, doc.spec, p)));
    CHECK(s.value == eval_cost(s, p));
    for (int j = 0; j < doc.spec.num_scenarios(); ++j) {
      CHECK(s.basis_costs[static_cast<std::size_t>(j)] == simulated_basis_cost(doc.game, doc.spec, s, j));
    }
    CHECK(strategy_winning_states(doc.game, doc.spec, s)[static_cast<std::size_t>(doc.game.initial)]);
  }
}

TEST_CASE("random adversarial games agree with value iteration") {
  std::mt19937_64 rng(12);
  testing::RandomGameOptions options;
  options.max_inputs = 3;
  for (int k = 0; k < 60; ++k) {
    const auto doc = testing::random_game(rng, options);
    const InfoVector p = testing::random_info(rng, doc.spec.num_scenarios(), 6);
    const Strategy s = synth_optimal(doc.game, doc.spec, p);
    CAPTURE(k);
    CHECK(s.value == ExtRational(oracle_optimal_cost(doc.game, doc.spec, p)));
    // A single play cannot be worse than its scenarios' separate worst cases.
    CHECK(s.value <= eval_cost(s, p));
    for (int j = 0; j < doc.spec.num_scenarios(); ++j) {
      CHECK(s.basis_costs[static_cast<std::size_t>(j)] == relaxed_basis_cost(doc.game, doc.spec, s, j));
    }
    const StateSet w = winning_region(doc.game, doc.spec);
    const StateSet ws = strategy_winning_states(doc.game, doc.spec, s);
    for (std::size_t g = 0; g < w.size(); ++g) CHECK(ws[g] == w[g]);
  }
}
