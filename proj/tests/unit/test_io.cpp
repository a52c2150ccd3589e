#include <doctest.h>

#include "../support/fixtures.hpp"
#include "polyswitch/error.hpp"
#include "polyswitch/io.hpp"
#include "polyswitch/switching.hpp"

using namespace polyswitch;

TEST_CASE("strategies survive a JSON round trip") {
  const auto doc = testing::make_star();
  Strategy s = synth_optimal(doc.game, doc.spec, parse_info("0.6,0.3,0.1"));
  s.id = 4;
  const Json j = strategy_to_json(doc.game, s);
  CHECK(j["basis_costs"] == Json::array({"1", "4", "9"}));
  const Strategy back = strategy_from_json(doc.game, Json::parse(j.dump()));
  CHECK(back.id == 4);
  CHECK(back.memory_count == s.memory_count);
  CHECK(back.initial_memory == s.initial_memory);
  CHECK(back.move == s.move);
  CHECK(back.update == s.update);
  CHECK(back.start_memory == s.start_memory);
  CHECK(back.basis_costs == s.basis_costs);
  CHECK(back.value == s.value);
  CHECK(back.cost_to_go == s.cost_to_go);
  CHECK(strategy_winning_states(doc.game, doc.spec, back) == strategy_winning_states(doc.game, doc.spec, s));

  Json bad = j;
  bad["move"][0][3] = "c3";
  CHECK_THROWS_AS(strategy_from_json(doc.game, bad), ParseError);
}

TEST_CASE("certificates survive a JSON round trip and are checked") {
  const auto doc = testing::make_star();
  const CertifiedFamily family = certify_candidates(
      doc.game, doc.spec, {InfoVector::basis(3, 0), InfoVector::basis(3, 1), InfoVector::basis(3, 2)}, Rational(2));
  const Json j = cert_to_json(family.cert, &doc.game, &family.strategies);
  const PolytopeCert back = cert_from_json(Json::parse(j.dump()));
  CHECK(back.epsilon == Rational(2));
  CHECK(back.ell == family.cert.ell);
  CHECK(back.basis_costs == family.cert.basis_costs);
  CHECK(back.candidates == family.cert.candidates);
  CHECK(back.nonempty == family.cert.nonempty);
  for (int i = 0; i < 3; ++i) {
    CHECK(back.systems[static_cast<std::size_t>(i)].rows == family.cert.systems[static_cast<std::size_t>(i)].rows);
    CHECK(back.systems[static_cast<std::size_t>(i)].rhs == family.cert.systems[static_cast<std::size_t>(i)].rhs);
  }
  CHECK(cert_strategies_from_json(doc.game, j).size() == 3);

  Json tampered = j;
  tampered["H"][0][3][1] = "1";
  CHECK_THROWS_AS(cert_from_json(tampered), ParseError);
  tampered = j;
  tampered["b"][1][3] = "5";
  CHECK_THROWS_AS(cert_from_json(tampered), ParseError);
}

TEST_CASE("candidate and stream files") {
  const CandidateFile c = parse_candidates(R"({"epsilon": "1/2", "candidates": [["1", "0"], [0.25, 0.75]]})");
  CHECK(c.epsilon == Rational(1, 2));
  CHECK(c.candidates[1] == testing::info({Rational(1, 4), Rational(3, 4)}));
  CHECK_THROWS_AS(parse_candidates(R"({"candidates": []})"), ParseError);
  CHECK_THROWS_AS(parse_candidates(R"({"candidates": [["1", "0"], ["1"]]})"), ParseError);

  const InfoStream scripted = parse_stream(R"({"mode": "scripted", "events": [[0, ["1", "0"]], [5, ["0", "1"]]]})");
  CHECK(scripted.mode == InfoStream::Mode::scripted);
  CHECK(scripted.events[1].first == 5);

  const InfoStream bayes = parse_stream(R"({"mode": "bayes", "prior": ["1/2", "1/2"],
      "likelihoods": {"seen": ["0", "1"]}, "schedule": [[3, "seen"]], "on_zero_evidence": "abort"})");
  CHECK(bayes.abort_on_zero_evidence);
  CHECK(bayes.likelihoods.at("seen")[1] == Rational(1));
  CHECK_NOTHROW(bayes.validate(2));
  CHECK_THROWS_AS(bayes.validate(3), std::invalid_argument);
  CHECK_THROWS_AS(parse_stream(R"({"mode": "sometimes"})"), ParseError);
}
