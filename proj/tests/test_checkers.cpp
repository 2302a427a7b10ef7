#include <doctest.h>

#include <random>

#include "plant_fixtures.hpp"
#include "rescheck/checkers.hpp"
#include "rescheck/oracle.hpp"
#include "test_util.hpp"

using namespace rescheck;
using namespace rescheck::testutil;

namespace {

struct Plant {
  AtomPartition p = wr();
  Formula phi1, phi2, phi3, e1, not_phi1;
  Plant() {
    phi1 = parse(phi1_text(), p);
    phi2 = parse(phi2_text(), p);
    phi3 = parse(phi3_text(), p);
    e1 = parse(env1_text(), p);
    not_phi1 = f_not(phi1);
  }
};

// Small random strategies for property tests, stopping by construction.
AgentStrategy random_strategy(std::mt19937& rng, const AtomPartition& p, int states) {
  AgentStrategy a;
  a.partition = p;
  a.num_states = states;
  a.initial = 0;
  std::uniform_int_distribution<int> out(0, (1 << p.agent_count()) - 1);
  for (int s = 0; s < states; ++s) {
    a.output.push_back(static_cast<Letter>(out(rng)));
    a.terminating.push_back(s == states - 1 || (s > 0 && (rng() & 3) == 0));
    a.next.emplace_back();
    for (int x = 0; x < (1 << p.env_count()); ++x) {
      a.next[static_cast<size_t>(s)].push_back(
          s + 1 < states ? s + 1 + static_cast<int>(rng() % static_cast<unsigned>(states - s - 1))
                         : s);
    }
  }
  a.terminating[0] = false;
  return a;
}

Formula random_env_spec(std::mt19937& rng, const AtomPartition& p) {
  // Biased toward enforceable shapes; filtered by enforceability anyway.
  for (;;) {
    Formula f;
    switch (rng() % 4) {
      case 0: f = f_true(); break;
      case 1: f = parse("G (w -> r)", p); break;
      case 2: f = parse("G !r", p); break;
      default: f = random_formula(rng, p, 3); break;
    }
    if (check_env_enforceable(f, p)) return f;
  }
}

}  // namespace

TEST_SUITE("checkers") {

TEST_CASE("environment enforceability") {
  AtomPartition p = wr();
  CHECK(check_env_enforceable(f_true(), p));
  CHECK(!check_env_enforceable(f_false(), p));
  CHECK(check_env_enforceable(parse("G (w -> r)", p), p));
  CHECK(!check_env_enforceable(parse("G w", p), p));
  CHECK(check_env_enforceable(parse("r", p), p));
}

TEST_CASE("exists_weak basics") {
  AtomPartition p = wr();
  Verdict v = exists_weak(f_true(), f_true(), p);
  CHECK(v.decision);
  REQUIRE(v.witness.has_value());
  CHECK(std::get<Trace>(*v.witness).length() == 1);
  CHECK(!exists_weak(parse("r & !r", p), f_true(), p).decision);
  CHECK_THROWS_AS(exists_weak(f_true(), f_false(), p), ValidationError);
}

TEST_CASE("exists_weak: the plant may stay dry") {
  Plant x;
  Verdict v = exists_weak(x.not_phi1, x.e1, x.p);
  CHECK(v.decision);
  Trace t = std::get<Trace>(*v.witness);
  CHECK(!evaluate(x.phi1, t, 0));
}

TEST_CASE("check_win on the plant corpus") {
  Plant x;
  CHECK(check_win(x.phi1, x.e1, sigma1()).decision);
  Verdict v = check_win(x.phi1, x.e1, sigma3());
  CHECK(!v.decision);
  REQUIRE(v.witness.has_value());
  Trace t = std::get<Trace>(*v.witness);
  // The refuting play has neither watering nor rain anywhere.
  for (int i = 0; i <= t.last_index(); ++i) CHECK(t.letter(i) == 0);
  CHECK(check_win(f_true(), x.e1, sigma2()).decision);
  CHECK(check_win(f_true(), x.e1, one_step(false)).decision);
}

TEST_CASE("check_weak on the plant corpus") {
  Plant x;
  CHECK(check_weak(x.phi3, x.e1, sigma3()).decision);
  CHECK(!check_weak(x.phi3, x.e1, sigma1()).decision);
  CHECK(!check_weak(parse("r & !r", x.p), x.e1, sigma1()).decision);
  CHECK(check_weak(x.not_phi1, x.e1, sigma3()).decision);
}

TEST_CASE("check_dom on the plant corpus") {
  Plant x;
  CHECK(check_dom(x.phi3, x.e1, sigma3()).decision);
  Verdict v = check_dom(x.phi2, x.e1, sigma2());
  CHECK(!v.decision);
  REQUIRE(v.witness.has_value());
  auto [pi, pi_alt] = std::get<TracePair>(*v.witness);
  CHECK(!evaluate(x.phi2, pi, 0));
  CHECK(evaluate(x.phi2, pi_alt, 0));
  CHECK(is_consistent(pi, sigma2(), true));
}

TEST_CASE("check_be on the plant corpus") {
  Plant x;
  CHECK(check_be(x.phi2, x.e1, sigma2()).decision);
  CHECK(check_be(x.phi2, x.e1, sigma3()).decision);
  Verdict v = check_be(x.phi3, x.e1, sigma1());
  CHECK(!v.decision);
  REQUIRE(v.witness.has_value());
  CHECK(std::get<GamePathWitness>(*v.witness).state_class == "pending");
}

TEST_CASE("winning implies dominant implies best-effort over the bounded space") {
  AtomPartition p = wr();
  std::mt19937 rng(71);
  BoundedStrategySpace space(p, 2);
  for (int i = 0; i < 6; ++i) {
    Formula omega = random_formula(rng, p, 3);
    Formula env = random_env_spec(rng, p);
    bool any_win = false, any_dom = false;
    std::vector<std::array<bool, 3>> verdicts;
    for (const AgentTree& t : space.agent_trees()) {
      AgentStrategy a = space.tree_to_strategy(t);
      bool win = check_win(omega, env, a).decision;
      bool dom = check_dom(omega, env, a).decision;
      bool be = check_be(omega, env, a).decision;
      CAPTURE(render(omega));
      CAPTURE(render(env));
      if (win) CHECK(dom);
      if (dom) CHECK(be);
      any_win = any_win || win;
      any_dom = any_dom || dom;
      verdicts.push_back({win, dom, be});
    }
    // Collapse: with a winning strategy around, dominant = winning; with a
    // dominant one around, best-effort = dominant.
    for (const auto& v : verdicts) {
      if (any_win) CHECK(v[1] == v[0]);
      if (any_dom) CHECK(v[2] == v[1]);
    }
  }
}

TEST_CASE("check_win is the negation of check_weak on the negated goal") {
  AtomPartition p = wr();
  std::mt19937 rng(73);
  for (int i = 0; i < 30; ++i) {
    Formula omega = random_formula(rng, p, 3);
    Formula env = random_env_spec(rng, p);
    AgentStrategy a = random_strategy(rng, p, 2 + static_cast<int>(rng() % 3));
    CHECK(check_win(omega, env, a).decision == !check_weak(f_not(omega), env, a).decision);
  }
}

TEST_CASE("checkers agree with the oracle on random small instances") {
  AtomPartition p = wr();
  std::mt19937 rng(79);
  int done = 0;
  while (done < 25) {
    Formula omega = random_formula(rng, p, 3);
    Formula env = random_env_spec(rng, p);
    AgentStrategy a = random_strategy(rng, p, 2 + static_cast<int>(rng() % 2));
    if (sufficient_horizon(omega, env, a) > 3) continue;
    BoundedStrategySpace space(p, sufficient_horizon(omega, env, a));
    CAPTURE(render(omega));
    CAPTURE(render(env));
    CHECK(check_win(omega, env, a).decision == oracle_check_win(omega, env, a, space));
    CHECK(check_weak(omega, env, a).decision == oracle_check_weak(omega, env, a, space));
    CHECK(check_dom(omega, env, a).decision == oracle_check_dom(omega, env, a, space));
    CHECK(check_be(omega, env, a).decision == oracle_check_be(omega, env, a, space));
    CHECK(exists_weak(omega, env, p).decision == oracle_exists_weak(omega, env, space));
    ++done;
  }
}

TEST_CASE("diagnostics carry sizes and regions") {
  Plant x;
  Verdict v = check_be(x.phi2, x.e1, sigma2());
  CHECK(v.diagnostics.automaton_sizes.count("game"));
  CHECK(v.diagnostics.region_sizes.count("agent_win"));
  CHECK(v.diagnostics.wall_time_ms >= 0.0);
}

}  // TEST_SUITE
