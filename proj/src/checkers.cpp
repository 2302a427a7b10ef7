#include "rescheck/checkers.hpp"

#include <chrono>
#include <deque>

namespace rescheck {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct EnvContext {
  Dfa dfa;                   // unrestricted environment automaton
  std::vector<bool> region;  // environment winning region
  Dfa restricted;            // dfa restricted to the region

  explicit EnvContext(const Dfa& env_dfa) : dfa(env_dfa) {
    region = env_win_region(dfa);
    if (!region[static_cast<size_t>(dfa.initial)]) {
      throw ValidationError("environment specification is not enforceable");
    }
    restricted = restrict(dfa, region);
  }

  int region_size() const {
    int n = 0;
    for (bool b : region) n += b;
    return n;
  }

  /// A trace is consistent with some enforcing environment strategy iff its
  /// run stays inside the winning region.
  bool realizable(const Trace& t) const {
    int s = dfa.initial;
    for (Letter l : t.letters()) {
      s = dfa.next[static_cast<size_t>(s)][l];
      if (s < 0 || !region[static_cast<size_t>(s)]) return false;
    }
    return true;
  }
};

[[noreturn]] void bad_witness(const char* op) {
  throw std::logic_error(std::string(op) + ": produced witness fails re-verification");
}

// The literal pair predicate behind the glue automaton: while the agent
// behaves identically in both traces (same letters, neither stopped), the
// environment responses must agree.
bool pair_jointly_realizable(const AtomPartition& p, const Trace& a, const Trace& b) {
  int shorter = std::min(a.length(), b.length());
  for (int i = 0; i < shorter; ++i) {
    if (p.agent_part(a.letter(i)) != p.agent_part(b.letter(i))) return true;
    if (p.env_part(a.letter(i)) != p.env_part(b.letter(i))) return false;
  }
  return true;
}

}  // namespace

bool check_env_enforceable(const Formula& env_spec, const AtomPartition& partition) {
  Dfa d = to_dfa(env_spec, partition);
  return env_win_region(d)[static_cast<size_t>(d.initial)];
}

Verdict exists_weak_on(const Formula& omega, const Dfa& env_dfa) {
  auto start = Clock::now();
  const AtomPartition& p = env_dfa.alphabet.partition();
  EnvContext env(env_dfa);
  Nfa goal = to_nfa(omega, p);
  Nfa prod = product(goal, as_nfa(env.restricted));
  auto word = non_empty(prod);
  Verdict v;
  v.decision = word.has_value();
  v.diagnostics.automaton_sizes = {{"goal_nfa", goal.num_states},
                                   {"env_dfa", env.dfa.num_states},
                                   {"product", prod.num_states}};
  v.diagnostics.region_sizes = {{"env_win", env.region_size()}};
  if (word) {
    Trace t(p, *word);
    if (!evaluate(omega, t, 0) || !env.realizable(t)) bad_witness("exists_weak");
    v.witness = t;
  }
  v.diagnostics.wall_time_ms = ms_since(start);
  return v;
}

Verdict check_weak_on(const Formula& omega, const Dfa& env_dfa, const AgentStrategy& a) {
  auto start = Clock::now();
  const AtomPartition& p = env_dfa.alphabet.partition();
  EnvContext env(env_dfa);
  Nfa goal = to_nfa(omega, p);
  Dfa strat = strategy_dfa(a);
  Nfa prod = product(product(goal, as_nfa(env.restricted)), as_nfa(strat));
  auto word = non_empty(prod);
  Verdict v;
  v.decision = word.has_value();
  v.diagnostics.automaton_sizes = {{"goal_nfa", goal.num_states},
                                   {"env_dfa", env.dfa.num_states},
                                   {"strategy_dfa", strat.num_states},
                                   {"product", prod.num_states}};
  v.diagnostics.region_sizes = {{"env_win", env.region_size()}};
  if (word) {
    Trace t(p, *word);
    if (!evaluate(omega, t, 0) || !env.realizable(t) || !is_consistent(t, a, true)) {
      bad_witness("check_weak");
    }
    v.witness = t;
  }
  v.diagnostics.wall_time_ms = ms_since(start);
  return v;
}

Verdict check_win_on(const Formula& omega, const Dfa& env_dfa, const AgentStrategy& a) {
  auto start = Clock::now();
  const AtomPartition& p = env_dfa.alphabet.partition();
  EnvContext env(env_dfa);
  Nfa refute = to_nfa(f_not(omega), p);
  Dfa strat = strategy_dfa(a);
  Nfa prod = product(product(refute, as_nfa(env.restricted)), as_nfa(strat));
  auto word = non_empty(prod);
  Verdict v;
  v.decision = !word.has_value();
  v.diagnostics.automaton_sizes = {{"refutation_nfa", refute.num_states},
                                   {"env_dfa", env.dfa.num_states},
                                   {"strategy_dfa", strat.num_states},
                                   {"product", prod.num_states}};
  v.diagnostics.region_sizes = {{"env_win", env.region_size()}};
  if (word) {
    Trace t(p, *word);
    if (evaluate(omega, t, 0) || !env.realizable(t) || !is_consistent(t, a, true)) {
      bad_witness("check_win");
    }
    v.witness = t;
  }
  v.diagnostics.wall_time_ms = ms_since(start);
  return v;
}

namespace {

Dfa with_alphabet(Dfa d, const Alphabet& alphabet) {
  if (alphabet.letter_count() != d.alphabet.letter_count()) {
    throw std::logic_error("with_alphabet: width mismatch");
  }
  d.alphabet = alphabet;
  return d;
}

}  // namespace

Verdict check_dom_on(const Formula& omega, const Dfa& env_dfa, const AgentStrategy& a) {
  auto start = Clock::now();
  const AtomPartition& p = env_dfa.alphabet.partition();
  AtomPartition primed = p.primed();
  EnvContext env(env_dfa);
  Dfa strat = strategy_dfa(a);

  // Unprimed track: plays of the input strategy against some enforcing
  // environment, violating the goal.
  Nfa refute = to_nfa(f_not(omega), p);
  Nfa track1 = product(product(refute, as_nfa(env.restricted)), as_nfa(strat));

  // Primed track: some alternative strategy satisfying the primed goal
  // against some enforcing environment. The restricted environment automaton
  // carries over to the primed alphabet unchanged.
  Nfa goal_primed = to_nfa(prime_copy(omega, p), primed);
  Dfa env_primed = with_alphabet(env.restricted, Alphabet::single(primed));
  Nfa track2 = product(goal_primed, as_nfa(env_primed));

  Nfa joint = product(product(as_nfa(glue_dfa(p)), lift_to_joint(track1, Track::Unprimed, p)),
                      lift_to_joint(track2, Track::Primed, p));
  auto word = non_empty(joint);

  Verdict v;
  v.decision = !word.has_value();
  v.diagnostics.automaton_sizes = {{"refutation_nfa", refute.num_states},
                                   {"goal_primed_nfa", goal_primed.num_states},
                                   {"env_dfa", env.dfa.num_states},
                                   {"strategy_dfa", strat.num_states},
                                   {"joint_product", joint.num_states}};
  v.diagnostics.region_sizes = {{"env_win", env.region_size()}};
  if (word) {
    auto [pi, pi_alt] = depad(joint.alphabet, *word);
    if (evaluate(omega, pi, 0) || !evaluate(omega, pi_alt, 0) || !is_consistent(pi, a, true) ||
        !env.realizable(pi) || !env.realizable(pi_alt) ||
        !pair_jointly_realizable(p, pi, pi_alt)) {
      bad_witness("check_dom");
    }
    v.witness = TracePair{pi, pi_alt};
  }
  v.diagnostics.wall_time_ms = ms_since(start);
  return v;
}

Verdict check_be_on(const Formula& omega, const Dfa& env_dfa, const AgentStrategy& a) {
  auto start = Clock::now();
  const AtomPartition& p = env_dfa.alphabet.partition();
  EnvContext env(env_dfa);
  Dfa goal = to_dfa(omega, p);
  Dfa game = product(goal, env.restricted);
  GameArena arena{game};
  std::vector<bool> win = agent_win_region(arena);
  std::vector<bool> weak = weak_region(arena);

  // Paths of the lifted game must all be plays of the strategy, so the
  // strategy DFA is pruned to its co-accessible part: the deviation sink
  // stands for traces the strategy never produces, not for lost plays.
  Dfa strat = strategy_dfa(a);
  {
    std::vector<bool> co(static_cast<size_t>(strat.num_states), false);
    for (int s = 0; s < strat.num_states; ++s) co[static_cast<size_t>(s)] = strat.final[static_cast<size_t>(s)];
    bool grew = true;
    while (grew) {
      grew = false;
      for (int s = 0; s < strat.num_states; ++s) {
        if (co[static_cast<size_t>(s)]) continue;
        for (int t : strat.next[static_cast<size_t>(s)]) {
          if (t >= 0 && co[static_cast<size_t>(t)]) {
            co[static_cast<size_t>(s)] = true;
            grew = true;
            break;
          }
        }
      }
    }
    strat = restrict(strat, co);
  }
  std::vector<std::pair<int, int>> lift;
  Dfa lifted = product(game, strat, &lift);  // all states reachable by construction
  int n = lifted.num_states;
  int letters = lifted.alphabet.letter_count();

  // Backward reachability of the final states inside the lifted game.
  std::vector<std::vector<int>> reverse(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    for (int l = 0; l < letters; ++l) {
      int t = lifted.next[static_cast<size_t>(s)][static_cast<size_t>(l)];
      if (t >= 0) reverse[static_cast<size_t>(t)].push_back(s);
    }
  }
  auto backward = [&](const std::vector<bool>& seed) {
    std::vector<bool> in = seed;
    std::deque<int> work;
    for (int s = 0; s < n; ++s) {
      if (in[static_cast<size_t>(s)]) work.push_back(s);
    }
    while (!work.empty()) {
      int s = work.front();
      work.pop_front();
      for (int q : reverse[static_cast<size_t>(s)]) {
        if (!in[static_cast<size_t>(q)]) {
          in[static_cast<size_t>(q)] = true;
          work.push_back(q);
        }
      }
    }
    return in;
  };
  std::vector<bool> can_accept = backward(lifted.final);
  std::vector<bool> doomed(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) doomed[static_cast<size_t>(s)] = !can_accept[static_cast<size_t>(s)];
  std::vector<bool> can_reach_doomed = backward(doomed);

  int violating = -1;
  std::string state_class;
  for (int s = 0; s < n && violating < 0; ++s) {
    int g = lift[static_cast<size_t>(s)].first;
    if (win[static_cast<size_t>(g)]) {
      // A winning position must never run into a dead end: every extension
      // has to keep acceptance reachable.
      if (can_reach_doomed[static_cast<size_t>(s)]) {
        violating = s;
        state_class = "winning";
      }
    } else if (weak[static_cast<size_t>(g)]) {
      // A pending position must keep at least one accepting continuation.
      if (doomed[static_cast<size_t>(s)]) {
        violating = s;
        state_class = "pending";
      }
    }
  }

  Verdict v;
  v.decision = violating < 0;
  v.diagnostics.automaton_sizes = {{"goal_dfa", goal.num_states},
                                   {"env_dfa", env.dfa.num_states},
                                   {"game", game.num_states},
                                   {"strategy_dfa", strat.num_states},
                                   {"lifted_game", n}};
  int win_n = 0, weak_n = 0;
  for (int s = 0; s < game.num_states; ++s) {
    win_n += win[static_cast<size_t>(s)];
    weak_n += weak[static_cast<size_t>(s)];
  }
  v.diagnostics.region_sizes = {{"env_win", env.region_size()},
                                {"agent_win", win_n},
                                {"weak", weak_n}};
  if (violating >= 0) {
    // Letters from the initial state to the violating state, extended to a
    // doomed state for the winning case.
    auto shortest_path = [&](int from, const std::vector<bool>& targets) {
      std::vector<int> parent(static_cast<size_t>(n), -1);
      std::vector<Letter> via(static_cast<size_t>(n), 0);
      std::vector<bool> seen(static_cast<size_t>(n), false);
      std::deque<int> work{from};
      seen[static_cast<size_t>(from)] = true;
      int found = targets[static_cast<size_t>(from)] ? from : -1;
      while (!work.empty() && found < 0) {
        int s = work.front();
        work.pop_front();
        for (int l = 0; l < letters && found < 0; ++l) {
          int t = lifted.next[static_cast<size_t>(s)][static_cast<size_t>(l)];
          if (t < 0 || seen[static_cast<size_t>(t)]) continue;
          seen[static_cast<size_t>(t)] = true;
          parent[static_cast<size_t>(t)] = s;
          via[static_cast<size_t>(t)] = static_cast<Letter>(l);
          if (targets[static_cast<size_t>(t)]) found = t;
          work.push_back(t);
        }
      }
      std::vector<Letter> path;
      for (int s = found; s >= 0 && s != from; s = parent[static_cast<size_t>(s)]) {
        path.push_back(via[static_cast<size_t>(s)]);
      }
      std::reverse(path.begin(), path.end());
      return std::pair<int, std::vector<Letter>>{found, path};
    };
    std::vector<bool> only_violating(static_cast<size_t>(n), false);
    only_violating[static_cast<size_t>(violating)] = true;
    auto [mid, to_violating] = shortest_path(lifted.initial, only_violating);
    GamePathWitness w;
    w.state = violating;
    w.state_class = state_class;
    w.letters = to_violating;
    if (state_class == "winning") {
      auto [end, tail] = shortest_path(violating, doomed);
      if (end < 0) bad_witness("check_be");
      w.letters.insert(w.letters.end(), tail.begin(), tail.end());
    }
    // Re-verify: the path must be walkable and end in a doomed state.
    int s = lifted.initial;
    for (Letter l : w.letters) {
      s = lifted.next[static_cast<size_t>(s)][l];
      if (s < 0) bad_witness("check_be");
    }
    if (mid != violating || !doomed[static_cast<size_t>(s)]) bad_witness("check_be");
    v.witness = w;
  }
  v.diagnostics.wall_time_ms = ms_since(start);
  return v;
}

Verdict exists_weak(const Formula& omega, const Formula& env_spec, const AtomPartition& partition) {
  return exists_weak_on(omega, to_dfa(env_spec, partition));
}

Verdict check_weak(const Formula& omega, const Formula& env_spec, const AgentStrategy& a) {
  return check_weak_on(omega, to_dfa(env_spec, a.partition), a);
}

Verdict check_win(const Formula& omega, const Formula& env_spec, const AgentStrategy& a) {
  return check_win_on(omega, to_dfa(env_spec, a.partition), a);
}

Verdict check_dom(const Formula& omega, const Formula& env_spec, const AgentStrategy& a) {
  return check_dom_on(omega, to_dfa(env_spec, a.partition), a);
}

Verdict check_be(const Formula& omega, const Formula& env_spec, const AgentStrategy& a) {
  return check_be_on(omega, to_dfa(env_spec, a.partition), a);
}

}  // namespace rescheck
