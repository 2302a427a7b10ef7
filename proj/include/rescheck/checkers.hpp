#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rescheck/games.hpp"
#include "rescheck/strategies.hpp"

namespace rescheck {

struct Diagnostics {
  std::map<std::string, int> automaton_sizes;
  std::map<std::string, int> region_sizes;
  double wall_time_ms = 0.0;
};

/// A state of the strategy-product game witnessing a best-effort violation,
/// with a letter path from the initial state ending where the strategy can no
/// longer deliver what the position is worth.
struct GamePathWitness {
  int state = -1;
  std::string state_class;  // "winning" or "pending"
  std::vector<Letter> letters;
};

using TracePair = std::pair<Trace, Trace>;
using Witness = std::variant<Trace, TracePair, GamePathWitness>;

struct Verdict {
  bool decision = false;
  std::optional<Witness> witness;
  Diagnostics diagnostics;
};

/// True iff some environment strategy enforces the specification, i.e. the
/// initial state of its DFA lies in the environment winning region.
bool check_env_enforceable(const Formula& env_spec, const AtomPartition& partition);

/// Weak-strategy existence: non-emptiness of goal-NFA x restricted env DFA.
/// Positive verdicts carry a satisfying trace consistent with some enforcing
/// environment strategy.
Verdict exists_weak(const Formula& omega, const Formula& env_spec, const AtomPartition& partition);

/// Is the strategy weak: can it cooperatively reach the goal against some
/// enforcing environment? Positive verdicts carry the cooperating play.
Verdict check_weak(const Formula& omega, const Formula& env_spec, const AgentStrategy& a);

/// Is the strategy winning: negative verdicts carry a refuting play.
Verdict check_win(const Formula& omega, const Formula& env_spec, const AgentStrategy& a);

/// Is the strategy dominant: negative verdicts carry the trace pair (pi not
/// satisfying the goal and consistent with the strategy, pi' satisfying it)
/// jointly realizable by one enforcing environment strategy.
Verdict check_dom(const Formula& omega, const Formula& env_spec, const AgentStrategy& a);

/// Is the strategy best-effort, by the local value characterization over the
/// goal-times-environment game lifted with the strategy DFA.
Verdict check_be(const Formula& omega, const Formula& env_spec, const AgentStrategy& a);

/// Variants over a prebuilt environment automaton (used for E and E_h
/// conjunctions, where the automaton is a product, never a re-translation).
/// The automaton must have an initial state without incoming transitions.
Verdict exists_weak_on(const Formula& omega, const Dfa& env_dfa);
Verdict check_weak_on(const Formula& omega, const Dfa& env_dfa, const AgentStrategy& a);
Verdict check_win_on(const Formula& omega, const Dfa& env_dfa, const AgentStrategy& a);
Verdict check_dom_on(const Formula& omega, const Dfa& env_dfa, const AgentStrategy& a);
Verdict check_be_on(const Formula& omega, const Dfa& env_dfa, const AgentStrategy& a);

}  // namespace rescheck
