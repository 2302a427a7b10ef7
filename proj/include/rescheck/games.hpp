#pragma once

#include <vector>

#include "rescheck/automata.hpp"

namespace rescheck {

/// A DFA game: the agent fixes the agent bits of a letter, the environment
/// responds with the environment bits, both land in one transition. The goal
/// set is the DFA's final states.
struct GameArena {
  Dfa dfa;

  const AtomPartition& partition() const { return dfa.alphabet.partition(); }
};

enum class StateValue : int { Losing = -1, Pending = 0, Winning = +1 };

/// Greatest fixpoint of: s in R iff (s is final, or s is the initial state)
/// and for every agent letter Y there is an environment letter X with
/// delta(s, Y|X) in R. The initial state stands for the empty prefix, which
/// is never checked against the specification; this reading requires the
/// initial state to have no incoming transitions, which to_dfa guarantees
/// and this function asserts.
std::vector<bool> env_win_region(const Dfa& d);

/// Least fixpoint of: s in W iff s is a goal state (the agent may stop; the
/// word read so far is accepted) or some agent letter has all defined
/// environment responses landing in W. The arena is expected to be restricted
/// to the environment winning region already.
std::vector<bool> agent_win_region(const GameArena& g);

/// Least fixpoint with both moves existential: s in W' iff s is a goal state
/// or some defined joint letter lands in W'. Superset of agent_win_region.
std::vector<bool> weak_region(const GameArena& g);

/// +1 inside the winning region, 0 in the weak region outside it, -1 elsewhere.
std::vector<StateValue> state_values(const GameArena& g);

}  // namespace rescheck
