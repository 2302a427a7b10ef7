#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rescheck/automata.hpp"

namespace rescheck {

/// A terminating transducer for the agent. The machine outputs an agent
/// letter per state and consumes the environment's simultaneous response; a
/// play ends on entering a terminating state. The initial state may not be
/// terminating (plays are nonempty).
struct AgentStrategy {
  AtomPartition partition;
  int num_states = 0;
  int initial = 0;
  std::vector<Letter> output;            // agent bits per state
  std::vector<std::vector<int>> next;    // [state][env letter index] -> state
  std::vector<bool> terminating;

  int env_letter_count() const { return 1 << partition.env_count(); }
  /// Environment letters arrive as trace bits; indexed by their shifted value.
  int env_index(Letter env_bits) const { return static_cast<int>(env_bits >> partition.agent_count()); }
  void check_well_formed() const;
};

/// An environment transducer; total on its input alphabet (the environment
/// never stops). The output may depend on the simultaneous agent letter.
struct EnvStrategy {
  AtomPartition partition;
  int num_states = 0;
  int initial = 0;
  std::vector<std::vector<int>> next;      // [state][agent letter index] -> state
  std::vector<std::vector<Letter>> output; // [state][agent letter index] -> env bits
  void check_well_formed() const;
};

struct StoppingReport {
  bool ok = true;
  /// A lasso among non-terminating states: stem then cycle (first repeated
  /// state closes the cycle).
  std::vector<int> lasso;
};

/// ok iff the non-terminating subgraph reachable from the initial state is
/// acyclic, i.e. the strategy stops on every input.
StoppingReport validate_stopping(const AgentStrategy& a);

/// The unique joint trace generated by the two machines; ends when the agent
/// enters a terminating state. Requires validate_stopping(a).ok.
Trace play(const AgentStrategy& a, const EnvStrategy& e);

/// Longest play over all environment behaviors (the depth of the
/// non-terminating DAG plus one). Requires validate_stopping(a).ok.
int longest_play(const AgentStrategy& a);

/// True iff every agent letter of h equals a's response to the preceding
/// environment letters. With require_stop, h must additionally be a complete
/// play (a stops right after h); without it h may be a proper prefix.
bool is_consistent(const History& h, const AgentStrategy& a, bool require_stop = false);

/// DFA whose language is the set of complete plays of a: agent bits forced by
/// the outputs, environment bits free, acceptance exactly at stop points.
/// Complete (a rejecting sink absorbs deviating agent bits).
Dfa strategy_dfa(const AgentStrategy& a);

/// DFA accepting exactly the traces consistent with e (the agent may stop
/// anywhere, so every generated prefix is a play).
Dfa env_strategy_dfa(const EnvStrategy& e);

/// True iff every state of the synchronized product of e with to_dfa(E) that
/// is reachable under arbitrary agent letters is accepting, i.e. e enforces E.
bool env_enforces(const EnvStrategy& e, const Formula& env_spec);

}  // namespace rescheck
