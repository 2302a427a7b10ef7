#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rescheck/games.hpp"
#include "rescheck/strategies.hpp"

namespace rescheck {

/// A complete agent decision tree with stop markers: node values are -1
/// (stop) or an agent letter index. The root never stops, depth-H nodes
/// always stop, and everything below a stop is canonically -1 so enumeration
/// is duplicate-free.
struct AgentTree {
  std::vector<std::int8_t> node;
};

/// A complete environment response tree of depth H: one environment letter
/// index per nonempty agent-letter sequence.
struct EnvTree {
  std::vector<std::uint8_t> node;
};

/// Exhaustive, duplicate-free enumerations of bounded strategies for a
/// partition and horizon (maximum play length). This realizes the strategy
/// quantifiers of the definitions at desk scale; it exists to verify the
/// automata pipeline, not to perform.
class BoundedStrategySpace {
 public:
  BoundedStrategySpace(AtomPartition partition, int horizon,
                       double enumeration_cap = 2e6);

  const AtomPartition& partition() const { return partition_; }
  int horizon() const { return horizon_; }
  int agent_letters() const { return 1 << partition_.agent_count(); }
  int env_letters() const { return 1 << partition_.env_count(); }

  const std::vector<AgentTree>& agent_trees() const { return agent_trees_; }
  const std::vector<EnvTree>& env_trees() const { return env_trees_; }

  /// Closed-form counts (doubles; they explode quickly).
  static double agent_tree_count(int agent_letters, int env_letters, int horizon);
  static double env_tree_count(int agent_letters, int env_letters, int horizon);

  AgentStrategy tree_to_strategy(const AgentTree& t) const;

  /// Play of a transducer strategy against a response tree; throws a
  /// horizon-exceeded error if the strategy plays longer than H.
  Trace play_vs_tree(const AgentStrategy& a, const EnvTree& e) const;
  Trace play_trees(const AgentTree& s, const EnvTree& e) const;

  /// Environment responses along h's agent letters equal h's env letters.
  bool tree_consistent_with(const EnvTree& e, const History& h) const;

  // Node indexing (agent trees branch on env letters, env trees on agent
  // letters).
  int agent_node_count() const { return static_cast<int>(agent_offsets_.back()); }
  int env_node_count() const { return static_cast<int>(env_offsets_.back()); }
  int agent_child(int node, int depth, int env_letter) const;
  int env_node(int rank, int len) const {
    return static_cast<int>(env_offsets_[static_cast<size_t>(len - 1)]) + rank;
  }

 private:
  void enumerate_agent_trees(double cap);
  void enumerate_env_trees(double cap);

  AtomPartition partition_;
  int horizon_;
  std::vector<long long> agent_offsets_;  // per depth 0..H+1
  std::vector<long long> env_offsets_;    // per path length 1..H+1
  std::vector<AgentTree> agent_trees_;
  std::vector<EnvTree> env_trees_;
};

/// Bounded environment enforceability: every node of the response tree keeps
/// the growing trace prefix satisfying E (checked by evaluate), and every
/// depth-H frontier state of to_dfa(E) lies in the environment winning
/// region, which closes the horizon.
class EnforcementFilter {
 public:
  EnforcementFilter(const Formula& env_spec, const BoundedStrategySpace& space);
  bool tree_enforces(const EnvTree& e) const;
  /// Indices into space.env_trees() of the enforcing trees.
  const std::vector<int>& enforcing() const { return enforcing_; }

 private:
  const BoundedStrategySpace& space_;
  std::vector<char> prefix_ok_;     // per joint path node
  std::vector<char> frontier_ok_;   // per joint path node at depth H
  std::vector<long long> offsets_;  // joint path offsets per length
  std::vector<int> enforcing_;
};

bool oracle_check_win(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                      const BoundedStrategySpace& space);
bool oracle_check_weak(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                       const BoundedStrategySpace& space);
bool oracle_check_dom(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                      const BoundedStrategySpace& space);
bool oracle_check_be(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                     const BoundedStrategySpace& space);
bool oracle_exists_weak(const Formula& omega, const Formula& env_spec,
                        const BoundedStrategySpace& space);

enum class ResponsibilityKind {
  PassiveAnticipation,                       // PRAnt
  InexcusablePassiveAnticipation,            // IPRAnt
  PassiveAttributionOnHistory,               // PRAttr(h)
  InexcusablePassiveAttributionOnHistory,    // IPRAttr(h)
  Active,                                    // ARA
  PassiveAttributionVsEnv,                   // Definition-1 extension
  InexcusablePassiveAttributionVsEnv,        // Definition-2, oracle only
};

const char* responsibility_kind_name(ResponsibilityKind k);

struct OracleExtras {
  const History* history = nullptr;        // attribution-on-history kinds
  const EnvStrategy* env_strategy = nullptr;  // vs-env kinds
};

/// Literal evaluation of Definitions 1-5 over the bounded space.
bool oracle_responsibility(ResponsibilityKind kind, const Formula& omega,
                           const Formula& env_spec, const AgentStrategy& a,
                           const OracleExtras& extras, const BoundedStrategySpace& space);

/// The enumeration horizon used for universal claims: the reachable state
/// count of the goal-times-restricted-environment product DFA, at least the
/// strategy's longest play and any history length involved. Documented as
/// sufficient, not proven.
int sufficient_horizon(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                       int history_len = 0);
int sufficient_horizon(const Formula& omega, const Formula& env_spec,
                       const AtomPartition& partition, int history_len = 0);

}  // namespace rescheck
