#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rescheck/checkers.hpp"
#include "rescheck/oracle.hpp"

namespace rescheck {

struct ResponsibilityReport {
  ResponsibilityKind kind;
  bool decision = false;
  std::string goal;      // rendered outcome formula
  std::string env_spec;  // rendered environment specification
  /// Labeled underlying checker verdicts; the decision is their exact
  /// combination per the reduction table.
  std::vector<std::pair<std::string, Verdict>> parts;
  double wall_time_ms = 0.0;
};

/// Responsibility verdicts. A checker instance caches the strategy-independent
/// weak-existence conjunct of active responsibility per (goal, env) pair.
class ResponsibilityChecker {
 public:
  /// PRAnt: not check_dom(!omega, E, a).
  ResponsibilityReport anticipate_passive(const Formula& omega, const Formula& env_spec,
                                          const AgentStrategy& a);
  /// IPRAnt: not check_be(!omega, E, a).
  ResponsibilityReport anticipate_inexcusable(const Formula& omega, const Formula& env_spec,
                                              const AgentStrategy& a);
  /// PRAttr(h): not check_dom(!omega, E and E_h, a); the conjunction automaton
  /// is the product of the two DFAs. The history must be consistent with the
  /// strategy (prefix consistency by default).
  ResponsibilityReport attribute_passive_on_history(const Formula& omega, const Formula& env_spec,
                                                    const AgentStrategy& a, const History& h,
                                                    bool require_full_play = false);
  /// IPRAttr(h): not check_be(!omega, E and E_h, a).
  ResponsibilityReport attribute_inexcusable_on_history(const Formula& omega,
                                                        const Formula& env_spec,
                                                        const AgentStrategy& a, const History& h,
                                                        bool require_full_play = false);
  /// ARA: check_win(omega, E, a) and exists_weak(!omega, E); the second
  /// conjunct rules out responsibility for inevitable outcomes.
  ResponsibilityReport active_responsibility(const Formula& omega, const Formula& env_spec,
                                             const AgentStrategy& a);
  /// Definition-1 attribution against a concrete environment transducer:
  /// the play satisfies omega and some consistent-with-e trace avoids it.
  ResponsibilityReport attribute_passive_vs_env(const Formula& omega, const Formula& env_spec,
                                                const AgentStrategy& a, const EnvStrategy& e);

  int exists_weak_cache_hits() const { return cache_hits_; }

 private:
  Verdict cached_exists_weak(const Formula& omega, const Formula& env_spec,
                             const AtomPartition& partition);
  std::map<std::string, Verdict> exists_weak_cache_;
  int cache_hits_ = 0;
};

/// One-shot helpers.
ResponsibilityReport anticipate_passive(const Formula& omega, const Formula& env_spec,
                                        const AgentStrategy& a);
ResponsibilityReport anticipate_inexcusable(const Formula& omega, const Formula& env_spec,
                                            const AgentStrategy& a);
ResponsibilityReport attribute_passive_on_history(const Formula& omega, const Formula& env_spec,
                                                  const AgentStrategy& a, const History& h);
ResponsibilityReport attribute_inexcusable_on_history(const Formula& omega,
                                                      const Formula& env_spec,
                                                      const AgentStrategy& a, const History& h);
ResponsibilityReport active_responsibility(const Formula& omega, const Formula& env_spec,
                                           const AgentStrategy& a);
ResponsibilityReport attribute_passive_vs_env(const Formula& omega, const Formula& env_spec,
                                              const AgentStrategy& a, const EnvStrategy& e);

}  // namespace rescheck
