#include "rescheck/responsibility.hpp"

#include <chrono>

namespace rescheck {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

ResponsibilityReport make_report(ResponsibilityKind kind, const Formula& omega,
                                 const Formula& env_spec) {
  ResponsibilityReport r;
  r.kind = kind;
  r.goal = render(omega);
  r.env_spec = render(env_spec);
  return r;
}

Dfa history_conjunction(const Formula& env_spec, const History& h) {
  // A_{E and E_h} = A_E x A_{E_h}; the history automaton is built directly,
  // never by translating the conjunction formula.
  return product(to_dfa(env_spec, h.partition()), history_dfa(h));
}

}  // namespace

ResponsibilityReport ResponsibilityChecker::anticipate_passive(const Formula& omega,
                                                               const Formula& env_spec,
                                                               const AgentStrategy& a) {
  auto start = Clock::now();
  ResponsibilityReport r = make_report(ResponsibilityKind::PassiveAnticipation, omega, env_spec);
  Verdict dom = check_dom(f_not(omega), env_spec, a);
  r.decision = !dom.decision;
  r.parts.emplace_back("check_dom(!goal, env)", std::move(dom));
  r.wall_time_ms = ms_since(start);
  return r;
}

ResponsibilityReport ResponsibilityChecker::anticipate_inexcusable(const Formula& omega,
                                                                   const Formula& env_spec,
                                                                   const AgentStrategy& a) {
  auto start = Clock::now();
  ResponsibilityReport r =
      make_report(ResponsibilityKind::InexcusablePassiveAnticipation, omega, env_spec);
  Verdict be = check_be(f_not(omega), env_spec, a);
  r.decision = !be.decision;
  r.parts.emplace_back("check_be(!goal, env)", std::move(be));
  r.wall_time_ms = ms_since(start);
  return r;
}

ResponsibilityReport ResponsibilityChecker::attribute_passive_on_history(
    const Formula& omega, const Formula& env_spec, const AgentStrategy& a, const History& h,
    bool require_full_play) {
  auto start = Clock::now();
  ResponsibilityReport r =
      make_report(ResponsibilityKind::PassiveAttributionOnHistory, omega, env_spec);
  if (!is_consistent(h, a, require_full_play)) {
    throw ValidationError("history is not consistent with the strategy");
  }
  Verdict dom = check_dom_on(f_not(omega), history_conjunction(env_spec, h), a);
  r.decision = !dom.decision;
  r.parts.emplace_back("check_dom(!goal, env & env_h)", std::move(dom));
  r.wall_time_ms = ms_since(start);
  return r;
}

ResponsibilityReport ResponsibilityChecker::attribute_inexcusable_on_history(
    const Formula& omega, const Formula& env_spec, const AgentStrategy& a, const History& h,
    bool require_full_play) {
  auto start = Clock::now();
  ResponsibilityReport r =
      make_report(ResponsibilityKind::InexcusablePassiveAttributionOnHistory, omega, env_spec);
  if (!is_consistent(h, a, require_full_play)) {
    throw ValidationError("history is not consistent with the strategy");
  }
  Verdict be = check_be_on(f_not(omega), history_conjunction(env_spec, h), a);
  r.decision = !be.decision;
  r.parts.emplace_back("check_be(!goal, env & env_h)", std::move(be));
  r.wall_time_ms = ms_since(start);
  return r;
}

Verdict ResponsibilityChecker::cached_exists_weak(const Formula& omega, const Formula& env_spec,
                                                  const AtomPartition& partition) {
  std::string key = render(omega) + "\x1f" + render(env_spec);
  auto it = exists_weak_cache_.find(key);
  if (it != exists_weak_cache_.end()) {
    ++cache_hits_;
    return it->second;
  }
  Verdict v = exists_weak(omega, env_spec, partition);
  exists_weak_cache_.emplace(std::move(key), v);
  return v;
}

ResponsibilityReport ResponsibilityChecker::active_responsibility(const Formula& omega,
                                                                  const Formula& env_spec,
                                                                  const AgentStrategy& a) {
  auto start = Clock::now();
  ResponsibilityReport r = make_report(ResponsibilityKind::Active, omega, env_spec);
  Verdict win = check_win(omega, env_spec, a);
  Verdict avoidable = cached_exists_weak(f_not(omega), env_spec, a.partition);
  r.decision = win.decision && avoidable.decision;
  r.parts.emplace_back("check_win(goal, env)", std::move(win));
  r.parts.emplace_back("exists_weak(!goal, env)", std::move(avoidable));
  r.wall_time_ms = ms_since(start);
  return r;
}

ResponsibilityReport ResponsibilityChecker::attribute_passive_vs_env(const Formula& omega,
                                                                     const Formula& env_spec,
                                                                     const AgentStrategy& a,
                                                                     const EnvStrategy& e) {
  auto start = Clock::now();
  ResponsibilityReport r = make_report(ResponsibilityKind::PassiveAttributionVsEnv, omega, env_spec);
  if (!env_enforces(e, env_spec)) {
    throw ValidationError("environment strategy does not enforce the specification");
  }
  const AtomPartition& p = a.partition;
  Trace actual = play(a, e);
  bool happened = evaluate(omega, actual, 0);
  Verdict happened_v;
  happened_v.decision = happened;
  happened_v.witness = actual;

  // Could another strategy have prevented omega against exactly this
  // environment? Non-emptiness of the avoiding language within e's behavior.
  Nfa avoid = to_nfa(f_not(omega), p);
  Dfa env_lang = env_strategy_dfa(e);
  Nfa prod = product(avoid, as_nfa(env_lang));
  auto word = non_empty(prod);
  Verdict preventable;
  preventable.decision = word.has_value();
  preventable.diagnostics.automaton_sizes = {{"avoid_nfa", avoid.num_states},
                                             {"env_strategy_dfa", env_lang.num_states},
                                             {"product", prod.num_states}};
  if (word) {
    Trace t(p, *word);
    if (evaluate(omega, t, 0) || !env_lang.accepts(t.letters())) {
      throw std::logic_error("attribute_passive_vs_env: witness fails re-verification");
    }
    preventable.witness = t;
  }

  r.decision = happened && preventable.decision;
  r.parts.emplace_back("play satisfies goal", std::move(happened_v));
  r.parts.emplace_back("preventing play exists", std::move(preventable));
  r.wall_time_ms = ms_since(start);
  return r;
}

ResponsibilityReport anticipate_passive(const Formula& omega, const Formula& env_spec,
                                        const AgentStrategy& a) {
  return ResponsibilityChecker().anticipate_passive(omega, env_spec, a);
}
ResponsibilityReport anticipate_inexcusable(const Formula& omega, const Formula& env_spec,
                                            const AgentStrategy& a) {
  return ResponsibilityChecker().anticipate_inexcusable(omega, env_spec, a);
}
ResponsibilityReport attribute_passive_on_history(const Formula& omega, const Formula& env_spec,
                                                  const AgentStrategy& a, const History& h) {
  return ResponsibilityChecker().attribute_passive_on_history(omega, env_spec, a, h);
}
ResponsibilityReport attribute_inexcusable_on_history(const Formula& omega,
                                                      const Formula& env_spec,
                                                      const AgentStrategy& a, const History& h) {
  return ResponsibilityChecker().attribute_inexcusable_on_history(omega, env_spec, a, h);
}
ResponsibilityReport active_responsibility(const Formula& omega, const Formula& env_spec,
                                           const AgentStrategy& a) {
  return ResponsibilityChecker().active_responsibility(omega, env_spec, a);
}
ResponsibilityReport attribute_passive_vs_env(const Formula& omega, const Formula& env_spec,
                                              const AgentStrategy& a, const EnvStrategy& e) {
  return ResponsibilityChecker().attribute_passive_vs_env(omega, env_spec, a, e);
}

}  // namespace rescheck
