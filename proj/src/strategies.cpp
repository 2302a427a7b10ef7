#include "rescheck/strategies.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace rescheck {

void AgentStrategy::check_well_formed() const {
  if (num_states <= 0) throw ValidationError("agent strategy has no states");
  if (initial < 0 || initial >= num_states) throw ValidationError("agent strategy: bad initial state");
  if (terminating[static_cast<size_t>(initial)]) {
    throw ValidationError("agent strategy: initial state may not be terminating (plays are nonempty)");
  }
  bool any_term = false;
  for (int s = 0; s < num_states; ++s) {
    any_term = any_term || terminating[static_cast<size_t>(s)];
    if ((output[static_cast<size_t>(s)] & ~partition.agent_mask()) != 0) {
      throw ValidationError("agent strategy: output is not an agent letter");
    }
    if (terminating[static_cast<size_t>(s)]) continue;
    if (next[static_cast<size_t>(s)].size() != static_cast<size_t>(env_letter_count())) {
      throw ValidationError("agent strategy: transition table not total on environment letters");
    }
    for (int t : next[static_cast<size_t>(s)]) {
      if (t < 0 || t >= num_states) {
        throw ValidationError("agent strategy: missing or invalid transition");
      }
    }
  }
  if (!any_term) throw ValidationError("agent strategy: no terminating state");
}

void EnvStrategy::check_well_formed() const {
  if (num_states <= 0) throw ValidationError("environment strategy has no states");
  if (initial < 0 || initial >= num_states) throw ValidationError("environment strategy: bad initial state");
  int agent_letters = 1 << partition.agent_count();
  for (int s = 0; s < num_states; ++s) {
    if (next[static_cast<size_t>(s)].size() != static_cast<size_t>(agent_letters) ||
        output[static_cast<size_t>(s)].size() != static_cast<size_t>(agent_letters)) {
      throw ValidationError("environment strategy: table not total on agent letters");
    }
    for (int t : next[static_cast<size_t>(s)]) {
      if (t < 0 || t >= num_states) throw ValidationError("environment strategy: invalid transition");
    }
    for (Letter x : output[static_cast<size_t>(s)]) {
      if ((x & ~partition.env_mask()) != 0) {
        throw ValidationError("environment strategy: output is not an environment letter");
      }
    }
  }
}

StoppingReport validate_stopping(const AgentStrategy& a) {
  a.check_well_formed();
  // Colors: 0 unvisited, 1 on stack, 2 done. Terminating states cut the walk.
  std::vector<int> color(static_cast<size_t>(a.num_states), 0);
  std::vector<int> stack;
  StoppingReport report;

  struct Frame {
    int state;
    int next_input;
  };
  std::vector<Frame> frames;
  frames.push_back({a.initial, 0});
  color[static_cast<size_t>(a.initial)] = 1;
  stack.push_back(a.initial);
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.next_input >= a.env_letter_count()) {
      color[static_cast<size_t>(f.state)] = 2;
      stack.pop_back();
      frames.pop_back();
      continue;
    }
    int t = a.next[static_cast<size_t>(f.state)][static_cast<size_t>(f.next_input++)];
    if (a.terminating[static_cast<size_t>(t)]) continue;
    if (color[static_cast<size_t>(t)] == 1) {
      report.ok = false;
      auto it = std::find(stack.begin(), stack.end(), t);
      report.lasso.assign(it, stack.end());
      report.lasso.push_back(t);
      return report;
    }
    if (color[static_cast<size_t>(t)] == 0) {
      color[static_cast<size_t>(t)] = 1;
      stack.push_back(t);
      frames.push_back({t, 0});
    }
  }
  return report;
}

Trace play(const AgentStrategy& a, const EnvStrategy& e) {
  if (a.partition != e.partition) throw ValidationError("play: partition mismatch");
  if (!validate_stopping(a).ok) throw ValidationError("play: agent strategy is not stopping");
  e.check_well_formed();
  const AtomPartition& p = a.partition;
  Trace t(p, {});
  int sa = a.initial, se = e.initial;
  while (true) {
    Letter y = a.output[static_cast<size_t>(sa)];
    int agent_index = static_cast<int>(y);
    Letter x = e.output[static_cast<size_t>(se)][static_cast<size_t>(agent_index)];
    t.append(p.combine(y, x));
    se = e.next[static_cast<size_t>(se)][static_cast<size_t>(agent_index)];
    sa = a.next[static_cast<size_t>(sa)][static_cast<size_t>(a.env_index(x))];
    if (a.terminating[static_cast<size_t>(sa)]) break;
  }
  return t;
}

int longest_play(const AgentStrategy& a) {
  if (!validate_stopping(a).ok) throw ValidationError("longest_play: strategy is not stopping");
  // Longest path in the non-terminating DAG, counted in emitted letters.
  std::vector<int> memo(static_cast<size_t>(a.num_states), -1);
  auto depth = [&](auto&& self, int s) -> int {
    if (a.terminating[static_cast<size_t>(s)]) return 0;
    int& m = memo[static_cast<size_t>(s)];
    if (m >= 0) return m;
    int best = 0;
    for (int t : a.next[static_cast<size_t>(s)]) best = std::max(best, self(self, t));
    m = 1 + best;
    return m;
  };
  return depth(depth, a.initial);
}

bool is_consistent(const History& h, const AgentStrategy& a, bool require_stop) {
  if (h.empty()) throw ValidationError("is_consistent: history must be nonempty");
  if (h.partition() != a.partition) throw ValidationError("is_consistent: partition mismatch");
  int s = a.initial;
  for (int i = 0; i < h.length(); ++i) {
    if (a.terminating[static_cast<size_t>(s)]) return false;  // the strategy stopped before h did
    if (a.partition.agent_part(h.letter(i)) != a.output[static_cast<size_t>(s)]) return false;
    s = a.next[static_cast<size_t>(s)][static_cast<size_t>(a.env_index(a.partition.env_part(h.letter(i))))];
  }
  if (require_stop && !a.terminating[static_cast<size_t>(s)]) return false;
  return true;
}

Dfa strategy_dfa(const AgentStrategy& a) {
  if (!validate_stopping(a).ok) throw ValidationError("strategy_dfa: strategy is not stopping");
  Dfa d;
  d.alphabet = Alphabet::single(a.partition);
  for (int s = 0; s < a.num_states; ++s) d.add_state(a.terminating[static_cast<size_t>(s)]);
  int sink = d.add_state(false);
  for (int l = 0; l < d.alphabet.letter_count(); ++l) d.set_edge(sink, static_cast<Letter>(l), sink);
  for (int s = 0; s < a.num_states; ++s) {
    if (a.terminating[static_cast<size_t>(s)]) {
      // The play ended here; any further letter is not part of a play.
      for (int l = 0; l < d.alphabet.letter_count(); ++l) d.set_edge(s, static_cast<Letter>(l), sink);
      continue;
    }
    for (int l = 0; l < d.alphabet.letter_count(); ++l) {
      Letter letter = static_cast<Letter>(l);
      if (a.partition.agent_part(letter) != a.output[static_cast<size_t>(s)]) {
        d.set_edge(s, letter, sink);
      } else {
        d.set_edge(s, letter,
                   a.next[static_cast<size_t>(s)][static_cast<size_t>(a.env_index(a.partition.env_part(letter)))]);
      }
    }
  }
  d.initial = a.initial;
  return d;
}

Dfa env_strategy_dfa(const EnvStrategy& e) {
  e.check_well_formed();
  Dfa d;
  d.alphabet = Alphabet::single(e.partition);
  for (int s = 0; s < e.num_states; ++s) d.add_state(true);
  int sink = d.add_state(false);
  for (int l = 0; l < d.alphabet.letter_count(); ++l) d.set_edge(sink, static_cast<Letter>(l), sink);
  for (int s = 0; s < e.num_states; ++s) {
    for (int l = 0; l < d.alphabet.letter_count(); ++l) {
      Letter letter = static_cast<Letter>(l);
      int agent_index = static_cast<int>(e.partition.agent_part(letter));
      Letter expected = e.output[static_cast<size_t>(s)][static_cast<size_t>(agent_index)];
      if (e.partition.env_part(letter) == expected) {
        d.set_edge(s, letter, e.next[static_cast<size_t>(s)][static_cast<size_t>(agent_index)]);
      } else {
        d.set_edge(s, letter, sink);
      }
    }
  }
  d.initial = e.initial;
  return d;
}

bool env_enforces(const EnvStrategy& e, const Formula& env_spec) {
  e.check_well_formed();
  Dfa spec = to_dfa(env_spec, e.partition);
  // Walk the synchronized product under every agent letter; all states
  // reached after at least one step must be accepting.
  std::deque<std::pair<int, int>> work{{e.initial, spec.initial}};
  std::vector<bool> seen(static_cast<size_t>(e.num_states) * static_cast<size_t>(spec.num_states), false);
  auto key = [&](int se, int ss) {
    return static_cast<size_t>(se) * static_cast<size_t>(spec.num_states) + static_cast<size_t>(ss);
  };
  seen[key(e.initial, spec.initial)] = true;
  int agent_letters = 1 << e.partition.agent_count();
  while (!work.empty()) {
    auto [se, ss] = work.front();
    work.pop_front();
    for (int y = 0; y < agent_letters; ++y) {
      Letter x = e.output[static_cast<size_t>(se)][static_cast<size_t>(y)];
      Letter joint = e.partition.combine(static_cast<Letter>(y), x);
      int t = spec.next[static_cast<size_t>(ss)][joint];
      if (t < 0 || !spec.final[static_cast<size_t>(t)]) return false;
      int te = e.next[static_cast<size_t>(se)][static_cast<size_t>(y)];
      if (!seen[key(te, t)]) {
        seen[key(te, t)] = true;
        work.emplace_back(te, t);
      }
    }
  }
  return true;
}

}  // namespace rescheck
