#include "rescheck/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rescheck {

namespace {

[[noreturn]] void horizon_exceeded(const std::string& what) {
  throw ValidationError("oracle horizon exceeded: " + what);
}

// Packs a trace into a memo key (letters are small).
std::uint64_t trace_key(const Trace& t) {
  std::uint64_t k = 1;
  for (Letter l : t.letters()) k = k * 64 + l + 1;
  return k;
}

class SatMemo {
 public:
  explicit SatMemo(const Formula& f) : f_(f) {}
  bool operator()(const Trace& t) {
    auto [it, inserted] = memo_.try_emplace(trace_key(t), false);
    if (inserted) it->second = evaluate(f_, t, 0);
    return it->second;
  }

 private:
  const Formula& f_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

}  // namespace

BoundedStrategySpace::BoundedStrategySpace(AtomPartition partition, int horizon,
                                           double enumeration_cap)
    : partition_(std::move(partition)), horizon_(horizon) {
  if (horizon_ < 1) throw ValidationError("oracle horizon must be at least 1");
  long long acc = 0;
  long long width = 1;
  agent_offsets_.push_back(0);
  for (int d = 0; d <= horizon_; ++d) {
    acc += width;
    agent_offsets_.push_back(acc);
    width *= env_letters();
  }
  acc = 0;
  width = agent_letters();
  env_offsets_.push_back(0);
  for (int len = 1; len <= horizon_; ++len) {
    acc += width;
    env_offsets_.push_back(acc);
    width *= agent_letters();
  }
  enumerate_agent_trees(enumeration_cap);
  enumerate_env_trees(enumeration_cap);
}

int BoundedStrategySpace::agent_child(int node, int depth, int env_letter) const {
  long long rank = node - agent_offsets_[static_cast<size_t>(depth)];
  return static_cast<int>(agent_offsets_[static_cast<size_t>(depth + 1)] +
                          rank * env_letters() + env_letter);
}

double BoundedStrategySpace::agent_tree_count(int agent_letters, int env_letters, int horizon) {
  // T(H) = 1 (forced stop); T(d) = 1 + agent_letters * T(d+1)^env_letters;
  // the root may not stop.
  double t = 1.0;
  for (int d = horizon - 1; d >= 1; --d) {
    t = 1.0 + agent_letters * std::pow(t, env_letters);
  }
  if (horizon == 0) return 0.0;
  return agent_letters * std::pow(t, env_letters);
}

double BoundedStrategySpace::env_tree_count(int agent_letters, int env_letters, int horizon) {
  double nodes = 0.0;
  double width = agent_letters;
  for (int len = 1; len <= horizon; ++len) {
    nodes += width;
    width *= agent_letters;
  }
  return std::pow(env_letters, nodes);
}

void BoundedStrategySpace::enumerate_agent_trees(double cap) {
  double expected = agent_tree_count(agent_letters(), env_letters(), horizon_);
  if (expected > cap) horizon_exceeded("agent tree enumeration would exceed the budget");
  std::vector<std::int8_t> tree(static_cast<size_t>(agent_node_count()), -1);
  // Decide nodes depth-first; children of a stop stay at the canonical -1.
  struct Pending {
    int node;
    int depth;
  };
  std::vector<Pending> queue;
  auto rec = [&](auto&& self, size_t qpos) -> void {
    if (qpos == queue.size()) {
      agent_trees_.push_back({tree});
      return;
    }
    auto [node, depth] = queue[qpos];
    bool may_stop = depth > 0;
    bool may_continue = depth < horizon_;
    if (may_stop) {
      tree[static_cast<size_t>(node)] = -1;
      self(self, qpos + 1);
    }
    if (!may_continue) return;
    size_t mark = queue.size();
    for (int x = 0; x < env_letters(); ++x) {
      queue.push_back({agent_child(node, depth, x), depth + 1});
    }
    for (int y = 0; y < agent_letters(); ++y) {
      tree[static_cast<size_t>(node)] = static_cast<std::int8_t>(y);
      self(self, qpos + 1);
    }
    tree[static_cast<size_t>(node)] = -1;
    queue.resize(mark);
  };
  queue.push_back({0, 0});
  rec(rec, 0);
}

void BoundedStrategySpace::enumerate_env_trees(double cap) {
  double expected = env_tree_count(agent_letters(), env_letters(), horizon_);
  if (expected > cap) horizon_exceeded("environment tree enumeration would exceed the budget");
  std::vector<std::uint8_t> values(static_cast<size_t>(env_node_count()), 0);
  // Odometer over all assignments.
  while (true) {
    env_trees_.push_back({values});
    size_t i = 0;
    for (; i < values.size(); ++i) {
      if (values[i] + 1 < env_letters()) {
        ++values[i];
        std::fill(values.begin(), values.begin() + static_cast<long>(i), 0);
        break;
      }
    }
    if (i == values.size()) break;
  }
}

AgentStrategy BoundedStrategySpace::tree_to_strategy(const AgentTree& t) const {
  AgentStrategy a;
  a.partition = partition_;
  a.num_states = agent_node_count();
  a.initial = 0;
  a.output.resize(static_cast<size_t>(a.num_states), 0);
  a.terminating.resize(static_cast<size_t>(a.num_states), false);
  a.next.resize(static_cast<size_t>(a.num_states));
  for (int depth = 0, base = 0; depth <= horizon_; ++depth) {
    int width = static_cast<int>(agent_offsets_[static_cast<size_t>(depth + 1)] -
                                 agent_offsets_[static_cast<size_t>(depth)]);
    for (int i = 0; i < width; ++i) {
      int node = base + i;
      std::int8_t v = t.node[static_cast<size_t>(node)];
      if (v < 0) {
        a.terminating[static_cast<size_t>(node)] = true;
      } else {
        a.output[static_cast<size_t>(node)] = static_cast<Letter>(v);
        for (int x = 0; x < env_letters(); ++x) {
          a.next[static_cast<size_t>(node)].push_back(agent_child(node, depth, x));
        }
      }
    }
    base += width;
  }
  return a;
}

Trace BoundedStrategySpace::play_vs_tree(const AgentStrategy& a, const EnvTree& e) const {
  Trace t(partition_, {});
  int s = a.initial;
  long long rank = 0;
  for (int step = 0;; ++step) {
    if (step >= horizon_) horizon_exceeded("strategy plays beyond the space horizon");
    Letter y = a.output[static_cast<size_t>(s)];
    rank = rank * agent_letters() + static_cast<long long>(y);
    Letter x_index = e.node[static_cast<size_t>(env_node(static_cast<int>(rank), step + 1))];
    t.append(partition_.combine(y, x_index << partition_.agent_count()));
    s = a.next[static_cast<size_t>(s)][static_cast<size_t>(x_index)];
    if (a.terminating[static_cast<size_t>(s)]) break;
  }
  return t;
}

Trace BoundedStrategySpace::play_trees(const AgentTree& s, const EnvTree& e) const {
  Trace t(partition_, {});
  int node = 0;
  long long rank = 0;
  for (int depth = 0;; ++depth) {
    std::int8_t y = s.node[static_cast<size_t>(node)];
    if (y < 0) break;  // never at the root
    rank = rank * agent_letters() + y;
    Letter x_index = e.node[static_cast<size_t>(env_node(static_cast<int>(rank), depth + 1))];
    t.append(partition_.combine(static_cast<Letter>(y),
                                static_cast<Letter>(x_index) << partition_.agent_count()));
    node = agent_child(node, depth, static_cast<int>(x_index));
  }
  return t;
}

bool BoundedStrategySpace::tree_consistent_with(const EnvTree& e, const History& h) const {
  if (h.length() > horizon_) horizon_exceeded("history longer than the space horizon");
  long long rank = 0;
  for (int i = 0; i < h.length(); ++i) {
    Letter y = partition_.agent_part(h.letter(i));
    rank = rank * agent_letters() + static_cast<long long>(y);
    Letter expected = static_cast<Letter>(e.node[static_cast<size_t>(env_node(static_cast<int>(rank), i + 1))])
                      << partition_.agent_count();
    if (partition_.env_part(h.letter(i)) != expected) return false;
  }
  return true;
}

EnforcementFilter::EnforcementFilter(const Formula& env_spec, const BoundedStrategySpace& space)
    : space_(space) {
  const AtomPartition& p = space.partition();
  int branch = space.agent_letters() * space.env_letters();
  long long acc = 0, width = 1;
  offsets_.push_back(0);
  for (int len = 1; len <= space.horizon(); ++len) {
    width *= branch;
    acc += width;
    offsets_.push_back(acc);
  }
  prefix_ok_.assign(static_cast<size_t>(acc), 0);
  frontier_ok_.assign(static_cast<size_t>(acc), 0);
  Dfa spec_dfa = to_dfa(env_spec, p);
  std::vector<bool> region = env_win_region(spec_dfa);
  // Walk every joint path once; satisfaction is checked literally on the
  // growing prefix, the DFA state only closes the horizon at the frontier.
  Trace t(p, {});
  auto rec = [&](auto&& self, int depth, long long rank, int dfa_state, bool ok_so_far) -> void {
    if (depth == space.horizon()) return;
    for (int y = 0; y < space.agent_letters(); ++y) {
      for (int x = 0; x < space.env_letters(); ++x) {
        Letter letter = p.combine(static_cast<Letter>(y),
                                  static_cast<Letter>(x) << p.agent_count());
        t.append(letter);
        long long child_rank = rank * branch + y * space.env_letters() + x;
        long long node = offsets_[static_cast<size_t>(depth)] + child_rank;
        bool ok = ok_so_far && evaluate(env_spec, t, 0);
        prefix_ok_[static_cast<size_t>(node)] = ok ? 1 : 0;
        int next_state = spec_dfa.next[static_cast<size_t>(dfa_state)][letter];
        if (depth + 1 == space.horizon()) {
          frontier_ok_[static_cast<size_t>(node)] =
              (ok && next_state >= 0 && region[static_cast<size_t>(next_state)]) ? 1 : 0;
        } else {
          self(self, depth + 1, child_rank, next_state, ok);
        }
        t = t.prefix(depth);
      }
    }
  };
  rec(rec, 0, 0, spec_dfa.initial, true);
  for (size_t i = 0; i < space.env_trees().size(); ++i) {
    if (tree_enforces(space.env_trees()[i])) enforcing_.push_back(static_cast<int>(i));
  }
}

bool EnforcementFilter::tree_enforces(const EnvTree& e) const {
  int branch = space_.agent_letters() * space_.env_letters();
  // DFS over agent letters, following the tree's responses.
  struct Frame {
    int depth;
    long long jrank;
    long long erank;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    for (int y = 0; y < space_.agent_letters(); ++y) {
      long long erank = f.erank * space_.agent_letters() + y;
      int x = e.node[static_cast<size_t>(space_.env_node(static_cast<int>(erank), f.depth + 1))];
      long long jrank = f.jrank * branch + y * space_.env_letters() + x;
      long long node = offsets_[static_cast<size_t>(f.depth)] + jrank;
      if (!prefix_ok_[static_cast<size_t>(node)]) return false;
      if (f.depth + 1 == space_.horizon()) {
        if (!frontier_ok_[static_cast<size_t>(node)]) return false;
      } else {
        stack.push_back({f.depth + 1, jrank, erank});
      }
    }
  }
  return true;
}

namespace {

void check_representable(const AgentStrategy& a, const BoundedStrategySpace& space) {
  if (longest_play(a) > space.horizon()) {
    horizon_exceeded("strategy not representable within the horizon");
  }
}

}  // namespace

bool oracle_check_win(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                      const BoundedStrategySpace& space) {
  check_representable(a, space);
  EnforcementFilter filter(env_spec, space);
  SatMemo sat(omega);
  for (int i : filter.enforcing()) {
    if (!sat(space.play_vs_tree(a, space.env_trees()[static_cast<size_t>(i)]))) return false;
  }
  return true;
}

bool oracle_check_weak(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                       const BoundedStrategySpace& space) {
  check_representable(a, space);
  EnforcementFilter filter(env_spec, space);
  SatMemo sat(omega);
  for (int i : filter.enforcing()) {
    if (sat(space.play_vs_tree(a, space.env_trees()[static_cast<size_t>(i)]))) return true;
  }
  return false;
}

bool oracle_exists_weak(const Formula& omega, const Formula& env_spec,
                        const BoundedStrategySpace& space) {
  EnforcementFilter filter(env_spec, space);
  SatMemo sat(omega);
  for (int i : filter.enforcing()) {
    const EnvTree& e = space.env_trees()[static_cast<size_t>(i)];
    for (const AgentTree& s : space.agent_trees()) {
      if (sat(space.play_trees(s, e))) return true;
    }
  }
  return false;
}

namespace {

// a >= b for omega under the filtered environment set: whenever b satisfies
// omega against e, so does a.
bool dominates(const BoundedStrategySpace& space, const std::vector<int>& enforcing,
               SatMemo& sat, const AgentTree& a, const std::vector<char>& b_sat) {
  for (size_t k = 0; k < enforcing.size(); ++k) {
    if (!b_sat[k]) continue;
    if (!sat(space.play_trees(a, space.env_trees()[static_cast<size_t>(enforcing[k])]))) {
      return false;
    }
  }
  return true;
}

std::vector<char> outcomes_vs(const BoundedStrategySpace& space, const std::vector<int>& enforcing,
                              SatMemo& sat, const AgentStrategy& a) {
  std::vector<char> out(enforcing.size());
  for (size_t k = 0; k < enforcing.size(); ++k) {
    out[k] = sat(space.play_vs_tree(a, space.env_trees()[static_cast<size_t>(enforcing[k])])) ? 1 : 0;
  }
  return out;
}

}  // namespace

bool oracle_check_dom(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                      const BoundedStrategySpace& space) {
  check_representable(a, space);
  EnforcementFilter filter(env_spec, space);
  const auto& enforcing = filter.enforcing();
  SatMemo sat(omega);
  std::vector<char> a_sat = outcomes_vs(space, enforcing, sat, a);
  // a is dominant iff for every alternative sigma' and enforcing e, sigma'
  // winning against e implies a winning against e.
  for (const AgentTree& alt : space.agent_trees()) {
    for (size_t k = 0; k < enforcing.size(); ++k) {
      if (a_sat[k]) continue;
      if (sat(space.play_trees(alt, space.env_trees()[static_cast<size_t>(enforcing[k])]))) {
        return false;
      }
    }
  }
  return true;
}

bool oracle_check_be(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                     const BoundedStrategySpace& space) {
  check_representable(a, space);
  EnforcementFilter filter(env_spec, space);
  const auto& enforcing = filter.enforcing();
  SatMemo sat(omega);
  std::vector<char> a_sat = outcomes_vs(space, enforcing, sat, a);
  // Not best-effort iff some sigma' strictly dominates a.
  for (const AgentTree& alt : space.agent_trees()) {
    bool geq = true, strict = false;
    for (size_t k = 0; k < enforcing.size(); ++k) {
      bool alt_sat = sat(space.play_trees(alt, space.env_trees()[static_cast<size_t>(enforcing[k])]));
      if (a_sat[k] && !alt_sat) {
        geq = false;
        break;
      }
      if (!a_sat[k] && alt_sat) strict = true;
    }
    if (geq && strict) return false;
  }
  return true;
}

const char* responsibility_kind_name(ResponsibilityKind k) {
  switch (k) {
    case ResponsibilityKind::PassiveAnticipation: return "pr-ant";
    case ResponsibilityKind::InexcusablePassiveAnticipation: return "ipr-ant";
    case ResponsibilityKind::PassiveAttributionOnHistory: return "pr-attr";
    case ResponsibilityKind::InexcusablePassiveAttributionOnHistory: return "ipr-attr";
    case ResponsibilityKind::Active: return "ara";
    case ResponsibilityKind::PassiveAttributionVsEnv: return "pr-attr-vs-env";
    case ResponsibilityKind::InexcusablePassiveAttributionVsEnv: return "ipr-attr-vs-env";
  }
  return "?";
}

namespace {

Trace play_tree_vs_transducer(const BoundedStrategySpace& space, const AgentTree& s,
                              const EnvStrategy& e) {
  const AtomPartition& p = space.partition();
  Trace t(p, {});
  int node = 0, se = e.initial;
  for (int depth = 0;; ++depth) {
    std::int8_t y = s.node[static_cast<size_t>(node)];
    if (y < 0) break;
    Letter x = e.output[static_cast<size_t>(se)][static_cast<size_t>(y)];
    se = e.next[static_cast<size_t>(se)][static_cast<size_t>(y)];
    t.append(p.combine(static_cast<Letter>(y), x));
    node = space.agent_child(node, depth, static_cast<int>(x >> p.agent_count()));
  }
  return t;
}

}  // namespace

bool oracle_responsibility(ResponsibilityKind kind, const Formula& omega,
                           const Formula& env_spec, const AgentStrategy& a,
                           const OracleExtras& extras, const BoundedStrategySpace& space) {
  check_representable(a, space);
  SatMemo sat(omega);

  switch (kind) {
    case ResponsibilityKind::PassiveAttributionVsEnv:
    case ResponsibilityKind::InexcusablePassiveAttributionVsEnv: {
      if (!extras.env_strategy) throw ValidationError("vs-env kinds need an environment strategy");
      const EnvStrategy& env = *extras.env_strategy;
      if (!sat(play(a, env))) return false;
      if (kind == ResponsibilityKind::PassiveAttributionVsEnv) {
        for (const AgentTree& alt : space.agent_trees()) {
          if (!sat(play_tree_vs_transducer(space, alt, env))) return true;
        }
        return false;
      }
      // Inexcusable: the alternative must dominate a for avoiding omega.
      EnforcementFilter filter(env_spec, space);
      Formula not_omega = f_not(omega);
      SatMemo avoid(not_omega);
      std::vector<char> a_avoid = outcomes_vs(space, filter.enforcing(), avoid, a);
      for (const AgentTree& alt : space.agent_trees()) {
        if (sat(play_tree_vs_transducer(space, alt, env))) continue;  // does not avoid omega vs env
        if (dominates(space, filter.enforcing(), avoid, alt, a_avoid)) return true;
      }
      return false;
    }
    case ResponsibilityKind::PassiveAnticipation:
    case ResponsibilityKind::InexcusablePassiveAnticipation:
    case ResponsibilityKind::PassiveAttributionOnHistory:
    case ResponsibilityKind::InexcusablePassiveAttributionOnHistory: {
      bool on_history = kind == ResponsibilityKind::PassiveAttributionOnHistory ||
                        kind == ResponsibilityKind::InexcusablePassiveAttributionOnHistory;
      bool inexcusable = kind == ResponsibilityKind::InexcusablePassiveAnticipation ||
                         kind == ResponsibilityKind::InexcusablePassiveAttributionOnHistory;
      if (on_history && !extras.history) throw ValidationError("attribution needs a history");
      // Attribution on a history restricts the environment strategies to
      // those consistent with it, which is exactly enforcing the history
      // spec formula on top of E; the dominance side condition of the
      // inexcusable variant ranges over that restricted set too.
      Formula effective_env = env_spec;
      if (on_history) {
        effective_env = f_and(env_spec, history_to_env_spec(*extras.history));
      }
      EnforcementFilter filter(effective_env, space);
      Formula not_omega = f_not(omega);
      SatMemo avoid(not_omega);
      std::vector<char> a_avoid;
      if (inexcusable) a_avoid = outcomes_vs(space, filter.enforcing(), avoid, a);
      for (int i : filter.enforcing()) {
        const EnvTree& e = space.env_trees()[static_cast<size_t>(i)];
        if (!sat(space.play_vs_tree(a, e))) continue;
        for (const AgentTree& alt : space.agent_trees()) {
          if (sat(space.play_trees(alt, e))) continue;  // alt does not prevent omega vs e
          if (!inexcusable) return true;
          if (dominates(space, filter.enforcing(), avoid, alt, a_avoid)) return true;
        }
      }
      return false;
    }
    case ResponsibilityKind::Active: {
      EnforcementFilter filter(env_spec, space);
      for (int i : filter.enforcing()) {
        if (!sat(space.play_vs_tree(a, space.env_trees()[static_cast<size_t>(i)]))) return false;
      }
      // Not responsible for an inevitable outcome.
      for (int i : filter.enforcing()) {
        const EnvTree& e = space.env_trees()[static_cast<size_t>(i)];
        for (const AgentTree& alt : space.agent_trees()) {
          if (!sat(space.play_trees(alt, e))) return true;
        }
      }
      return false;
    }
  }
  throw std::logic_error("unreachable responsibility kind");
}

int sufficient_horizon(const Formula& omega, const Formula& env_spec,
                       const AtomPartition& partition, int history_len) {
  Dfa goal = to_dfa(omega, partition);
  Dfa env = to_dfa(env_spec, partition);
  Dfa game = product(goal, restrict(env, env_win_region(env)));
  auto reach = game.reachable();
  int states = 0;
  for (int s = 0; s < game.num_states; ++s) states += reach[static_cast<size_t>(s)];
  return std::max({states, 1, history_len});
}

int sufficient_horizon(const Formula& omega, const Formula& env_spec, const AgentStrategy& a,
                       int history_len) {
  // An alternative strategy that dominates a may have to mimic a's longest
  // play and then keep going, so the horizon outlives the strategy by a step
  // on top of the game's state budget.
  return std::max(sufficient_horizon(omega, env_spec, a.partition, history_len),
                  longest_play(a) + 1);
}

}  // namespace rescheck
