#include "rescheck/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace rescheck {

Letter Alphabet::make_joint(Letter unprimed, Letter primed, bool end_unprimed,
                            bool end_primed) const {
  int n = partition_.atom_count();
  Letter l = (unprimed & ((Letter{1} << n) - 1)) | ((primed & ((Letter{1} << n) - 1)) << n);
  if (end_unprimed) l |= end_flag(Track::Unprimed);
  if (end_primed) l |= end_flag(Track::Primed);
  return l;
}

bool Alphabet::valid_joint(Letter l) const {
  if (kind_ != Kind::Joint) return false;
  bool e0 = has_end(l, Track::Unprimed), e1 = has_end(l, Track::Primed);
  if (e0 && e1) return false;
  if (e0 && project(l, Track::Unprimed) != 0) return false;
  if (e1 && project(l, Track::Primed) != 0) return false;
  return true;
}

int Nfa::add_state(bool is_final) {
  next.emplace_back(static_cast<size_t>(alphabet.letter_count()));
  final.push_back(is_final);
  return num_states++;
}

bool Nfa::accepts(const std::vector<Letter>& word) const {
  std::vector<bool> cur(static_cast<size_t>(num_states), false);
  cur[static_cast<size_t>(initial)] = true;
  for (Letter l : word) {
    std::vector<bool> nxt(static_cast<size_t>(num_states), false);
    for (int s = 0; s < num_states; ++s) {
      if (!cur[static_cast<size_t>(s)]) continue;
      for (int t : next[static_cast<size_t>(s)][l]) nxt[static_cast<size_t>(t)] = true;
    }
    cur = std::move(nxt);
  }
  if (word.empty()) return final[static_cast<size_t>(initial)];
  for (int s = 0; s < num_states; ++s) {
    if (cur[static_cast<size_t>(s)] && final[static_cast<size_t>(s)]) return true;
  }
  return false;
}

int Dfa::add_state(bool is_final) {
  next.emplace_back(static_cast<size_t>(alphabet.letter_count()), -1);
  final.push_back(is_final);
  return num_states++;
}

int Dfa::run(const std::vector<Letter>& word) const {
  int s = initial;
  for (Letter l : word) {
    s = next[static_cast<size_t>(s)][l];
    if (s < 0) return -1;
  }
  return s;
}

bool Dfa::accepts(const std::vector<Letter>& word) const {
  int s = run(word);
  return s >= 0 && final[static_cast<size_t>(s)];
}

bool Dfa::accepts_all_prefixes(const std::vector<Letter>& word) const {
  int s = initial;
  for (Letter l : word) {
    s = next[static_cast<size_t>(s)][l];
    if (s < 0 || !final[static_cast<size_t>(s)]) return false;
  }
  return true;
}

std::vector<bool> Dfa::reachable() const {
  std::vector<bool> seen(static_cast<size_t>(num_states), false);
  std::deque<int> work{initial};
  seen[static_cast<size_t>(initial)] = true;
  while (!work.empty()) {
    int s = work.front();
    work.pop_front();
    for (int t : next[static_cast<size_t>(s)]) {
      if (t >= 0 && !seen[static_cast<size_t>(t)]) {
        seen[static_cast<size_t>(t)] = true;
        work.push_back(t);
      }
    }
  }
  return seen;
}

Nfa as_nfa(const Dfa& d) {
  Nfa n;
  n.alphabet = d.alphabet;
  n.initial = d.initial;
  for (int s = 0; s < d.num_states; ++s) n.add_state(d.final[static_cast<size_t>(s)]);
  for (int s = 0; s < d.num_states; ++s) {
    for (int l = 0; l < d.alphabet.letter_count(); ++l) {
      int t = d.next[static_cast<size_t>(s)][static_cast<size_t>(l)];
      if (t >= 0) n.add_edge(s, static_cast<Letter>(l), t);
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// LTLf -> NFA. Negation normal form over {literal, and, or, strong next, weak
// next, until, release}; states are obligation sets; transitions choose a
// minimal set of next-step requests whose truth makes the one-step unfolding of
// the obligations hold under the letter. A dedicated state `acc` absorbs runs
// whose obligations hold with strong requests false and weak requests true,
// i.e. runs that may end with the letter just read.
// ---------------------------------------------------------------------------

namespace {

enum class NOp { True, False, Lit, And, Or, Next, WNext, Until, Release };

struct NnfNode {
  NOp op;
  int atom = -1;        // Lit: global bit index
  bool positive = true; // Lit polarity
  int a = -1, b = -1;
};

class NnfStore {
 public:
  int mk(NnfNode n) {
    std::ostringstream key;
    key << static_cast<int>(n.op) << ':' << n.atom << ':' << n.positive << ':' << n.a << ':'
        << n.b;
    auto [it, inserted] = index_.try_emplace(key.str(), static_cast<int>(nodes_.size()));
    if (inserted) nodes_.push_back(n);
    return it->second;
  }
  const NnfNode& at(int i) const { return nodes_[static_cast<size_t>(i)]; }
  size_t size() const { return nodes_.size(); }

 private:
  std::vector<NnfNode> nodes_;
  std::unordered_map<std::string, int> index_;
};

// A request is (strength, obligation node); encoded as node*2 + strong.
inline int req_code(bool strong, int node) { return node * 2 + (strong ? 1 : 0); }
inline int req_node(int code) { return code / 2; }
inline bool req_strong(int code) { return code % 2 == 1; }

class NfaBuilder {
 public:
  NfaBuilder(const Formula& f, const AtomPartition& p) : partition_(p) {
    root_ = from_formula(f, false);
  }

  Nfa build() {
    Nfa nfa;
    nfa.alphabet = Alphabet::single(partition_);
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> sets;
    auto intern = [&](std::vector<int> set) {
      auto [it, inserted] = ids.try_emplace(set, static_cast<int>(sets.size()));
      if (inserted) sets.push_back(std::move(set));
      return it->second;
    };
    intern(normalize({root_}));
    // Transition rows are filled after all states are known; remember edges.
    std::vector<std::vector<std::pair<Letter, int>>> edges;  // -2 target = acc
    size_t done = 0;
    while (done < sets.size()) {
      if (sets.size() > 20000) throw ValidationError("formula too large for explicit NFA");
      std::vector<int> gamma = sets[done];
      edges.emplace_back();
      std::vector<int> reqs = requests_of_set(gamma);
      if (reqs.size() > 20) throw ValidationError("formula has too many temporal obligations");
      int letters = nfa.alphabet.letter_count();
      for (Letter l = 0; l < static_cast<Letter>(letters); ++l) {
        // Successors for runs that continue.
        std::vector<std::uint32_t> sat;
        for (std::uint32_t mask = 0; mask < (1u << reqs.size()); ++mask) {
          if (eval_set(gamma, l, reqs, mask)) sat.push_back(mask);
        }
        std::vector<std::vector<int>> succs;
        for (std::uint32_t m : sat) {
          bool minimal = true;
          for (std::uint32_t m2 : sat) {
            if (m2 != m && (m2 & m) == m2) {
              minimal = false;
              break;
            }
          }
          if (!minimal) continue;
          std::vector<int> nxt;
          for (size_t r = 0; r < reqs.size(); ++r) {
            if (m & (1u << r)) nxt.push_back(req_node(reqs[r]));
          }
          succs.push_back(normalize(std::move(nxt)));
        }
        std::sort(succs.begin(), succs.end());
        succs.erase(std::unique(succs.begin(), succs.end()), succs.end());
        for (auto& s : succs) edges[done].emplace_back(l, intern(std::move(s)));
        // Runs that end with this letter.
        bool end_ok = true;
        for (int g : gamma) {
          if (!eval_end(g, l)) {
            end_ok = false;
            break;
          }
        }
        if (end_ok) edges[done].emplace_back(l, -2);
      }
      ++done;
    }
    for (size_t s = 0; s < sets.size(); ++s) nfa.add_state(false);
    int acc = nfa.add_state(true);
    for (size_t s = 0; s < sets.size(); ++s) {
      for (auto [l, t] : edges[s]) nfa.add_edge(static_cast<int>(s), l, t == -2 ? acc : t);
    }
    nfa.initial = 0;
    return nfa;
  }

 private:
  int from_formula(const Formula& f, bool negated) {
    switch (f->op) {
      case Op::True: return store_.mk({negated ? NOp::False : NOp::True});
      case Op::False: return store_.mk({negated ? NOp::True : NOp::False});
      case Op::Atom: {
        auto idx = partition_.index_of(f->atom);
        if (!idx) throw ValidationError("undeclared atom '" + f->atom + "'");
        NnfNode n{NOp::Lit};
        n.atom = *idx;
        n.positive = !negated;
        return store_.mk(n);
      }
      case Op::Not: return from_formula(f->lhs, !negated);
      case Op::And: {
        NnfNode n{negated ? NOp::Or : NOp::And};
        n.a = from_formula(f->lhs, negated);
        n.b = from_formula(f->rhs, negated);
        return store_.mk(n);
      }
      case Op::Or: {
        NnfNode n{negated ? NOp::And : NOp::Or};
        n.a = from_formula(f->lhs, negated);
        n.b = from_formula(f->rhs, negated);
        return store_.mk(n);
      }
      case Op::Implies: {
        NnfNode n{negated ? NOp::And : NOp::Or};
        n.a = from_formula(f->lhs, !negated);
        n.b = from_formula(f->rhs, negated);
        return store_.mk(n);
      }
      case Op::Next: {
        NnfNode n{negated ? NOp::WNext : NOp::Next};
        n.a = from_formula(f->lhs, negated);
        return store_.mk(n);
      }
      case Op::WeakNext: {
        NnfNode n{negated ? NOp::Next : NOp::WNext};
        n.a = from_formula(f->lhs, negated);
        return store_.mk(n);
      }
      case Op::Until: {
        NnfNode n{negated ? NOp::Release : NOp::Until};
        n.a = from_formula(f->lhs, negated);
        n.b = from_formula(f->rhs, negated);
        return store_.mk(n);
      }
    }
    throw std::logic_error("unreachable formula op");
  }

  // True members are vacuous; a False member poisons the set.
  std::vector<int> normalize(std::vector<int> set) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    std::vector<int> out;
    for (int n : set) {
      if (store_.at(n).op == NOp::True) continue;
      if (store_.at(n).op == NOp::False) return {store_.mk({NOp::False})};
      out.push_back(n);
    }
    return out;
  }

  const std::vector<int>& requests_of(int node) {
    auto it = requests_memo_.find(node);
    if (it != requests_memo_.end()) return it->second;
    std::vector<int> out;
    const NnfNode& n = store_.at(node);
    auto merge = [&](const std::vector<int>& v) {
      out.insert(out.end(), v.begin(), v.end());
    };
    switch (n.op) {
      case NOp::True:
      case NOp::False:
      case NOp::Lit: break;
      case NOp::And:
      case NOp::Or:
        merge(requests_of(n.a));
        merge(requests_of(n.b));
        break;
      case NOp::Next: out.push_back(req_code(true, n.a)); break;
      case NOp::WNext: out.push_back(req_code(false, n.a)); break;
      case NOp::Until:
        merge(requests_of(n.a));
        merge(requests_of(n.b));
        out.push_back(req_code(true, node));
        break;
      case NOp::Release:
        merge(requests_of(n.a));
        merge(requests_of(n.b));
        out.push_back(req_code(false, node));
        break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return requests_memo_.emplace(node, std::move(out)).first->second;
  }

  std::vector<int> requests_of_set(const std::vector<int>& gamma) {
    std::vector<int> out;
    for (int g : gamma) {
      const auto& r = requests_of(g);
      out.insert(out.end(), r.begin(), r.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool assigned(int code, const std::vector<int>& reqs, std::uint32_t mask) const {
    auto it = std::lower_bound(reqs.begin(), reqs.end(), code);
    size_t pos = static_cast<size_t>(it - reqs.begin());
    return (mask >> pos) & 1u;
  }

  // One-step unfolding of `node` under `l`, with next-step requests fixed by
  // the assignment mask.
  bool eval_xnf(int node, Letter l, const std::vector<int>& reqs, std::uint32_t mask) {
    const NnfNode& n = store_.at(node);
    switch (n.op) {
      case NOp::True: return true;
      case NOp::False: return false;
      case NOp::Lit: return (((l >> n.atom) & 1u) != 0) == n.positive;
      case NOp::And: return eval_xnf(n.a, l, reqs, mask) && eval_xnf(n.b, l, reqs, mask);
      case NOp::Or: return eval_xnf(n.a, l, reqs, mask) || eval_xnf(n.b, l, reqs, mask);
      case NOp::Next: return assigned(req_code(true, n.a), reqs, mask);
      case NOp::WNext: return assigned(req_code(false, n.a), reqs, mask);
      case NOp::Until:
        return eval_xnf(n.b, l, reqs, mask) ||
               (eval_xnf(n.a, l, reqs, mask) && assigned(req_code(true, node), reqs, mask));
      case NOp::Release:
        return eval_xnf(n.b, l, reqs, mask) &&
               (eval_xnf(n.a, l, reqs, mask) || assigned(req_code(false, node), reqs, mask));
    }
    throw std::logic_error("unreachable nnf op");
  }

  bool eval_set(const std::vector<int>& gamma, Letter l, const std::vector<int>& reqs,
                std::uint32_t mask) {
    for (int g : gamma) {
      if (!eval_xnf(g, l, reqs, mask)) return false;
    }
    return true;
  }

  // Unfolding when the word ends with `l`: strong requests fail, weak hold.
  bool eval_end(int node, Letter l) {
    const NnfNode& n = store_.at(node);
    switch (n.op) {
      case NOp::True: return true;
      case NOp::False: return false;
      case NOp::Lit: return (((l >> n.atom) & 1u) != 0) == n.positive;
      case NOp::And: return eval_end(n.a, l) && eval_end(n.b, l);
      case NOp::Or: return eval_end(n.a, l) || eval_end(n.b, l);
      case NOp::Next: return false;
      case NOp::WNext: return true;
      case NOp::Until: return eval_end(n.b, l);
      case NOp::Release: return eval_end(n.b, l);
    }
    throw std::logic_error("unreachable nnf op");
  }

  const AtomPartition& partition_;
  NnfStore store_;
  std::unordered_map<int, std::vector<int>> requests_memo_;
  int root_;
};

}  // namespace

Nfa to_nfa(const Formula& f, const AtomPartition& partition) {
  return NfaBuilder(f, partition).build();
}

Dfa determinize(const Nfa& n) {
  Dfa d;
  d.alphabet = n.alphabet;
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> subsets;
  auto intern = [&](std::vector<int> subset) {
    auto [it, inserted] = ids.try_emplace(subset, static_cast<int>(subsets.size()));
    if (inserted) subsets.push_back(std::move(subset));
    return it->second;
  };
  intern({n.initial});
  size_t done = 0;
  std::vector<std::vector<int>> rows;
  while (done < subsets.size()) {
    if (subsets.size() > 200000) throw ValidationError("subset construction too large");
    std::vector<int> cur = subsets[done];
    rows.emplace_back(static_cast<size_t>(n.alphabet.letter_count()), -1);
    for (int l = 0; l < n.alphabet.letter_count(); ++l) {
      std::vector<int> nxt;
      for (int s : cur) {
        const auto& ts = n.next[static_cast<size_t>(s)][static_cast<size_t>(l)];
        nxt.insert(nxt.end(), ts.begin(), ts.end());
      }
      std::sort(nxt.begin(), nxt.end());
      nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
      rows[done][static_cast<size_t>(l)] = intern(std::move(nxt));
    }
    ++done;
  }
  for (size_t i = 0; i < subsets.size(); ++i) {
    bool fin = false;
    for (int s : subsets[i]) fin = fin || n.final[static_cast<size_t>(s)];
    d.add_state(fin);
  }
  for (size_t i = 0; i < subsets.size(); ++i) {
    for (int l = 0; l < n.alphabet.letter_count(); ++l) {
      d.set_edge(static_cast<int>(i), static_cast<Letter>(l), rows[i][static_cast<size_t>(l)]);
    }
  }
  d.initial = 0;
  return d;
}

Dfa minimize(const Dfa& d) {
  for (int s = 0; s < d.num_states; ++s) {
    for (int t : d.next[static_cast<size_t>(s)]) {
      if (t < 0) throw std::logic_error("minimize requires a complete DFA");
    }
  }
  int letters = d.alphabet.letter_count();
  std::vector<int> cls(static_cast<size_t>(d.num_states));
  for (int s = 0; s < d.num_states; ++s) cls[static_cast<size_t>(s)] = d.final[static_cast<size_t>(s)] ? 1 : 0;
  bool changed = true;
  while (changed) {
    std::map<std::vector<int>, int> sig_ids;
    std::vector<int> next_cls(static_cast<size_t>(d.num_states));
    for (int s = 0; s < d.num_states; ++s) {
      std::vector<int> sig;
      sig.reserve(static_cast<size_t>(letters) + 1);
      sig.push_back(cls[static_cast<size_t>(s)]);
      for (int l = 0; l < letters; ++l) {
        sig.push_back(cls[static_cast<size_t>(d.next[static_cast<size_t>(s)][static_cast<size_t>(l)])]);
      }
      auto [it, inserted] = sig_ids.try_emplace(std::move(sig), static_cast<int>(sig_ids.size()));
      next_cls[static_cast<size_t>(s)] = it->second;
      (void)inserted;
    }
    changed = next_cls != cls;
    cls = std::move(next_cls);
  }
  int num_classes = *std::max_element(cls.begin(), cls.end()) + 1;
  Dfa out;
  out.alphabet = d.alphabet;
  std::vector<int> rep(static_cast<size_t>(num_classes), -1);
  for (int s = 0; s < d.num_states; ++s) {
    if (rep[static_cast<size_t>(cls[static_cast<size_t>(s)])] < 0) rep[static_cast<size_t>(cls[static_cast<size_t>(s)])] = s;
  }
  for (int c = 0; c < num_classes; ++c) out.add_state(d.final[static_cast<size_t>(rep[static_cast<size_t>(c)])]);
  for (int c = 0; c < num_classes; ++c) {
    for (int l = 0; l < letters; ++l) {
      int t = d.next[static_cast<size_t>(rep[static_cast<size_t>(c)])][static_cast<size_t>(l)];
      out.set_edge(c, static_cast<Letter>(l), cls[static_cast<size_t>(t)]);
    }
  }
  out.initial = cls[static_cast<size_t>(d.initial)];
  return out;
}

bool initial_has_no_incoming(const Dfa& d) {
  for (int s = 0; s < d.num_states; ++s) {
    for (int t : d.next[static_cast<size_t>(s)]) {
      if (t == d.initial) return false;
    }
  }
  return true;
}

Dfa split_initial(const Dfa& d) {
  if (initial_has_no_incoming(d)) return d;
  Dfa out = d;
  int clone = out.add_state(d.final[static_cast<size_t>(d.initial)]);
  out.next[static_cast<size_t>(clone)] = d.next[static_cast<size_t>(d.initial)];
  out.initial = clone;
  return out;
}

Dfa to_dfa(const Formula& f, const AtomPartition& partition) {
  return split_initial(minimize(determinize(to_nfa(f, partition))));
}

namespace {

inline std::int64_t pair_key(int a, int b, int width_b) {
  return static_cast<std::int64_t>(a) * width_b + b;
}

}  // namespace

Nfa product(const Nfa& a, const Nfa& b) {
  if (a.alphabet != b.alphabet) throw std::invalid_argument("product: alphabet mismatch");
  Nfa out;
  out.alphabet = a.alphabet;
  std::unordered_map<std::int64_t, int> ids;
  std::vector<std::pair<int, int>> states;
  auto intern = [&](int x, int y) {
    auto [it, inserted] = ids.try_emplace(pair_key(x, y, b.num_states), static_cast<int>(states.size()));
    if (inserted) states.emplace_back(x, y);
    return it->second;
  };
  intern(a.initial, b.initial);
  size_t done = 0;
  std::vector<std::vector<std::pair<Letter, int>>> edges;
  while (done < states.size()) {
    auto [x, y] = states[done];
    edges.emplace_back();
    for (int l = 0; l < a.alphabet.letter_count(); ++l) {
      for (int tx : a.next[static_cast<size_t>(x)][static_cast<size_t>(l)]) {
        for (int ty : b.next[static_cast<size_t>(y)][static_cast<size_t>(l)]) {
          edges[done].emplace_back(static_cast<Letter>(l), intern(tx, ty));
        }
      }
    }
    ++done;
  }
  for (auto [x, y] : states) {
    out.add_state(a.final[static_cast<size_t>(x)] && b.final[static_cast<size_t>(y)]);
  }
  for (size_t s = 0; s < states.size(); ++s) {
    for (auto [l, t] : edges[s]) out.add_edge(static_cast<int>(s), l, t);
  }
  out.initial = 0;
  return out;
}

Dfa product(const Dfa& a, const Dfa& b, std::vector<std::pair<int, int>>* state_map) {
  if (a.alphabet != b.alphabet) throw std::invalid_argument("product: alphabet mismatch");
  Dfa out;
  out.alphabet = a.alphabet;
  std::unordered_map<std::int64_t, int> ids;
  std::vector<std::pair<int, int>> states;
  auto intern = [&](int x, int y) {
    auto [it, inserted] = ids.try_emplace(pair_key(x, y, b.num_states), static_cast<int>(states.size()));
    if (inserted) states.emplace_back(x, y);
    return it->second;
  };
  intern(a.initial, b.initial);
  size_t done = 0;
  std::vector<std::vector<int>> rows;
  while (done < states.size()) {
    auto [x, y] = states[done];
    rows.emplace_back(static_cast<size_t>(a.alphabet.letter_count()), -1);
    for (int l = 0; l < a.alphabet.letter_count(); ++l) {
      int tx = a.next[static_cast<size_t>(x)][static_cast<size_t>(l)];
      int ty = b.next[static_cast<size_t>(y)][static_cast<size_t>(l)];
      if (tx >= 0 && ty >= 0) rows[done][static_cast<size_t>(l)] = intern(tx, ty);
    }
    ++done;
  }
  for (auto [x, y] : states) {
    out.add_state(a.final[static_cast<size_t>(x)] && b.final[static_cast<size_t>(y)]);
  }
  for (size_t s = 0; s < states.size(); ++s) {
    for (int l = 0; l < a.alphabet.letter_count(); ++l) {
      out.set_edge(static_cast<int>(s), static_cast<Letter>(l), rows[s][static_cast<size_t>(l)]);
    }
  }
  out.initial = 0;
  if (state_map) *state_map = std::move(states);
  return out;
}

Dfa restrict(const Dfa& d, const std::vector<bool>& keep) {
  if (keep.size() != static_cast<size_t>(d.num_states)) {
    throw std::invalid_argument("restrict: keep set size mismatch");
  }
  Dfa out = d;
  for (int s = 0; s < d.num_states; ++s) {
    for (int l = 0; l < d.alphabet.letter_count(); ++l) {
      int& t = out.next[static_cast<size_t>(s)][static_cast<size_t>(l)];
      if (!keep[static_cast<size_t>(s)] || (t >= 0 && !keep[static_cast<size_t>(t)])) t = -1;
    }
  }
  return out;
}

namespace {

// BFS over words of length >= 1 (traces are nonempty by convention).
std::optional<std::vector<Letter>> shortest_accepted(const Nfa& n) {
  struct Entry {
    int state;
    int parent;  // index into entries, -1 for roots
    Letter letter;
  };
  std::vector<Entry> entries;
  std::vector<bool> seen(static_cast<size_t>(n.num_states), false);
  std::deque<int> work;
  // Roots: states reachable from the initial state by one letter.
  for (int l = 0; l < n.alphabet.letter_count(); ++l) {
    for (int t : n.next[static_cast<size_t>(n.initial)][static_cast<size_t>(l)]) {
      if (!seen[static_cast<size_t>(t)]) {
        seen[static_cast<size_t>(t)] = true;
        entries.push_back({t, -1, static_cast<Letter>(l)});
        work.push_back(static_cast<int>(entries.size()) - 1);
      }
    }
  }
  size_t cursor = 0;
  while (cursor < work.size()) {
    int e = work[cursor++];
    int s = entries[static_cast<size_t>(e)].state;
    if (n.final[static_cast<size_t>(s)]) {
      std::vector<Letter> word;
      for (int i = e; i >= 0; i = entries[static_cast<size_t>(i)].parent) {
        word.push_back(entries[static_cast<size_t>(i)].letter);
      }
      std::reverse(word.begin(), word.end());
      return word;
    }
    for (int l = 0; l < n.alphabet.letter_count(); ++l) {
      for (int t : n.next[static_cast<size_t>(s)][static_cast<size_t>(l)]) {
        if (!seen[static_cast<size_t>(t)]) {
          seen[static_cast<size_t>(t)] = true;
          entries.push_back({t, e, static_cast<Letter>(l)});
          work.push_back(static_cast<int>(entries.size()) - 1);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<Letter>> non_empty(const Nfa& n) {
  auto w = shortest_accepted(n);
  if (w && !n.accepts(*w)) throw std::logic_error("non_empty produced a rejected witness");
  return w;
}

std::optional<std::vector<Letter>> non_empty(const Dfa& d) { return non_empty(as_nfa(d)); }

Dfa history_dfa(const History& h) {
  if (h.empty()) throw ValidationError("history must be nonempty");
  const AtomPartition& p = h.partition();
  Dfa d;
  d.alphabet = Alphabet::single(p);
  int m = h.length();
  for (int i = 0; i <= m; ++i) d.add_state(true);  // chain
  int free_sink = d.add_state(true);
  int violation = d.add_state(false);
  for (int i = 0; i < m; ++i) {
    Letter want_y = p.agent_part(h.letter(i));
    Letter want_x = p.env_part(h.letter(i));
    for (int l = 0; l < d.alphabet.letter_count(); ++l) {
      Letter letter = static_cast<Letter>(l);
      int target;
      if (p.agent_part(letter) != want_y) {
        target = free_sink;  // agent deviated; the spec imposes nothing
      } else if (p.env_part(letter) == want_x) {
        target = i + 1;
      } else {
        target = violation;
      }
      d.set_edge(i, letter, target);
    }
  }
  for (int l = 0; l < d.alphabet.letter_count(); ++l) {
    d.set_edge(m, static_cast<Letter>(l), free_sink);
    d.set_edge(free_sink, static_cast<Letter>(l), free_sink);
    d.set_edge(violation, static_cast<Letter>(l), violation);
  }
  d.initial = 0;
  return d;
}

Dfa glue_dfa(const AtomPartition& partition) {
  Dfa d;
  d.alphabet = Alphabet::joint(partition);
  int pre = d.add_state(true);
  int post = d.add_state(true);
  for (int l = 0; l < d.alphabet.letter_count(); ++l) {
    Letter letter = static_cast<Letter>(l);
    if (!d.alphabet.valid_joint(letter)) continue;
    d.set_edge(post, letter, post);
    bool e0 = d.alphabet.has_end(letter, Track::Unprimed);
    bool e1 = d.alphabet.has_end(letter, Track::Primed);
    if (e0 != e1) {
      d.set_edge(pre, letter, post);  // one track stopped: an agent divergence
      continue;
    }
    Letter u = d.alphabet.project(letter, Track::Unprimed);
    Letter v = d.alphabet.project(letter, Track::Primed);
    if (partition.agent_part(u) != partition.agent_part(v)) {
      d.set_edge(pre, letter, post);
    } else if (partition.env_part(u) == partition.env_part(v)) {
      d.set_edge(pre, letter, pre);
    }
    // same agent move, different environment response: rejected
  }
  d.initial = pre;
  return d;
}

Nfa lift_to_joint(const Nfa& n, Track track, const AtomPartition& base) {
  AtomPartition expected = track == Track::Unprimed ? base : base.primed();
  if (n.alphabet != Alphabet::single(expected)) {
    throw std::invalid_argument("lift_to_joint: automaton alphabet does not match track");
  }
  Nfa out;
  out.alphabet = Alphabet::joint(base);
  int fresh = out.add_state(false);
  for (int s = 0; s < n.num_states; ++s) out.add_state(n.final[static_cast<size_t>(s)]);
  int done = out.add_state(true);
  auto lifted = [](int s) { return s + 1; };
  for (int l = 0; l < out.alphabet.letter_count(); ++l) {
    Letter letter = static_cast<Letter>(l);
    if (!out.alphabet.valid_joint(letter)) continue;
    bool ended = out.alphabet.has_end(letter, track);
    Letter proj = out.alphabet.project(letter, track);
    if (ended) {
      out.add_edge(done, letter, done);
      for (int s = 0; s < n.num_states; ++s) {
        if (n.final[static_cast<size_t>(s)]) out.add_edge(lifted(s), letter, done);
      }
      // No edge from fresh: an empty track is rejected.
    } else {
      for (int t : n.next[static_cast<size_t>(n.initial)][proj]) out.add_edge(fresh, letter, lifted(t));
      for (int s = 0; s < n.num_states; ++s) {
        for (int t : n.next[static_cast<size_t>(s)][proj]) out.add_edge(lifted(s), letter, lifted(t));
      }
    }
  }
  out.initial = fresh;
  return out;
}

std::pair<Trace, Trace> depad(const Alphabet& joint, const std::vector<Letter>& word) {
  if (joint.kind() != Alphabet::Kind::Joint) {
    throw std::invalid_argument("depad expects a joint alphabet");
  }
  std::vector<Letter> u, v;
  for (Letter l : word) {
    if (!joint.has_end(l, Track::Unprimed)) u.push_back(joint.project(l, Track::Unprimed));
    if (!joint.has_end(l, Track::Primed)) v.push_back(joint.project(l, Track::Primed));
  }
  return {Trace(joint.partition(), std::move(u)), Trace(joint.partition(), std::move(v))};
}

namespace {

std::string joint_letter_to_string(const Alphabet& a, Letter l) {
  const AtomPartition& p = a.partition();
  std::string out;
  out += a.has_end(l, Track::Unprimed) ? "#" : letter_to_string(p, a.project(l, Track::Unprimed));
  out += "/";
  out += a.has_end(l, Track::Primed) ? "#" : letter_to_string(p, a.project(l, Track::Primed));
  return out;
}

std::string letter_label(const Alphabet& a, Letter l) {
  return a.kind() == Alphabet::Kind::Single ? letter_to_string(a.partition(), l)
                                            : joint_letter_to_string(a, l);
}

}  // namespace

std::string to_dot(const Dfa& d, const std::string& name,
                   const std::vector<std::string>& state_notes) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n  rankdir=LR;\n  __init [shape=point];\n";
  for (int s = 0; s < d.num_states; ++s) {
    out << "  s" << s << " [shape=" << (d.final[static_cast<size_t>(s)] ? "doublecircle" : "circle")
        << ", label=\"" << s;
    if (static_cast<size_t>(s) < state_notes.size() && !state_notes[static_cast<size_t>(s)].empty()) {
      out << "\\n" << state_notes[static_cast<size_t>(s)];
    }
    out << "\"];\n";
  }
  out << "  __init -> s" << d.initial << ";\n";
  for (int s = 0; s < d.num_states; ++s) {
    std::map<int, std::string> grouped;
    for (int l = 0; l < d.alphabet.letter_count(); ++l) {
      int t = d.next[static_cast<size_t>(s)][static_cast<size_t>(l)];
      if (t < 0) continue;
      std::string& lbl = grouped[t];
      if (!lbl.empty()) lbl += ", ";
      lbl += letter_label(d.alphabet, static_cast<Letter>(l));
    }
    for (const auto& [t, lbl] : grouped) {
      out << "  s" << s << " -> s" << t << " [label=\"" << lbl << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string to_dot(const Nfa& n, const std::string& name) {
  std::ostringstream out;
  out << "digraph \"" << name << "\" {\n  rankdir=LR;\n  __init [shape=point];\n";
  for (int s = 0; s < n.num_states; ++s) {
    out << "  s" << s << " [shape=" << (n.final[static_cast<size_t>(s)] ? "doublecircle" : "circle")
        << "];\n";
  }
  out << "  __init -> s" << n.initial << ";\n";
  for (int s = 0; s < n.num_states; ++s) {
    std::map<int, std::string> grouped;
    for (int l = 0; l < n.alphabet.letter_count(); ++l) {
      for (int t : n.next[static_cast<size_t>(s)][static_cast<size_t>(l)]) {
        std::string& lbl = grouped[t];
        if (!lbl.empty()) lbl += ", ";
        lbl += letter_label(n.alphabet, static_cast<Letter>(l));
      }
    }
    for (const auto& [t, lbl] : grouped) {
      out << "  s" << s << " -> s" << t << " [label=\"" << lbl << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace rescheck
