#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rescheck/ltlf.hpp"

namespace rescheck {

/// Which track of a joint pair alphabet an automaton reads.
enum class Track { Unprimed, Primed };

/// Describes the letter layout of an automaton.
///   Single: [agent atoms][env atoms]
///   Joint:  [Y][X][Y'][X'][end][end']  over the base (unprimed) partition.
/// A track-end flag set means that track's segments are zero and ignored; a
/// flag, once raised, stays raised.
class Alphabet {
 public:
  enum class Kind { Single, Joint };

  Alphabet() = default;
  static Alphabet single(AtomPartition p) { return Alphabet(Kind::Single, std::move(p)); }
  static Alphabet joint(AtomPartition base) { return Alphabet(Kind::Joint, std::move(base)); }

  Kind kind() const { return kind_; }
  const AtomPartition& partition() const { return partition_; }

  int width() const {
    int n = partition_.atom_count();
    return kind_ == Kind::Single ? n : 2 * n + 2;
  }
  int letter_count() const { return 1 << width(); }

  // Joint-alphabet helpers.
  Letter end_flag(Track t) const {
    int n = partition_.atom_count();
    return Letter{1} << (t == Track::Unprimed ? 2 * n : 2 * n + 1);
  }
  bool has_end(Letter l, Track t) const { return (l & end_flag(t)) != 0; }
  Letter project(Letter l, Track t) const {
    int n = partition_.atom_count();
    Letter mask = (Letter{1} << n) - 1;
    return t == Track::Unprimed ? (l & mask) : ((l >> n) & mask);
  }
  Letter make_joint(Letter unprimed, Letter primed, bool end_unprimed, bool end_primed) const;
  /// Track-end flags force zero segments and never overlap.
  bool valid_joint(Letter l) const;

  bool operator==(const Alphabet& o) const {
    return kind_ == o.kind_ && partition_ == o.partition_;
  }
  bool operator!=(const Alphabet& o) const { return !(*this == o); }

 private:
  Alphabet(Kind k, AtomPartition p) : kind_(k), partition_(std::move(p)) {}
  Kind kind_ = Kind::Single;
  AtomPartition partition_;
};

struct Nfa {
  Alphabet alphabet;
  int num_states = 0;
  int initial = 0;
  std::vector<std::vector<std::vector<int>>> next;  // [state][letter] -> targets
  std::vector<bool> final;

  int add_state(bool is_final);
  void add_edge(int from, Letter l, int to) { next[from][l].push_back(to); }
  bool accepts(const std::vector<Letter>& word) const;
};

struct Dfa {
  Alphabet alphabet;
  int num_states = 0;
  int initial = 0;
  std::vector<std::vector<int>> next;  // [state][letter] -> target, -1 undefined
  std::vector<bool> final;

  int add_state(bool is_final);
  void set_edge(int from, Letter l, int to) { next[from][l] = to; }
  int step(int state, Letter l) const { return next[state][l]; }
  /// State after reading word, or -1 if a transition is missing.
  int run(const std::vector<Letter>& word) const;
  bool accepts(const std::vector<Letter>& word) const;
  /// Every state on the run of every nonempty prefix is final (the run itself
  /// must be defined).
  bool accepts_all_prefixes(const std::vector<Letter>& word) const;
  std::vector<bool> reachable() const;
};

Nfa as_nfa(const Dfa& d);

/// L = nonempty finite traces satisfying f. Obligation-set construction with a
/// dedicated accepting end state.
Nfa to_nfa(const Formula& f, const AtomPartition& partition);

/// Subset construction; language-equal, deterministic, complete.
Dfa determinize(const Nfa& n);

/// Hopcroft-style (Moore) minimization of a complete DFA.
Dfa minimize(const Dfa& d);

/// determinize(to_nfa(f)), minimized, with the initial state split so it has
/// no incoming transitions (env-win-region computation relies on this).
Dfa to_dfa(const Formula& f, const AtomPartition& partition);

/// Clones the initial state if anything points at it.
Dfa split_initial(const Dfa& d);
bool initial_has_no_incoming(const Dfa& d);

/// Language intersection; reachable product states only. The optional map
/// records which (a, b) state pair each product state stands for.
Nfa product(const Nfa& a, const Nfa& b);
Dfa product(const Dfa& a, const Dfa& b, std::vector<std::pair<int, int>>* state_map = nullptr);

/// Deletes transitions leaving `keep`. States keep their ids; an initial state
/// outside `keep` leaves the automaton with empty behavior (callers check).
Dfa restrict(const Dfa& d, const std::vector<bool>& keep);

/// Shortest accepted word, or nullopt if the language is empty. The witness is
/// re-checked for membership before returning.
std::optional<std::vector<Letter>> non_empty(const Nfa& n);
std::optional<std::vector<Letter>> non_empty(const Dfa& d);

/// The DFA of the history environment spec: a chain of |h|+1 accepting states,
/// an accepting free sink (agent deviated, no constraint) and a non-final
/// violation sink (agent matched Y_i, environment played a different X_i).
/// L = nonempty traces whose every prefix satisfies history_to_env_spec(h).
Dfa history_dfa(const History& h);

/// Two-state DFA over the joint pair alphabet: before the first agent
/// divergence (distinct Y segments, or exactly one track ending) the
/// environment segments must agree; afterwards both tracks are free. Both
/// states accept.
Dfa glue_dfa(const AtomPartition& partition);

/// Lifts a single-track automaton to the joint pair alphabet: a joint word is
/// accepted iff the chosen track's projection, truncated at its end flag, is
/// accepted by n. Empty tracks are rejected; no real letter may follow the end
/// flag.
Nfa lift_to_joint(const Nfa& n, Track track, const AtomPartition& base);

/// Splits an accepted joint word back into the two traces.
std::pair<Trace, Trace> depad(const Alphabet& joint, const std::vector<Letter>& word);

/// GraphViz export; final states are double-circled. Optional per-state
/// annotations appear in the labels.
std::string to_dot(const Dfa& d, const std::string& name,
                   const std::vector<std::string>& state_notes = {});
std::string to_dot(const Nfa& n, const std::string& name);

}  // namespace rescheck
