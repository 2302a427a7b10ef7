#include "rescheck/games.hpp"

#include <stdexcept>

namespace rescheck {

namespace {

struct LetterSplit {
  std::vector<std::vector<Letter>> joint;  // [agent letter index] -> joint letters
  int agent_letters;
};

LetterSplit split_letters(const Dfa& d) {
  if (d.alphabet.kind() != Alphabet::Kind::Single) {
    throw std::invalid_argument("games are played over single-track alphabets");
  }
  const AtomPartition& p = d.alphabet.partition();
  int ny = p.agent_count(), nx = p.env_count();
  LetterSplit out;
  out.agent_letters = 1 << ny;
  out.joint.resize(static_cast<size_t>(out.agent_letters));
  for (int y = 0; y < (1 << ny); ++y) {
    for (int x = 0; x < (1 << nx); ++x) {
      out.joint[static_cast<size_t>(y)].push_back(
          static_cast<Letter>(y) | (static_cast<Letter>(x) << ny));
    }
  }
  return out;
}

}  // namespace

std::vector<bool> env_win_region(const Dfa& d) {
  if (!initial_has_no_incoming(d)) {
    throw std::logic_error("env_win_region requires an initial state without incoming edges");
  }
  LetterSplit ls = split_letters(d);
  std::vector<bool> in(static_cast<size_t>(d.num_states));
  for (int s = 0; s < d.num_states; ++s) {
    in[static_cast<size_t>(s)] = d.final[static_cast<size_t>(s)] || s == d.initial;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < d.num_states; ++s) {
      if (!in[static_cast<size_t>(s)]) continue;
      bool ok = true;
      for (int y = 0; y < ls.agent_letters && ok; ++y) {
        bool some = false;
        for (Letter l : ls.joint[static_cast<size_t>(y)]) {
          int t = d.next[static_cast<size_t>(s)][l];
          if (t >= 0 && in[static_cast<size_t>(t)]) {
            some = true;
            break;
          }
        }
        ok = some;
      }
      if (!ok) {
        in[static_cast<size_t>(s)] = false;
        changed = true;
      }
    }
  }
  return in;
}

std::vector<bool> agent_win_region(const GameArena& g) {
  const Dfa& d = g.dfa;
  LetterSplit ls = split_letters(d);
  std::vector<bool> win(static_cast<size_t>(d.num_states), false);
  for (int s = 0; s < d.num_states; ++s) win[static_cast<size_t>(s)] = d.final[static_cast<size_t>(s)];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < d.num_states; ++s) {
      if (win[static_cast<size_t>(s)]) continue;
      bool can = false;
      for (int y = 0; y < ls.agent_letters && !can; ++y) {
        bool any_defined = false;
        bool all_win = true;
        for (Letter l : ls.joint[static_cast<size_t>(y)]) {
          int t = d.next[static_cast<size_t>(s)][l];
          if (t < 0) continue;
          any_defined = true;
          if (!win[static_cast<size_t>(t)]) {
            all_win = false;
            break;
          }
        }
        can = any_defined && all_win;
      }
      if (can) {
        win[static_cast<size_t>(s)] = true;
        changed = true;
      }
    }
  }
  return win;
}

std::vector<bool> weak_region(const GameArena& g) {
  const Dfa& d = g.dfa;
  std::vector<bool> weak(static_cast<size_t>(d.num_states), false);
  for (int s = 0; s < d.num_states; ++s) weak[static_cast<size_t>(s)] = d.final[static_cast<size_t>(s)];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < d.num_states; ++s) {
      if (weak[static_cast<size_t>(s)]) continue;
      for (int l = 0; l < d.alphabet.letter_count(); ++l) {
        int t = d.next[static_cast<size_t>(s)][static_cast<size_t>(l)];
        if (t >= 0 && weak[static_cast<size_t>(t)]) {
          weak[static_cast<size_t>(s)] = true;
          changed = true;
          break;
        }
      }
    }
  }
  return weak;
}

std::vector<StateValue> state_values(const GameArena& g) {
  std::vector<bool> win = agent_win_region(g);
  std::vector<bool> weak = weak_region(g);
  std::vector<StateValue> out(static_cast<size_t>(g.dfa.num_states), StateValue::Losing);
  for (int s = 0; s < g.dfa.num_states; ++s) {
    if (win[static_cast<size_t>(s)]) {
      out[static_cast<size_t>(s)] = StateValue::Winning;
    } else if (weak[static_cast<size_t>(s)]) {
      out[static_cast<size_t>(s)] = StateValue::Pending;
    }
  }
  return out;
}

}  // namespace rescheck
