#pragma once

#include <random>
#include <vector>

#include "rescheck/ltlf.hpp"

namespace rescheck::testutil {

inline AtomPartition wr() { return AtomPartition({"w"}, {"r"}); }

/// All traces over p with 1 <= length <= max_len, lexicographic.
inline std::vector<Trace> all_traces(const AtomPartition& p, int max_len) {
  std::vector<Trace> out;
  int letters = 1 << p.atom_count();
  std::vector<std::vector<Letter>> frontier{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<Letter>> next_frontier;
    for (const auto& w : frontier) {
      for (int l = 0; l < letters; ++l) {
        auto w2 = w;
        w2.push_back(static_cast<Letter>(l));
        out.emplace_back(p, w2);
        next_frontier.push_back(std::move(w2));
      }
    }
    frontier = std::move(next_frontier);
  }
  return out;
}

/// Random formula over p with bounded depth; all operators reachable.
inline Formula random_formula(std::mt19937& rng, const AtomPartition& p, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 3 : 11);
  auto atom = [&] {
    std::uniform_int_distribution<int> which(0, p.atom_count() - 1);
    return f_atom(p.atom_name(which(rng)));
  };
  switch (pick(rng)) {
    case 0: return f_true();
    case 1: return f_false();
    case 2:
    case 3: return atom();
    case 4: return f_not(random_formula(rng, p, depth - 1));
    case 5: return f_and(random_formula(rng, p, depth - 1), random_formula(rng, p, depth - 1));
    case 6: return f_or(random_formula(rng, p, depth - 1), random_formula(rng, p, depth - 1));
    case 7: return f_implies(random_formula(rng, p, depth - 1), random_formula(rng, p, depth - 1));
    case 8: return f_next(random_formula(rng, p, depth - 1));
    case 9: return f_weak_next(random_formula(rng, p, depth - 1));
    case 10: return f_until(random_formula(rng, p, depth - 1), random_formula(rng, p, depth - 1));
    default: return f_eventually(random_formula(rng, p, depth - 1));
  }
}

/// A corpus touching every operator and some nesting, over {w}/{r}.
inline std::vector<std::string> formula_corpus() {
  return {
      "true",
      "false",
      "w",
      "r",
      "!w",
      "w & r",
      "w | r",
      "w -> r",
      "X r",
      "WX r",
      "w U r",
      "F w",
      "G r",
      "F (w | r)",
      "G (w -> r)",
      "G !(w | r)",
      "X true",
      "X (X r)",
      "WX (WX w)",
      "w U (r U w)",
      "(w U r) U w",
      "F (w & X r)",
      "G (w | X w)",
      "!(w U r)",
      "F w & F r",
      "F w | G !r",
      "(w -> X r) & (r -> X w)",
      "G (w -> WX r)",
      "X true & F (w | r)",
      "w & WX false",
  };
}

}  // namespace rescheck::testutil
