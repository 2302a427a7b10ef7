#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rescheck {

/// A letter is a bit vector over an atom ordering (agent atoms first, then
/// environment atoms; joint pair alphabets append primed copies and end flags).
using Letter = std::uint32_t;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Raised for malformed inputs: undeclared atoms, empty traces, non-total
/// machines, inconsistent histories, non-enforceable specifications.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Disjoint atom sets controlled by the agent and the environment.
/// The total ordering (agent atoms in declaration order, then environment
/// atoms) fixes the bit layout of every Letter.
class AtomPartition {
 public:
  AtomPartition() = default;
  AtomPartition(std::vector<std::string> agent_atoms, std::vector<std::string> env_atoms);

  int agent_count() const { return static_cast<int>(agent_.size()); }
  int env_count() const { return static_cast<int>(env_.size()); }
  int atom_count() const { return agent_count() + env_count(); }

  const std::vector<std::string>& agent_atoms() const { return agent_; }
  const std::vector<std::string>& env_atoms() const { return env_; }

  /// Global bit index of an atom, or nullopt if undeclared.
  std::optional<int> index_of(const std::string& name) const;
  bool is_agent(const std::string& name) const;
  const std::string& atom_name(int index) const;

  Letter agent_mask() const { return (Letter{1} << agent_count()) - 1; }
  Letter env_mask() const { return ((Letter{1} << atom_count()) - 1) & ~agent_mask(); }

  Letter agent_part(Letter l) const { return l & agent_mask(); }
  Letter env_part(Letter l) const { return l & env_mask(); }
  Letter combine(Letter agent_bits, Letter env_bits_shifted) const {
    return (agent_bits & agent_mask()) | (env_bits_shifted & env_mask());
  }

  /// Same shape with every atom renamed to its primed twin (name + "'").
  AtomPartition primed() const;

  bool operator==(const AtomPartition& o) const { return agent_ == o.agent_ && env_ == o.env_; }
  bool operator!=(const AtomPartition& o) const { return !(*this == o); }

 private:
  std::vector<std::string> agent_;
  std::vector<std::string> env_;
};

enum class Op {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Implies,
  Next,
  WeakNext,
  Until,
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  Op op;
  std::string atom;  // Op::Atom only
  Formula lhs;
  Formula rhs;
};

Formula f_true();
Formula f_false();
Formula f_atom(std::string name);
Formula f_not(Formula a);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_implies(Formula a, Formula b);
Formula f_next(Formula a);
Formula f_weak_next(Formula a);
Formula f_until(Formula a, Formula b);
/// F a == true U a
Formula f_eventually(Formula a);
/// G a == !(true U !a)
Formula f_always(Formula a);

bool equal(const Formula& a, const Formula& b);

/// Number of distinct subformulas.
int size(const Formula& f);

/// All atom names occurring in f, in first-occurrence order.
std::vector<std::string> atoms_of(const Formula& f);

/// A finite trace of joint letters. Length zero is representable but rejected
/// by evaluate (satisfaction needs position 0).
class Trace {
 public:
  Trace() = default;
  Trace(AtomPartition partition, std::vector<Letter> letters);

  const AtomPartition& partition() const { return partition_; }
  const std::vector<Letter>& letters() const { return letters_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool empty() const { return letters_.empty(); }
  /// lst(pi) = |pi| - 1.
  int last_index() const { return length() - 1; }
  Letter letter(int i) const { return letters_.at(static_cast<size_t>(i)); }

  Trace prefix(int len) const;
  void append(Letter l) { letters_.push_back(l); }

  bool operator==(const Trace& o) const {
    return partition_ == o.partition_ && letters_ == o.letters_;
  }

 private:
  AtomPartition partition_;
  std::vector<Letter> letters_;
};

/// Histories are nonempty traces; validated at use sites.
using History = Trace;

/// Parse text to an AST. F/G expand into the until core at parse time.
/// Word spellings not/and/or/implies are accepted alongside ! & | ->.
Formula parse(const std::string& text, const AtomPartition& partition);

/// As parse, but identifiers that are not declared atoms are looked up
/// through the resolver (named formulas substitute their ASTs).
using IdentifierResolver = std::function<std::optional<Formula>(const std::string&)>;
Formula parse(const std::string& text, const AtomPartition& partition,
              const IdentifierResolver& resolver);

/// Renders with minimal parentheses; re-sugars F/G when the pattern matches.
/// parse(render(f)) == f up to associativity normalization.
std::string render(const Formula& f);

/// pi, i |= f. Throws ValidationError on an empty trace, std::out_of_range on
/// a bad index.
bool evaluate(const Formula& f, const Trace& t, int i);
inline bool satisfies(const Formula& f, const Trace& t) { return evaluate(f, t, 0); }

/// Same AST shape with every atom replaced by its primed twin.
Formula prime_copy(const Formula& f, const AtomPartition& partition);

/// The environment specification pinning exactly the environment behavior of
/// history h: a conjunction of guarded steps (Y_0 and ... and weak-next^i Y_i)
/// -> weak-next^i X_i, where Y_i/X_i are full literal conjunctions fixing every
/// atom of their side at step i. Nesting uses weak next.
Formula history_to_env_spec(const History& h);

std::string letter_to_string(const AtomPartition& p, Letter l);
std::string trace_to_string(const Trace& t);

}  // namespace rescheck
