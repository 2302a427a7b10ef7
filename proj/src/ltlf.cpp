#include "rescheck/ltlf.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace rescheck {

AtomPartition::AtomPartition(std::vector<std::string> agent_atoms,
                             std::vector<std::string> env_atoms)
    : agent_(std::move(agent_atoms)), env_(std::move(env_atoms)) {
  if (agent_.empty() && env_.empty()) {
    throw ValidationError("atom partition must declare at least one atom");
  }
  std::set<std::string> seen;
  for (const auto& a : agent_) {
    if (!seen.insert(a).second) throw ValidationError("duplicate atom '" + a + "'");
  }
  for (const auto& a : env_) {
    if (!seen.insert(a).second) throw ValidationError("duplicate atom '" + a + "'");
  }
  if (atom_count() > 12) {
    throw ValidationError("explicit-alphabet engine supports at most 12 atoms");
  }
}

std::optional<int> AtomPartition::index_of(const std::string& name) const {
  for (size_t i = 0; i < agent_.size(); ++i) {
    if (agent_[i] == name) return static_cast<int>(i);
  }
  for (size_t i = 0; i < env_.size(); ++i) {
    if (env_[i] == name) return static_cast<int>(agent_.size() + i);
  }
  return std::nullopt;
}

bool AtomPartition::is_agent(const std::string& name) const {
  return std::find(agent_.begin(), agent_.end(), name) != agent_.end();
}

const std::string& AtomPartition::atom_name(int index) const {
  if (index < agent_count()) return agent_[static_cast<size_t>(index)];
  return env_[static_cast<size_t>(index - agent_count())];
}

AtomPartition AtomPartition::primed() const {
  auto prime = [](std::vector<std::string> v) {
    for (auto& s : v) s += "'";
    return v;
  };
  return AtomPartition(prime(agent_), prime(env_));
}

Trace::Trace(AtomPartition partition, std::vector<Letter> letters)
    : partition_(std::move(partition)), letters_(std::move(letters)) {
  const Letter width_mask = (Letter{1} << partition_.atom_count()) - 1;
  for (Letter l : letters_) {
    if ((l & ~width_mask) != 0) throw ValidationError("letter exceeds alphabet width");
  }
}

Trace Trace::prefix(int len) const {
  if (len < 0 || len > length()) throw std::out_of_range("trace prefix length");
  return Trace(partition_, std::vector<Letter>(letters_.begin(), letters_.begin() + len));
}

namespace {

Formula make(Op op, Formula lhs = nullptr, Formula rhs = nullptr, std::string atom = {}) {
  auto node = std::make_shared<FormulaNode>();
  node->op = op;
  node->atom = std::move(atom);
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

}  // namespace

Formula f_true() { return make(Op::True); }
Formula f_false() { return make(Op::False); }
Formula f_atom(std::string name) { return make(Op::Atom, nullptr, nullptr, std::move(name)); }
Formula f_not(Formula a) { return make(Op::Not, std::move(a)); }
Formula f_and(Formula a, Formula b) { return make(Op::And, std::move(a), std::move(b)); }
Formula f_or(Formula a, Formula b) { return make(Op::Or, std::move(a), std::move(b)); }
Formula f_implies(Formula a, Formula b) { return make(Op::Implies, std::move(a), std::move(b)); }
Formula f_next(Formula a) { return make(Op::Next, std::move(a)); }
Formula f_weak_next(Formula a) { return make(Op::WeakNext, std::move(a)); }
Formula f_until(Formula a, Formula b) { return make(Op::Until, std::move(a), std::move(b)); }
Formula f_eventually(Formula a) { return f_until(f_true(), std::move(a)); }
Formula f_always(Formula a) { return f_not(f_eventually(f_not(std::move(a)))); }

bool equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->atom != b->atom) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

namespace {

void collect_keys(const Formula& f, std::unordered_set<std::string>& keys, std::string& out) {
  // Builds a canonical key string bottom-up; distinct subformulas have
  // distinct keys.
  if (!f) {
    out = "-";
    return;
  }
  std::string l, r;
  collect_keys(f->lhs, keys, l);
  collect_keys(f->rhs, keys, r);
  out = std::to_string(static_cast<int>(f->op)) + ":" + f->atom + "(" + l + "," + r + ")";
  keys.insert(out);
}

}  // namespace

int size(const Formula& f) {
  std::unordered_set<std::string> keys;
  std::string root;
  collect_keys(f, keys, root);
  keys.erase("-");
  return static_cast<int>(keys.size());
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::vector<Formula> stack{f};
  while (!stack.empty()) {
    Formula cur = stack.back();
    stack.pop_back();
    if (!cur) continue;
    if (cur->op == Op::Atom && seen.insert(cur->atom).second) out.push_back(cur->atom);
    if (cur->rhs) stack.push_back(cur->rhs);
    if (cur->lhs) stack.push_back(cur->lhs);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser. Grammar (loosest binding first):
//   implies := or ('->' implies)?
//   or      := and ('|' and)*
//   and     := until ('&' until)*
//   until   := unary ('U' until)?
//   unary   := ('!'|'X'|'WX'|'F'|'G') unary | primary
//   primary := 'true' | 'false' | ident | '(' implies ')'
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { Ident, KwTrue, KwFalse, Not, And, Or, Implies, Next, WeakNext, Until, Ev, Alw, LParen, RParen, End };
  Kind kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Token::End, "", line, col};
    char c = text_[pos_];
    auto single = [&](Token::Kind k, const char* t) {
      advance();
      return Token{k, t, line, col};
    };
    switch (c) {
      case '(': return single(Token::LParen, "(");
      case ')': return single(Token::RParen, ")");
      case '!': return single(Token::Not, "!");
      case '&': return single(Token::And, "&");
      case '|': return single(Token::Or, "|");
      case '-':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          advance();
          return {Token::Implies, "->", line, col};
        }
        throw ParseError("expected '>' after '-'", line_, col_);
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < text_.size()) {
        char d = text_[pos_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
          word += d;
          advance();
        } else {
          break;
        }
      }
      if (word == "true") return {Token::KwTrue, word, line, col};
      if (word == "false") return {Token::KwFalse, word, line, col};
      if (word == "X") return {Token::Next, word, line, col};
      if (word == "WX") return {Token::WeakNext, word, line, col};
      if (word == "U") return {Token::Until, word, line, col};
      if (word == "F") return {Token::Ev, word, line, col};
      if (word == "G") return {Token::Alw, word, line, col};
      if (word == "not") return {Token::Not, word, line, col};
      if (word == "and") return {Token::And, word, line, col};
      if (word == "or") return {Token::Or, word, line, col};
      if (word == "implies") return {Token::Implies, word, line, col};
      return {Token::Ident, word, line, col};
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      advance();
    }
  }
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, const AtomPartition& partition,
         const IdentifierResolver* resolver = nullptr)
      : lexer_(text), partition_(partition), resolver_(resolver) {
    shift();
  }

  Formula parse_all() {
    Formula f = parse_implies();
    expect(Token::End, "end of input");
    return f;
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  void expect(Token::Kind k, const char* what) {
    if (tok_.kind != k) {
      throw ParseError(std::string("expected ") + what, tok_.line, tok_.column);
    }
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (tok_.kind == Token::Implies) {
      shift();
      return f_implies(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (tok_.kind == Token::Or) {
      shift();
      lhs = f_or(std::move(lhs), parse_and());
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_until();
    while (tok_.kind == Token::And) {
      shift();
      lhs = f_and(std::move(lhs), parse_until());
    }
    return lhs;
  }

  Formula parse_until() {
    Formula lhs = parse_unary();
    if (tok_.kind == Token::Until) {
      shift();
      return f_until(std::move(lhs), parse_until());  // right-associative
    }
    return lhs;
  }

  Formula parse_unary() {
    switch (tok_.kind) {
      case Token::Not: shift(); return f_not(parse_unary());
      case Token::Next: shift(); return f_next(parse_unary());
      case Token::WeakNext: shift(); return f_weak_next(parse_unary());
      case Token::Ev: shift(); return f_eventually(parse_unary());
      case Token::Alw: shift(); return f_always(parse_unary());
      default: return parse_primary();
    }
  }

  Formula parse_primary() {
    switch (tok_.kind) {
      case Token::KwTrue: shift(); return f_true();
      case Token::KwFalse: shift(); return f_false();
      case Token::LParen: {
        shift();
        Formula f = parse_implies();
        expect(Token::RParen, "')'");
        shift();
        return f;
      }
      case Token::Ident: {
        if (partition_.index_of(tok_.text)) {
          Formula f = f_atom(tok_.text);
          shift();
          return f;
        }
        if (resolver_) {
          if (auto resolved = (*resolver_)(tok_.text)) {
            shift();
            return *resolved;
          }
        }
        throw ParseError("undeclared atom '" + tok_.text + "'", tok_.line, tok_.column);
      }
      default:
        throw ParseError("expected a formula", tok_.line, tok_.column);
    }
  }

  Lexer lexer_;
  const AtomPartition& partition_;
  const IdentifierResolver* resolver_;
  Token tok_;
};

}  // namespace

Formula parse(const std::string& text, const AtomPartition& partition) {
  return Parser(text, partition).parse_all();
}

Formula parse(const std::string& text, const AtomPartition& partition,
              const IdentifierResolver& resolver) {
  return Parser(text, partition, &resolver).parse_all();
}

namespace {

// Precedence tiers for rendering; higher binds tighter.
int tier(const Formula& f) {
  switch (f->op) {
    case Op::True:
    case Op::False:
    case Op::Atom: return 6;
    case Op::Not:
    case Op::Next:
    case Op::WeakNext: return 5;
    case Op::Until: return 4;
    case Op::And: return 3;
    case Op::Or: return 2;
    case Op::Implies: return 1;
  }
  return 0;
}

bool match_eventually(const Formula& f, Formula& inner) {
  if (f->op == Op::Until && f->lhs->op == Op::True) {
    inner = f->rhs;
    return true;
  }
  return false;
}

bool match_always(const Formula& f, Formula& inner) {
  // !(true U !a)
  Formula ev_inner;
  if (f->op == Op::Not && match_eventually(f->lhs, ev_inner) && ev_inner->op == Op::Not) {
    inner = ev_inner->lhs;
    return true;
  }
  return false;
}

void render_rec(const Formula& f, std::ostringstream& out, int parent_tier, bool left_of_parent);

void render_child(const Formula& c, std::ostringstream& out, int my_tier, bool assoc_side_ok) {
  Formula sugar_inner;
  int child_tier = match_eventually(c, sugar_inner) || match_always(c, sugar_inner) ? 5 : tier(c);
  bool parens = child_tier < my_tier || (child_tier == my_tier && !assoc_side_ok);
  if (parens) out << "(";
  render_rec(c, out, 0, true);
  if (parens) out << ")";
}

void render_rec(const Formula& f, std::ostringstream& out, int, bool) {
  Formula inner;
  if (match_always(f, inner)) {
    out << "G ";
    render_child(inner, out, 5, true);
    return;
  }
  if (match_eventually(f, inner)) {
    out << "F ";
    render_child(inner, out, 5, true);
    return;
  }
  switch (f->op) {
    case Op::True: out << "true"; return;
    case Op::False: out << "false"; return;
    case Op::Atom: out << f->atom; return;
    case Op::Not:
      out << "!";
      render_child(f->lhs, out, 5, true);
      return;
    case Op::Next:
      out << "X ";
      render_child(f->lhs, out, 5, true);
      return;
    case Op::WeakNext:
      out << "WX ";
      render_child(f->lhs, out, 5, true);
      return;
    case Op::Until:
      render_child(f->lhs, out, 4, false);
      out << " U ";
      render_child(f->rhs, out, 4, true);  // right-associative
      return;
    case Op::And:
      render_child(f->lhs, out, 3, true);  // left-associative
      out << " & ";
      render_child(f->rhs, out, 3, false);
      return;
    case Op::Or:
      render_child(f->lhs, out, 2, true);
      out << " | ";
      render_child(f->rhs, out, 2, false);
      return;
    case Op::Implies:
      render_child(f->lhs, out, 1, false);
      out << " -> ";
      render_child(f->rhs, out, 1, true);
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::ostringstream out;
  render_rec(f, out, 0, true);
  return out.str();
}

bool evaluate(const Formula& f, const Trace& t, int i) {
  if (t.empty()) throw ValidationError("cannot evaluate a formula on the empty trace");
  if (i < 0 || i > t.last_index()) throw std::out_of_range("trace index out of range");
  switch (f->op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: {
      auto idx = t.partition().index_of(f->atom);
      if (!idx) throw ValidationError("undeclared atom '" + f->atom + "' in evaluation");
      return (t.letter(i) >> *idx) & 1u;
    }
    case Op::Not: return !evaluate(f->lhs, t, i);
    case Op::And: return evaluate(f->lhs, t, i) && evaluate(f->rhs, t, i);
    case Op::Or: return evaluate(f->lhs, t, i) || evaluate(f->rhs, t, i);
    case Op::Implies: return !evaluate(f->lhs, t, i) || evaluate(f->rhs, t, i);
    case Op::Next: return i < t.last_index() && evaluate(f->lhs, t, i + 1);
    case Op::WeakNext: return i == t.last_index() || evaluate(f->lhs, t, i + 1);
    case Op::Until:
      for (int j = i; j <= t.last_index(); ++j) {
        if (evaluate(f->rhs, t, j)) {
          bool all = true;
          for (int k = i; k < j; ++k) {
            if (!evaluate(f->lhs, t, k)) {
              all = false;
              break;
            }
          }
          if (all) return true;
        }
      }
      return false;
  }
  throw std::logic_error("unreachable formula op");
}

Formula prime_copy(const Formula& f, const AtomPartition& partition) {
  if (!f) return nullptr;
  if (f->op == Op::Atom) {
    if (!partition.index_of(f->atom)) {
      throw ValidationError("undeclared atom '" + f->atom + "' in prime_copy");
    }
    return f_atom(f->atom + "'");
  }
  auto node = std::make_shared<FormulaNode>();
  node->op = f->op;
  node->atom = f->atom;
  node->lhs = prime_copy(f->lhs, partition);
  node->rhs = prime_copy(f->rhs, partition);
  return node;
}

namespace {

// Full literal conjunction fixing the value of every atom of one side at the
// current position.
Formula side_literals(const AtomPartition& p, Letter l, bool agent_side) {
  Formula conj;
  int lo = agent_side ? 0 : p.agent_count();
  int hi = agent_side ? p.agent_count() : p.atom_count();
  for (int i = lo; i < hi; ++i) {
    Formula lit = f_atom(p.atom_name(i));
    if (((l >> i) & 1u) == 0) lit = f_not(lit);
    conj = conj ? f_and(conj, lit) : lit;
  }
  if (!conj) conj = f_true();  // a side may be empty
  return conj;
}

Formula nest_weak_next(Formula f, int k) {
  for (int i = 0; i < k; ++i) f = f_weak_next(std::move(f));
  return f;
}

}  // namespace

Formula history_to_env_spec(const History& h) {
  if (h.empty()) throw ValidationError("history must be nonempty");
  const AtomPartition& p = h.partition();
  Formula spec;
  Formula guard;  // Y_0 & WX^1 Y_1 & ... & WX^i Y_i
  for (int i = 0; i < h.length(); ++i) {
    Formula yi = nest_weak_next(side_literals(p, h.letter(i), true), i);
    guard = guard ? f_and(guard, yi) : yi;
    Formula xi = nest_weak_next(side_literals(p, h.letter(i), false), i);
    Formula conjunct = f_implies(guard, xi);
    spec = spec ? f_and(spec, conjunct) : conjunct;
  }
  return spec;
}

std::string letter_to_string(const AtomPartition& p, Letter l) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < p.atom_count(); ++i) {
    if ((l >> i) & 1u) {
      if (!first) out += ",";
      out += p.atom_name(i);
      first = false;
    }
  }
  out += "}";
  return out;
}

std::string trace_to_string(const Trace& t) {
  std::string out;
  for (int i = 0; i < t.length(); ++i) {
    if (i) out += " ";
    out += letter_to_string(t.partition(), t.letter(i));
  }
  return out;
}

}  // namespace rescheck
