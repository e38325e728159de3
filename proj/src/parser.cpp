#include "spctl/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>

#include "spctl/error.hpp"

namespace spctl {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.';
}

std::vector<Token> tokenize(std::string_view s, std::size_t line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (s.compare(i, 3, "\xE2\x8A\xA5") == 0) {  // ⊥
      out.push_back({Tok::Ident, "bot", line, col});
      i += 3;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i + 1;
      // '-' and '.' are allowed inside identifiers but not as a trailing "->"
      // or "..".
      while (j < s.size() && is_ident_char(s[j])) {
        if (s[j] == '-' && j + 1 < s.size() && s[j + 1] == '>') break;
        if (s[j] == '.' && j + 1 < s.size() && s[j + 1] == '.') break;
        ++j;
      }
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), line, col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), line, col});
      i = j;
      continue;
    }
    static constexpr std::string_view two[] = {"!=", "<=", ">=", "=>", "->", ".."};
    bool matched = false;
    for (auto p : two) {
      if (s.substr(i, 2) == p) {
        out.push_back({Tok::Punct, std::string(p), line, col});
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("()[]{},=:").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), line, col});
      ++i;
      continue;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", line, s.size() + 1});
  return out;
}

enum class Mode { Target, Constraint };

bool is_keyword(const std::string& t) {
  static constexpr std::string_view kw[] = {"not", "and", "or",  "true", "false", "in",
                                            "EX",  "AX",  "EF",  "AF",   "AG",    "EG",
                                            "U",   "R"};
  for (auto k : kw)
    if (t == k) return true;
  return false;
}

NodePtr make(Op op, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

NodePtr member(std::size_t attr, ValueSet set) {
  auto n = std::make_shared<Node>();
  n->op = Op::Member;
  n->attr = attr;
  n->set = std::move(set);
  return n;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const AttributeSignature& sig, Mode mode)
      : toks_(std::move(toks)), sig_(sig), mode_(mode) {}

  void set_mode(Mode m) { mode_ = m; }
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool at_ident(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }
  bool at_end() const { return peek().kind == Tok::End; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    throw ParseError(t.line, t.col, what);
  }
  void expect_punct(std::string_view p) {
    if (!at_punct(p))
      fail(peek(), "expected '" + std::string(p) + "'" + found());
    next();
  }
  std::string found() const {
    if (at_end()) return " at end of input";
    return ", found '" + peek().text + "'";
  }

  NodePtr expr() {
    NodePtr l = disjunction();
    if (at_punct("->")) {
      next();
      NodePtr r = expr();
      return make(Op::Not, make(Op::And, l, make(Op::Not, r)));
    }
    return l;
  }

  NodePtr disjunction() {
    NodePtr l = conjunction();
    while (at_ident("or")) {
      next();
      NodePtr r = conjunction();
      l = make(Op::Not, make(Op::And, make(Op::Not, l), make(Op::Not, r)));
    }
    return l;
  }

  NodePtr conjunction() {
    NodePtr l = unary();
    while (at_ident("and")) {
      next();
      l = make(Op::And, l, unary());
    }
    return l;
  }

  NodePtr unary() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && !starts_atom_operator(1)) {
      if (t.text == "not") {
        next();
        return make(Op::Not, unary());
      }
      static constexpr std::string_view temporal[] = {"EX", "AX", "EF", "AF", "AG", "EG"};
      for (auto k : temporal) {
        if (t.text != k) continue;
        temporal_allowed(t);
        next();
        NodePtr a = unary();
        NodePtr tt = make(Op::True);
        if (k == "EX") return make(Op::EX, a);
        if (k == "AX") return make(Op::AX, a);
        if (k == "EF") return make(Op::EU, tt, a);
        if (k == "AF") return make(Op::AU, tt, a);
        if (k == "AG") return make(Op::Not, make(Op::EU, tt, make(Op::Not, a)));
        return make(Op::Not, make(Op::AU, tt, make(Op::Not, a)));
      }
    }
    return primary();
  }

  NodePtr primary() {
    const Token t = peek();
    if (at_punct("(")) {
      next();
      NodePtr e = expr();
      expect_punct(")");
      return e;
    }
    if (t.kind == Tok::Ident && (t.text == "E" || t.text == "A") && at_punct("[", 1)) {
      temporal_allowed(t);
      next();
      next();
      NodePtr a = expr();
      bool release = false;
      if (at_ident("R") && t.text == "A") {
        release = true;
      } else if (!at_ident("U")) {
        fail(peek(), std::string("expected 'U'") + (t.text == "A" ? " or 'R'" : "") + found());
      }
      next();
      NodePtr b = expr();
      expect_punct("]");
      if (release)
        return make(Op::Not, make(Op::EU, make(Op::Not, a), make(Op::Not, b)));
      return make(t.text == "E" ? Op::EU : Op::AU, a, b);
    }
    if (t.kind == Tok::Ident && !starts_atom_operator(1)) {
      if (t.text == "true") {
        next();
        return make(Op::True);
      }
      if (t.text == "false") {
        next();
        return make(Op::Not, make(Op::True));
      }
    }
    return atom();
  }

  NodePtr atom() {
    const Token t = peek();
    if (t.kind == Tok::Number) {
      // n <= a <= m
      const auto lo = number(next());
      expect_punct("<=");
      const Token at = peek();
      const auto attr = attribute(next());
      expect_punct("<=");
      if (peek().kind != Tok::Number) fail(peek(), "expected a number" + found());
      const auto hi = number(next());
      Shorthand s{ShorthandKind::Range, attr, {}, lo, hi};
      return desugar(s, at);
    }
    if (t.kind != Tok::Ident || (is_keyword(t.text) && !starts_atom_operator(1)))
      fail(t, "expected an atom" + found());
    next();
    const auto attr = attribute(t);
    Shorthand s;
    s.attr = attr;
    if (at_punct("=") || at_punct("!=")) {
      s.kind = at_punct("=") ? ShorthandKind::Eq : ShorthandKind::Neq;
      next();
      s.value = value(next(), attr);
      return desugar(s, t);
    }
    if (at_punct("<=") || at_punct(">=")) {
      s.kind = at_punct("<=") ? ShorthandKind::Le : ShorthandKind::Ge;
      next();
      if (peek().kind != Tok::Number) fail(peek(), "expected a number" + found());
      const auto n = number(next());
      (s.kind == ShorthandKind::Le ? s.high : s.low) = n;
      return desugar(s, t);
    }
    if (at_ident("in")) {
      next();
      return member(attr, value_set(attr));
    }
    s.kind = ShorthandKind::Bare;
    return desugar(s, t);
  }

 private:
  bool starts_atom_operator(std::size_t k) const {
    return at_punct("=", k) || at_punct("!=", k) || at_punct("<=", k) ||
           at_punct(">=", k) || at_ident("in", k);
  }

  void temporal_allowed(const Token& t) const {
    if (mode_ == Mode::Target)
      fail(t, "temporal operator '" + t.text + "' is not allowed in a target");
  }

  std::size_t attribute(const Token& t) const {
    if (t.kind != Tok::Ident) fail(t, "expected an attribute name, found '" + t.text + "'");
    auto i = sig_.find(t.text);
    if (!i) fail(t, "unknown attribute '" + t.text + "'");
    const bool request = sig_[*i].is_request_attribute();
    if (mode_ == Mode::Target && !request)
      fail(t, "resource attribute '" + t.text + "' used in a target");
    if (mode_ == Mode::Constraint && request)
      fail(t, std::string(to_string(sig_[*i].cls)) + " attribute '" + t.text +
                  "' used in a constraint");
    return *i;
  }

  std::uint64_t number(const Token& t) const {
    if (t.kind != Tok::Number) fail(t, "expected a number, found '" + t.text + "'");
    std::uint64_t n = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
    if (ec != std::errc()) fail(t, "number out of range '" + t.text + "'");
    (void)p;
    return n;
  }

  Value value(const Token& t, std::size_t attr) const {
    if (t.kind == Tok::End || t.kind == Tok::Punct)
      fail(t, "expected a value" + std::string(t.kind == Tok::End ? " at end of input" : ", found '" + t.text + "'"));
    try {
      return parse_value(t.text, sig_[attr]);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(t, e.what());
    }
  }

  ValueSet value_set(std::size_t attr) {
    expect_punct("{");
    ValueSet set;
    if (at_punct("}")) {
      next();
      return set;
    }
    for (;;) {
      const Token t = next();
      if (t.kind == Tok::Number && at_punct("..")) {
        if (sig_[attr].kind != AttrKind::Numeric)
          fail(t, "range item for non-numeric attribute '" + sig_[attr].name + "'");
        next();
        const auto lo = number(t);
        if (peek().kind == Tok::Number) {
          const Token ht = next();
          const auto hi = number(ht);
          if (hi < lo) fail(ht, "empty range " + t.text + ".." + ht.text);
          set.insert_range(lo, hi);
        } else {
          set.insert_range(lo, kInfinity);
        }
      } else {
        set.insert(value(t, attr));
      }
      if (at_punct("}")) {
        next();
        return set;
      }
      expect_punct(",");
    }
  }

  NodePtr desugar(const Shorthand& s, const Token& at) const {
    try {
      return desugar_shorthand(s, sig_);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(at, e.what());
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const AttributeSignature& sig_;
  Mode mode_;
};

std::optional<PatternKind> pattern_keyword(const std::string& t) {
  if (t == "grant") return PatternKind::Grant;
  if (t == "deny") return PatternKind::Deny;
  if (t == "waypoint") return PatternKind::Waypoint;
  if (t == "blocking") return PatternKind::Blocking;
  return std::nullopt;
}

std::size_t pattern_arity(PatternKind k) {
  return (k == PatternKind::Grant || k == PatternKind::Deny) ? 1 : 2;
}

Requirement parse_line(std::string_view line, std::size_t lineno,
                       const AttributeSignature& sig) {
  auto toks = tokenize(line, lineno);
  Parser p(toks, sig, Mode::Target);
  Requirement r;
  if (p.peek().kind == Tok::Ident && p.at_punct(":", 1) && !p.at_punct("=>")) {
    r.name = p.next().text;
    p.next();
  }
  if (p.at_punct("=>")) {
    r.target = Target::truth();
  } else {
    r.target = Target(p.expr());
    if (!p.at_punct("=>")) p.fail(p.peek(), "expected '=>'" + p.found());
  }
  p.next();
  p.set_mode(Mode::Constraint);

  std::optional<PatternKind> pat;
  if (p.peek().kind == Tok::Ident && p.at_punct("(", 1)) pat = pattern_keyword(p.peek().text);
  if (pat) {
    const Token kw = p.next();
    p.expect_punct("(");
    std::vector<Constraint> args{Constraint(p.expr())};
    while (p.at_punct(",")) {
      p.next();
      args.emplace_back(p.expr());
    }
    if (args.size() != pattern_arity(*pat))
      p.fail(kw, "pattern '" + kw.text + "' expects " + std::to_string(pattern_arity(*pat)) +
                     " argument(s), got " + std::to_string(args.size()));
    p.expect_punct(")");
    r.constraint = desugar_pattern(*pat, args);
    r.polarity = pattern_polarity(*pat);
  } else {
    r.constraint = Constraint(p.expr());
    r.polarity = syntactic_polarity(r.constraint);
  }

  if (p.at_punct(":")) {
    p.next();
    const Token t = p.next();
    if (t.kind == Tok::Ident && t.text == "positive")
      r.polarity = Polarity::Positive;
    else if (t.kind == Tok::Ident && t.text == "negative")
      r.polarity = Polarity::Negative;
    else
      p.fail(t, "expected 'positive' or 'negative' after ':'");
  }
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "'");
  return r;
}

// ---- printing ---------------------------------------------------------------

bool is(const NodePtr& n, Op op) { return n && n->op == op; }

class Printer {
 public:
  explicit Printer(const AttributeSignature& sig) : sig_(sig) {}

  std::string print(const NodePtr& n, bool top) const {
    switch (n->op) {
      case Op::True: return "true";
      case Op::Member: return atom(*n);
      case Op::Not: return negation(n, top);
      case Op::And: {
        if (auto r = range(n)) return *r;
        return wrap(print(n->lhs, false) + " and " + print(n->rhs, false), top);
      }
      case Op::EX: return "EX " + print(n->lhs, false);
      case Op::AX: return "AX " + print(n->lhs, false);
      case Op::EU:
        if (is(n->lhs, Op::True)) return "EF " + print(n->rhs, false);
        return "E[" + print(n->lhs, true) + " U " + print(n->rhs, true) + "]";
      case Op::AU:
        if (is(n->lhs, Op::True)) return "AF " + print(n->rhs, false);
        return "A[" + print(n->lhs, true) + " U " + print(n->rhs, true) + "]";
    }
    return "?";
  }

 private:
  static std::string wrap(std::string s, bool top) { return top ? s : "(" + s + ")"; }

  std::string negation(const NodePtr& n, bool top) const {
    const NodePtr& a = n->lhs;
    if (is(a, Op::True)) return "false";
    if (is(a, Op::And) && is(a->lhs, Op::Not) && is(a->rhs, Op::Not))
      return wrap(print(a->lhs->lhs, false) + " or " + print(a->rhs->lhs, false), top);
    if (is(a, Op::And) && is(a->rhs, Op::Not))
      return wrap(print(a->lhs, false) + " -> " + print(a->rhs->lhs, false), top);
    if (is(a, Op::EU) && is(a->lhs, Op::True) && is(a->rhs, Op::Not))
      return "AG " + print(a->rhs->lhs, false);
    if (is(a, Op::AU) && is(a->lhs, Op::True) && is(a->rhs, Op::Not))
      return "EG " + print(a->rhs->lhs, false);
    if (is(a, Op::EU) && is(a->lhs, Op::Not) && is(a->rhs, Op::Not))
      return "A[" + print(a->lhs->lhs, true) + " R " + print(a->rhs->lhs, true) + "]";
    if (is(a, Op::Member)) {
      const Attribute& at = sig_[a->attr];
      if (auto v = a->set.singleton()) return at.name + " != " + v->to_string();
      if (at.kind == AttrKind::Numeric && a->set.empty()) return at.name + " >= 0";
      if (auto b = lower_bound_of_complement(*a)) return at.name + " >= " + std::to_string(*b);
    }
    return "not " + print(a, false);
  }

  // ¬(a ∈ {0..n-1}) is printed as a >= n.
  std::optional<std::uint64_t> lower_bound_of_complement(const Node& m) const {
    if (sig_[m.attr].kind != AttrKind::Numeric) return std::nullopt;
    if (m.set.empty()) return 0;
    const auto& r = m.set.ranges();
    if (m.set.has_bottom() || r.size() != 1 || r[0].lo != 0 || r[0].hi == kInfinity)
      return std::nullopt;
    return r[0].hi + 1;
  }

  // (a >= n) ∧ (a <= m) is printed as n <= a <= m.
  std::optional<std::string> range(const NodePtr& n) const {
    const NodePtr& l = n->lhs;
    const NodePtr& r = n->rhs;
    if (!is(l, Op::Not) || !is(l->lhs, Op::Member) || !is(r, Op::Member)) return std::nullopt;
    if (l->lhs->attr != r->attr) return std::nullopt;
    auto lo = lower_bound_of_complement(*l->lhs);
    auto hi = upper_bound(*r);
    if (!lo || !hi) return std::nullopt;
    // A singleton {0} complement prints as `!= 0`, which is still the same tree.
    return std::to_string(*lo) + " <= " + sig_[r->attr].name + " <= " + std::to_string(*hi);
  }

  std::optional<std::uint64_t> upper_bound(const Node& m) const {
    if (sig_[m.attr].kind != AttrKind::Numeric) return std::nullopt;
    const auto& r = m.set.ranges();
    if (m.set.has_bottom() || r.size() != 1 || r[0].lo != 0 || r[0].hi == kInfinity)
      return std::nullopt;
    return r[0].hi;
  }

  std::string atom(const Node& m) const {
    const Attribute& a = sig_[m.attr];
    if (a.kind == AttrKind::Boolean && m.set == ValueSet::of(Value::boolean(true)))
      return a.name;
    if (auto v = m.set.singleton()) return a.name + " = " + v->to_string();
    if (auto hi = upper_bound(m)) return a.name + " <= " + std::to_string(*hi);
    return a.name + " in " + m.set.to_string();
  }

  const AttributeSignature& sig_;
};

bool matches_pattern(PatternKind k, const Constraint& c, std::vector<Constraint>& args) {
  const NodePtr& n = c.ptr();
  switch (k) {
    case PatternKind::Grant:
      if (is(n, Op::EU) && is(n->lhs, Op::True)) {
        args = {Constraint(n->rhs)};
        return true;
      }
      return false;
    case PatternKind::Deny:
      if (is(n, Op::Not) && is(n->lhs, Op::EU) && is(n->lhs->lhs, Op::True)) {
        args = {Constraint(n->lhs->rhs)};
        return true;
      }
      return false;
    case PatternKind::Blocking: {
      if (!is(n, Op::Not) || !is(n->lhs, Op::EU) || !is(n->lhs->lhs, Op::True)) return false;
      const NodePtr& b = n->lhs->rhs;
      if (!is(b, Op::And) || !is(b->rhs, Op::EU) || !is(b->rhs->lhs, Op::True)) return false;
      args = {Constraint(b->lhs), Constraint(b->rhs->rhs)};
      return true;
    }
    case PatternKind::Waypoint: {
      if (!is(n, Op::Not) || !is(n->lhs, Op::EU) || !is(n->lhs->lhs, Op::Not)) return false;
      const NodePtr& b = n->lhs->rhs;
      if (!is(b, Op::And) || !is(b->rhs, Op::Not)) return false;
      if (!structurally_equal(*n->lhs->lhs->lhs, *b->rhs->lhs)) return false;
      args = {Constraint(n->lhs->lhs->lhs), Constraint(b->lhs)};
      return true;
    }
  }
  return false;
}

}  // namespace

NodePtr desugar_shorthand(const Shorthand& s, const AttributeSignature& sig) {
  if (s.attr >= sig.size()) throw Error("attribute index out of range");
  const Attribute& a = sig[s.attr];
  auto need_numeric = [&](const char* op) {
    if (a.kind != AttrKind::Numeric)
      throw Error(std::string("'") + op + "' needs a numeric attribute, '" + a.name +
                  "' is " + std::string(to_string(a.kind)));
  };
  auto le = [&](std::uint64_t n) { return member(s.attr, ValueSet::range(0, n)); };
  auto ge = [&](std::uint64_t n) {
    return make(Op::Not, member(s.attr, n == 0 ? ValueSet{} : ValueSet::range(0, n - 1)));
  };
  switch (s.kind) {
    case ShorthandKind::Eq:
    case ShorthandKind::Neq: {
      if (!a.admits(s.value))
        throw Error("value '" + s.value.to_string() + "' outside the domain of '" + a.name + "'");
      NodePtr m = member(s.attr, ValueSet::of(s.value));
      return s.kind == ShorthandKind::Eq ? m : make(Op::Not, m);
    }
    case ShorthandKind::Bare:
      if (a.kind != AttrKind::Boolean)
        throw Error("attribute '" + a.name + "' is not boolean and needs a comparison");
      return member(s.attr, ValueSet::of(Value::boolean(true)));
    case ShorthandKind::Le:
      need_numeric("<=");
      return le(s.high);
    case ShorthandKind::Ge:
      need_numeric(">=");
      return ge(s.low);
    case ShorthandKind::Range:
      need_numeric("<=");
      return make(Op::And, ge(s.low), le(s.high));
  }
  throw Error("unknown shorthand");
}

Constraint desugar_pattern(PatternKind kind, const std::vector<Constraint>& args) {
  const std::size_t want = pattern_arity(kind);
  if (args.size() != want)
    throw Error("pattern expects " + std::to_string(want) + " argument(s), got " +
                std::to_string(args.size()));
  const Constraint tt = Constraint::truth();
  switch (kind) {
    case PatternKind::Grant: return eu(tt, args[0]);
    case PatternKind::Deny: return negate(eu(tt, args[0]));
    case PatternKind::Blocking: return negate(eu(tt, conj(args[0], eu(tt, args[1]))));
    case PatternKind::Waypoint:
      return negate(eu(negate(args[0]), conj(args[1], negate(args[0]))));
  }
  throw Error("unknown pattern");
}

Polarity pattern_polarity(PatternKind kind) {
  return kind == PatternKind::Grant ? Polarity::Positive : Polarity::Negative;
}

Polarity syntactic_polarity(const Constraint& c) {
  if (c == deadlock_freeness().constraint) return Polarity::Negative;
  if (c.op() == Op::AX && c.lhs().op() == Op::Member) return Polarity::Negative;
  return Polarity::Unknown;
}

Requirement parse_requirement(std::string_view line, const AttributeSignature& sig) {
  return parse_line(line, 1, sig);
}

std::vector<Requirement> parse_requirements(std::string_view text,
                                            const AttributeSignature& sig) {
  std::vector<Requirement> out;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    auto toks = tokenize(line, lineno);
    if (toks.size() == 1) {
      if (end == text.size()) break;
      continue;
    }
    Requirement r = parse_line(line, lineno, sig);
    if (r.name.empty()) r.name = "R" + std::to_string(out.size() + 1);
    out.push_back(std::move(r));
    if (end == text.size()) break;
  }
  return out;
}

Target parse_target(std::string_view text, const AttributeSignature& sig) {
  Parser p(tokenize(text, 1), sig, Mode::Target);
  Target t(p.expr());
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "'");
  return t;
}

Constraint parse_constraint(std::string_view text, const AttributeSignature& sig) {
  Parser p(tokenize(text, 1), sig, Mode::Constraint);
  Constraint c(p.expr());
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "'");
  return c;
}

std::string to_string(const Target& t, const AttributeSignature& sig) {
  return Printer(sig).print(t.ptr(), true);
}

std::string to_string(const Constraint& c, const AttributeSignature& sig) {
  return Printer(sig).print(c.ptr(), true);
}

std::string to_string(const Requirement& r, const AttributeSignature& sig) {
  Printer pr(sig);
  std::string out;
  if (!r.name.empty()) out += r.name + ": ";
  if (r.target.op() != Op::True) out += pr.print(r.target.ptr(), true) + " ";
  out += "=> ";

  static constexpr struct {
    PatternKind kind;
    const char* name;
  } patterns[] = {{PatternKind::Waypoint, "waypoint"},
                  {PatternKind::Blocking, "blocking"},
                  {PatternKind::Deny, "deny"},
                  {PatternKind::Grant, "grant"}};
  for (const auto& p : patterns) {
    std::vector<Constraint> args;
    if (pattern_polarity(p.kind) != r.polarity || !matches_pattern(p.kind, r.constraint, args))
      continue;
    // deadlock-freeness reads better raw.
    if (p.kind == PatternKind::Deny && r.constraint == deadlock_freeness().constraint) break;
    out += std::string(p.name) + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      out += pr.print(args[i].ptr(), true);
    }
    return out + ")";
  }
  out += pr.print(r.constraint.ptr(), true);
  if (r.polarity != syntactic_polarity(r.constraint)) {
    if (r.polarity == Polarity::Unknown)
      throw Error("a requirement with unknown polarity cannot be printed for this constraint");
    out += std::string(" : ") + std::string(to_string(r.polarity));
  }
  return out;
}

}  // namespace spctl
