#include "spctl/formula.hpp"

#include <algorithm>

namespace spctl {

namespace {

NodePtr node(Op op, NodePtr l, NodePtr r = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

void collect(const Node& n, std::vector<Atom>& out) {
  if (n.op == Op::Member) {
    out.push_back({n.attr, n.set});
    return;
  }
  if (n.lhs) collect(*n.lhs, out);
  if (n.rhs) collect(*n.rhs, out);
}

}  // namespace

bool structurally_equal(const Node& a, const Node& b) {
  if (&a == &b) return true;
  if (a.op != b.op) return false;
  if (a.op == Op::Member) return a.attr == b.attr && a.set == b.set;
  if (bool(a.lhs) != bool(b.lhs) || bool(a.rhs) != bool(b.rhs)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

std::size_t formula_size(const Node& n) {
  std::size_t s = 1;
  if (n.lhs) s += formula_size(*n.lhs);
  if (n.rhs) s += formula_size(*n.rhs);
  return s;
}

std::size_t formula_depth(const Node& n) {
  std::size_t d = 0;
  if (n.lhs) d = std::max(d, formula_depth(*n.lhs));
  if (n.rhs) d = std::max(d, formula_depth(*n.rhs));
  return d + 1;
}

void collect_atoms(const Node& n, std::vector<Atom>& out) {
  collect(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

bool contains_op(const Node& n, Op op) {
  if (n.op == op) return true;
  return (n.lhs && contains_op(*n.lhs, op)) || (n.rhs && contains_op(*n.rhs, op));
}

Constraint ex(const Constraint& a) { return Constraint(node(Op::EX, a.ptr())); }
Constraint ax(const Constraint& a) { return Constraint(node(Op::AX, a.ptr())); }
Constraint eu(const Constraint& a, const Constraint& b) {
  return Constraint(node(Op::EU, a.ptr(), b.ptr()));
}
Constraint au(const Constraint& a, const Constraint& b) {
  return Constraint(node(Op::AU, a.ptr(), b.ptr()));
}

Constraint ef(const Constraint& a) { return eu(Constraint::truth(), a); }
Constraint af(const Constraint& a) { return au(Constraint::truth(), a); }
Constraint ag(const Constraint& a) { return negate(ef(negate(a))); }
Constraint eg(const Constraint& a) { return negate(af(negate(a))); }
Constraint release(const Constraint& a, const Constraint& b) {
  return negate(eu(negate(a), negate(b)));
}

Target conj_all(const std::vector<Target>& parts) {
  if (parts.empty()) return Target::truth();
  Target t = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) t = conj(t, parts[i]);
  return t;
}

Constraint conj_all(const std::vector<Constraint>& parts) {
  if (parts.empty()) return Constraint::truth();
  Constraint t = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) t = conj(t, parts[i]);
  return t;
}

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::Positive: return "positive";
    case Polarity::Negative: return "negative";
    case Polarity::Unknown: return "unknown";
  }
  return "?";
}

Requirement deadlock_freeness() {
  return {Target::truth(), ag(ex(Constraint::truth())), Polarity::Negative,
          "deadlock-freeness"};
}

}  // namespace spctl
