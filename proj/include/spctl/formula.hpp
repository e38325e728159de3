#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "spctl/value.hpp"

namespace spctl {

/// The eight core constructors. Targets use the first four only.
enum class Op : std::uint8_t { True, Member, Not, And, EX, AX, EU, AU };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::True;
  std::size_t attr = 0;  // Member only
  ValueSet set;          // Member only
  NodePtr lhs;           // Not/And/EX/AX/EU/AU
  NodePtr rhs;           // And/EU/AU
};

bool structurally_equal(const Node& a, const Node& b);
/// Number of nodes in the tree (shared subtrees counted per occurrence).
std::size_t formula_size(const Node& n);
std::size_t formula_depth(const Node& n);

/// An attribute atom `a ∈ D`.
struct Atom {
  std::size_t attr = 0;
  ValueSet set;
  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Collects the Member atoms of a tree (deduplicated, sorted).
void collect_atoms(const Node& n, std::vector<Atom>& out);

struct TargetTag {};
struct ConstraintTag {};

/// Immutable formula handle. `Expr<TargetTag>` is a target (also the local
/// policy language); `Expr<ConstraintTag>` is a CTL access constraint.
template <class Tag>
class Expr {
 public:
  Expr() : node_(make(Op::True)) {}
  explicit Expr(NodePtr n) : node_(std::move(n)) {}

  static Expr truth() { return Expr(); }
  static Expr falsity() { return negate(Expr()); }
  static Expr member(std::size_t attr, ValueSet set) {
    auto n = std::make_shared<Node>();
    n->op = Op::Member;
    n->attr = attr;
    n->set = std::move(set);
    return Expr(std::move(n));
  }

  friend Expr negate(const Expr& a) { return Expr(make(Op::Not, a.node_)); }
  friend Expr conj(const Expr& a, const Expr& b) {
    return Expr(make(Op::And, a.node_, b.node_));
  }
  friend Expr disj(const Expr& a, const Expr& b) {
    return negate(conj(negate(a), negate(b)));
  }
  friend Expr implies(const Expr& a, const Expr& b) {
    return negate(conj(a, negate(b)));
  }

  Op op() const { return node_->op; }
  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  Expr lhs() const { return Expr(node_->lhs); }
  Expr rhs() const { return Expr(node_->rhs); }

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.node_ == b.node_ || structurally_equal(*a.node_, *b.node_);
  }

 protected:
  static NodePtr make(Op op, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  template <class>
  friend class Expr;

  NodePtr node_;
};

using Target = Expr<TargetTag>;
using Constraint = Expr<ConstraintTag>;

Constraint ex(const Constraint& a);
Constraint ax(const Constraint& a);
Constraint eu(const Constraint& a, const Constraint& b);
Constraint au(const Constraint& a, const Constraint& b);

// Derived operators; always stored desugared.
Constraint ef(const Constraint& a);                         // E[true U a]
Constraint af(const Constraint& a);                         // A[true U a]
Constraint ag(const Constraint& a);                         // ¬EF¬a
Constraint eg(const Constraint& a);                         // ¬AF¬a
Constraint release(const Constraint& a, const Constraint& b);  // ¬E[¬a U ¬b]

/// Conjunction of a list (true for an empty list), left-nested.
Target conj_all(const std::vector<Target>& parts);
Constraint conj_all(const std::vector<Constraint>& parts);

bool contains_op(const Node& n, Op op);

enum class Polarity { Positive, Negative, Unknown };
std::string_view to_string(Polarity p);

struct Requirement {
  Target target;
  Constraint constraint;
  Polarity polarity = Polarity::Unknown;
  /// Optional label (e.g. "R1") carried for reports; not part of the formula.
  std::string name;

  friend bool operator==(const Requirement& a, const Requirement& b) {
    return a.target == b.target && a.constraint == b.constraint &&
           a.polarity == b.polarity;
  }
};

/// The generic deadlock-freeness requirement `true ⇒ AG EX true`.
Requirement deadlock_freeness();

}  // namespace spctl
