#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "spctl/formula.hpp"
#include "spctl/value.hpp"

namespace spctl {

using CfId = std::uint32_t;

enum class CfKind : std::uint8_t {
  True,
  False,
  Atom,       // request attribute membership; payload: atom table index
  ControlEq,  // control variable == value; payload: (var, value)
  EdgeGuard,  // the symbolic policy C(e) of an edge; payload: edge index
  Not,
  And,
  Or,
  Implies,
};

/// Hash-consed store of control formulas. Node ids are stable for the store's
/// lifetime; construction folds constants and double negations.
class CfStore {
 public:
  CfStore();

  static constexpr CfId kTrue = 0;
  static constexpr CfId kFalse = 1;

  CfId constant(bool b) const { return b ? kTrue : kFalse; }
  CfId atom(const Atom& a);
  CfId control_eq(std::uint32_t var, std::uint32_t value);
  CfId edge_guard(std::size_t edge);
  CfId negate(CfId a);
  CfId conj(CfId a, CfId b);
  CfId disj(CfId a, CfId b);
  CfId conj(std::vector<CfId> xs);
  CfId disj(std::vector<CfId> xs);
  CfId implies(CfId a, CfId b);

  /// Converts a target into Atom nodes.
  CfId from_target(const Target& t);
  CfId from_target(const Node& t);

  CfKind kind(CfId id) const { return nodes_[id].kind; }
  std::span<const CfId> children(CfId id) const {
    const auto& n = nodes_[id];
    return {kids_.data() + n.off, n.cnt};
  }
  const Atom& atom_of(CfId id) const { return atoms_[nodes_[id].a]; }
  std::uint32_t var_of(CfId id) const { return nodes_[id].a; }
  std::uint32_t value_of(CfId id) const { return nodes_[id].b; }
  std::size_t edge_of(CfId id) const { return nodes_[id].a; }

  std::size_t node_count() const { return nodes_.size(); }
  /// Distinct nodes reachable from `root`.
  std::size_t dag_size(CfId root) const;

  std::string to_string(CfId id, const AttributeSignature& sig,
                        const std::vector<std::string>& var_names = {},
                        const std::vector<std::string>& edge_names = {}) const;

 private:
  struct CfNode {
    CfKind kind;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t off = 0;
    std::uint32_t cnt = 0;
  };

  CfId intern(CfKind k, std::uint32_t a, std::uint32_t b, std::span<const CfId> kids);
  CfId nary(CfKind k, std::vector<CfId> xs);

  std::vector<CfNode> nodes_;
  std::vector<CfId> kids_;
  std::unordered_multimap<std::size_t, CfId> table_;
  std::vector<Atom> atoms_;
  std::map<Atom, std::uint32_t> atom_index_;
};

}  // namespace spctl
